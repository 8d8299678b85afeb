import math
import random

import pytest

from polscissors.fock import make_state, normalize


def random_state(rng: random.Random, mode_count: int, cutoff: int, max_photons: int = 2):
    """Random normalized state with occupations up to max_photons per polarization."""
    entries = []
    for _ in range(3 * mode_count + 4):
        key = tuple(
            (rng.randint(0, max_photons), rng.randint(0, max_photons))
            for _ in range(mode_count)
        )
        entries.append((key, complex(rng.gauss(0, 1), rng.gauss(0, 1))))
    return normalize(make_state(mode_count, cutoff, entries))


def random_polarized_coeffs(rng: random.Random, max_photons: int = 2):
    """Random coefficient table over one polarized mode, normalized."""
    coeffs = {
        (nh, nv): complex(rng.gauss(0, 1), rng.gauss(0, 1))
        for nh in range(max_photons + 1)
        for nv in range(max_photons + 1)
    }
    norm = math.sqrt(sum(abs(a) ** 2 for a in coeffs.values()))
    return {k: a / norm for k, a in coeffs.items()}


@pytest.fixture
def rng():
    return random.Random(20260809)
