import math

import pytest

from polscissors import analytics
from polscissors.fock import fidelity, make_state, min_cutoff
from polscissors.preparations import (
    PREPARATIONS,
    analytic_named,
    prepare_bell,
    prepare_hybrid,
    prepare_named,
    required_cutoff,
)
from polscissors.scissors import pqs1_apply
from polscissors.sources import SourceParams, xi_direct

POINTS = [
    # (delta, phi, t0, t, gamma_abs)
    (1.0, 0.0, 0.5, 0.5, 0.05),
    (0.8, 0.0, 0.5, 0.98, 0.07),
    (1.4, 2.2, 0.3, 0.7, 0.10),
    (0.4, 4.5, 0.8, 0.45, 0.02),
    (2.0, math.pi, 0.6, 0.9, 0.12),
]


@pytest.mark.parametrize("delta,phi,t0,t,g", POINTS)
@pytest.mark.parametrize("name", PREPARATIONS)
def test_pipelines_match_closed_forms(name, delta, phi, t0, t, g):
    knob = t if name.endswith("pqs1") else g
    num = prepare_named(name, delta, phi, t0, knob)
    ana = analytic_named(name, delta, phi, t0, knob)
    assert num.probability == pytest.approx(ana.probability, abs=1e-10)
    assert num.fidelity == pytest.approx(ana.fidelity, abs=1e-10)


def test_hybrid_reference_point_values():
    res = prepare_hybrid("pqs1", 1.0, 0.0, 0.5, 0.5)
    assert res.probability == pytest.approx(0.192, abs=5e-4)
    assert res.fidelity == pytest.approx(0.422, abs=5e-4)


def test_single_truncation_leaves_minus_branch_before_correction():
    # the raw heralded state carries the odd-photon sign on the V branch;
    # the pipeline removes it by feed-forward before the fidelity check
    delta, phi, t0, t = 1.0, 0.0, 0.5, 0.6
    cutoff = required_cutoff(delta, t0)
    params = SourceParams(delta, phi, t0, (), cutoff)
    result = pqs1_apply(xi_direct(params), 1, t)
    raw = result.canonical_state
    a = params.alpha
    f1b = analytics.f_n(params.beta, 1)
    norm = analytics.n0(delta, phi, t0)
    scale = math.sqrt((1 - t) * t) * norm * f1b / math.sqrt(result.total_probability)
    f1a = analytics.f_n(a, 1)
    f0a = analytics.f_n(a, 0)
    assert raw.amplitude(((1, 0), (1, 0))) == pytest.approx(scale * f1a, abs=1e-10)
    # the heralded minus sign sits on the photon-qubit V branch, visible against
    # even coherent components; odd components cancel it through f-parity
    assert raw.amplitude(((0, 0), (0, 1))) == pytest.approx(-scale * f0a, abs=1e-10)
    assert raw.amplitude(((0, 1), (0, 1))) == pytest.approx(scale * f1a, abs=1e-10)


def test_bell_probability_independent_of_truncation_order():
    # the two arm truncations commute
    delta, phi, t0, t = 1.1, 0.8, 0.35, 0.7
    forward = prepare_bell("pqs1", delta, phi, t0, t)
    swapped = prepare_bell("pqs1", delta, phi, 1 - t0, t)
    assert forward.probability == pytest.approx(swapped.probability, rel=1e-10)
    assert forward.fidelity == pytest.approx(swapped.fidelity, rel=1e-10)


def test_required_cutoff_tracks_larger_arm():
    assert required_cutoff(1.0, 0.5) == min_cutoff(1.0)
    assert required_cutoff(1.0, 0.9) == min_cutoff(1.0 * math.sqrt(1.8))


def test_unknown_preparation_rejected():
    with pytest.raises(ValueError):
        prepare_named("bell-pqs3", 1.0, 0.0, 0.5, 0.5)
    with pytest.raises(ValueError):
        analytic_named("qs", 1.0, 0.0, 0.5, 0.5)
