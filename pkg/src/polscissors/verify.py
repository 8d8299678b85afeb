"""Seeded analytic-vs-numeric cross-validation and named operating points.

``run_verify`` draws reproducible random parameter tuples, runs every
preparation through both the full circuit simulation and the closed forms,
and reports the worst probability/fidelity deviations per closed-form family
against a fixed budget.  ``run_spot`` evaluates the frozen operating points
(count-rate level checks) with their stated tolerances.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from . import analytics
from .fock import H, fidelity, make_state, min_cutoff, normalize
from .preparations import prepare_bell, prepare_hybrid
from .scissors import pqs1_apply, pqs2_apply, qs_apply
from .sources import DegenerateStateError, coherent

DEFAULT_BUDGET = 1e-8
DEFAULT_RANGES = {
    "delta": (0.2, 2.0),
    "t": (0.3, 0.98),
    "gamma_abs": (0.01, 0.12),
    "phi": (0.0, 2.0 * math.pi),
    "t0": (0.1, 0.9),
}

CHECK_NAMES = (
    "qs",
    "pqs1-random",
    "pqs2-random",
    "hybrid-pqs1",
    "hybrid-pqs2",
    "bell-pqs1",
    "bell-pqs2",
)


@dataclass
class CheckStat:
    name: str
    max_dp: float = 0.0
    max_df: float = 0.0
    samples: int = 0
    skipped: list[str] = field(default_factory=list)

    def record(self, dp: float, df: float) -> None:
        self.max_dp = max(self.max_dp, dp)
        self.max_df = max(self.max_df, df)
        self.samples += 1


@dataclass(frozen=True)
class VerifyReport:
    seed: int
    samples: int
    budget: float
    checks: tuple[CheckStat, ...]
    passed: bool

    def lines(self) -> list[str]:
        out = [
            f"verify seed={self.seed} samples={self.samples} budget={self.budget:.1e}",
            f"{'check':<14} {'samples':>7} {'skipped':>7} {'max|dP|':>12} {'max|dF|':>12}",
        ]
        for c in self.checks:
            out.append(
                f"{c.name:<14} {c.samples:>7} {len(c.skipped):>7} "
                f"{c.max_dp:>12.3e} {c.max_df:>12.3e}"
            )
            out.extend(f"  skipped: {reason}" for reason in c.skipped)
        worst = max(max(c.max_dp, c.max_df) for c in self.checks)
        out.append(f"result: {'PASS' if self.passed else 'FAIL'} (worst deviation {worst:.3e})")
        return out


def _random_polarized_input(rng: random.Random, cutoff: int):
    """Random normalized single-mode polarized state with occupations <= 2."""
    entries = []
    coeffs = {}
    for nh in range(3):
        for nv in range(3):
            amp = complex(rng.gauss(0.0, 1.0), rng.gauss(0.0, 1.0))
            entries.append((((nh, nv),), amp))
            coeffs[(nh, nv)] = amp
    state = normalize(make_state(1, cutoff, entries))
    norm = math.sqrt(sum(abs(a) ** 2 for a in coeffs.values()))
    coeffs = {k: a / norm for k, a in coeffs.items()}
    return state, coeffs


def _ideal_photon_sector(coeffs, cutoff: int):
    return normalize(
        make_state(
            1,
            cutoff,
            [(((1, 0),), coeffs[(1, 0)]), (((0, 1),), coeffs[(0, 1)])],
        )
    )


def run_verify(
    seed: int,
    samples: int,
    budget: float = DEFAULT_BUDGET,
    ranges: dict[str, tuple[float, float]] | None = None,
    tail_bound: float = 1e-12,
) -> VerifyReport:
    """Cross-validate simulation against closed forms on seeded random tuples."""
    if samples < 1:
        raise ValueError("need at least one sample")
    spans = dict(DEFAULT_RANGES)
    if ranges:
        spans.update(ranges)
    rng = random.Random(seed)
    stats = {name: CheckStat(name) for name in CHECK_NAMES}

    for index in range(samples):
        delta = rng.uniform(*spans["delta"])
        t = rng.uniform(*spans["t"])
        gamma = rng.uniform(*spans["gamma_abs"])
        phi = rng.uniform(*spans["phi"])
        t0 = rng.uniform(*spans["t0"])
        tag = f"sample {index}: delta={delta:.3f} phi={phi:.3f} t0={t0:.3f}"

        # single-polarization scissors on a coherent input
        try:
            cut = max(4, min_cutoff(delta, tail_bound))
            coh = coherent(delta, H, cut, tail_bound)
            sim = qs_apply(coh, 0, H, t)
            ana = analytics.pf_qs(analytics.f_n(delta, 0) ** 2, analytics.f_n(delta, 1) ** 2, t)
            photon = make_state(1, cut, [(((1, 0),), 1.0)])
            sim_f = fidelity(sim.canonical_state, photon)
            stats["qs"].record(
                abs(sim.total_probability - ana.probability), abs(sim_f - ana.fidelity)
            )
        except DegenerateStateError as exc:
            stats["qs"].skipped.append(f"{tag}: {exc}")

        # polarized scissors on a random two-photon-sector input
        state, coeffs = _random_polarized_input(rng, 8)
        sqs = {k: abs(v) ** 2 for k, v in coeffs.items()}
        ideal = _ideal_photon_sector(coeffs, 8)

        sim = pqs1_apply(state, 0, t)
        ana = analytics.pf_pqs1(sqs[(1, 0)], sqs[(0, 1)], sqs[(0, 0)], sqs[(1, 1)], t)
        stats["pqs1-random"].record(
            abs(sim.total_probability - ana.probability),
            abs(fidelity(sim.canonical_state, ideal) - ana.fidelity),
        )

        sim = pqs2_apply(state, 0, gamma)
        ana = analytics.pf_pqs2(sqs[(1, 0)], sqs[(0, 1)], sqs[(0, 0)], sqs[(1, 1)], gamma)
        stats["pqs2-random"].record(
            abs(sim.total_probability - ana.probability),
            abs(fidelity(sim.canonical_state, ideal) - ana.fidelity),
        )

        # named preparations, full pipelines
        for name, runner, method, knob in (
            ("hybrid-pqs1", prepare_hybrid, "pqs1", t),
            ("hybrid-pqs2", prepare_hybrid, "pqs2", gamma),
            ("bell-pqs1", prepare_bell, "pqs1", t),
            ("bell-pqs2", prepare_bell, "pqs2", gamma),
        ):
            try:
                num = runner(method, delta, phi, t0, knob, tail_bound=tail_bound)
                if name.startswith("hybrid"):
                    ana = analytics.pf_hybrid(method, delta, phi, t0, knob)
                else:
                    ana = analytics.pf_bell(method, delta, phi, t0, knob)
                stats[name].record(
                    abs(num.probability - ana.probability),
                    abs(num.fidelity - ana.fidelity),
                )
            except (DegenerateStateError, analytics.DegenerateParameterError) as exc:
                stats[name].skipped.append(f"{tag}: {exc}")

    checks = tuple(stats[name] for name in CHECK_NAMES)
    passed = all(c.max_dp <= budget and c.max_df <= budget for c in checks)
    return VerifyReport(seed, samples, budget, checks, passed)


@dataclass(frozen=True)
class SpotPoint:
    """A frozen operating point with its expected performance envelope."""

    name: str
    preparation: str
    delta: float
    phi: float
    t0: float
    knob: float
    repetition_rate: float
    expect_probability: float
    expect_rate: float
    rel_tol: float
    min_fidelity: float


SPOT_POINTS = {
    "bell-pqs1": SpotPoint(
        name="bell-pqs1",
        preparation="bell-pqs1",
        delta=0.8,
        phi=0.0,
        t0=0.5,
        knob=0.98,
        repetition_rate=6.4e6,
        expect_probability=3.6e-5,
        expect_rate=230.0,
        rel_tol=0.10,
        min_fidelity=0.9,
    ),
    "bell-pqs2": SpotPoint(
        name="bell-pqs2",
        preparation="bell-pqs2",
        delta=0.8,
        phi=0.0,
        t0=0.5,
        knob=0.07,
        repetition_rate=80e6,
        expect_probability=2.0e-6,
        expect_rate=160.0,
        rel_tol=0.10,
        min_fidelity=0.98,
    ),
}


def run_spot(name: str) -> tuple[list[str], bool]:
    """Evaluate one named operating point both ways; returns (report, passed)."""
    if name not in SPOT_POINTS:
        raise ValueError(f"unknown spot point {name!r}; have {sorted(SPOT_POINTS)}")
    pt = SPOT_POINTS[name]
    method = pt.preparation.split("-")[1]
    ana = (
        analytics.pf_bell(method, pt.delta, pt.phi, pt.t0, pt.knob)
        if pt.preparation.startswith("bell")
        else analytics.pf_hybrid(method, pt.delta, pt.phi, pt.t0, pt.knob)
    )
    runner = prepare_bell if pt.preparation.startswith("bell") else prepare_hybrid
    num = runner(method, pt.delta, pt.phi, pt.t0, pt.knob)
    rate = analytics.count_rate(ana.probability, pt.repetition_rate)

    def within(value: float, expect: float) -> bool:
        return abs(value - expect) <= pt.rel_tol * expect

    checks = [
        (f"P_analytic = {ana.probability:.6e} within {pt.rel_tol:.0%} of {pt.expect_probability:.1e}",
         within(ana.probability, pt.expect_probability)),
        (f"P_numeric  = {num.probability:.6e} within {pt.rel_tol:.0%} of {pt.expect_probability:.1e}",
         within(num.probability, pt.expect_probability)),
        (f"F_analytic = {ana.fidelity:.6f} > {pt.min_fidelity}", ana.fidelity > pt.min_fidelity),
        (f"F_numeric  = {num.fidelity:.6f} > {pt.min_fidelity}", num.fidelity > pt.min_fidelity),
        (f"count rate = {rate:.1f} Hz within {pt.rel_tol:.0%} of {pt.expect_rate:.0f} Hz",
         within(rate, pt.expect_rate)),
        (f"|P_num - P_ana| = {abs(num.probability - ana.probability):.3e} <= 1e-8",
         abs(num.probability - ana.probability) <= 1e-8),
    ]
    lines = [f"spot point {pt.name}: delta={pt.delta} phi={pt.phi} t0={pt.t0} knob={pt.knob}"]
    ok = True
    for text, good in checks:
        lines.append(f"  [{'PASS' if good else 'FAIL'}] {text}")
        ok &= good
    lines.append(f"spot point {pt.name}: {'PASS' if ok else 'FAIL'}")
    return lines, ok
