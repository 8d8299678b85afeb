"""End-to-end entanglement preparation pipelines.

The named pipelines mirror the performance-analysis layouts: the two-arm
entangled coherent source is truncated on its second arm (hybrid photon-qubit
vs coherent-arm entanglement), then optionally on its first arm as well
(polarization Bell pair).  Each pipeline exists in a numeric route (full
circuit simulation) and an analytic route (closed forms); the two must agree
within the verification budget.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from . import analytics
from .fock import PureState, V, add, fidelity, make_state, min_cutoff, scale, tensor
from .elements import apply_pol_phase
from .scissors import PQS1, PQS2, ScissorsResult, apply_scissors, prepare_omega
from .sources import SourceParams, coherent, xi_direct

PREPARATIONS = ("hybrid-pqs1", "hybrid-pqs2", "bell-pqs1", "bell-pqs2")


@dataclass(frozen=True)
class PrepResult:
    probability: float
    fidelity: float
    state: PureState | None


def required_cutoff(delta: float, t0: float, tail_bound: float = 1e-12) -> int:
    """Cutoff so the larger source arm keeps its truncation tail under budget."""
    a, b = analytics.alpha_beta(delta, t0)
    return max(1, min_cutoff(max(a, b), tail_bound))


def _knob(method: str, value: float) -> PQS1 | PQS2:
    if method == "pqs1":
        return PQS1(t=value)
    if method == "pqs2":
        return PQS2(gamma=complex(value))
    raise ValueError(f"unknown scissors method {method!r}")


def _photon_pair_target(phi: float, cutoff: int) -> PureState:
    phase = cmath.exp(1j * phi)
    return make_state(
        2,
        cutoff,
        [((((1, 0), (1, 0))), 1.0 / math.sqrt(2.0)),
         ((((0, 1), (0, 1))), phase / math.sqrt(2.0))],
    )


def _hybrid_target(alpha: float, phi: float, cutoff: int, tail_bound: float) -> PureState:
    """Coherent arm in mode 0, photon qubit in mode 1, plus-branch phase."""
    branch_h = tensor(
        coherent(alpha, "H", cutoff, tail_bound),
        make_state(1, cutoff, [((((1, 0)),), 1.0)]),
    )
    branch_v = tensor(
        coherent(-alpha, "V", cutoff, tail_bound),
        make_state(1, cutoff, [((((0, 1)),), 1.0)]),
    )
    combined = add(branch_h, scale(branch_v, cmath.exp(1j * phi)))
    return scale(combined, 1.0 / math.sqrt(2.0))


def prepare_hybrid(
    method: str,
    delta: float,
    phi: float,
    t0: float,
    knob: float,
    cutoff: int | None = None,
    tail_bound: float = 1e-12,
) -> PrepResult:
    """Truncate the second arm of the two-arm source; full circuit simulation.

    The heralded branch sign left by the single truncation is removed by a
    feed-forward pi phase on the photon qubit before comparing against the
    plus-branch target.
    """
    if cutoff is None:
        cutoff = required_cutoff(delta, t0, tail_bound)
    params = SourceParams(delta=delta, phi=phi, t0=t0, cutoff=cutoff)
    source = xi_direct(params, tail_bound)
    result = apply_scissors(source, 1, _knob(method, knob))
    if result.canonical_state is None:
        return PrepResult(result.total_probability, 0.0, None)
    state = apply_pol_phase(result.canonical_state, 1, V, math.pi)
    target = _hybrid_target(params.alpha, phi, cutoff, tail_bound)
    return PrepResult(result.total_probability, fidelity(state, target), state)


def prepare_bell(
    method: str,
    delta: float,
    phi: float,
    t0: float,
    knob: float,
    cutoff: int | None = None,
    tail_bound: float = 1e-12,
) -> PrepResult:
    """Truncate both arms down to the polarization Bell pair."""
    if cutoff is None:
        cutoff = required_cutoff(delta, t0, tail_bound)
    params = SourceParams(delta=delta, phi=phi, t0=t0, cutoff=cutoff)
    source = xi_direct(params, tail_bound)
    first = apply_scissors(source, 1, _knob(method, knob))
    if first.canonical_state is None:
        return PrepResult(0.0, 0.0, None)
    second = apply_scissors(first.canonical_state, 0, _knob(method, knob))
    total = first.total_probability * second.total_probability
    if second.canonical_state is None:
        return PrepResult(total, 0.0, None)
    target = _photon_pair_target(phi, cutoff)
    return PrepResult(total, fidelity(second.canonical_state, target), second.canonical_state)


def prepare_named(
    name: str,
    delta: float,
    phi: float,
    t0: float,
    knob: float,
    cutoff: int | None = None,
    tail_bound: float = 1e-12,
) -> PrepResult:
    """Dispatch on a pipeline name like ``bell-pqs1``."""
    if name not in PREPARATIONS:
        raise ValueError(f"unknown preparation {name!r}")
    family, method = name.split("-")
    runner = prepare_hybrid if family == "hybrid" else prepare_bell
    return runner(method, delta, phi, t0, knob, cutoff, tail_bound)


def analytic_named(name: str, delta: float, phi: float, t0: float, knob: float) -> analytics.AnalyticPF:
    """Closed-form probability and fidelity for a named pipeline."""
    if name not in PREPARATIONS:
        raise ValueError(f"unknown preparation {name!r}")
    family, method = name.split("-")
    if family == "hybrid":
        return analytics.pf_hybrid(method, delta, phi, t0, knob)
    return analytics.pf_bell(method, delta, phi, t0, knob)


def prepare_omega_pipeline(
    delta: float,
    phi: float,
    t0: float,
    split_ts: tuple[float, ...],
    n: int,
    j: int,
    methods: tuple[str, ...],
    knobs: dict[str, float],
    cutoff: int | None = None,
    tail_bound: float = 1e-12,
) -> ScissorsResult:
    """General n-arm truncation; each stage's knob comes from its method name."""
    if cutoff is None:
        cutoff = required_cutoff(delta, t0, tail_bound)
    params = SourceParams(delta=delta, phi=phi, t0=t0, split_ts=split_ts, cutoff=cutoff)
    stages = tuple(
        _knob(m, knobs["t"] if m == "pqs1" else knobs["gamma_abs"]) for m in methods
    )
    return prepare_omega(params, n, j, stages)
