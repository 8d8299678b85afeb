"""Fock-basis optical elements: beam splitters, polarization optics, squeezer.

Conventions, fixed once and used everywhere:

* Beam splitter of transmissivity t maps creation operators as
  ``a+ -> sqrt(t) a+ + sqrt(1-t) b+`` and ``b+ -> sqrt(1-t) a+ - sqrt(t) b+``,
  identically for both polarizations.  On a pair of same-polarization coherent
  states this reproduces
  ``|mu>|nu> -> |mu sqrt(t) + nu sqrt(1-t)> |mu sqrt(1-t) - nu sqrt(t)>``.
* Polarizing beam splitter: H transmits (stays put), V reflects (the vertical
  occupations of the two ports swap).
* Half-wave plate at 45 degrees: exchanges the H and V occupations of a mode.
* Type-II two-mode squeezer: pair creation across (signal H, idle V) and
  (signal V, idle H); exact kernel below plus a low-order series oracle built
  directly from ladder operators.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass
from functools import lru_cache

from .fock import (
    H,
    CutoffError,
    FockError,
    OccKey,
    PureState,
    V,
    _raw_state,
    add,
    scale,
)

log = logging.getLogger(__name__)


class CutoffOverflowError(CutoffError):
    """A ladder-operator application would exceed the cutoff (never dropped silently)."""


@dataclass(frozen=True)
class BeamSplitterSpec:
    """Transmissivity and the two spatial modes a general beam splitter couples."""

    t: float
    mode_a: int
    mode_b: int

    def __post_init__(self) -> None:
        if not 0.0 <= self.t <= 1.0:
            raise FockError(f"transmissivity {self.t} outside [0, 1]")
        if self.mode_a == self.mode_b:
            raise FockError("beam splitter needs two distinct modes")


@dataclass(frozen=True)
class SqueezerSpec:
    """Characteristic squeezing parameter and the signal/idle mode pair."""

    gamma: complex
    mode_s: int
    mode_i: int

    def __post_init__(self) -> None:
        if abs(self.gamma) >= 1.0:
            raise FockError(f"|gamma| = {abs(self.gamma)} must be < 1")
        if self.mode_s == self.mode_i:
            raise FockError("squeezer needs distinct signal and idle modes")


def _check_mode(state: PureState, mode: int) -> None:
    if mode < 0 or mode >= state.mode_count:
        raise FockError(f"mode {mode} out of range for {state.mode_count}-mode state")


def _bs_pair_terms(p: int, q: int, t: float) -> list[tuple[int, int, float]]:
    """Single-polarization expansion of |p, q> under the fixed convention.

    Returns (out_a, out_b, coefficient) triples; photon number p + q conserved.
    """
    st = math.sqrt(t)
    sr = math.sqrt(1.0 - t)
    terms: dict[int, float] = {}
    for i in range(p + 1):
        ci = math.comb(p, i) * st**i * sr ** (p - i)
        for j in range(q + 1):
            cj = math.comb(q, j) * sr**j * (-st) ** (q - j)
            terms[i + j] = terms.get(i + j, 0.0) + ci * cj
    base = math.sqrt(math.factorial(p) * math.factorial(q))
    out = []
    for na, c in terms.items():
        nb = p + q - na
        w = c * math.sqrt(math.factorial(na) * math.factorial(nb)) / base
        if w != 0.0:
            out.append((na, nb, w))
    return out


def apply_bs(state: PureState, spec: BeamSplitterSpec) -> PureState:
    """General beam splitter on two spatial modes, polarizations independent.

    Exact on every key whose per-polarization photon total fits the cutoff;
    components pushed past the cutoff are dropped (truncation leakage).
    """
    _check_mode(state, spec.mode_a)
    _check_mode(state, spec.mode_b)
    a, b, t = spec.mode_a, spec.mode_b, spec.t
    cutoff = state.cutoff
    cache: dict[tuple[int, int], list[tuple[int, int, float]]] = {}

    def pair_terms(p: int, q: int) -> list[tuple[int, int, float]]:
        try:
            return cache[(p, q)]
        except KeyError:
            r = _bs_pair_terms(p, q, t)
            cache[(p, q)] = r
            return r

    amps: dict[OccKey, complex] = {}
    for key, amp in state.amplitudes.items():
        (pah, pav), (pbh, pbv) = key[a], key[b]
        for nah, nbh, wh in pair_terms(pah, pbh):
            if nah > cutoff or nbh > cutoff:
                continue
            for nav, nbv, wv in pair_terms(pav, pbv):
                if nav > cutoff or nbv > cutoff:
                    continue
                new = list(key)
                new[a] = (nah, nav)
                new[b] = (nbh, nbv)
                nk = tuple(new)
                amps[nk] = amps.get(nk, 0.0 + 0.0j) + amp * wh * wv
    return _raw_state(state.mode_count, cutoff, amps, state.tol)


def apply_pbs(state: PureState, mode_a: int, mode_b: int) -> PureState:
    """Polarizing beam splitter: H stays, V swaps between the two modes."""
    _check_mode(state, mode_a)
    _check_mode(state, mode_b)
    if mode_a == mode_b:
        raise FockError("polarizing beam splitter needs two distinct modes")
    amps: dict[OccKey, complex] = {}
    for key, amp in state.amplitudes.items():
        new = list(key)
        new[mode_a] = (key[mode_a][0], key[mode_b][1])
        new[mode_b] = (key[mode_b][0], key[mode_a][1])
        amps[tuple(new)] = amp
    return PureState(state.mode_count, state.cutoff, amps, state.tol)


def apply_hwp(state: PureState, mode: int) -> PureState:
    """Half-wave plate at 45 degrees: swap H and V occupations of one mode."""
    _check_mode(state, mode)
    amps: dict[OccKey, complex] = {}
    for key, amp in state.amplitudes.items():
        new = list(key)
        nh, nv = key[mode]
        new[mode] = (nv, nh)
        amps[tuple(new)] = amp
    return PureState(state.mode_count, state.cutoff, amps, state.tol)


def apply_pol_phase(state: PureState, mode: int, pol: str, phase: float) -> PureState:
    """Polarization-conditional phase plate: amplitude factor exp(i phase n_pol).

    This is the feed-forward correction primitive used by the heralded
    scissors circuits (phase = pi flips the sign of odd occupations).
    """
    _check_mode(state, mode)
    idx = 0 if pol == H else 1
    amps: dict[OccKey, complex] = {}
    for key, amp in state.amplitudes.items():
        n = key[mode][idx]
        amps[key] = amp if n == 0 else amp * cmath.exp(1j * phase * n)
    return PureState(state.mode_count, state.cutoff, amps, state.tol)


@lru_cache(maxsize=None)
def _sqrt_binom(n: int, k: int) -> float:
    return math.sqrt(math.comb(n, k))


def apply_squeezer_exact(state: PureState, spec: SqueezerSpec) -> PureState:
    """Exact type-II two-mode squeezer with the idle mode starting in vacuum.

    Per signal key |n_H, m_V>, the output is a double sum over created pairs:
    amplitude ``K_{n+m} (-i gamma)^(k+l) sqrt(C(n+k, n) C(m+l, m))`` on the key
    with signal (n+k, m+l) and idle (l, k), where
    ``K_n = (1 - |gamma|^2)^((n+2)/2)``.  Sums run until an occupation hits the
    cutoff; the discarded weight (norm deficit) is logged at debug level.
    """
    _check_mode(state, spec.mode_s)
    _check_mode(state, spec.mode_i)
    g = complex(spec.gamma)
    cutoff = state.cutoff
    ms, mi = spec.mode_s, spec.mode_i
    abs_g = abs(g)
    one_minus = 1.0 - abs_g * abs_g
    mig = -1j * g
    tol = state.tol

    # precompute powers of (-i gamma) once per application
    pows = [1.0 + 0.0j]
    for _ in range(2 * cutoff):
        pows.append(pows[-1] * mig)

    # Each (input key, k, l) hits a distinct output key (the idle occupation
    # pins k and l, which pin the input), so plain stores suffice.  Term
    # magnitudes are monotone in k and l once the growth ratio
    # |gamma| sqrt((n+k+1)/(k+1)) falls below one, so the loops stop at the
    # compaction tolerance instead of grinding to the cutoff.
    amps: dict[OccKey, complex] = {}
    in_norm = 0.0
    for key, amp in state.amplitudes.items():
        if key[mi] != (0, 0):
            raise FockError(
                "squeezer kernel requires the idle mode in vacuum; "
                f"found occupation {key[mi]} on mode {mi}"
            )
        in_norm += amp.real * amp.real + amp.imag * amp.imag
        n, m = key[ms]
        base = amp * one_minus ** ((n + m + 2) / 2.0)
        new = list(key)
        for k in range(cutoff - n + 1):
            ck = base * pows[k] * _sqrt_binom(n + k, n)
            stored_any = False
            for l in range(cutoff - m + 1):
                w = ck * pows[l] * _sqrt_binom(m + l, m)
                mag = abs(w)
                if mag >= tol:
                    stored_any = True
                    new[ms] = (n + k, m + l)
                    new[mi] = (l, k)
                    amps[tuple(new)] = w
                elif abs_g * abs_g * (m + l + 1) < (l + 1):
                    break
            if not stored_any and abs_g * abs_g * (n + k + 1) < (k + 1):
                break
    out = PureState(state.mode_count, cutoff, amps, tol)
    deficit = in_norm - out.norm_squared()
    if deficit > 1e-9:
        log.debug("squeezer truncation dropped %.3e of squared norm", deficit)
    return out


def _ladder(
    state: PureState, mode: int, pol: str, raise_op: bool
) -> PureState:
    """Apply a single creation or annihilation operator to (mode, pol)."""
    idx = 0 if pol == H else 1
    cutoff = state.cutoff
    amps: dict[OccKey, complex] = {}
    for key, amp in state.amplitudes.items():
        n = key[mode][idx]
        if raise_op:
            if n + 1 > cutoff:
                raise CutoffOverflowError(
                    f"creation on mode {mode} pol {pol} exceeds cutoff {cutoff}"
                )
            factor = math.sqrt(n + 1)
            n_new = n + 1
        else:
            if n == 0:
                continue
            factor = math.sqrt(n)
            n_new = n - 1
        new = list(key)
        occ = list(key[mode])
        occ[idx] = n_new
        new[mode] = tuple(occ)
        nk = tuple(new)
        amps[nk] = amps.get(nk, 0.0 + 0.0j) + amp * factor
    return _raw_state(state.mode_count, cutoff, amps, state.tol)


def _pair_generator(state: PureState, xi: complex, mode_s: int, mode_i: int) -> PureState:
    """One application of xi K+ - conj(xi) K with K = a_sH a_iV + a_sV a_iH."""
    up1 = _ladder(_ladder(state, mode_s, H, True), mode_i, V, True)
    up2 = _ladder(_ladder(state, mode_s, V, True), mode_i, H, True)
    dn1 = _ladder(_ladder(state, mode_s, H, False), mode_i, V, False)
    dn2 = _ladder(_ladder(state, mode_s, V, False), mode_i, H, False)
    raised = scale(add(up1, up2), xi)
    lowered = scale(add(dn1, dn2), -xi.conjugate())
    return add(raised, lowered)


def apply_squeezer_series(
    state: PureState, xi: complex, mode_s: int, mode_i: int, order: int
) -> PureState:
    """Taylor expansion of the squeezer unitary, for oracle use at small |xi|.

    Creation overflow past the cutoff raises instead of silently dropping, so
    callers must leave enough headroom (input photons + order per mode).
    """
    if order < 1 or order > 4:
        raise FockError("series order must be between 1 and 4")
    _check_mode(state, mode_s)
    _check_mode(state, mode_i)
    if mode_s == mode_i:
        raise FockError("squeezer needs distinct signal and idle modes")
    xi = complex(xi)
    out = state
    term = state
    for p in range(1, order + 1):
        term = scale(_pair_generator(term, xi, mode_s, mode_i), 1.0 / p)
        out = add(out, term)
    return out


def gamma_from_xi(xi: complex) -> complex:
    """Characteristic squeezing parameter of the exact kernel for coupling xi.

    The pair amplitude produced by exp(xi K+ - conj(xi) K) is
    ``exp(i arg xi) tanh |xi|`` per pair family, and the kernel encodes it as
    ``-i gamma``; hence gamma = i exp(i arg xi) tanh(|xi|).
    """
    xi = complex(xi)
    r = abs(xi)
    if r == 0.0:
        return 0.0 + 0.0j
    return 1j * (xi / r) * math.tanh(r)
