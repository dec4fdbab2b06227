"""One-parameter scans of violation ratios and a Monte-Carlo Haar-average estimator."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import brentq
from scipy.stats import unitary_group

from .catalog import CatalogEntry, harmonic
from .engine import threshold
from .errors import InvalidDimension, InvalidParameter
from .linalg import check_state, expectation
from .model import realize_full_operator
from .objects import StateSpec, make_state

GOLDEN = (math.sqrt(5.0) - 1) / 2
MC_CHUNK = 10_000


@dataclass(frozen=True)
class ScanPoint:
    param: float
    expectation: float
    threshold: float
    ratio: float


@dataclass(frozen=True)
class ScanResult:
    grid: tuple
    best: ScanPoint
    refined_best: ScanPoint
    param_name: str = ""


class RatioFunction:
    """``R(x) = <H(x)> / beta(x)`` with thresholds cached per parameter value.

    ``state`` is a StateSpec or a callable ``x -> StateSpec`` for states that
    move with the parameter.
    """

    def __init__(self, builder: Callable[[float], CatalogEntry], state, workers=None):
        self.builder = builder
        self.state = state
        self.workers = workers
        self._cache: dict[float, tuple] = {}

    def entry_data(self, x: float):
        key = float(x)
        if key not in self._cache:
            e = self.builder(key)
            if e.spec is None:
                raise InvalidParameter(f"{e.name} has no enumerable operator to scan")
            h = realize_full_operator(e.spec)
            beta = threshold(e.spec, e.threshold_mode, workers=self.workers).beta_overall
            self._cache[key] = (h, beta)
        return self._cache[key]

    def point(self, x: float, state=None) -> ScanPoint:
        h, beta = self.entry_data(x)
        st = state if state is not None else self.state
        st = st(x) if callable(st) else st
        rho = make_state(st) if isinstance(st, StateSpec) else check_state(st)
        val = expectation(h, rho)
        ratio = val / beta if beta != 0 else math.copysign(math.inf, val)
        return ScanPoint(float(x), val, beta, ratio)


def golden_max(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-6):
    """Golden-section search for a maximum of a unimodal ``f`` on [lo, hi]."""
    a, b = lo, hi
    c, d = b - GOLDEN * (b - a), a + GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)


def scan_ratio(builder, state, lo: float, hi: float, points: int = 101, refine: bool = True,
               ratio_fn: RatioFunction | None = None, param_name: str = "") -> ScanResult:
    """Grid scan of the violation ratio, refined around the best grid point."""
    if points < 3:
        raise InvalidParameter("a scan needs at least 3 points")
    if not hi > lo:
        raise InvalidParameter("scan range needs hi > lo")
    rf = ratio_fn or RatioFunction(builder, state)
    xs = np.linspace(lo, hi, int(points))
    grid = tuple(rf.point(x, state) for x in xs)
    ib = max(range(len(grid)), key=lambda i: (grid[i].ratio, -i))
    best = grid[ib]
    refined = best
    if refine:
        a, b = xs[max(ib - 1, 0)], xs[min(ib + 1, len(xs) - 1)]
        x, _ = golden_max(lambda t: rf.point(t, state).ratio, float(a), float(b))
        cand = rf.point(x, state)
        if cand.ratio > best.ratio:
            refined = cand
    return ScanResult(grid, best, refined, param_name)


def critical_visibility(builder, lo: float, hi: float, points: int = 101, n_parties: int = 3,
                        v_lo: float = 1e-3, v_hi: float = 1.0, tol: float = 1e-5):
    """Smallest visibility V with ``max_x R(x; V) = 1`` for the noisy GHZ family.

    Returns ``(V_c, ScanResult at V_c)``.
    """
    rf = RatioFunction(builder, None)

    def excess(v):
        st = StateSpec("noisy-ghz", {"V": v, "N": n_parties})
        return scan_ratio(builder, st, lo, hi, points, ratio_fn=rf).refined_best.ratio - 1.0

    if excess(v_hi) <= 0:
        raise InvalidParameter("no violation at the upper visibility; critical point not bracketed")
    vc = brentq(excess, v_lo, v_hi, xtol=tol)
    res = scan_ratio(builder, StateSpec("noisy-ghz", {"V": vc, "N": n_parties}), lo, hi, points, ratio_fn=rf)
    return float(vc), res


# -- Haar Monte Carlo --------------------------------------------------------------


@dataclass(frozen=True)
class HaarEstimate:
    mean: float
    std_error: float
    samples: int
    seed: int
    constraint: str = "plain"


def haar_unitaries(d: int, n: int, rng) -> np.ndarray:
    u = unitary_group.rvs(d, size=n, random_state=rng)
    return np.asarray(u).reshape(n, d, d)


def _sample_values(rho_t: np.ndarray, u: np.ndarray, constraint: str) -> np.ndarray:
    """sum_a <x_a (x) u_a| rho |x_a (x) u_a> with x_a = u_a or conj(u_a)."""
    n, d, _ = u.shape
    left = np.conj(u) if constraint == "conjugate" else u
    # vecs[s, a, :] = kron(left[:, a], u[:, a])
    vecs = np.einsum("sia,sja->saij", left, u).reshape(n, d, d * d)
    return np.einsum("sak,kl,sal->s", vecs.conj(), rho_t, vecs).real


def haar_expectation_mc(state, d: int, constraint: str = "plain", samples: int = 100_000,
                        seed: int = 0) -> HaarEstimate:
    """Estimate ``<H>`` for the Haar-averaged projector-pair operator by sampling U."""
    d = int(d)
    if d < 2:
        raise InvalidDimension(f"d must be >= 2, got {d}")
    if constraint not in ("plain", "conjugate"):
        raise InvalidParameter(f"unknown constraint {constraint!r}")
    if samples < 100:
        raise InvalidParameter("need at least 100 samples")
    rho = make_state(state) if isinstance(state, StateSpec) else check_state(state)
    if rho.shape != (d * d, d * d):
        raise InvalidDimension(f"state of dim {rho.shape[0]} is not on {d} x {d}")
    n_chunks = -(-samples // MC_CHUNK)
    streams = np.random.SeedSequence(int(seed)).spawn(n_chunks)
    vals = []
    for k, ss in enumerate(streams):
        size = min(MC_CHUNK, samples - k * MC_CHUNK)
        u = haar_unitaries(d, size, np.random.default_rng(ss))
        vals.append(_sample_values(rho, u, constraint))
    v = np.concatenate(vals)
    return HaarEstimate(float(v.mean()), float(v.std(ddof=1) / math.sqrt(len(v))), int(samples), int(seed),
                        constraint)


__all__ = [
    "ScanPoint",
    "ScanResult",
    "RatioFunction",
    "HaarEstimate",
    "golden_max",
    "scan_ratio",
    "critical_visibility",
    "haar_unitaries",
    "haar_expectation_mc",
    "harmonic",
]
