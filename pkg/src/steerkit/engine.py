"""Steering thresholds by exhaustive enumeration of deterministic strategies.

For a strategy ``xi`` every untrusted setting gets a fixed response and the
trusted-side operator ``H(xi)`` is a sum of the selected operators.  The
one-way thresholds are ``max_xi lambda_max(H(xi))`` and ``min_xi lambda_min(H(xi))``.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import IncompleteStrategy, InvalidParameter, NotSymmetric, StrategySpaceTooLarge
from .linalg import expectation, permute_parties
from .model import FullOperatorSpec, LsiSpec, realize_full_operator, restrict_to_direction
from .objects import StateSpec, make_state

DEFAULT_CAP = 2**24
TIE_ATOL = 1e-12
VERDICT_ATOL = 1e-9
SYMMETRY_ATOL = 1e-10
# bound on complex entries materialized per chunk (~64 MB)
_CHUNK_ENTRIES = 2**22


@dataclass(frozen=True)
class DeterministicStrategy:
    """Fixed responses: +1/-1 for two-value settings, an outcome index otherwise."""

    assignment: Mapping[str, int]
    index: int = -1

    def as_dict(self) -> dict:
        return dict(self.assignment)


@dataclass(frozen=True)
class DirectionalThreshold:
    beta: float
    gamma: float
    argmax_strategy: DeterministicStrategy
    argmin_strategy: DeterministicStrategy
    n_strategies: int = 0
    direction: str = ""


@dataclass(frozen=True)
class ThresholdReport:
    per_direction: Mapping[str, DirectionalThreshold]
    beta_overall: float
    gamma_overall: float
    mode: str = ""

    @classmethod
    def from_directions(cls, per_direction: dict, mode: str = "") -> "ThresholdReport":
        beta = max(t.beta for t in per_direction.values())
        gamma = min(t.gamma for t in per_direction.values())
        return cls(per_direction, beta, gamma, mode)


@dataclass(frozen=True)
class CertificationVerdict:
    expectation: float
    beta: float
    gamma: float
    violated: bool
    margin: float
    report: ThresholdReport | None = field(default=None, compare=False)


def _strategy(spec: LsiSpec, digits, index) -> DeterministicStrategy:
    assignment = {}
    for s, k in zip(spec.settings, digits):
        assignment[s.label] = (1 if k == 0 else -1) if s.kind == "two_value" else int(k)
    return DeterministicStrategy(assignment, int(index))


def _digits(index: int, radices) -> list[int]:
    out = []
    for m in reversed(radices):
        index, r = divmod(index, m)
        out.append(r)
    return out[::-1]


def strategy_from_index(spec: LsiSpec, index: int) -> DeterministicStrategy:
    return _strategy(spec, _digits(index, [s.m for s in spec.settings]), index)


def _option_index(setting, value) -> int:
    if setting.kind == "two_value":
        if value not in (1, -1):
            raise IncompleteStrategy(f"two-value setting {setting.label!r} needs +1 or -1, got {value!r}")
        return 0 if value == 1 else 1
    if not 0 <= int(value) < setting.m:
        raise IncompleteStrategy(f"setting {setting.label!r} outcome {value!r} outside 0..{setting.m - 1}")
    return int(value)


def h_of_strategy(spec: LsiSpec, s) -> np.ndarray:
    """Trusted-side operator ``H(xi)`` for a deterministic strategy."""
    assignment = s.assignment if isinstance(s, DeterministicStrategy) else dict(s)
    missing = [st.label for st in spec.settings if st.label not in assignment]
    if missing:
        raise IncompleteStrategy(f"strategy has no response for {missing}")
    extra = set(assignment) - {st.label for st in spec.settings}
    if extra:
        raise IncompleteStrategy(f"strategy assigns unknown settings {sorted(extra)}")
    h = spec.base_operator()
    for st, ops in zip(spec.settings, spec.option_operators()):
        h = h + ops[_option_index(st, assignment[st.label])]
    return h


def _workers(workers) -> int:
    if workers is None:
        try:
            workers = int(os.environ.get("STEERKIT_THREADS", "1"))
        except ValueError:
            workers = 1
    if workers <= 0:
        workers = os.cpu_count() or 1
    return int(workers)


def _scan_chunk(base, stacked, offsets, radices, start, stop):
    """Best (value, index) for max of lambda_max and min of lambda_min over [start, stop)."""
    d = base.shape[0]
    idx = np.arange(start, stop, dtype=np.int64)
    ind = np.zeros((stop - start, stacked.shape[0]))
    rem = idx.copy()
    for pos in range(len(radices) - 1, -1, -1):
        rem, r = np.divmod(rem, radices[pos])
        ind[np.arange(len(idx)), offsets[pos] + r] = 1.0
    hs = (ind @ stacked).reshape(-1, d, d) + base
    w = np.linalg.eigvalsh(hs)
    top, bot = w[:, -1], w[:, 0]
    vmax = float(top.max())
    imax = int(np.flatnonzero(top >= vmax - TIE_ATOL)[0])
    vmin = float(bot.min())
    imin = int(np.flatnonzero(bot <= vmin + TIE_ATOL)[0])
    return (vmax, start + imax), (vmin, start + imin)


def one_way_threshold(spec: LsiSpec, cap: int = DEFAULT_CAP, workers=None) -> DirectionalThreshold:
    """Exhaustive max/min of extremal eigenvalues over every deterministic strategy.

    Ties resolve to the smallest mixed-radix strategy index (first setting most
    significant), so reports are reproducible regardless of chunking.
    """
    radices = [s.m for s in spec.settings]
    total = math.prod(radices)
    if total > cap:
        raise StrategySpaceTooLarge(total, cap)
    base = spec.base_operator()
    d = base.shape[0]
    opts = spec.option_operators()
    if opts:
        stacked = np.concatenate([o.reshape(o.shape[0], d * d) for o in opts], axis=0)
    else:
        stacked = np.zeros((0, d * d), dtype=complex)
    offsets = np.concatenate([[0], np.cumsum(radices)[:-1]]).astype(np.int64) if radices else np.zeros(0, np.int64)

    chunk = max(1, min(2**16, _CHUNK_ENTRIES // (d * d)))
    bounds = [(a, min(a + chunk, total)) for a in range(0, total, chunk)]
    n_workers = _workers(workers)
    if n_workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            results = list(pool.map(lambda b: _scan_chunk(base, stacked, offsets, radices, *b), bounds))
    else:
        results = [_scan_chunk(base, stacked, offsets, radices, *b) for b in bounds]

    # chunks are in ascending index order, so strict improvement keeps the earliest tie
    best_max, best_min = results[0]
    for mx, mn in results[1:]:
        if mx[0] > best_max[0] + TIE_ATOL:
            best_max = mx
        if mn[0] < best_min[0] - TIE_ATOL:
            best_min = mn
    return DirectionalThreshold(
        beta=best_max[0],
        gamma=best_min[0],
        argmax_strategy=strategy_from_index(spec, best_max[1]),
        argmin_strategy=strategy_from_index(spec, best_min[1]),
        n_strategies=total,
        direction=spec.direction_label(),
    )


def _directions(full: FullOperatorSpec, untrusted_sets, cap, workers) -> dict:
    out = {}
    for unt in untrusted_sets:
        spec = restrict_to_direction(full, unt)
        res = one_way_threshold(spec, cap=cap, workers=workers)
        out[res.direction] = res
    return out


def two_way_threshold(full: FullOperatorSpec, cap: int = DEFAULT_CAP, workers=None) -> ThresholdReport:
    if full.n_parties != 2:
        raise InvalidParameter(f"two-way threshold needs 2 parties, got {full.n_parties}")
    return ThresholdReport.from_directions(_directions(full, [(0,), (1,)], cap, workers), "two-way")


def gmst_threshold(full: FullOperatorSpec, cap: int = DEFAULT_CAP, workers=None) -> ThresholdReport:
    """Every nonempty proper subset of parties taken as the untrusted side."""
    n = full.n_parties
    if n < 3:
        raise InvalidParameter(f"genuine multipartite threshold needs >= 3 parties, got {n}")
    subsets = [c for r in range(1, n) for c in itertools.combinations(range(n), r)]
    return ThresholdReport.from_directions(_directions(full, subsets, cap, workers), "gmst")


def check_symmetric(full: FullOperatorSpec, atol: float = SYMMETRY_ATOL) -> None:
    """Raise NotSymmetric unless the operator and settings are invariant under relabelling parties."""
    dims = full.dims
    if len(set(dims)) != 1:
        raise NotSymmetric(f"parties have different dimensions {dims}")
    ref = full.settings[0]
    for p, ps in enumerate(full.settings[1:], start=1):
        if len(ps) != len(ref):
            raise NotSymmetric(f"party {p + 1} has {len(ps)} settings, party 1 has {len(ref)}")
        for a, b in zip(ref, ps):
            ea = a.effects
            eb = b.effects
            if len(ea) != len(eb) or any(np.max(np.abs(x - y)) > atol for x, y in zip(ea, eb)):
                raise NotSymmetric(f"party {p + 1} settings differ from party 1")
    h = realize_full_operator(full)
    n = full.n_parties
    for i in range(n - 1):
        order = list(range(n))
        order[i], order[i + 1] = order[i + 1], order[i]
        res = float(np.max(np.abs(permute_parties(h, dims, order) - h)))
        if res > atol:
            raise NotSymmetric(f"operator changes under swapping parties {i + 1} and {i + 2} (residual {res:.2e})")


def symmetric_gmst_threshold(full: FullOperatorSpec, cap: int = DEFAULT_CAP, workers=None) -> ThresholdReport:
    """Shortcut for permutation-symmetric operators: only untrusted = {1..m}, m = 1..N-1."""
    check_symmetric(full)
    n = full.n_parties
    if n < 2:
        raise InvalidParameter("need at least 2 parties")
    subsets = [tuple(range(m)) for m in range(1, n)]
    return ThresholdReport.from_directions(_directions(full, subsets, cap, workers), "symmetric")


def threshold(full: FullOperatorSpec, mode: str = "auto", cap: int = DEFAULT_CAP, workers=None) -> ThresholdReport:
    if mode == "auto":
        mode = "two-way" if full.n_parties == 2 else "gmst"
    if mode == "two-way":
        return two_way_threshold(full, cap, workers)
    if mode == "gmst":
        return gmst_threshold(full, cap, workers)
    if mode == "symmetric":
        return symmetric_gmst_threshold(full, cap, workers)
    raise InvalidParameter(f"unknown threshold mode {mode!r}")


def certify(full: FullOperatorSpec, state, settings=None, threshold_report: ThresholdReport | None = None,
            mode: str = "auto") -> CertificationVerdict:
    """Compare ``<H>`` on ``state`` against the enumerated thresholds.

    ``settings`` optionally replaces the per-party measurements before both the
    threshold and the expectation are computed.
    """
    if settings is not None:
        full = full.with_settings(settings)
    rho = make_state(state) if isinstance(state, StateSpec) else state
    value = expectation(realize_full_operator(full), rho)
    rep = threshold_report if threshold_report is not None else threshold(full, mode)
    beta, gamma = rep.beta_overall, rep.gamma_overall
    upper = value - beta
    lower = gamma - value
    violated = upper > VERDICT_ATOL or lower > VERDICT_ATOL
    margin = upper if upper >= lower else lower
    return CertificationVerdict(value, beta, gamma, bool(violated), float(margin), rep)


__all__ = [
    "DeterministicStrategy",
    "DirectionalThreshold",
    "ThresholdReport",
    "CertificationVerdict",
    "h_of_strategy",
    "strategy_from_index",
    "one_way_threshold",
    "two_way_threshold",
    "gmst_threshold",
    "symmetric_gmst_threshold",
    "check_symmetric",
    "threshold",
    "certify",
]
