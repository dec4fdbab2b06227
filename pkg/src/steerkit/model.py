"""Declarative description of linear steering inequalities.

Two layers:

* :class:`FullOperatorSpec` holds concrete measurements for every party and a
  real coefficient table; it realizes the full operator ``H``.
* :class:`LsiSpec` is what the threshold engine consumes: the untrusted side is
  reduced to abstract settings whose outcomes select trusted-side operators.

:func:`restrict_to_direction` converts the first into the second for a chosen
set of untrusted parties.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, InvalidParameter, InvariantError, NonHermitianCoefficients
from .linalg import HERMITIAN_ATOL, as_matrix, hermiticity_residual, kron
from .objects import Observable, Povm

DEDUP_ATOL = 1e-12


@dataclass(frozen=True)
class PartyLayout:
    dims: tuple

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims or any(d < 2 for d in dims):
            raise DimensionMismatch(f"every party needs dimension >= 2, got {dims}")
        object.__setattr__(self, "dims", dims)

    @property
    def n_parties(self) -> int:
        return len(self.dims)

    def dim_of(self, parties) -> int:
        return int(np.prod([self.dims[p] for p in parties])) if parties else 1


@dataclass(frozen=True)
class UntrustedSetting:
    """An untrusted measurement seen only through its deterministic response.

    ``two_value``: the response is a sign; terms carry the operator multiplying +1.
    ``outcomes``: the response is one of ``m`` outcome indices.
    """

    label: str
    kind: str = "two_value"
    m: int = 2

    def __post_init__(self):
        if self.kind not in ("two_value", "outcomes"):
            raise InvalidParameter(f"unknown setting kind {self.kind!r}")
        if self.kind == "two_value":
            object.__setattr__(self, "m", 2)
        elif int(self.m) < 2:
            raise InvalidParameter(f"setting {self.label!r} needs m >= 2")
        object.__setattr__(self, "m", int(self.m))


@dataclass(frozen=True, eq=False)
class LsiTerm:
    setting: str
    outcome: int
    weight: float
    op: np.ndarray

    def __post_init__(self):
        op = np.array(self.op, dtype=complex)
        op.setflags(write=False)
        object.__setattr__(self, "op", op)
        object.__setattr__(self, "weight", float(self.weight))
        object.__setattr__(self, "outcome", int(self.outcome))


@dataclass(frozen=True, eq=False)
class LsiSpec:
    """One direction of a steering inequality.

    ``constant_op`` is an optional trusted-side operator independent of every
    untrusted response (identity factors on the untrusted side fold into it).
    """

    layout: PartyLayout
    trusted: tuple
    settings: tuple
    terms: tuple
    constant_term: float = 0.0
    constant_op: np.ndarray | None = None

    def __post_init__(self):
        lay = self.layout if isinstance(self.layout, PartyLayout) else PartyLayout(self.layout)
        object.__setattr__(self, "layout", lay)
        trusted = tuple(sorted(set(int(t) for t in self.trusted)))
        if not trusted or trusted[0] < 0 or trusted[-1] >= lay.n_parties:
            raise InvariantError("trusted-parties", f"{trusted} invalid for {lay.n_parties} parties")
        object.__setattr__(self, "trusted", trusted)
        object.__setattr__(self, "settings", tuple(self.settings))
        object.__setattr__(self, "terms", tuple(self.terms))
        object.__setattr__(self, "constant_term", float(self.constant_term))
        if not math.isfinite(self.constant_term):
            raise InvariantError("finite-weight", "constant_term is not finite")
        labels = [s.label for s in self.settings]
        if len(set(labels)) != len(labels):
            raise InvariantError("unique-labels", "setting labels must be unique")
        by_label = {s.label: s for s in self.settings}
        d = self.trusted_dim
        for i, t in enumerate(self.terms):
            where = f"term {i}"
            if t.setting not in by_label:
                raise InvariantError("declared-setting", f"{where} references unknown setting {t.setting!r}")
            s = by_label[t.setting]
            if s.kind == "two_value" and t.outcome != 0:
                raise InvariantError("outcome-range", f"{where}: two-value settings only take outcome 0")
            if not 0 <= t.outcome < s.m:
                raise InvariantError("outcome-range", f"{where}: outcome {t.outcome} outside 0..{s.m - 1}")
            if not math.isfinite(t.weight):
                raise InvariantError("finite-weight", f"{where} has a non-finite weight")
            if t.op.shape != (d, d):
                raise InvariantError("trusted-dims", f"{where}: operator shape {t.op.shape} != ({d}, {d})")
            if hermiticity_residual(t.op) > HERMITIAN_ATOL:
                raise InvariantError("hermitian", f"{where}: trusted operator is not Hermitian")
        if self.constant_op is not None:
            c = np.array(self.constant_op, dtype=complex)
            if c.shape != (d, d) or hermiticity_residual(c) > HERMITIAN_ATOL:
                raise InvariantError("hermitian", "constant_op must be a Hermitian trusted operator")
            c.setflags(write=False)
            object.__setattr__(self, "constant_op", c)

    @property
    def untrusted(self) -> tuple:
        return tuple(p for p in range(self.layout.n_parties) if p not in self.trusted)

    @property
    def trusted_dim(self) -> int:
        return self.layout.dim_of(self.trusted)

    @property
    def n_strategies(self) -> int:
        return math.prod(s.m for s in self.settings)

    def base_operator(self) -> np.ndarray:
        """Strategy-independent part: ``constant_term * I + constant_op``."""
        base = self.constant_term * np.eye(self.trusted_dim, dtype=complex)
        if self.constant_op is not None:
            base = base + self.constant_op
        return base

    def option_operators(self) -> list[np.ndarray]:
        """Per setting, the trusted operator contributed by each possible response.

        Response 0 of a two-value setting is the value +1, response 1 is -1.
        """
        d = self.trusted_dim
        out = []
        for s in self.settings:
            ops = np.zeros((s.m, d, d), dtype=complex)
            for t in self.terms:
                if t.setting != s.label:
                    continue
                if s.kind == "two_value":
                    ops[0] += t.weight * t.op
                    ops[1] -= t.weight * t.op
                else:
                    ops[t.outcome] += t.weight * t.op
            out.append(ops)
        return out

    def direction_label(self) -> str:
        return direction_label(self.untrusted, self.trusted)


def direction_label(untrusted, trusted) -> str:
    """1-based label such as ``"1,2->3"``."""
    return ",".join(str(p + 1) for p in untrusted) + "->" + ",".join(str(p + 1) for p in trusted)


# -- full operator ------------------------------------------------------------


@dataclass(frozen=True)
class Factor:
    """Reference to a party's setting inside a term.

    ``outcome=None`` uses the two-outcome observable ``E_0 - E_1`` (or the
    Observable's matrix); an integer selects that single effect.
    """

    setting: int
    outcome: int | None = None


@dataclass(frozen=True)
class Term:
    coeff: float
    factors: tuple  # one entry per party: Factor or None (identity)


def _setting_matrix(setting, outcome):
    if outcome is None:
        return setting.matrix
    return setting.effects[outcome]


@dataclass(frozen=True, eq=False)
class FullOperatorSpec:
    """Concrete multipartite operator ``sum coeff * (x)_p O_p + constant * I``.

    The coefficient table is stored sparsely as a list of :class:`Term`.
    """

    layout: PartyLayout
    settings: tuple  # per party, tuple of Observable | Povm
    terms: tuple
    constant: float = 0.0
    name: str = ""

    def __post_init__(self):
        lay = self.layout if isinstance(self.layout, PartyLayout) else PartyLayout(self.layout)
        object.__setattr__(self, "layout", lay)
        settings = tuple(tuple(ps) for ps in self.settings)
        if len(settings) != lay.n_parties:
            raise InvariantError("settings-per-party", f"{len(settings)} setting lists for {lay.n_parties} parties")
        for p, ps in enumerate(settings):
            for s in ps:
                if not isinstance(s, (Observable, Povm)):
                    raise InvariantError("setting-type", f"party {p + 1} has a non-measurement setting")
                if s.dim != lay.dims[p]:
                    raise InvariantError("setting-dims", f"party {p + 1} setting {s.label!r} has dim {s.dim}")
        object.__setattr__(self, "settings", settings)
        terms = tuple(self.terms)
        for i, t in enumerate(terms):
            c = t.coeff
            if isinstance(c, complex) or np.iscomplexobj(c):
                if abs(complex(c).imag) > 0:
                    raise NonHermitianCoefficients(f"term {i} has complex coefficient {c}")
            if len(t.factors) != lay.n_parties:
                raise InvariantError("factor-count", f"term {i} has {len(t.factors)} factors")
            for p, f in enumerate(t.factors):
                if f is None:
                    continue
                if not 0 <= f.setting < len(settings[p]):
                    raise InvariantError("setting-index", f"term {i} party {p + 1} setting {f.setting} undefined")
                s = settings[p][f.setting]
                if f.outcome is None:
                    if s.n_outcomes != 2:
                        raise InvariantError("two-outcome", f"term {i} party {p + 1}: {s.n_outcomes}-outcome setting needs an outcome index")
                elif not 0 <= f.outcome < s.n_outcomes:
                    raise InvariantError("outcome-range", f"term {i} party {p + 1}: outcome {f.outcome} out of range")
        object.__setattr__(self, "terms", tuple(Term(float(np.real(t.coeff)), tuple(t.factors)) for t in terms))
        c = self.constant
        if np.iscomplexobj(c) and abs(complex(c).imag) > 0:
            raise NonHermitianCoefficients("constant term is complex")
        object.__setattr__(self, "constant", float(np.real(c)))

    @property
    def dims(self) -> tuple:
        return self.layout.dims

    @property
    def n_parties(self) -> int:
        return self.layout.n_parties

    def with_settings(self, settings) -> "FullOperatorSpec":
        return FullOperatorSpec(self.layout, settings, self.terms, self.constant, self.name)

    def scaled(self, c: float) -> "FullOperatorSpec":
        return FullOperatorSpec(self.layout, self.settings, tuple(Term(t.coeff * c, t.factors) for t in self.terms),
                                self.constant * c, self.name)

    def setting_label(self, party: int, idx: int) -> str:
        s = self.settings[party][idx]
        return s.label or f"P{party + 1}.{idx + 1}"


def correlator_spec(settings, table, constant=0.0, name="") -> FullOperatorSpec:
    """Build a spec from ``{(i, j, ...): coeff}`` with ``None`` marking identity.

    Indices refer to each party's two-outcome settings.
    """
    settings = tuple(tuple(ps) for ps in settings)
    dims = tuple(ps[0].dim for ps in settings)
    terms = []
    for key, c in table.items():
        terms.append(Term(c, tuple(None if k is None else Factor(k) for k in key)))
    return FullOperatorSpec(PartyLayout(dims), settings, tuple(terms), constant, name)


def realize_full_operator(spec: FullOperatorSpec) -> np.ndarray:
    dims = spec.dims
    h = spec.constant * np.eye(int(np.prod(dims)), dtype=complex)
    for t in spec.terms:
        ops = []
        for p, f in enumerate(t.factors):
            if f is None:
                ops.append(np.eye(dims[p]))
            else:
                ops.append(_setting_matrix(spec.settings[p][f.setting], f.outcome))
        h = h + t.coeff * kron(*ops)
    res = hermiticity_residual(h)
    if res > 1e-10 * max(1.0, float(np.max(np.abs(h)))):
        raise InvariantError("hermitian", f"realized operator not Hermitian (residual {res:.2e})")
    return (h + h.conj().T) / 2


# -- restriction to a direction ---------------------------------------------


def _factor_values(setting, outcome) -> list[float]:
    """Classical value of the factor for each outcome of the untrusted setting."""
    n = setting.n_outcomes
    if outcome is None:
        if isinstance(setting, Observable) and not setting.two_valued:
            raise InvariantError("two-valued", f"untrusted observable {setting.label!r} is not two-valued")
        if isinstance(setting, Povm):
            _check_projective(setting)
        return [1.0, -1.0]
    return [1.0 if k == outcome else 0.0 for k in range(n)]


def _check_projective(povm: Povm):
    for e in povm.effects:
        if np.max(np.abs(e @ e - e)) > 1e-10:
            raise InvariantError("two-valued", f"untrusted POVM {povm.label!r} used as observable is not projective")


def _dedup(ops: list[np.ndarray]):
    """Group equal operators; returns (distinct ops, map outcome -> group)."""
    distinct: list[np.ndarray] = []
    groups = []
    for op in ops:
        for gi, d in enumerate(distinct):
            if np.max(np.abs(op - d)) <= DEDUP_ATOL:
                groups.append(gi)
                break
        else:
            distinct.append(op)
            groups.append(len(distinct) - 1)
    return distinct, groups


def restrict_to_direction(spec: FullOperatorSpec, untrusted: Sequence[int]) -> LsiSpec:
    """Replace the untrusted parties' measurements by deterministic responses.

    Each distinct tuple of untrusted settings appearing in the terms becomes one
    joint setting with its own response.  Party indices are 0-based.
    """
    n = spec.n_parties
    unt = tuple(sorted(set(int(u) for u in untrusted)))
    if not unt or len(unt) >= n or unt[0] < 0 or unt[-1] >= n:
        raise InvalidParameter(f"untrusted set {unt} must be a nonempty proper subset of {n} parties")
    tr = tuple(p for p in range(n) if p not in unt)
    dims = spec.dims
    d_tr = spec.layout.dim_of(tr)

    constant_op = np.zeros((d_tr, d_tr), dtype=complex)
    groups: dict[tuple, list] = {}
    for t in spec.terms:
        key = tuple(None if t.factors[p] is None else t.factors[p].setting for p in unt)
        trusted_ops = []
        for p in tr:
            f = t.factors[p]
            trusted_ops.append(np.eye(dims[p]) if f is None else _setting_matrix(spec.settings[p][f.setting], f.outcome))
        top = t.coeff * kron(*trusted_ops)
        if all(k is None for k in key):
            constant_op = constant_op + top
            continue
        groups.setdefault(key, []).append((t, top))

    settings, terms = [], []
    for key, members in groups.items():
        active = [(p, k) for p, k in zip(unt, key) if k is not None]
        ranges = [range(spec.settings[p][k].n_outcomes) for p, k in active]
        per_outcome = []
        for joint in itertools.product(*ranges):
            acc = np.zeros((d_tr, d_tr), dtype=complex)
            for t, top in members:
                val = 1.0
                for (p, k), o in zip(active, joint):
                    val *= _factor_values(spec.settings[p][k], t.factors[p].outcome)[o]
                    if val == 0.0:
                        break
                if val != 0.0:
                    acc = acc + val * top
            per_outcome.append(acc)
        distinct, _ = _dedup(per_outcome)
        label = "*".join("I" if k is None else spec.setting_label(p, k) for p, k in zip(unt, key))
        if len(distinct) == 1:
            constant_op = constant_op + distinct[0]
        elif len(distinct) == 2 and np.max(np.abs(distinct[0] + distinct[1])) <= DEDUP_ATOL:
            settings.append(UntrustedSetting(label, "two_value"))
            terms.append(LsiTerm(label, 0, 1.0, distinct[0]))
        else:
            settings.append(UntrustedSetting(label, "outcomes", len(distinct)))
            terms.extend(LsiTerm(label, k, 1.0, op) for k, op in enumerate(distinct))

    const = spec.constant
    cop = None if np.max(np.abs(constant_op)) == 0 else (constant_op + constant_op.conj().T) / 2
    return LsiSpec(spec.layout, tr, tuple(settings), tuple(terms), const, cop)


def lsi_from_operators(trusted_dim: int, ops: Sequence, labels=None, weights=None, constant=0.0) -> LsiSpec:
    """Bipartite one-way spec with two-value settings: ``sum_mu w_mu d(mu) F_mu``."""
    labels = labels or [f"A{i + 1}" for i in range(len(ops))]
    weights = weights or [1.0] * len(ops)
    settings = tuple(UntrustedSetting(lab) for lab in labels)
    terms = tuple(LsiTerm(lab, 0, w, as_matrix(op)) for lab, w, op in zip(labels, weights, ops))
    return LsiSpec(PartyLayout((2, trusted_dim)), (1,), settings, terms, constant)


__all__ = [
    "PartyLayout",
    "UntrustedSetting",
    "LsiTerm",
    "LsiSpec",
    "Factor",
    "Term",
    "FullOperatorSpec",
    "correlator_spec",
    "realize_full_operator",
    "restrict_to_direction",
    "lsi_from_operators",
    "direction_label",
]
