"""Measurements, mutually unbiased bases, named state families and assemblages."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import (
    DimensionMismatch,
    InvalidParameter,
    NotAResolution,
    NotProjector,
    UnsupportedDimension,
)
from .linalg import as_matrix, check_hermitian, check_state, embed, kron, partial_trace

TOL = 1e-10

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = {"x": SIGMA_X, "y": SIGMA_Y, "z": SIGMA_Z}


def _frozen(m) -> np.ndarray:
    m = np.array(m, dtype=complex)
    m.setflags(write=False)
    return m


@dataclass(frozen=True, eq=False)
class Observable:
    """Hermitian observable; ``two_valued`` means spectrum in {+1, -1}."""

    matrix: np.ndarray
    label: str = ""
    two_valued: bool = True

    def __post_init__(self):
        m = check_hermitian(self.matrix, what=f"observable {self.label!r}")
        if self.two_valued:
            sq = m @ m
            if np.max(np.abs(sq - np.eye(m.shape[0]))) > TOL:
                raise InvalidParameter(f"observable {self.label!r} flagged two-valued but A^2 != I")
        object.__setattr__(self, "matrix", _frozen(m))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_outcomes(self) -> int:
        return 2

    @property
    def effects(self) -> tuple[np.ndarray, np.ndarray]:
        """Projectors onto the +1 and -1 eigenspaces."""
        eye = np.eye(self.dim)
        return ((eye + self.matrix) / 2, (eye - self.matrix) / 2)

    def conjugated(self, u) -> "Observable":
        u = as_matrix(u)
        return Observable(u @ self.matrix @ u.conj().T, self.label, self.two_valued)


@dataclass(frozen=True, eq=False)
class Povm:
    effects: tuple
    label: str = ""

    def __post_init__(self):
        effs = tuple(_frozen(check_hermitian(e, atol=TOL, what="effect")) for e in self.effects)
        if len(effs) < 1:
            raise InvalidParameter("a POVM needs at least one effect")
        d = effs[0].shape[0]
        if any(e.shape != (d, d) for e in effs):
            raise DimensionMismatch("POVM effects have inconsistent dimensions")
        for k, e in enumerate(effs):
            lmin = float(np.linalg.eigvalsh(e)[0])
            if lmin < -TOL:
                raise InvalidParameter(f"effect {k} of {self.label!r} is not positive ({lmin:.3e})")
        total = sum(effs)
        if np.max(np.abs(total - np.eye(d))) > TOL:
            raise NotAResolution(f"effects of {self.label!r} do not sum to the identity")
        object.__setattr__(self, "effects", effs)

    @property
    def dim(self) -> int:
        return self.effects[0].shape[0]

    @property
    def n_outcomes(self) -> int:
        return len(self.effects)

    @property
    def matrix(self) -> np.ndarray:
        """E_0 - E_1, the observable carried by a two-outcome POVM."""
        if self.n_outcomes != 2:
            raise InvalidParameter(f"{self.label!r} has {self.n_outcomes} outcomes, not 2")
        return self.effects[0] - self.effects[1]

    def conjugated(self, u) -> "Povm":
        u = as_matrix(u)
        return Povm(tuple(u @ e @ u.conj().T for e in self.effects), self.label)


def pauli(axis: str) -> Observable:
    return Observable(PAULI[axis.lower()], f"sigma_{axis.lower()}")


def observable(matrix, label: str = "") -> Observable:
    return Observable(matrix, label)


def two_value_from_projectors(p_plus, p_minus, label: str = "") -> Observable:
    p, q = as_matrix(p_plus), as_matrix(p_minus)
    if p.shape != q.shape:
        raise DimensionMismatch("projectors have different dimensions")
    for name, m in (("p_plus", p), ("p_minus", q)):
        if np.max(np.abs(m @ m - m)) > TOL or np.max(np.abs(m - m.conj().T)) > TOL:
            raise NotProjector(f"{name} is not an orthogonal projector")
    if np.max(np.abs(p + q - np.eye(p.shape[0]))) > TOL:
        raise NotAResolution("p_plus + p_minus != I")
    return Observable(p - q, label)


def projective(vectors, label: str = "") -> Povm:
    """Rank-one projective measurement onto the columns of ``vectors``."""
    v = np.asarray(vectors, dtype=complex)
    return Povm(tuple(np.outer(v[:, a], v[:, a].conj()) for a in range(v.shape[1])), label)


def as_povm(setting) -> Povm:
    if isinstance(setting, Povm):
        return setting
    return Povm(setting.effects, setting.label)


def depolarize(povm, eta: float) -> Povm:
    """Apply ``E -> eta E + (1 - eta) Tr(E) I / d`` to every effect."""
    if not 0.0 <= eta <= 1.0:
        raise InvalidParameter(f"eta={eta} outside [0, 1]")
    p = as_povm(povm)
    d = p.dim
    eye = np.eye(d)
    effs = tuple(eta * e + (1 - eta) * np.trace(e).real * eye / d for e in p.effects)
    return Povm(effs, f"{p.label}@eta={eta:g}" if p.label else "")


# -- mutually unbiased bases ------------------------------------------------


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % k for k in range(2, int(math.isqrt(n)) + 1))


@dataclass(frozen=True, eq=False)
class MubFamily:
    d: int
    bases: tuple  # each an orthonormal d x d matrix, basis vectors as columns

    def projectors(self, x: int) -> tuple[np.ndarray, ...]:
        b = self.bases[x]
        return tuple(np.outer(b[:, a], b[:, a].conj()) for a in range(self.d))

    def povm(self, x: int, conjugate: bool = False) -> Povm:
        b = self.bases[x].conj() if conjugate else self.bases[x]
        return projective(b, f"mub{x}")


def mub_family(d: int) -> MubFamily:
    """Complete set of d+1 MUBs for prime d (Wootters-Fields / Fourier construction)."""
    d = int(d)
    if not _is_prime(d):
        raise UnsupportedDimension(f"MUB construction needs a prime dimension, got {d}")
    if d == 2:
        s = 1 / math.sqrt(2)
        bases = (
            np.eye(2, dtype=complex),
            np.array([[s, s], [s, -s]], dtype=complex),
            np.array([[s, s], [1j * s, -1j * s]], dtype=complex),
        )
    else:
        w = np.exp(2j * np.pi / d)
        j = np.arange(d)
        bases = [np.eye(d, dtype=complex)]
        for k in range(d):
            # column a: sum_j w^(k j^2 + a j) |j> / sqrt(d)
            cols = [w ** ((k * j * j + a * j) % d) / math.sqrt(d) for a in range(d)]
            bases.append(np.array(cols, dtype=complex).T)
        bases = tuple(bases)
    for b in bases:
        b.setflags(write=False)
    return MubFamily(d, bases)


# -- states -----------------------------------------------------------------


def flip_operator(d: int) -> np.ndarray:
    """Swap operator V|i>|j> = |j>|i> on C^d (x) C^d."""
    v = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            v[j * d + i, i * d + j] = 1.0
    return v


def _ghz_vector(n: int, c0: complex = 1 / math.sqrt(2), c1: complex = 1 / math.sqrt(2)):
    psi = np.zeros(2**n, dtype=complex)
    psi[0], psi[-1] = c0, c1
    return psi


def _pure(psi) -> np.ndarray:
    return np.outer(psi, np.conj(psi))


FAMILIES = {
    "werner": ("w", "d"),
    "isotropic": ("eta", "d"),
    "ghz": ("N",),
    "gen-ghz": ("omega",),
    "noisy-ghz": ("V", "N"),
    "max-entangled": ("d",),
    "custom": (),
}

DEFAULTS = {"d": 2, "N": 3, "V": 1.0, "w": 1.0, "eta": 1.0, "omega": math.pi / 2}


@dataclass(frozen=True, eq=False)
class StateSpec:
    """Named parametric state family; ``make_state`` realizes it."""

    family: str
    params: Mapping[str, float] = field(default_factory=dict)
    matrix: np.ndarray | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidParameter(f"unknown state family {self.family!r}")
        known = FAMILIES[self.family]
        params = {k: v for k, v in dict(self.params).items() if k in known}
        for k in known:
            params.setdefault(k, DEFAULTS[k])
        object.__setattr__(self, "params", params)

    @property
    def dims(self) -> tuple[int, ...]:
        p = self.params
        if self.family in ("werner", "isotropic", "max-entangled"):
            return (int(p["d"]),) * 2
        if self.family == "gen-ghz":
            return (2, 2, 2)
        if self.family in ("ghz", "noisy-ghz"):
            return (2,) * int(p["N"])
        return (self.matrix.shape[0],)

    def to_dict(self) -> dict:
        return {"family": self.family, "params": dict(self.params)}


def _in_range(name, value, lo, hi, lo_open=False):
    if value < lo or value > hi or (lo_open and value <= lo):
        raise InvalidParameter(f"{name}={value} outside its allowed range")


def make_state(spec: StateSpec) -> np.ndarray:
    f, p = spec.family, spec.params
    if f == "werner":
        w, d = float(p["w"]), int(p["d"])
        _in_range("w", w, 0.0, 1.0)
        if d < 2:
            raise InvalidParameter("d must be >= 2")
        eye = np.eye(d * d)
        rho = (d - 1 + w) / (d - 1) * eye / d**2 - w / (d - 1) * flip_operator(d) / d
    elif f == "isotropic":
        eta, d = float(p["eta"]), int(p["d"])
        _in_range("eta", eta, 0.0, 1.0)
        if d < 2:
            raise InvalidParameter("d must be >= 2")
        rho = (1 - eta) * np.eye(d * d) / d**2 + eta * max_entangled_projector(d)
    elif f == "max-entangled":
        d = int(p["d"])
        if d < 2:
            raise InvalidParameter("d must be >= 2")
        rho = max_entangled_projector(d)
    elif f == "ghz":
        n = int(p["N"])
        if n < 2:
            raise InvalidParameter("GHZ needs N >= 2")
        rho = _pure(_ghz_vector(n))
    elif f == "gen-ghz":
        om = float(p["omega"])
        _in_range("omega", om, 0.0, math.pi / 2, lo_open=True)
        rho = _pure(_ghz_vector(3, math.cos(om / 2), math.sin(om / 2)))
    elif f == "noisy-ghz":
        v, n = float(p["V"]), int(p["N"])
        _in_range("V", v, 0.0, 1.0)
        dim = 2**n
        rho = v * _pure(_ghz_vector(n)) + (1 - v) * np.eye(dim) / dim
    else:
        if spec.matrix is None:
            raise InvalidParameter("custom state needs a matrix")
        rho = as_matrix(spec.matrix)
    return check_state(rho, atol=TOL)


def max_entangled_projector(d: int) -> np.ndarray:
    psi = np.zeros(d * d, dtype=complex)
    psi[[i * d + i for i in range(d)]] = 1 / math.sqrt(d)
    return _pure(psi)


# -- assemblages --------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Assemblage:
    """Unnormalised conditional states keyed by (setting, outcome)."""

    members: Mapping[tuple[int, int], np.ndarray]

    def settings(self) -> list[int]:
        return sorted({mu for mu, _ in self.members})

    def total_trace(self, mu: int) -> float:
        return float(sum(np.trace(m).real for (s, _), m in self.members.items() if s == mu))


def assemblage_of(state, dims, untrusted, povms) -> Assemblage:
    """Conditional states left on the trusted parties after measuring ``untrusted``.

    Each POVM acts on the joint space of the untrusted parties (ascending order).
    """
    rho = as_matrix(state)
    dims = [int(x) for x in dims]
    untrusted = sorted(set(untrusted))
    trusted = [i for i in range(len(dims)) if i not in untrusted]
    if not untrusted or not trusted:
        raise DimensionMismatch("need at least one untrusted and one trusted party")
    if int(np.prod(dims)) != rho.shape[0]:
        raise DimensionMismatch(f"state dim {rho.shape[0]} does not match parties {dims}")
    members = {}
    for mu, povm in enumerate(povms):
        p = as_povm(povm)
        for a, e in enumerate(p.effects):
            lifted = embed(e, dims, untrusted)
            members[(mu, a)] = partial_trace(lifted @ rho, dims, trusted)
    return Assemblage(members)


__all__ = [
    "Observable",
    "Povm",
    "MubFamily",
    "StateSpec",
    "Assemblage",
    "pauli",
    "observable",
    "two_value_from_projectors",
    "projective",
    "depolarize",
    "mub_family",
    "make_state",
    "assemblage_of",
    "flip_operator",
    "max_entangled_projector",
    "kron",
]
