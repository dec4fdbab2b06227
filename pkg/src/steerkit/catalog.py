"""Named steering inequalities with closed-form reference thresholds.

Every builder returns a :class:`CatalogEntry`.  ``reference_beta`` and
``reference_gamma`` are the analytic values the enumerated thresholds must
reproduce; ``direction_beta`` holds one-way references where they differ.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping

import numpy as np

from .errors import InvalidParameter
from .linalg import kron
from .model import Factor, FullOperatorSpec, PartyLayout, Term, correlator_spec
from .objects import (
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    Observable,
    Povm,
    StateSpec,
    depolarize,
    flip_operator,
    max_entangled_projector,
    mub_family,
    projective,
)

SQ2 = math.sqrt(2.0)
I2 = np.eye(2, dtype=complex)


@dataclass(frozen=True, eq=False)
class CatalogEntry:
    name: str
    params: Mapping[str, Any]
    spec: FullOperatorSpec | None
    threshold_mode: str = "two-way"
    reference_beta: float | None = None
    reference_gamma: float | None = None
    direction_beta: Mapping[str, float] = field(default_factory=dict)
    optimal_settings: tuple | None = None
    optimal_state: StateSpec | None = None
    expected_value: float | None = None
    attaining_settings: tuple | None = None
    attaining_value: float | None = None
    notes: str = ""
    extras: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        for v in (self.reference_beta, self.reference_gamma, self.expected_value):
            if v is not None and not math.isfinite(v):
                raise InvalidParameter(f"{self.name}: reference values must be finite")


def obs(matrix, label) -> Observable:
    return Observable(matrix, label)


def qubit_paulis(party: int, axes="xy") -> tuple:
    mats = {"x": SIGMA_X, "y": SIGMA_Y, "z": SIGMA_Z}
    return tuple(obs(mats[a], f"{a.upper()}{party}") for a in axes)


def compatible_pair(m1, m2, label="A") -> tuple:
    """Depolarized projective measurements at eta = 1/sqrt(2): jointly measurable for qubits."""
    eta = 1 / SQ2
    return tuple(
        depolarize(Povm(((I2 + m) / 2, (I2 - m) / 2), f"{label}{k + 1}"), eta) for k, m in enumerate((m1, m2))
    )


# -- bipartite -----------------------------------------------------------------


def chsh() -> CatalogEntry:
    alice = (obs(SIGMA_X, "A1"), obs(SIGMA_Z, "A2"))
    bob = (obs((SIGMA_X + SIGMA_Z) / SQ2, "B1"), obs((SIGMA_X - SIGMA_Z) / SQ2, "B2"))
    spec = correlator_spec((alice, bob), {(0, 0): 1, (0, 1): 1, (1, 0): 1, (1, 1): -1}, name="chsh")
    attaining = (compatible_pair(SIGMA_X, SIGMA_Z), bob)
    return CatalogEntry(
        "chsh", {}, spec, "two-way", reference_beta=2.0, reference_gamma=-2.0,
        direction_beta={"1->2": 2.0, "2->1": 2.0},
        optimal_settings=(alice, bob), optimal_state=StateSpec("max-entangled", {"d": 2}),
        expected_value=2 * SQ2, attaining_settings=attaining, attaining_value=2.0,
        notes="CHSH correlator sum; steering bound equals the local bound 2 in both directions",
    )


def _random_unitary(rng, d=2):
    from scipy.stats import unitary_group

    return unitary_group.rvs(d, random_state=rng)


def pauli_two_setting(theta: float | None = None, unitary=None) -> CatalogEntry:
    """``sin t A1 x sx + cos t A2 x sz`` with A1 = U sx U+, A2 = U sz U+.

    ``theta=None`` gives the unweighted sum, whose bound is sqrt(2).
    """
    u = np.eye(2) if unitary is None else np.asarray(unitary, dtype=complex)
    a1, a2 = u @ SIGMA_X @ u.conj().T, u @ SIGMA_Z @ u.conj().T
    alice = (obs(a1, "A1"), obs(a2, "A2"))
    bob = (obs(SIGMA_X, "X"), obs(SIGMA_Z, "Z"))
    if theta is None:
        w1, w2, ref = 1.0, 1.0, SQ2
    else:
        w1, w2, ref = math.sin(theta), math.cos(theta), 1.0
    spec = correlator_spec((alice, bob), {(0, 0): w1, (1, 1): w2}, name="pauli2")
    return CatalogEntry(
        "pauli2", {"theta": theta}, spec, "two-way", reference_beta=ref, reference_gamma=-ref,
        direction_beta={"1->2": ref, "2->1": ref},
        optimal_state=StateSpec("max-entangled", {"d": 2}),
        expected_value=w1 * float(np.trace(a1 @ SIGMA_X.conj()).real) / 2
        + w2 * float(np.trace(a2 @ SIGMA_Z.conj()).real) / 2,
        notes="two-setting Pauli inequality; Alice's observables are one rotated Pauli pair",
    )


def pauli_three_setting(theta: float | None = None, phi: float | None = None, unitary=None) -> CatalogEntry:
    u = np.eye(2) if unitary is None else np.asarray(unitary, dtype=complex)
    a = [u @ s @ u.conj().T for s in (SIGMA_X, SIGMA_Z, SIGMA_Y)]
    alice = tuple(obs(m, f"A{k + 1}") for k, m in enumerate(a))
    bob = (obs(SIGMA_X, "X"), obs(SIGMA_Z, "Z"), obs(SIGMA_Y, "Y"))
    if theta is None:
        w, ref = (1.0, 1.0, 1.0), math.sqrt(3.0)
    else:
        phi = 0.0 if phi is None else phi
        w = (math.sin(theta) * math.cos(phi), math.cos(theta), math.sin(theta) * math.sin(phi))
        ref = 1.0
    spec = correlator_spec((alice, bob), {(0, 0): w[0], (1, 1): w[1], (2, 2): w[2]}, name="pauli3")
    return CatalogEntry(
        "pauli3", {"theta": theta, "phi": phi}, spec, "two-way", reference_beta=ref, reference_gamma=-ref,
        direction_beta={"1->2": ref, "2->1": ref},
        optimal_state=StateSpec("max-entangled", {"d": 2}),
        notes="three-setting Pauli inequality; Alice's observables are one rotated Pauli triple",
        extras={"combined_criterion": combined_pauli_criterion},
    )


def combined_pauli_criterion(state, unitary=None) -> float:
    """sqrt(sum_j <U s_j U+ x s_j>^2); values above 1 certify two-way steering."""
    u = np.eye(2) if unitary is None else np.asarray(unitary, dtype=complex)
    rho = np.asarray(state, dtype=complex)
    tot = 0.0
    for s in (SIGMA_X, SIGMA_Y, SIGMA_Z):
        tot += float(np.trace(kron(u @ s @ u.conj().T, s) @ rho).real) ** 2
    return math.sqrt(tot)


def mub_lsi(d: int = 2, alice_bases=None, bob_bases=None) -> CatalogEntry:
    """``sum_mu sum_a P^a_mu x |phi^a_mu><phi^a_mu|`` with two of Bob's MUBs.

    By default Alice measures the complex-conjugate bases, which makes the
    maximally entangled state reach the algebraic maximum 2.
    """
    fam = mub_family(d)
    bb = bob_bases if bob_bases is not None else (fam.bases[0], fam.bases[1])
    ab = alice_bases if alice_bases is not None else tuple(np.conj(b) for b in bb)
    return _mub_entry("mub", {"d": d}, d, ab, bb, (1.0, 1.0))


def mub_omega_lsi(d: int = 2, omega: float = math.pi / 2, alice_bases=None, bob_bases=None) -> CatalogEntry:
    fam = mub_family(d)
    bb = bob_bases if bob_bases is not None else (fam.bases[0], fam.bases[1])
    ab = alice_bases if alice_bases is not None else tuple(np.conj(b) for b in bb)
    c = math.cos(omega)
    return _mub_entry("mub-omega", {"d": d, "omega": omega}, d, ab, bb, (1 + c, 1 - c))


def _max_overlap(b1, b2) -> float:
    return float(np.max(np.abs(np.asarray(b1).conj().T @ np.asarray(b2))))


def _mub_entry(name, params, d, alice_bases, bob_bases, weights) -> CatalogEntry:
    alice = tuple(projective(b, f"P{k + 1}") for k, b in enumerate(alice_bases))
    bob = tuple(projective(b, f"Q{k + 1}") for k, b in enumerate(bob_bases))
    terms = []
    for mu in range(2):
        for a in range(d):
            f = [None, None]
            f[0], f[1] = Factor(mu, a), Factor(mu, a)
            terms.append(Term(weights[mu], tuple(f)))
    spec = FullOperatorSpec(PartyLayout((d, d)), (alice, bob), tuple(terms), 0.0, name)
    w1, w2 = weights

    def closed(overlap):
        # largest eigenvalue of w1 P + w2 Q for rank-one P, Q with |<p|q>| = overlap
        return (w1 + w2) / 2 + math.sqrt(((w1 - w2) / 2) ** 2 + w1 * w2 * overlap**2)

    a_to_b = closed(_max_overlap(*bob_bases))
    b_to_a = closed(_max_overlap(*alice_bases))
    return CatalogEntry(
        name, params, spec, "two-way", reference_beta=max(a_to_b, b_to_a),
        direction_beta={"1->2": a_to_b, "2->1": b_to_a},
        optimal_state=StateSpec("max-entangled", {"d": d}), expected_value=float(w1 + w2),
        notes="two-basis projector sum; one-way bound set by the largest overlap of the opposite side's bases",
    )


# -- Haar average ----------------------------------------------------------------


def harmonic(d: int) -> float:
    return math.fsum(1.0 / k for k in range(1, d + 1))


def haar_operator(d: int, constraint: str = "plain") -> np.ndarray:
    """Exact Haar average of ``sum_a Pi^a x Phi^a``.

    ``plain``: Pi^a = U|a><a|U+ gives (I + V)/(d + 1).
    ``conjugate``: Pi^a = U*|a><a|U^T gives (I + d P+)/(d + 1).
    """
    eye = np.eye(d * d, dtype=complex)
    if constraint == "plain":
        return (eye + flip_operator(d)) / (d + 1)
    if constraint == "conjugate":
        return (eye + d * max_entangled_projector(d)) / (d + 1)
    raise InvalidParameter(f"unknown constraint {constraint!r}")


def werner_haar_value(w: float, d: int) -> float:
    return (1 - w) / d


def isotropic_haar_value(eta: float, d: int) -> float:
    return (1 + (d - 1) * eta) / d


def haar_lsi(d: int = 2) -> CatalogEntry:
    if int(d) < 2:
        raise InvalidParameter("d must be >= 2")
    d = int(d)
    return CatalogEntry(
        "haar", {"d": d}, None, "analytic",
        reference_beta=harmonic(d) / d, reference_gamma=1.0 / d**2,
        notes="continuous-setting inequality; bounds are analytic constants, not enumerated",
        extras={
            "operator": lambda constraint="plain": haar_operator(d, constraint),
            "werner": lambda w: werner_haar_value(w, d),
            "isotropic": lambda eta: isotropic_haar_value(eta, d),
        },
    )


# -- accompanied inequalities --------------------------------------------------


def tilted_chsh(delta: float = 0.0, alpha: float = 1.0, alice=None) -> CatalogEntry:
    """``delta A1 x I + alpha A1 x (B1 + B2) + A2 x (B1 - B2)`` with B1 +- B2 = sqrt2 (sz, sx)."""
    if delta < 0 or alpha < 1:
        raise InvalidParameter("tilted CHSH needs delta >= 0 and alpha >= 1")
    a = alice or (obs(SIGMA_Z, "A1"), obs(SIGMA_X, "A2"))
    bob = (obs((SIGMA_Z + SIGMA_X) / SQ2, "B1"), obs((SIGMA_Z - SIGMA_X) / SQ2, "B2"))
    table = {(0, None): delta, (0, 0): alpha, (0, 1): alpha, (1, 0): 1.0, (1, 1): -1.0}
    spec = correlator_spec((a, bob), table, name="tilted")
    a_to_b = delta + math.sqrt(2 * (alpha**2 + 1))
    b_to_a = delta + 2 * alpha
    return CatalogEntry(
        "tilted", {"delta": delta, "alpha": alpha}, spec, "two-way",
        reference_beta=max(a_to_b, b_to_a), direction_beta={"1->2": a_to_b, "2->1": b_to_a},
        notes="tilted CHSH; Alice-to-Bob bound drops below the local bound once alpha > 1",
        extras={"beta_nl": delta + 2 * alpha},
    )


def _pironio_measurements(d):
    bob_m0 = projective(np.eye(d), "M0")
    f = np.ones(d, dtype=complex) / math.sqrt(d)
    p = np.outer(f, f.conj())
    bob_m1 = Povm((p, np.eye(d) - p), "M1")
    fam = np.fft.fft(np.eye(d)) / math.sqrt(d)
    alice = []
    for mu in range(d):
        v = fam[:, (mu + 1) % d] + (0.3 + 0.2j) * fam[:, mu]
        v = v / np.linalg.norm(v)
        q = np.outer(v, v.conj())
        alice.append(Povm((q, np.eye(d) - q), f"Pi{mu}"))
    return tuple(alice), (bob_m0, bob_m1)


def pironio(d: int = 3, variant: str = "general", alice=None, bob=None) -> CatalogEntry:
    """Pironio-type operator; Alice has d two-outcome settings, Bob a d-outcome and a two-outcome one."""
    d = int(d)
    if d < 3:
        raise InvalidParameter("pironio needs d >= 3")
    da, db = _pironio_measurements(d)
    alice = tuple(alice) if alice is not None else da
    bob = tuple(bob) if bob is not None else db

    def t(c, x, a, y, b):
        return Term(c, (Factor(x, a), Factor(y, b)))

    if variant == "general":
        terms = [t(1, 0, 0, 1, 0), t(-1, 0, 0, 0, 0)]
        for i in range(1, d):
            terms += [t(-1, i, 0, 0, i), t(-1, i, 1, 1, 0)]
    elif variant == "explicit":
        if d != 3:
            raise InvalidParameter("the explicit variant exists for d = 3 only")
        terms = [t(-1, 0, 0, 0, 1), t(-1, 0, 1, 1, 0), t(-1, 1, 0, 0, 0), t(-1, 1, 1, 1, 0),
                 t(1, 2, 0, 1, 0), t(-1, 2, 0, 0, 2)]
    else:
        raise InvalidParameter(f"unknown pironio variant {variant!r}")
    spec = FullOperatorSpec(PartyLayout((d, d)), (alice, bob), tuple(terms), 0.0, "pironio")
    return CatalogEntry(
        "pironio", {"d": d, "variant": variant}, spec, "two-way", reference_beta=0.0,
        direction_beta={"1->2": 0.0, "2->1": 0.0},
        notes="every strategy operator is minus a sum of effects, so the bound is 0 once one effect is a rank-one projector",
    )


def witness_lsi() -> CatalogEntry:
    paulis = (obs(SIGMA_X, "X"), obs(SIGMA_Y, "Y"), obs(SIGMA_Z, "Z"))
    table = {(0, 0): -0.25, (1, 1): 0.25, (2, 2): -0.25}
    spec = correlator_spec((paulis, paulis), table, constant=0.25, name="witness")
    r3 = math.sqrt(3.0)
    return CatalogEntry(
        "witness", {}, spec, "two-way", reference_beta=(1 + r3) / 4, reference_gamma=(1 - r3) / 4,
        optimal_state=StateSpec("max-entangled", {"d": 2}), expected_value=-0.5,
        notes="two-qubit entanglement witness I/2 - |phi+><phi+| read as a steering inequality",
    )


# -- tripartite --------------------------------------------------------------------


def _mermin_table(weight=1.0):
    # X = 0, Y = 1
    return {(0, 0, 0): weight, (0, 1, 1): -weight, (1, 0, 1): -weight, (1, 1, 0): -weight}


def svetlichny() -> CatalogEntry:
    a = (obs(SIGMA_X, "A1"), obs(SIGMA_Y, "A2"))
    b = (obs((SIGMA_X - SIGMA_Y) / SQ2, "B1"), obs((SIGMA_X + SIGMA_Y) / SQ2, "B2"))
    c = (obs(SIGMA_X, "C1"), obs(SIGMA_Y, "C2"))
    signs = {(0, 0, 0): 1, (0, 0, 1): 1, (1, 0, 0): 1, (1, 0, 1): -1,
             (0, 1, 0): 1, (0, 1, 1): -1, (1, 1, 0): -1, (1, 1, 1): -1}
    spec = correlator_spec((a, b, c), signs, name="svetlichny")
    return CatalogEntry(
        "svetlichny", {}, spec, "gmst", reference_beta=4.0,
        optimal_settings=(a, b, c), optimal_state=StateSpec("ghz", {"N": 3}), expected_value=4 * SQ2,
        attaining_settings=(compatible_pair(SIGMA_X, SIGMA_Y), b, c), attaining_value=4.0,
        notes="Svetlichny operator; genuine multipartite steering bound 4 equals its nonlocal bound",
    )


def mermin() -> CatalogEntry:
    parties = tuple(qubit_paulis(p, "xy") for p in (1, 2, 3))
    spec = correlator_spec(parties, _mermin_table(), name="mermin")
    return CatalogEntry(
        "mermin", {}, spec, "gmst", reference_beta=2 * SQ2,
        optimal_settings=parties, optimal_state=StateSpec("ghz", {"N": 3}), expected_value=4.0,
        attaining_settings=(compatible_pair(SIGMA_X, SIGMA_Y),) + parties[1:], attaining_value=2 * SQ2,
        notes="Mermin operator; steering bound 2*sqrt2 sits above the local bound 2",
        extras={"beta_nl": 2.0},
    )


def _zz_pairs(weight):
    # settings X = 0, Y = 1, Z = 2
    return {(2, None, 2): weight, (None, 2, 2): weight, (2, 2, None): weight}


def ghz_type_weighted(alpha: float = 1.0) -> CatalogEntry:
    parties = tuple(qubit_paulis(p, "xyz") for p in (1, 2, 3))
    table = dict(_mermin_table())
    table.update(_zz_pairs(alpha))
    spec = correlator_spec(parties, table, name="ghz-weighted")
    beta = abs(alpha) + 2 * math.sqrt(alpha**2 + 2)
    return CatalogEntry(
        "ghz-weighted", {"alpha": alpha}, spec, "gmst", reference_beta=beta,
        optimal_settings=parties, optimal_state=StateSpec("ghz", {"N": 3}), expected_value=4 + 3 * alpha,
        notes="Mermin part plus alpha times the pairwise ZZ correlators",
    )


def ghz_type() -> CatalogEntry:
    e = ghz_type_weighted(1.0)
    return CatalogEntry(
        "ghz", {}, e.spec, "gmst", reference_beta=1 + 2 * math.sqrt(3.0),
        optimal_settings=e.optimal_settings, optimal_state=e.optimal_state, expected_value=7.0,
        notes="Mermin operator plus the three pairwise ZZ correlators; GHZ state reaches 7",
    )


def ghz_type_gamma_delta(gamma: float | None = None, delta: float | None = None,
                         omega: float | None = None) -> CatalogEntry:
    """``gamma (Z-odd terms) + (ZZ pairs) + delta (Mermin)``; ``omega`` sets gamma=cos, delta=sin."""
    if omega is not None:
        gamma, delta = math.cos(omega), math.sin(omega)
    gamma = 1.0 if gamma is None else float(gamma)
    delta = 0.0 if delta is None else float(delta)
    if gamma < 0:
        raise InvalidParameter("gamma must be >= 0")
    parties = tuple(qubit_paulis(p, "xyz") for p in (1, 2, 3))
    table = {(None, None, 2): gamma, (2, None, None): gamma, (None, 2, None): gamma, (2, 2, 2): gamma}
    table.update(_zz_pairs(1.0))
    # Mermin part in the order X1X2X3 - Y1Y2X3 - X1Y2Y3 - Y1X2Y3
    table.update({(0, 0, 0): delta, (1, 1, 0): -delta, (0, 1, 1): -delta, (1, 0, 1): -delta})
    spec = correlator_spec(parties, table, name="ghz-gd")
    beta = 1 + 2 * gamma + 2 * math.sqrt((1 + gamma) ** 2 + 2 * delta**2)
    params = {"gamma": gamma, "delta": delta}
    state = None
    expected = None
    if omega is not None:
        params["omega"] = omega
        state = StateSpec("gen-ghz", {"omega": omega})
        expected = 7.0
    return CatalogEntry(
        "ghz-gd", params, spec, "gmst", reference_beta=beta,
        optimal_settings=parties, optimal_state=state, expected_value=expected,
        notes="gamma-weighted Z terms, unit ZZ pairs and delta-weighted Mermin terms",
    )


# -- N-party GHZ family ---------------------------------------------------------------


def nghz_blocks(m: int) -> tuple[np.ndarray, np.ndarray]:
    """(A^m_1, A^m_2) built by the two-term recursion from (sx, -sy)."""
    a1, a2 = SIGMA_X.copy(), -SIGMA_Y
    for _ in range(m - 1):
        a1, a2 = (kron(a1, SIGMA_X) + kron(a2, SIGMA_Y)) / 2, (-kron(a1, SIGMA_Y) + kron(a2, SIGMA_X)) / 2
    return a1, a2


def nghz_trusted_blocks(k: int) -> tuple[np.ndarray, np.ndarray]:
    a1, a2 = nghz_blocks(k)
    return a1 / 2, -a2 / 2


def nghz_operator(n: int) -> np.ndarray:
    """|0..0><1..1| + |1..1><0..0| on n qubits."""
    dim = 2**n
    h = np.zeros((dim, dim), dtype=complex)
    h[0, -1] = h[-1, 0] = 1.0
    return h


def _xy_expansion(h: np.ndarray, n: int) -> dict:
    table = {}
    mats = (SIGMA_X, SIGMA_Y)
    for key in itertools.product((0, 1), repeat=n):
        c = np.trace(kron(*(mats[k] for k in key)) @ h) / 2**n
        if abs(c) > 1e-14:
            table[key] = float(c.real)
    return table


def nghz(n: int = 3) -> CatalogEntry:
    n = int(n)
    if not 2 <= n <= 6:
        raise InvalidParameter("nghz supports 2 <= n <= 6")
    h, _ = nghz_blocks(n)
    parties = tuple(qubit_paulis(p, "xy") for p in range(1, n + 1))
    spec = correlator_spec(parties, _xy_expansion(h, n), name="nghz")
    return CatalogEntry(
        "nghz", {"n": n}, spec, "symmetric", reference_beta=SQ2 / 2,
        optimal_settings=parties, optimal_state=StateSpec("ghz", {"N": n}), expected_value=1.0,
        notes="coherence term of the n-qubit GHZ projector expanded over X/Y strings",
    )


def _three_outcome(op, label):
    w, v = np.linalg.eigh(op)
    plus = np.outer(v[:, -1], v[:, -1].conj())
    minus = np.outer(v[:, 0], v[:, 0].conj())
    if abs(w[-1] - 1) > 1e-9 or abs(w[0] + 1) > 1e-9:
        raise InvalidParameter(f"{label}: expected extreme eigenvalues +1 and -1")
    return Povm((np.eye(op.shape[0]) - plus - minus, plus, minus), label)


def nghz_global(n: int = 3, m: int = 2) -> CatalogEntry:
    """Two-party form of the n-qubit GHZ coherence with m qubits grouped on the untrusted side.

    Each block operator A^m_mu becomes a three-outcome measurement (rest, +1, -1).
    """
    n, m = int(n), int(m)
    if not (2 <= m <= n - 1):
        raise InvalidParameter("need 2 <= m <= n - 1")
    a = nghz_blocks(m)
    f = nghz_trusted_blocks(n - m)
    alice = tuple(_three_outcome(a[mu], f"G{mu + 1}") for mu in range(2))
    bob = tuple(_three_outcome(2 * f[mu], f"F{mu + 1}") for mu in range(2))
    terms = []
    for mu in range(2):
        for (ka, sa), (kb, sb) in itertools.product(((1, 1), (2, -1)), repeat=2):
            terms.append(Term(0.5 * sa * sb, (Factor(mu, ka), Factor(mu, kb))))
    spec = FullOperatorSpec(PartyLayout((2**m, 2 ** (n - m))), (alice, bob), tuple(terms), 0.0, "nghz-global")
    return CatalogEntry(
        "nghz-global", {"n": n, "m": m}, spec, "two-way", reference_beta=SQ2 / 2,
        direction_beta={"1->2": SQ2 / 2, "2->1": SQ2 / 2},
        optimal_state=StateSpec("ghz", {"N": n}), expected_value=1.0,
        notes="untrusted qubits measured jointly; nine deterministic strategies per direction",
        extras={"table": {"half": 4, "sqrt2_half": 4, "zero": 1}},
    )


REGISTRY: dict[str, tuple[Callable[..., CatalogEntry], dict]] = {
    "chsh": (chsh, {}),
    "pauli2": (pauli_two_setting, {"theta": None}),
    "pauli3": (pauli_three_setting, {"theta": None, "phi": None}),
    "mub": (mub_lsi, {"d": 2}),
    "mub-omega": (mub_omega_lsi, {"d": 2, "omega": math.pi / 3}),
    "haar": (haar_lsi, {"d": 2}),
    "tilted": (tilted_chsh, {"delta": 0.0, "alpha": 1.0}),
    "pironio": (pironio, {"d": 3, "variant": "general"}),
    "witness": (witness_lsi, {}),
    "svetlichny": (svetlichny, {}),
    "mermin": (mermin, {}),
    "ghz": (ghz_type, {}),
    "ghz-weighted": (ghz_type_weighted, {"alpha": 1.0}),
    "ghz-gd": (ghz_type_gamma_delta, {"gamma": None, "delta": None, "omega": None}),
    "nghz": (nghz, {"n": 3}),
    "nghz-global": (nghz_global, {"n": 3, "m": 2}),
}

INT_PARAMS = {"d", "n", "m"}


def build(name: str, **params) -> CatalogEntry:
    """Build a registry entry, ignoring parameters the builder does not take."""
    if name not in REGISTRY:
        raise InvalidParameter(f"unknown catalog entry {name!r}; known: {', '.join(REGISTRY)}")
    fn, defaults = REGISTRY[name]
    kwargs = {}
    for k in defaults:
        if k in params and params[k] is not None:
            if isinstance(defaults[k], str):
                kwargs[k] = str(params[k])
            elif k in INT_PARAMS:
                kwargs[k] = int(params[k])
            else:
                kwargs[k] = float(params[k])
    return fn(**kwargs)


def names() -> list[str]:
    return list(REGISTRY)
