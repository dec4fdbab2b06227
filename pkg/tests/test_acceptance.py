"""Acceptance criteria AC1-AC13, each at its stated tolerance.

The conftest hook prints one [PASS]/[FAIL] line per criterion at the end of the run.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_hermitian, random_lsi_spec, random_povm, random_state, random_unitary
from steerkit import catalog
from steerkit.engine import certify, h_of_strategy, one_way_threshold, strategy_from_index, threshold
from steerkit.linalg import eig_extremal, expectation, jacobi_eigh
from steerkit.model import LsiSpec, LsiTerm, realize_full_operator, restrict_to_direction
from steerkit.objects import Povm, StateSpec, make_state
from steerkit.scan import critical_visibility, haar_expectation_mc, haar_unitaries, scan_ratio

SQ2 = math.sqrt(2.0)
TOL = 1e-9


def ac(code):
    return pytest.mark.acceptance(code)


# -- AC1 ----------------------------------------------------------------------


@ac("AC1")
def test_chsh_threshold_and_quantum_value():
    e = catalog.chsh()
    rep = threshold(e.spec)
    assert abs(rep.beta_overall - 2) < TOL
    for k in ("1->2", "2->1"):
        assert abs(rep.per_direction[k].beta - 2) < TOL
    v = certify(e.spec, StateSpec("max-entangled", {"d": 2}), threshold_report=rep)
    assert abs(v.expectation - 2 * SQ2) < TOL and v.violated


# -- AC2 ----------------------------------------------------------------------


@ac("AC2")
def test_two_setting_pauli_for_random_unitaries():
    rng = np.random.default_rng(2)
    for _ in range(50):
        e = catalog.pauli_two_setting(unitary=random_unitary(rng, 2))
        rep = threshold(e.spec)
        assert abs(rep.per_direction["2->1"].beta - SQ2) < TOL
        assert abs(rep.per_direction["1->2"].beta - SQ2) < TOL


@ac("AC2")
def test_normalized_pauli_forms_have_unit_threshold():
    rng = np.random.default_rng(22)
    for theta in np.linspace(0.1, math.pi / 2 - 0.1, 5):
        u = random_unitary(rng, 2)
        e2 = catalog.pauli_two_setting(theta, unitary=u)
        assert abs(threshold(e2.spec).per_direction["1->2"].beta - 1) < TOL
        for phi in np.linspace(0.1, math.pi / 2 - 0.1, 3):
            e3 = catalog.pauli_three_setting(theta, phi, unitary=u)
            assert abs(threshold(e3.spec).per_direction["1->2"].beta - 1) < TOL
    assert abs(threshold(catalog.pauli_three_setting().spec).beta_overall - math.sqrt(3)) < TOL


# -- AC3 ----------------------------------------------------------------------


@ac("AC3")
@pytest.mark.parametrize("d", [2, 3, 5])
def test_mub_threshold(d):
    e = catalog.mub_lsi(d)
    t = threshold(e.spec).per_direction["1->2"]
    assert t.n_strategies == d * d
    assert abs(t.beta - (1 + 1 / math.sqrt(d))) < TOL


@ac("AC3")
@pytest.mark.parametrize("d", [2, 3, 4])
def test_projector_pair_top_eigenvalue(d):
    rng = np.random.default_rng(30 + d)
    for _ in range(5):
        u = random_unitary(rng, d)
        for a in range(d):
            for b in range(d):
                h = np.outer(np.eye(d)[a], np.eye(d)[a]) + np.outer(u[:, b], u[:, b].conj())
                lam = eig_extremal(h).lambda_max
                assert abs(lam - (1 + abs(u[a, b]))) < TOL


# -- AC4 ----------------------------------------------------------------------


def _simplex_extremes(d, samples, seed):
    """MC oracle for E max_a |<0|U|a>|^2 and E min_a |<0|U|a>|^2 over Haar U."""
    us = haar_unitaries(d, samples, np.random.default_rng(seed))
    p = np.abs(us[:, 0, :]) ** 2
    return p.max(axis=1), p.min(axis=1)


@ac("AC4")
@pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
def test_haar_constants(d):
    e = catalog.haar_lsi(d)
    assert abs(e.reference_beta - catalog.harmonic(d) / d) < 1e-15
    assert abs(e.reference_gamma - 1 / d**2) < 1e-15
    # independent oracle: the best deterministic response picks the largest (smallest) overlap
    mx, mn = _simplex_extremes(d, 100_000, 40 + d)
    se_max, se_min = mx.std(ddof=1) / math.sqrt(len(mx)), mn.std(ddof=1) / math.sqrt(len(mn))
    assert abs(mx.mean() - e.reference_beta) < 4 * se_max
    assert abs(mn.mean() - e.reference_gamma) < 4 * se_min


def _bisect(pred, lo, hi, tol=1e-9):
    """Boundary of a monotone predicate: pred(lo) != pred(hi)."""
    flo = pred(lo)
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if pred(mid) == flo:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def _haar_violated(d, constraint, state):
    e = catalog.haar_lsi(d)
    val = expectation(catalog.haar_operator(d, constraint), make_state(state))
    return val - e.reference_beta > 1e-12 or e.reference_gamma - val > 1e-12


@ac("AC4")
@pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
def test_werner_verdict_flip(d):
    w_star = _bisect(lambda w: _haar_violated(d, "plain", StateSpec("werner", {"w": w, "d": d})), 0.0, 1.0)
    assert abs((1 - w_star) - 1 / d) < 1e-6


@ac("AC4")
@pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
def test_isotropic_verdict_flip(d):
    eta = _bisect(lambda x: _haar_violated(d, "conjugate", StateSpec("isotropic", {"eta": x, "d": d})), 0.0, 1.0)
    assert abs((1 + (d - 1) * eta) - catalog.harmonic(d)) < 1e-6


@ac("AC4")
@pytest.mark.parametrize("d,constraint", [(2, "plain"), (2, "conjugate"), (3, "plain"), (3, "conjugate")])
def test_haar_monte_carlo_agrees(d, constraint):
    rho = random_state(np.random.default_rng(50 + d), d * d)
    est = haar_expectation_mc(rho, d, constraint, samples=100_000, seed=d)
    exact = expectation(catalog.haar_operator(d, constraint), rho)
    assert abs(est.mean - exact) <= 3 * est.std_error
    # Werner (plain) and isotropic (conjugate) give the same value for every U
    inv = StateSpec("werner", {"w": 0.4, "d": d}) if constraint == "plain" else StateSpec("isotropic", {"eta": 0.4, "d": d})
    est = haar_expectation_mc(inv, d, constraint, samples=100_000, seed=d)
    exact = expectation(catalog.haar_operator(d, constraint), make_state(inv))
    assert abs(est.mean - exact) <= max(3 * est.std_error, 1e-12)


# -- AC5 ----------------------------------------------------------------------


@ac("AC5")
def test_tilted_chsh_grid():
    for delta in np.linspace(0.0, 2.0, 5):
        for alpha in np.linspace(1.0, 3.0, 5):
            rep = threshold(catalog.tilted_chsh(delta, alpha).spec)
            assert abs(rep.per_direction["1->2"].beta - (delta + math.sqrt(2 * (alpha**2 + 1)))) < TOL
            assert abs(rep.per_direction["2->1"].beta - (delta + 2 * alpha)) < TOL
            if alpha == 1.0:
                e = catalog.tilted_chsh(delta, alpha)
                assert abs(rep.per_direction["1->2"].beta - e.extras["beta_nl"]) < TOL


# -- AC6 ----------------------------------------------------------------------


@ac("AC6")
@pytest.mark.parametrize("d,variant", [(3, "general"), (4, "general"), (3, "explicit")])
def test_pironio_threshold_zero(d, variant):
    rep = threshold(catalog.pironio(d, variant).spec)
    assert abs(rep.beta_overall) < TOL


@ac("AC6")
def test_pironio_random_povms():
    rng = np.random.default_rng(6)
    for k in range(100):
        d = 3 + k % 2
        alice = tuple(Povm(tuple(random_povm(rng, d, 2)), f"Pi{i}") for i in range(d))
        f = random_unitary(rng, d)[:, 0]
        p = np.outer(f, f.conj())
        bob = (Povm(tuple(random_povm(rng, d, d)), "M0"), Povm((p, np.eye(d) - p), "M1"))
        rep = threshold(catalog.pironio(d, alice=alice, bob=bob).spec)
        assert rep.beta_overall <= 1e-9


# -- AC7 ----------------------------------------------------------------------


@ac("AC7")
def test_witness_thresholds():
    rep = threshold(catalog.witness_lsi().spec)
    assert abs(rep.gamma_overall - (1 - math.sqrt(3)) / 4) < TOL
    assert abs(rep.beta_overall - (1 + math.sqrt(3)) / 4) < TOL


# -- AC8 ----------------------------------------------------------------------

ALL_TRIPARTITE = {"1->2,3", "2->1,3", "3->1,2", "1,2->3", "1,3->2", "2,3->1"}


@ac("AC8")
@pytest.mark.parametrize("name,beta,value", [("svetlichny", 4.0, 4 * SQ2), ("mermin", 2 * SQ2, 4.0),
                                             ("ghz", 1 + 2 * math.sqrt(3), 7.0)])
def test_gmst_thresholds(name, beta, value):
    e = catalog.build(name)
    rep = threshold(e.spec, "gmst")
    assert set(rep.per_direction) == ALL_TRIPARTITE
    assert abs(rep.beta_overall - beta) < TOL
    v = certify(e.spec, StateSpec("ghz", {"N": 3}), threshold_report=rep)
    assert abs(v.expectation - value) < TOL and v.violated


# -- AC9 ----------------------------------------------------------------------


@ac("AC9")
@pytest.mark.parametrize("name,value", [("chsh", 2.0), ("svetlichny", 4.0), ("mermin", 2 * SQ2)])
def test_compatible_measurements_attain_threshold(name, value):
    e = catalog.build(name)
    spec = e.spec.with_settings(e.attaining_settings)
    val = expectation(realize_full_operator(spec), make_state(e.optimal_state))
    assert abs(val - value) < TOL
    assert abs(val - threshold(e.spec, e.threshold_mode).beta_overall) < TOL


# -- AC10 ---------------------------------------------------------------------


@ac("AC10")
def test_weighted_scan_optimum_and_critical_visibility():
    res = scan_ratio(catalog.ghz_type_weighted, StateSpec("ghz", {"N": 3}), 0.0, 2.0, 101)
    assert abs(res.refined_best.param - 0.709) <= 0.002
    vc, _ = critical_visibility(catalog.ghz_type_weighted, 0.0, 2.0, 101)
    assert abs(vc - 0.632) <= 0.002


@ac("AC10")
def test_generalized_ghz_sweep():
    grid = np.arange(1, int(math.pi / 2 / 1e-3) + 1) * 1e-3
    grid = np.append(grid, math.pi / 2)
    betas = []
    for om in grid:
        e = catalog.ghz_type_gamma_delta(omega=float(om))
        rep = threshold(e.spec, "gmst")
        v = certify(e.spec, StateSpec("gen-ghz", {"omega": float(om)}), threshold_report=rep)
        assert abs(v.expectation - 7) < TOL
        assert v.violated, om
        betas.append(rep.beta_overall)
    beta0 = threshold(catalog.ghz_type_gamma_delta(omega=0.0).spec, "gmst").beta_overall
    assert abs(beta0 - 7) < TOL
    assert max(betas) < beta0 - 1e-7


# -- AC11 ---------------------------------------------------------------------


@ac("AC11")
@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_nghz_symmetric_threshold(n):
    rep = threshold(catalog.nghz(n).spec, "symmetric")
    assert len(rep.per_direction) == n - 1
    assert abs(rep.beta_overall - SQ2 / 2) < TOL


@ac("AC11")
def test_mermin_is_four_times_block():
    b_mer = realize_full_operator(catalog.mermin().spec)
    a31, _ = catalog.nghz_blocks(3)
    assert np.max(np.abs(b_mer - 4 * a31)) < 1e-12


# -- AC12 ---------------------------------------------------------------------


@ac("AC12")
@pytest.mark.parametrize("n,m", [(3, 2), (4, 2), (4, 3)])
def test_global_steering_table(n, m):
    e = catalog.nghz_global(n, m)
    spec = restrict_to_direction(e.spec, (0,))
    assert spec.n_strategies == 9
    vals = sorted(eig_extremal(h_of_strategy(spec, strategy_from_index(spec, i))).lambda_max for i in range(9))
    assert abs(vals[0]) < TOL
    assert all(abs(v - 0.5) < TOL for v in vals[1:5])
    assert all(abs(v - SQ2 / 2) < TOL for v in vals[5:])
    assert abs(threshold(e.spec).beta_overall - SQ2 / 2) < TOL


# -- AC13 ---------------------------------------------------------------------


@ac("AC13")
@settings(max_examples=50)
@given(st.integers(0, 2**32 - 1))
def test_probabilistic_strategies_never_beat_deterministic(seed):
    rng = np.random.default_rng(seed)
    spec = random_lsi_spec(rng)
    t = one_way_threshold(spec)
    n = 10_000
    h = np.broadcast_to(spec.base_operator(), (n,) + spec.base_operator().shape).copy()
    for ops in spec.option_operators():
        p = rng.dirichlet(np.ones(ops.shape[0]) * 0.3, size=n)
        h += np.einsum("sk,kij->sij", p, ops)
    w = np.linalg.eigvalsh(h)
    assert w[:, -1].max() <= t.beta + 1e-9
    assert w[:, 0].min() >= t.gamma - 1e-9


@ac("AC13")
@settings(max_examples=50)
@given(st.integers(0, 2**32 - 1))
def test_sign_flip_symmetry(seed):
    spec = random_lsi_spec(np.random.default_rng(seed))
    neg = LsiSpec(spec.layout, spec.trusted, spec.settings,
                  tuple(LsiTerm(t.setting, t.outcome, -t.weight, t.op) for t in spec.terms), -spec.constant_term)
    a, b = one_way_threshold(spec), one_way_threshold(neg)
    assert abs(b.gamma + a.beta) < 1e-9 and abs(b.beta + a.gamma) < 1e-9


@ac("AC13")
@settings(max_examples=50)
@given(st.integers(0, 2**32 - 1))
def test_unitary_conjugation_invariance(seed):
    rng = np.random.default_rng(seed)
    spec = random_lsi_spec(rng)
    u = random_unitary(rng, spec.trusted_dim)
    rot = LsiSpec(spec.layout, spec.trusted, spec.settings,
                  tuple(LsiTerm(t.setting, t.outcome, t.weight, u @ t.op @ u.conj().T) for t in spec.terms),
                  spec.constant_term)
    a, b = one_way_threshold(spec), one_way_threshold(rot)
    assert abs(a.beta - b.beta) < 1e-9 and abs(a.gamma - b.gamma) < 1e-9


@ac("AC13")
@pytest.mark.parametrize("name", ["chsh", "svetlichny", "mermin", "ghz", "witness"])
def test_catalog_thresholds_invariant_under_local_unitaries(name):
    e = catalog.build(name)
    rng = np.random.default_rng(len(name))
    us = [random_unitary(rng, d) for d in e.spec.dims]
    rotated = tuple(tuple(s.conjugated(u) for s in ps) for ps, u in zip(e.spec.settings, us))
    a, b = threshold(e.spec, e.threshold_mode), threshold(e.spec.with_settings(rotated), e.threshold_mode)
    assert abs(a.beta_overall - b.beta_overall) < 1e-9
    assert abs(a.gamma_overall - b.gamma_overall) < 1e-9


@ac("AC13")
@settings(max_examples=100)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_eigensolver_oracle_equivalence(d, seed):
    h = random_hermitian(np.random.default_rng(seed), d, scale=3.0)
    w, _ = jacobi_eigh(h)
    ref = np.linalg.eigvalsh(h)
    assert np.max(np.abs(w - ref)) < 1e-10
