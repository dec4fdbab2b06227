import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from scipy.stats import unitary_group

settings.register_profile(
    "steerkit", deadline=None, derandomize=True, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("steerkit")

CRITERIA = {
    "AC1": "CHSH threshold 2 and quantum value 2*sqrt2",
    "AC2": "constrained Pauli inequalities: sqrt2 for random U, normalized forms give 1",
    "AC3": "MUB threshold 1 + 1/sqrt(d) and pair eigenvalue 1 + |U_ab|",
    "AC4": "Haar constants, Werner/isotropic verdict flips, Monte-Carlo agreement",
    "AC5": "tilted CHSH one-way threshold on a 5x5 grid",
    "AC6": "Pironio threshold 0 and random POVM realizations",
    "AC7": "entanglement-witness thresholds (1 +- sqrt3)/4",
    "AC8": "GMST thresholds and GHZ expectations",
    "AC9": "compatible measurements attain the thresholds",
    "AC10": "weighted scan optimum, critical visibility, generalized GHZ sweep",
    "AC11": "N-qubit GHZ family via the symmetric path",
    "AC12": "global-steering nine-strategy table",
    "AC13": "property suites",
}

_results: dict[str, list[bool]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(code): test belongs to an acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        _results.setdefault(marker.args[0], []).append(rep.passed)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for code, text in CRITERIA.items():
        runs = _results.get(code)
        if runs is None:
            continue
        status = "PASS" if all(runs) else "FAIL"
        terminalreporter.write_line(f"[{status}] {code}: {text} ({sum(runs)}/{len(runs)} checks)")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_unitary(rng, d):
    return unitary_group.rvs(d, random_state=rng)


def random_hermitian(rng, d, scale=1.0):
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return scale * (a + a.conj().T) / 2


def random_state(rng, d):
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_povm(rng, d, k):
    """k-outcome POVM from random positive matrices normalized by S^(-1/2)."""
    gs = []
    for _ in range(k):
        g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        gs.append(g @ g.conj().T)
    w, v = np.linalg.eigh(sum(gs))
    s = v @ np.diag(w**-0.5) @ v.conj().T
    return [s @ g @ s for g in gs]


def random_lsi_spec(rng, max_settings=3):
    """Small one-way spec mixing two-value and multi-outcome settings."""
    from steerkit.model import LsiSpec, LsiTerm, PartyLayout, UntrustedSetting

    d = int(rng.integers(2, 4))
    settings, terms = [], []
    for k in range(int(rng.integers(1, max_settings + 1))):
        if rng.random() < 0.5:
            s = UntrustedSetting(f"s{k}")
            terms.append(LsiTerm(s.label, 0, rng.normal(), random_hermitian(rng, d)))
        else:
            s = UntrustedSetting(f"s{k}", "outcomes", int(rng.integers(2, 4)))
            for o in range(s.m):
                terms.append(LsiTerm(s.label, o, rng.normal(), random_hermitian(rng, d)))
        settings.append(s)
    return LsiSpec(PartyLayout((2, d)), (1,), tuple(settings), tuple(terms), rng.normal())
