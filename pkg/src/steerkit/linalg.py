"""Dense complex linear algebra on small tensor-product Hilbert spaces.

Operators and density matrices are plain ``complex128`` numpy arrays of shape
``(dim, dim)``. Functions never modify their inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .errors import DimensionMismatch, InvalidState, NotHermitian

HERMITIAN_ATOL = 1e-12
STATE_ATOL = 1e-9


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    return m


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(np.asarray(a)).T


def hermiticity_residual(a: np.ndarray) -> float:
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a - np.conj(a).T)))


def is_hermitian(a, atol: float = HERMITIAN_ATOL) -> bool:
    return hermiticity_residual(as_matrix(a)) <= atol


def check_hermitian(a, atol: float = HERMITIAN_ATOL, what: str = "operator") -> np.ndarray:
    m = as_matrix(a)
    res = hermiticity_residual(m)
    if res > atol:
        raise NotHermitian(f"{what} is not Hermitian (residual {res:.3e} > {atol:g})")
    return m


def kron(*ops) -> np.ndarray:
    """Tensor product; ``kron(a, b)[i*db + k, j*db + l] == a[i, j] * b[k, l]``."""
    if not ops:
        return np.ones((1, 1), dtype=complex)
    return reduce(np.kron, (np.asarray(o, dtype=complex) for o in ops))


@dataclass(frozen=True)
class EigenResult:
    lambda_max: float
    lambda_min: float
    vec_max: np.ndarray


def jacobi_eigh(h, tol: float = 1e-14, max_sweeps: int = 100):
    """Cyclic Jacobi diagonalisation of a complex Hermitian matrix.

    Returns ``(eigenvalues, eigenvectors)`` with eigenvalues ascending and
    eigenvectors as columns.
    """
    a = check_hermitian(h).copy()
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = max(float(np.linalg.norm(a)), 1.0)
    for _ in range(max_sweeps):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r <= 1e-300:
                    continue
                phase = apq / r
                app, aqq = a[p, p].real, a[q, q].real
                tau = (aqq - app) / (2.0 * r)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.hypot(1.0, tau))
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                # phase fix on column q, then a real rotation in the (p, q) plane
                rot = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]], dtype=complex)
                idx = [p, q]
                a[:, idx] = a[:, idx] @ rot
                a[idx, :] = dagger(rot) @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                v[:, idx] = v[:, idx] @ rot
    w = np.real(np.diag(a))
    order = np.argsort(w)
    return w[order], v[:, order]


def eig_extremal(h, method: str = "lapack") -> EigenResult:
    """Largest and smallest eigenvalue of a Hermitian matrix, with the top eigenvector."""
    m = check_hermitian(h)
    if method == "jacobi":
        w, v = jacobi_eigh(m)
    elif method == "lapack":
        w, v = np.linalg.eigh(m)
    else:
        raise ValueError(f"unknown eigensolver {method!r}")
    return EigenResult(float(w[-1]), float(w[0]), v[:, -1].copy())


def extremal_eigvals(stack: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(lambda_max, lambda_min) for a stack of Hermitian matrices of shape (n, d, d)."""
    w = np.linalg.eigvalsh(stack)
    return w[..., -1], w[..., 0]


def _check_dims(dims, dim):
    dims = [int(x) for x in dims]
    if any(x < 1 for x in dims) or int(np.prod(dims)) != dim:
        raise DimensionMismatch(f"party dimensions {dims} do not multiply to {dim}")
    return dims


def partial_trace(w, dims, keep) -> np.ndarray:
    """Trace out every party not listed in ``keep``; kept parties stay in ascending order."""
    w = as_matrix(w)
    dims = _check_dims(dims, w.shape[0])
    n = len(dims)
    keep = sorted(set(int(k) for k in keep))
    if not keep or keep[0] < 0 or keep[-1] >= n:
        raise DimensionMismatch(f"keep={keep} invalid for {n} parties")
    t = w.reshape(dims + dims)
    traced = [i for i in range(n) if i not in keep]
    # einsum labels: row index i, column index n+i; traced parties share a label
    letters = [chr(ord("a") + i) for i in range(2 * n)]
    col = list(letters[n:])
    for i in traced:
        col[i] = letters[i]
    out = [letters[i] for i in keep] + [col[i] for i in keep]
    expr = "".join(letters[:n]) + "".join(col) + "->" + "".join(out)
    kd = int(np.prod([dims[i] for i in keep]))
    return np.einsum(expr, t).reshape(kd, kd)


def permute_parties(op, dims, order) -> np.ndarray:
    """Reorder tensor factors: the result's party ``k`` is the input's party ``order[k]``."""
    op = as_matrix(op)
    dims = _check_dims(dims, op.shape[0])
    n = len(dims)
    order = list(order)
    if sorted(order) != list(range(n)):
        raise DimensionMismatch(f"{order} is not a permutation of {n} parties")
    t = op.reshape(dims + dims)
    t = np.transpose(t, order + [n + i for i in order])
    return t.reshape(op.shape)


def embed(op, dims, parties) -> np.ndarray:
    """Lift an operator acting on ``parties`` (in the given order) to the full space."""
    op = as_matrix(op)
    dims = [int(x) for x in dims]
    parties = list(parties)
    sub = [dims[p] for p in parties]
    if int(np.prod(sub)) != op.shape[0]:
        raise DimensionMismatch(f"operator of dim {op.shape[0]} does not act on parties {parties}")
    rest = [i for i in range(len(dims)) if i not in parties]
    full = kron(op, np.eye(int(np.prod([dims[i] for i in rest])) if rest else 1))
    current = parties + rest
    # current[k] is the original index of factor k; invert to put factors back in place
    inverse = [current.index(i) for i in range(len(dims))]
    return permute_parties(full, [dims[i] for i in current], inverse)


def check_state(rho, atol: float = STATE_ATOL) -> np.ndarray:
    rho = as_matrix(rho)
    if hermiticity_residual(rho) > atol:
        raise InvalidState("density matrix is not Hermitian")
    tr = np.trace(rho)
    if abs(tr - 1.0) > atol:
        raise InvalidState(f"trace {tr.real:.12g} differs from 1")
    lmin = float(np.linalg.eigvalsh((rho + dagger(rho)) / 2)[0])
    if lmin < -atol:
        raise InvalidState(f"density matrix has negative eigenvalue {lmin:.3e}")
    return rho


def expectation(op, state) -> float:
    """``Tr(op @ state)`` for a Hermitian ``op`` and a valid density matrix."""
    op = check_hermitian(op)
    rho = check_state(state)
    if op.shape != rho.shape:
        raise DimensionMismatch(f"operator {op.shape} and state {rho.shape} differ")
    val = np.einsum("ij,ji->", op, rho)
    if abs(val.imag) > 1e-10:
        raise InvalidState(f"expectation has imaginary part {val.imag:.3e}")
    return float(val.real)
