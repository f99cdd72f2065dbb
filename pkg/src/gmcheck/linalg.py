"""Dense symmetric eigensolver (cyclic Jacobi) and invariant-subspace normal forms."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import GapError, NormalFormError, NumericError

EIG_TOL = 1e-11
OFF_TOL = 1e-13
MAX_SWEEPS = 64
GAP_TOL = 1e-8
COND_TOL = 1e10
MAX_DIM = 64


def sym_matrix(a) -> np.ndarray:
    """Validated float64 copy of a square, exactly symmetric matrix."""
    h = np.array(a, dtype=np.float64)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {h.shape}")
    if h.shape[0] > MAX_DIM:
        raise ValueError(f"dimension {h.shape[0]} exceeds {MAX_DIM}")
    if not np.array_equal(h, h.T):
        raise ValueError("matrix is not symmetric")
    return h


@njit(cache=True)
def _jacobi(h, off_target, max_sweeps):
    n = h.shape[0]
    a = h.copy()
    v = np.eye(n)
    sweeps = 0
    while True:
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                off += a[p, q] * a[p, q]
        off = math.sqrt(2.0 * off)
        if off <= off_target or sweeps >= max_sweeps:
            break
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if theta >= 0.0:
                    t = 1.0 / (theta + math.sqrt(1.0 + theta * theta))
                else:
                    t = -1.0 / (-theta + math.sqrt(1.0 + theta * theta))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                for k in range(n):
                    if k != p and k != q:
                        akp = a[k, p]
                        akq = a[k, q]
                        a[k, p] = c * akp - s * akq
                        a[p, k] = a[k, p]
                        a[k, q] = s * akp + c * akq
                        a[q, k] = a[k, q]
                a[p, p] -= t * apq
                a[q, q] += t * apq
                a[p, q] = 0.0
                a[q, p] = 0.0
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = c * vkp - s * vkq
                    v[k, q] = s * vkp + c * vkq
    w = np.empty(n)
    for i in range(n):
        w[i] = a[i, i]
    return w, v, sweeps, off


@dataclass(frozen=True)
class EigDecomp:
    values: np.ndarray   # non-increasing
    vectors: np.ndarray  # column k pairs with values[k]
    sweeps: int = 0
    off_norm: float = 0.0

    @property
    def n(self) -> int:
        return len(self.values)


def eigh(h, *, laplacian: bool = False) -> EigDecomp:
    """Eigendecomposition of a symmetric matrix, eigenvalues non-increasing.

    Raises NumericError if the off-diagonal norm does not fall below
    ``1e-13 * ||h||_F`` within 64 sweeps.  With ``laplacian=True`` the
    smallest eigenvalue is snapped to exactly 0 when it is within
    ``1e-11 * ||h||_F`` of it.
    """
    h = sym_matrix(h)
    norm = float(np.linalg.norm(h))
    w, v, sweeps, off = _jacobi(h, OFF_TOL * norm, MAX_SWEEPS)
    if off > OFF_TOL * norm:
        raise NumericError(f"Jacobi did not converge in {MAX_SWEEPS} sweeps (off-diagonal norm {off:.3e})")
    order = np.argsort(-w, kind="stable")
    w = w[order]
    v = v[:, order]
    if laplacian and w.size and abs(w[-1]) <= EIG_TOL * norm:
        w[-1] = 0.0
    return EigDecomp(w, v, int(sweeps), float(off))


def eigvalsh(h, *, laplacian: bool = False) -> np.ndarray:
    return eigh(h, laplacian=laplacian).values


@dataclass(frozen=True)
class SubspaceNormalForm:
    """Column span of ``[I_N; V]`` for an M x N matrix ``V``."""

    V: np.ndarray

    @property
    def N(self) -> int:
        return self.V.shape[1]

    @property
    def M(self) -> int:
        return self.V.shape[0]

    def basis(self) -> np.ndarray:
        return np.vstack([np.eye(self.N), self.V])

    def complement_basis(self) -> np.ndarray:
        """Basis ``[-V^T; I_M]`` of the orthogonal complement."""
        return np.vstack([-self.V.T, np.eye(self.M)])

    def projector(self) -> np.ndarray:
        return projector(self.basis())


def projector(basis: np.ndarray) -> np.ndarray:
    """Orthogonal projector onto the column span of ``basis``."""
    q, _ = np.linalg.qr(basis)
    return q @ q.T


def top_subspace(e: EigDecomp, k: int, *, gap_tol: float = GAP_TOL,
                 cond_tol: float = COND_TOL) -> SubspaceNormalForm | None:
    """Normal form of the span of the top-``k`` eigenvectors.

    Returns None when the leading k x k block of the eigenvector matrix is
    singular beyond ``cond_tol``; raises GapError if the k-th and (k+1)-th
    eigenvalues are not separated by more than ``gap_tol``.
    """
    n = e.n
    if not 1 <= k < n:
        raise ValueError(f"top_subspace needs 1 <= k < n, got k={k}, n={n}")
    gap = float(e.values[k - 1] - e.values[k])
    if gap <= gap_tol:
        raise GapError(f"eigenvalue gap {gap:.3e} at k={k} is below {gap_tol:.0e}", gap)
    U = e.vectors[:, :k]
    U1, U2 = U[:k], U[k:]
    if np.linalg.cond(U1) > cond_tol:
        return None
    # V = U2 U1^{-1}
    V = np.linalg.solve(U1.T, U2.T).T
    return SubspaceNormalForm(V)


def quadratic_form(h, x) -> float:
    h = np.asarray(h, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    if h.shape != (x.size, x.size):
        raise ValueError("dimension mismatch between matrix and vector")
    return float(x @ h @ x)


def require_normal_form(nf: SubspaceNormalForm | None, what: str = "subspace") -> SubspaceNormalForm:
    if nf is None:
        raise NormalFormError(f"{what}: leading block singular, no [I; V] normal form")
    return nf
