"""Dense linear-algebra kernels: tridiagonal/Hessenberg eigenvalues and LU solves.

Thin contracts over LAPACK (via numpy/scipy) so the rest of the package never
touches a linear-algebra backend directly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .errors import ComplexSpectrumError, NumericalFailureError, SingularMatrixError

__all__ = [
    "LuFactors",
    "symtri_eigen",
    "hessenberg_eigenvalues",
    "eigvals",
    "lu_factor",
    "lu_solve",
]


def symtri_eigen(diag: np.ndarray, offdiag: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and first eigenvector components of a symmetric
    tridiagonal matrix.

    The squared first components, scaled by the weight's total mass, are the
    Golub-Welsch quadrature weights.
    """
    diag = np.asarray(diag, dtype=float)
    offdiag = np.asarray(offdiag, dtype=float)
    if diag.ndim != 1 or offdiag.shape != (max(diag.size - 1, 0),):
        raise ValueError("expected diag of length n and offdiag of length n-1")
    if diag.size == 1:
        return diag.copy(), np.ones(1)
    try:
        vals, vecs = sla.eigh_tridiagonal(diag, offdiag)
    except sla.LinAlgError as exc:  # pragma: no cover - LAPACK non-convergence
        raise NumericalFailureError(f"tridiagonal eigensolver failed: {exc}") from exc
    return vals, vecs[0, :].copy()


def eigvals(a: np.ndarray) -> np.ndarray:
    """Eigenvalues (complex, unordered) of a general real square matrix."""
    try:
        return np.linalg.eigvals(np.asarray(a, dtype=float))
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise NumericalFailureError(f"eigenvalue iteration failed: {exc}") from exc


def hessenberg_eigenvalues(h: np.ndarray) -> np.ndarray:
    """Real eigenvalues (ascending) of a real banded lower-Hessenberg matrix.

    Rejects the computation if any eigenvalue has an imaginary part larger
    than 1e-10 times the Frobenius norm of the input.
    """
    h = np.asarray(h, dtype=float)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError("expected a square matrix")
    vals = eigvals(h)
    tol = 1e-10 * max(np.linalg.norm(h), 1e-300)
    bad = np.abs(vals.imag) > tol
    if np.any(bad):
        worst = vals[np.argmax(np.abs(vals.imag))]
        raise ComplexSpectrumError(
            f"complex eigenvalue {worst} exceeds imaginary tolerance {tol:.3e}"
        )
    return np.sort(vals.real)


@dataclass(frozen=True)
class LuFactors:
    """Combined LU storage with pivot indices and permutation parity."""

    lu: np.ndarray
    piv: np.ndarray
    sign: float

    @property
    def n(self) -> int:
        return self.lu.shape[0]


def lu_factor(a: np.ndarray) -> LuFactors:
    """LU factorization with partial pivoting; exact zero pivots are rejected."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("expected a square matrix")
    lu, piv = sla.lu_factor(a, check_finite=False)
    if np.any(np.diag(lu) == 0.0):
        raise SingularMatrixError("exact zero pivot in LU factorization")
    sign = 1.0 if np.count_nonzero(piv != np.arange(a.shape[0])) % 2 == 0 else -1.0
    return LuFactors(lu=lu, piv=piv, sign=sign)


def lu_solve(factors: LuFactors, b: np.ndarray) -> np.ndarray:
    """Solve A x = b from a prior :func:`lu_factor` of A."""
    b = np.asarray(b, dtype=float)
    if b.shape[0] != factors.n:
        raise ValueError("right-hand side length does not match the factorization")
    return sla.lu_solve((factors.lu, factors.piv), b, check_finite=False)
