"""Dense real linear algebra used throughout the package.

Matrices are plain 2-D ``float64`` numpy arrays.  The helpers here add the
validation and tolerance policy the higher layers rely on; the actual
factorizations are LAPACK's (via numpy).
"""

from __future__ import annotations

import numpy as np

from .errors import MatquadError, NotPSDError, NotSPDError, SymmetryError

#: relative threshold on singular values for :func:`nullspace`
NULLSPACE_TOL = 1e-8


def as_matrix(a, copy: bool = False) -> np.ndarray:
    """Coerce ``a`` to a finite 2-D float array."""
    m = np.array(a, dtype=float, copy=copy or None, ndmin=2)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-D array, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise MatquadError("matrix has non-finite entries")
    return m


def norm2(a) -> float:
    """Spectral norm (largest singular value)."""
    a = np.asarray(a, dtype=float)
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def sym_atol(a) -> float:
    return 1e-10 * max(1.0, norm2(a))


def is_symmetric(a, atol: float | None = None) -> bool:
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return False
    if atol is None:
        atol = sym_atol(a)
    return bool(np.max(np.abs(a - a.T), initial=0.0) <= atol)


def is_psd(a, atol: float | None = None) -> bool:
    """True if ``a`` is symmetric with smallest eigenvalue >= -atol."""
    a = np.asarray(a, dtype=float)
    if atol is None:
        atol = sym_atol(a)
    if not is_symmetric(a, atol):
        return False
    if a.size == 0:
        return True
    return bool(np.linalg.eigvalsh(0.5 * (a + a.T))[0] >= -atol)


def symmetrize(a) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    return 0.5 * (a + a.T)


def sym_eig(a, atol: float | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a symmetric matrix.

    Returns ``(lam, Q)`` with ``lam`` ascending and ``A = Q diag(lam) Q^T``.
    Raises :class:`SymmetryError` if ``a`` is not symmetric within ``atol``
    (default ``1e-10 * max(1, ||a||)``).
    """
    a = as_matrix(a)
    if not is_symmetric(a, atol):
        raise SymmetryError(
            f"matrix of shape {a.shape} is not symmetric "
            f"(max asymmetry {np.max(np.abs(a - a.T), initial=0.0):.3e})"
        )
    lam, q = np.linalg.eigh(symmetrize(a))
    return lam, q


def spd_sqrt(a, tol: float = 1e-14) -> np.ndarray:
    """Unique symmetric positive definite square root of an SPD matrix.

    Diagonal input is handled entrywise so the result is exact there.
    """
    a = as_matrix(a)
    lam, q = sym_eig(a)
    if lam.size and lam[0] <= tol * max(1.0, abs(lam[-1])):
        raise NotSPDError(f"smallest eigenvalue {lam[0]:.3e} is not positive")
    if np.count_nonzero(a - np.diag(np.diag(a))) == 0:
        return np.diag(np.sqrt(np.diag(a)))
    s = (q * np.sqrt(lam)) @ q.T
    return symmetrize(s)


def spd_inv_sqrt(a, tol: float = 1e-14) -> np.ndarray:
    """Inverse of :func:`spd_sqrt`, computed from the same eigenbasis."""
    a = as_matrix(a)
    lam, q = sym_eig(a)
    if lam.size and lam[0] <= tol * max(1.0, abs(lam[-1])):
        raise NotSPDError(f"smallest eigenvalue {lam[0]:.3e} is not positive")
    if np.count_nonzero(a - np.diag(np.diag(a))) == 0:
        return np.diag(1.0 / np.sqrt(np.diag(a)))
    return symmetrize((q / np.sqrt(lam)) @ q.T)


def check_psd(a, name: str = "matrix") -> np.ndarray:
    a = as_matrix(a)
    if not is_psd(a):
        raise NotPSDError(f"{name} is not symmetric positive semidefinite")
    return a


def nullspace(a, tol: float = NULLSPACE_TOL, scale: float | None = None) -> np.ndarray:
    """Orthonormal basis (as columns) of the numerical null space of ``a``.

    A right singular vector belongs to the basis when its singular value is
    ``<= tol * scale``; ``scale`` defaults to ``sigma_max``.  Pass an external
    scale when ``a`` is a sample of a family whose size is known, e.g. a
    polynomial evaluated near one of its zeros.  A full-rank input gives a
    ``(n, 0)`` array.
    """
    if not 0.0 < tol < 1.0:
        raise ValueError("tol must lie in (0, 1)")
    a = as_matrix(a)
    ncols = a.shape[1]
    if a.size == 0:
        return np.eye(ncols)
    _, s, vt = np.linalg.svd(a)
    smax = s[0] if s.size else 0.0
    if scale is None:
        scale = smax
    if smax == 0.0:
        return np.eye(ncols)
    # singular values beyond min(m, n) are exactly zero
    s_full = np.zeros(ncols)
    s_full[: s.size] = s
    mask = s_full <= tol * scale
    return vt[mask].T.copy()


def rank(a, tol: float = NULLSPACE_TOL) -> int:
    a = as_matrix(a)
    return a.shape[1] - nullspace(a, tol).shape[1]


def inv(a) -> np.ndarray:
    return np.linalg.inv(as_matrix(a))


def det(a) -> float:
    return float(np.linalg.det(as_matrix(a)))


def cond(a) -> float:
    return float(np.linalg.cond(as_matrix(a)))
