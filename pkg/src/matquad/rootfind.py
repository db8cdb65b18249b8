"""Zeros, multiplicities and rootvectors of orthonormal matrix polynomials.

Zeros of ``det P_n`` are the eigenvalues of the symmetric block Jacobi
matrix built from the recurrence; rootvectors come from the null space of
``P_n`` at each (clustered) eigenvalue.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace

import numpy as np

from . import matcore
from .errors import AmbiguousClusterError, InvalidPairError, MultiplicityError
from .matpoly import JordanPair, col_chebyshev, col_power
from .orthopoly import Recurrence

log = logging.getLogger(__name__)

CLUSTER_TOL = 1e-8


def block_jacobi(rec: Recurrence, n: int) -> np.ndarray:
    """Symmetric ``np x np`` block tridiagonal matrix with ``E_0..E_{n-1}`` on
    the diagonal and ``D_1..D_{n-1}`` beside it."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if n > len(rec.E):
        raise IndexError(f"recurrence holds {len(rec.E)} levels, {n} requested")
    p = rec.p
    Jm = np.zeros((n * p, n * p))
    for k in range(n):
        Jm[k * p : (k + 1) * p, k * p : (k + 1) * p] = rec.E[k]
        if k + 1 < n:
            Dk = rec.D[k]
            Jm[k * p : (k + 1) * p, (k + 1) * p : (k + 2) * p] = Dk
            Jm[(k + 1) * p : (k + 2) * p, k * p : (k + 1) * p] = Dk.T
    return matcore.symmetrize(Jm)


@dataclass(frozen=True)
class SpectralData:
    """Distinct zeros of ``P_n`` with multiplicities and rootvector blocks.

    ``rootvecs[i]`` is ``p x mults[i]`` with independent columns.
    """

    n: int
    nodes: tuple[float, ...]
    mults: tuple[int, ...]
    rootvecs: tuple[np.ndarray, ...]

    @property
    def p(self) -> int:
        return self.rootvecs[0].shape[0]

    @property
    def pair(self) -> JordanPair:
        return JordanPair.from_rootvectors(self.nodes, self.rootvecs)

    def with_rootvectors(self, rootvecs) -> "SpectralData":
        """Same nodes with a different basis of each rootvector space."""
        rv = []
        for V, m in zip(rootvecs, self.mults):
            V = np.asarray(V, dtype=float)
            if V.ndim == 1:
                V = V[:, None]
            if V.shape[1] != m:
                raise ValueError("rootvector block has the wrong number of columns")
            rv.append(V)
        return replace(self, rootvecs=tuple(rv))

    def col_matrix(self) -> np.ndarray:
        pair = self.pair
        return col_power(pair.X, pair.J, self.n)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "nodes": list(self.nodes),
            "mults": list(self.mults),
            "rootvecs": [V.tolist() for V in self.rootvecs],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "SpectralData":
        return cls(
            int(doc["n"]),
            tuple(float(x) for x in doc["nodes"]),
            tuple(int(m) for m in doc["mults"]),
            tuple(np.asarray(V, dtype=float).reshape(-1, m) for V, m in zip(doc["rootvecs"], doc["mults"])),
        )


def cluster(values, tol: float) -> list[list[int]]:
    """Single-linkage clustering of sorted values with absolute gap ``tol``."""
    groups: list[list[int]] = []
    for i, v in enumerate(values):
        if groups and v - values[groups[-1][-1]] <= tol:
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups


def _canonical_sign(V: np.ndarray) -> np.ndarray:
    # deterministic orientation: largest-magnitude entry of each column positive
    V = V.copy()
    for j in range(V.shape[1]):
        k = np.argmax(np.abs(V[:, j]))
        if V[k, j] < 0:
            V[:, j] = -V[:, j]
    return V


def zeros_and_rootvectors(
    rec: Recurrence,
    n: int,
    cluster_tol: float = CLUSTER_TOL,
    null_tol: float = matcore.NULLSPACE_TOL,
) -> SpectralData:
    """Zeros of ``P_n`` with orthonormal rootvector bases."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if n > rec.N:
        raise IndexError(f"P_{n} needs D_{n}; recurrence has N = {rec.N}")
    p = rec.p
    lam = np.linalg.eigvalsh(block_jacobi(rec, n))
    a, b = rec.weight.interval
    # all eigenvalues may coincide (n = 1 with E_0 = c I); fall back to the interval
    width = max(lam[-1] - lam[0], b - a)
    tol = cluster_tol * width
    groups = cluster(lam, tol)
    # a gap only a little wider than the tolerance means the split is unreliable
    gaps = np.diff(lam)
    near = gaps[(gaps > tol) & (gaps <= 100 * tol)]
    if near.size:
        raise AmbiguousClusterError(
            f"eigenvalue gap {near.min():.3e} is within two decades of the "
            f"clustering tolerance {tol:.3e}"
        )

    nodes, mults, vecs = [], [], []
    det_scale, norm_scale = _scales(rec, n)
    for g in groups:
        x0 = float(np.mean(lam[g]))
        Pn = rec.evaluate_all(n, x0)[n]
        V = matcore.nullspace(Pn, null_tol, scale=max(norm_scale, matcore.norm2(Pn)))
        if V.shape[1] != len(g):
            raise MultiplicityError(x0, len(g), V.shape[1])
        d = abs(np.linalg.det(Pn))
        if d > 1e-8 * det_scale:
            raise MultiplicityError(x0, len(g), 0)
        nodes.append(x0)
        mults.append(len(g))
        vecs.append(_canonical_sign(V))

    spec = SpectralData(n, tuple(nodes), tuple(mults), tuple(vecs))
    if sum(mults) != n * p or max(mults) > p:
        raise MultiplicityError(None, n * p, sum(mults))
    pair = spec.pair
    C = col_chebyshev(pair.X, pair.J, n, (a, b))
    log.debug("P_%d: %d distinct zeros, cond(col(XJ^l)) = %.3e, Chebyshev form %.3e",
              n, len(nodes), np.linalg.cond(spec.col_matrix()), np.linalg.cond(C))
    r = matcore.rank(C)
    if r != n * p:
        raise InvalidPairError(f"col(XJ^l) for P_{n} has rank {r}, expected {n * p}")
    if nodes[0] < a - 1e-12 * (b - a) or nodes[-1] > b + 1e-12 * (b - a):
        log.warning("zeros of P_%d fall outside [%g, %g]", n, a, b)
    return spec


def _scales(rec: Recurrence, n: int, samples: int = 65) -> tuple[float, float]:
    """Max of ``|det P_n|`` and ``||P_n||`` over a grid on the interval."""
    a, b = rec.weight.interval
    vals = [rec.evaluate_all(n, x)[n] for x in np.linspace(a, b, samples)]
    return max(abs(np.linalg.det(v)) for v in vals), max(matcore.norm2(v) for v in vals)
