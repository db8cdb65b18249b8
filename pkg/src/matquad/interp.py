"""Interpolation by matrix polynomials.

Data are a Jordan pair ``(X, J)`` with ``n p`` columns and one right-hand
vector per column.  The interpolant ``P`` of degree ``<= n - 1`` satisfies

    (A_0 A_1 ... A_{n-1}) col(X J^l) = Z,

which for a chain ``v_0, v_1, ...`` at ``x0`` reads
``sum_l P^{(l)}(x0) v_{q-l} / l! = z_q``.  With ``z_q`` taken from a
function ``F`` the conditions say that ``P`` and ``F`` agree along the
chains.

Three routes are provided for Lagrange data (all chains of length one):
the dense solve (:func:`interpolate_general`), the block inverse
``V_1..V_n`` (:func:`lagrange_via_V`) and cardinal polynomials, either
from the monic polynomial with the same pair (:func:`lagrange_cardinals`)
or from the reproducing kernel of an orthonormal family
(:func:`lagrange_orthonormal`).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import matcore
from .errors import InterpolationError, InvalidPairError, KernelDegeneracyError
from .matpoly import (
    JordanPair,
    MatrixPolynomial,
    col_power,
    divide_linear,
    monic_from_jordan_pair,
    pair_is_nonsingular,
    v_blocks,
)
from .orthopoly import Recurrence, kernel, kernel_polynomial
from .rootfind import SpectralData

MatrixFunction = Callable[[float], np.ndarray]


def _from_blocks(A: np.ndarray, n: int, p: int) -> MatrixPolynomial:
    return MatrixPolynomial(np.stack([A[:, k * p : (k + 1) * p] for k in range(n)]), p=p)


@dataclass(frozen=True)
class InterpolationProblem:
    """Jordan pair plus right-hand vectors ``Z`` (``p x n p``, pair column order)."""

    pair: JordanPair
    n: int
    Z: np.ndarray

    def __post_init__(self):
        p = self.pair.p
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.pair.size != self.n * p:
            raise InterpolationError(
                f"{self.pair.size} chain vectors given, degree bound n = {self.n} "
                f"needs n*p = {self.n * p}"
            )
        Z = np.asarray(self.Z, dtype=float)
        if Z.shape != (p, self.n * p):
            raise ValueError(f"Z has shape {Z.shape}, expected {(p, self.n * p)}")
        object.__setattr__(self, "Z", Z)
        # leading vectors at each node must be independent
        leads: dict[float, list[np.ndarray]] = {}
        col = 0
        for x0, length in self.pair.blocks:
            leads.setdefault(x0, []).append(self.pair.X[:, col])
            col += length
        for x0, vs in leads.items():
            if matcore.rank(np.column_stack(vs)) != len(vs):
                raise InterpolationError(f"leading chain vectors at {x0!r} are dependent")

    @classmethod
    def from_function(cls, pair: JordanPair, F, n: int | None = None) -> "InterpolationProblem":
        """Right-hand sides from ``F``.

        A :class:`MatrixPolynomial` ``F`` supplies the derivatives needed by
        longer chains; a plain callable only supports chains of length one.
        """
        p = pair.p
        if n is None:
            n, r = divmod(pair.size, p)
            if r:
                raise InterpolationError("number of chain vectors is not a multiple of p")
        cols = []
        col = 0
        for x0, length in pair.blocks:
            vs = pair.X[:, col : col + length]
            if isinstance(F, MatrixPolynomial):
                tay = F.taylor(x0, length)
            elif length == 1:
                tay = [np.asarray(F(x0), dtype=float)]
            else:
                raise InterpolationError(
                    "chains longer than one need F as a matrix polynomial or explicit z vectors"
                )
            for q in range(length):
                cols.append(sum(tay[l] @ vs[:, q - l] for l in range(q + 1)))
            col += length
        return cls(pair, n, np.column_stack(cols))

    @classmethod
    def lagrange(cls, nodes: Sequence[float], rootvecs: Sequence, F) -> "InterpolationProblem":
        return cls.from_function(JordanPair.from_rootvectors(nodes, rootvecs), F)


def interpolate_general(prob: InterpolationProblem) -> MatrixPolynomial:
    """Unique interpolant of degree ``<= n - 1`` by one dense solve."""
    pair, n, p = prob.pair, prob.n, prob.pair.p
    if not pair_is_nonsingular(pair, n):
        raise InterpolationError(
            f"col(XJ^l) is singular for the given node data "
            f"(condition number {np.linalg.cond(col_power(pair.X, pair.J, n)):.3e})"
        )
    S = col_power(pair.X, pair.J, n)
    A = np.linalg.solve(S.T, prob.Z.T).T
    return _from_blocks(A, n, p)


def _values_at(nodes, values) -> list[np.ndarray]:
    if callable(values):
        return [np.asarray(values(x), dtype=float) for x in nodes]
    out = [np.asarray(v, dtype=float) for v in values]
    if len(out) != len(nodes):
        raise ValueError(f"{len(out)} values for {len(nodes)} nodes")
    return out


def _rhs(pair: JordanPair, values) -> np.ndarray:
    groups = pair.node_columns()
    vals = _values_at([x for x, _ in groups], values)
    Z = np.zeros_like(pair.X)
    for (_, idx), Fx in zip(groups, vals):
        Z[:, idx] = Fx @ pair.X[:, idx]
    return Z


def lagrange_via_V(pair: JordanPair, values) -> MatrixPolynomial:
    """``P(x) = sum_i F(x_i) (0 .. X_i .. 0) (V_1 + V_2 x + ... + V_n x^{n-1})``.

    ``values`` is one ``p x p`` matrix per distinct node (first-appearance
    order) or a callable.
    """
    if not pair.is_diagonal:
        raise InterpolationError("closed forms are for Lagrange data (diagonal J)")
    n, r = divmod(pair.size, pair.p)
    if r:
        raise InterpolationError("number of rootvectors is not a multiple of p")
    try:
        V = v_blocks(pair, n)
    except InvalidPairError as exc:
        raise InterpolationError(str(exc)) from exc
    Z = _rhs(pair, values)
    return MatrixPolynomial(np.stack([Z @ Vk for Vk in V]), p=pair.p)


def lagrange_cardinals(pair: JordanPair, rtol: float = 1e-8) -> list[MatrixPolynomial]:
    """``W_i(x) = X_i (rows of V_n for node i) Q(x) / (x - x_i)`` with ``Q``
    the monic polynomial whose Jordan pair is ``pair``."""
    if not pair.is_diagonal:
        raise InterpolationError("closed forms are for Lagrange data (diagonal J)")
    n, r = divmod(pair.size, pair.p)
    if r:
        raise InterpolationError("number of rootvectors is not a multiple of p")
    try:
        V = v_blocks(pair, n)
        Q = monic_from_jordan_pair(pair, n)
    except InvalidPairError as exc:
        raise InterpolationError(str(exc)) from exc
    out = []
    for x0, idx in pair.node_columns():
        num = pair.X[:, idx] @ V[-1][idx, :] @ Q
        W, rem = divide_linear(num, x0)
        # the rank-structured numerator vanishes at x0
        scale = num.norm() if not num.is_zero() else 1.0
        if matcore.norm2(rem) > rtol * scale:
            raise InterpolationError(
                f"division by (x - {x0!r}) left remainder {matcore.norm2(rem):.3e}"
            )
        out.append(W)
    return out


def combine(cardinals: Sequence[MatrixPolynomial], values) -> MatrixPolynomial:
    """``sum_i F(x_i) W_i(x)``; ``values`` as in :func:`lagrange_via_V`
    (a callable needs the nodes, so pass a list here)."""
    vals = [np.asarray(v, dtype=float) for v in values]
    if len(vals) != len(cardinals):
        raise ValueError(f"{len(vals)} values for {len(cardinals)} cardinals")
    out = MatrixPolynomial.zero(cardinals[0].p)
    for Fx, W in zip(vals, cardinals):
        out = out + Fx @ W
    return out


def orthonormal_cardinals(
    spec: SpectralData, rec: Recurrence
) -> tuple[list[MatrixPolynomial], list[np.ndarray]]:
    """Cardinals ``W_i`` and matrices ``K_i`` from the reproducing kernel.

    ``K_i = -V_i^T K_{n-1}(x_i, x_i) V_i`` and
    ``W_i(x) = -V_i K_i^{-1} V_i^T K_{n-1}(x, x_i)``; the second factor is
    the quotient ``P_{n+1}(x_i)^T D_{n+1} P_n(x) / (x - x_i)`` up to sign,
    available without dividing.
    """
    n = spec.n
    Ws, Ks = [], []
    for x0, V in zip(spec.nodes, spec.rootvecs):
        L = matcore.symmetrize(V.T @ kernel(rec, n - 1, x0, x0) @ V)
        lam = np.linalg.eigvalsh(L)
        if lam[0] <= 1e-12 * max(1.0, lam[-1]):
            raise KernelDegeneracyError(
                f"V^T K_{n - 1}(x, x) V at x = {x0!r} has eigenvalue {lam[0]:.3e}"
            )
        Ks.append(-L)
        Ws.append((V @ np.linalg.solve(L, V.T)) @ kernel_polynomial(rec, n - 1, x0))
    return Ws, Ks


def lagrange_orthonormal(spec: SpectralData, rec: Recurrence, values) -> MatrixPolynomial:
    """Lagrange interpolant on the zeros of ``P_n`` via kernel cardinals."""
    Ws, _ = orthonormal_cardinals(spec, rec)
    return combine(Ws, _values_at(spec.nodes, values))
