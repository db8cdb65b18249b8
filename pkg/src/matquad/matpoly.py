"""Matrix polynomials, Jordan pairs and standard triples.

A :class:`MatrixPolynomial` stores its coefficients ``A_0, ..., A_m`` as a
``(m + 1, p, p)`` array, index ``k`` holding the coefficient of ``x**k``.
Instances are treated as immutable values.

``@`` is the matrix product throughout: ``P @ Q``, ``M @ P`` and ``P @ M``
all work for polynomials ``P, Q`` and constant ``p x p`` arrays ``M``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import matcore
from .errors import DivisionError, InvalidChainError, InvalidPairError


class MatrixPolynomial:
    """``P(x) = A_0 + A_1 x + ... + A_m x**m`` with ``p x p`` real coefficients."""

    __slots__ = ("_c",)
    __array_ufunc__ = None  # let numpy defer to our reflected operators

    def __init__(self, coeffs, p: int | None = None):
        c = np.array(coeffs, dtype=float)
        if c.size == 0:
            if p is None:
                if c.ndim == 3:
                    p = c.shape[1]
                else:
                    raise ValueError("size p is required for the zero polynomial")
            c = np.zeros((0, p, p))
        if c.ndim == 2:
            c = c[None]
        if c.ndim != 3 or c.shape[1] != c.shape[2]:
            raise ValueError(f"coefficients must have shape (m+1, p, p), got {c.shape}")
        if p is not None and c.shape[1] != p:
            raise ValueError(f"coefficient size {c.shape[1]} != p = {p}")
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        # drop exactly-zero leading coefficients
        nz = np.flatnonzero(np.any(c != 0.0, axis=(1, 2)))
        c = c[: nz[-1] + 1] if nz.size else c[:0]
        c.setflags(write=False)
        self._c = c

    # -- construction --------------------------------------------------

    @classmethod
    def zero(cls, p: int) -> "MatrixPolynomial":
        return cls(np.zeros((0, p, p)))

    @classmethod
    def constant(cls, a) -> "MatrixPolynomial":
        a = matcore.as_matrix(a)
        return cls(a[None])

    @classmethod
    def identity(cls, p: int) -> "MatrixPolynomial":
        return cls(np.eye(p)[None])

    @classmethod
    def monomial(cls, k: int, a) -> "MatrixPolynomial":
        """``a * x**k`` for a constant matrix ``a``."""
        a = matcore.as_matrix(a)
        c = np.zeros((k + 1,) + a.shape)
        c[k] = a
        return cls(c)

    @classmethod
    def from_entries(cls, entries) -> "MatrixPolynomial":
        """Build from a ``p x p`` nested list of scalar coefficient lists.

        ``entries[i][j]`` is the ascending coefficient list of entry ``(i, j)``.
        """
        p = len(entries)
        deg = max(len(e) for row in entries for e in row)
        c = np.zeros((max(deg, 0), p, p))
        for i, row in enumerate(entries):
            if len(row) != p:
                raise ValueError("entries must be square")
            for j, e in enumerate(row):
                c[: len(e), i, j] = e
        return cls(c, p=p)

    # -- basic properties ------------------------------------------------

    @property
    def coeffs(self) -> np.ndarray:
        return self._c

    @property
    def p(self) -> int:
        return self._c.shape[1]

    @property
    def degree(self) -> int:
        """Degree; ``-1`` for the zero polynomial."""
        return self._c.shape[0] - 1

    def is_zero(self) -> bool:
        return self._c.shape[0] == 0

    @property
    def leading(self) -> np.ndarray:
        if self.is_zero():
            return np.zeros((self.p, self.p))
        return self._c[-1]

    def coeff(self, k: int) -> np.ndarray:
        if 0 <= k < self._c.shape[0]:
            return self._c[k]
        return np.zeros((self.p, self.p))

    def is_monic(self, atol: float = 1e-10) -> bool:
        return not self.is_zero() and np.allclose(self.leading, np.eye(self.p), rtol=0, atol=atol)

    def is_regular(self, samples: Iterable[float] | None = None) -> bool:
        """True if ``det P(t)`` is nonzero at some sample point."""
        if samples is None:
            samples = np.linspace(-1.7, 2.3, 13)
        return any(abs(np.linalg.det(self(t))) > 1e-300 for t in samples)

    def norm(self) -> float:
        """Max over coefficients of the spectral norm."""
        if self.is_zero():
            return 0.0
        return max(matcore.norm2(a) for a in self._c)

    def trim(self, tol: float = 0.0) -> "MatrixPolynomial":
        """Drop leading coefficients whose max-abs entry is ``<= tol * norm``."""
        if self.is_zero():
            return self
        scale = max(np.max(np.abs(self._c)), 1e-300)
        keep = np.flatnonzero(np.max(np.abs(self._c), axis=(1, 2)) > tol * scale)
        if not keep.size:
            return MatrixPolynomial.zero(self.p)
        return MatrixPolynomial(self._c[: keep[-1] + 1])

    # -- evaluation -------------------------------------------------------

    def __call__(self, x: float) -> np.ndarray:
        """Horner evaluation at a real point."""
        out = np.zeros((self.p, self.p))
        for a in self._c[::-1]:
            out = out * x + a
        return out

    eval = __call__

    def derivative(self, order: int = 1) -> "MatrixPolynomial":
        if order < 0:
            raise ValueError("derivative order must be nonnegative")
        c = self._c
        for _ in range(order):
            if c.shape[0] <= 1:
                return MatrixPolynomial.zero(self.p)
            c = c[1:] * np.arange(1, c.shape[0])[:, None, None]
        return MatrixPolynomial(c, p=self.p)

    def taylor(self, x0: float, count: int) -> list[np.ndarray]:
        """``[P(x0), P'(x0), P''(x0)/2!, ...]`` (first ``count`` entries)."""
        out = []
        d = self
        for i in range(count):
            out.append(d(x0) / math.factorial(i))
            d = d.derivative()
        return out

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> "MatrixPolynomial":
        if isinstance(other, MatrixPolynomial):
            if other.p != self.p:
                raise ValueError(f"size mismatch: {self.p} vs {other.p}")
            return other
        a = np.asarray(other, dtype=float)
        if a.ndim == 0:
            return MatrixPolynomial.constant(float(a) * np.eye(self.p))
        return MatrixPolynomial.constant(a)

    def __add__(self, other):
        other = self._coerce(other)
        n = max(self._c.shape[0], other._c.shape[0])
        c = np.zeros((n, self.p, self.p))
        c[: self._c.shape[0]] += self._c
        c[: other._c.shape[0]] += other._c
        return MatrixPolynomial(c, p=self.p)

    __radd__ = __add__

    def __neg__(self):
        return MatrixPolynomial(-self._c, p=self.p)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, s):
        if isinstance(s, MatrixPolynomial) or np.ndim(s) != 0:
            return NotImplemented
        return MatrixPolynomial(self._c * float(s), p=self.p)

    __rmul__ = __mul__

    def __truediv__(self, s):
        return self * (1.0 / float(s))

    def __matmul__(self, other):
        if isinstance(other, MatrixPolynomial):
            if other.p != self.p:
                raise ValueError(f"size mismatch: {self.p} vs {other.p}")
            if self.is_zero() or other.is_zero():
                return MatrixPolynomial.zero(self.p)
            c = np.zeros((self._c.shape[0] + other._c.shape[0] - 1, self.p, self.p))
            for i, a in enumerate(self._c):
                c[i : i + other._c.shape[0]] += a @ other._c
            return MatrixPolynomial(c, p=self.p)
        m = np.asarray(other, dtype=float)
        return MatrixPolynomial(self._c @ m, p=self.p)

    def __rmatmul__(self, other):
        m = np.asarray(other, dtype=float)
        return MatrixPolynomial(m @ self._c, p=self.p)

    def shift_x(self, k: int = 1) -> "MatrixPolynomial":
        """``x**k * P(x)``."""
        if self.is_zero():
            return self
        return MatrixPolynomial(np.concatenate([np.zeros((k, self.p, self.p)), self._c]))

    @property
    def T(self) -> "MatrixPolynomial":
        return MatrixPolynomial(np.transpose(self._c, (0, 2, 1)), p=self.p)

    def __eq__(self, other):
        if not isinstance(other, MatrixPolynomial):
            return NotImplemented
        return self._c.shape == other._c.shape and bool(np.all(self._c == other._c))

    __hash__ = None

    def allclose(self, other, atol: float = 1e-10, rtol: float = 0.0) -> bool:
        other = self._coerce(other)
        return distance(self, other) <= atol + rtol * max(self.norm(), other.norm())

    def __repr__(self):
        return f"MatrixPolynomial(p={self.p}, degree={self.degree})"

    # -- serialization ----------------------------------------------------

    def to_dict(self) -> dict:
        return {"p": self.p, "coeffs": [a.ravel().tolist() for a in self._c]}

    @classmethod
    def from_dict(cls, doc: dict) -> "MatrixPolynomial":
        p = int(doc["p"])
        coeffs = [np.asarray(a, dtype=float).reshape(p, p) for a in doc["coeffs"]]
        if not coeffs:
            return cls.zero(p)
        return cls(np.stack(coeffs), p=p)


def distance(P: MatrixPolynomial, Q: MatrixPolynomial) -> float:
    """Max-abs coefficient difference."""
    d = P - Q
    return float(np.max(np.abs(d.coeffs))) if not d.is_zero() else 0.0


def right_divide(P: MatrixPolynomial, D: MatrixPolynomial) -> tuple[MatrixPolynomial, MatrixPolynomial]:
    """Right quotient and remainder: ``P = Q @ D + R`` with ``deg R < deg D``."""
    if P.p != D.p:
        raise ValueError("size mismatch")
    if D.is_zero():
        raise DivisionError("division by the zero polynomial")
    lead = D.leading
    if abs(np.linalg.det(lead)) <= 1e-14 * max(1.0, matcore.norm2(lead)) ** D.p:
        raise DivisionError("divisor has a singular leading coefficient")
    n = D.degree
    lead_inv = np.linalg.inv(lead)
    rem = P.coeffs.copy()
    m = P.degree
    if m < n:
        return MatrixPolynomial.zero(P.p), P
    q = np.zeros((m - n + 1, P.p, P.p))
    for k in range(m - n, -1, -1):
        qk = rem[k + n] @ lead_inv
        q[k] = qk
        rem[k : k + n + 1] -= qk @ D.coeffs
        rem[k + n] = 0.0
    R = MatrixPolynomial(rem[:n], p=P.p)
    return MatrixPolynomial(q, p=P.p), R


def divide_linear(P: MatrixPolynomial, x0: float) -> tuple[MatrixPolynomial, np.ndarray]:
    """Synthetic division by ``(x - x0)``; returns ``(Q, P(x0))``."""
    if P.is_zero():
        return P, np.zeros((P.p, P.p))
    c = P.coeffs
    m = c.shape[0] - 1
    q = np.zeros((max(m, 0), P.p, P.p))
    acc = np.zeros((P.p, P.p))
    for k in range(m, 0, -1):
        acc = acc * x0 + c[k]
        q[k - 1] = acc
    rem = acc * x0 + c[0]
    return MatrixPolynomial(q, p=P.p), rem


# ---------------------------------------------------------------------------
# Jordan pairs and standard triples


@dataclass(frozen=True)
class JordanPair:
    """``X`` is ``p x N``; ``J`` is block diagonal with Jordan blocks.

    ``blocks`` lists ``(node, length)`` per Jordan block in column order.
    Blocks with equal nodes are contiguous.
    """

    X: np.ndarray
    J: np.ndarray
    blocks: tuple[tuple[float, int], ...]

    @classmethod
    def from_chains(cls, chains: Sequence[tuple[float, Sequence]]) -> "JordanPair":
        """Assemble from ``[(x0, [v0, v1, ...]), ...]``; chains sharing a node
        must be adjacent."""
        cols, blocks = [], []
        for x0, chain in chains:
            vs = [np.asarray(v, dtype=float).ravel() for v in chain]
            if not vs:
                raise InvalidChainError("empty chain")
            if not np.any(vs[0]):
                raise InvalidChainError(f"chain at {x0!r} has a zero leading vector")
            cols.extend(vs)
            blocks.append((float(x0), len(vs)))
        X = np.column_stack(cols)
        N = X.shape[1]
        J = np.zeros((N, N))
        i = 0
        for x0, length in blocks:
            J[i : i + length, i : i + length] = np.diag(np.full(length, x0)) + np.diag(
                np.ones(length - 1), 1
            )
            i += length
        return cls(X, J, tuple(blocks))

    @classmethod
    def from_rootvectors(cls, nodes: Sequence[float], vecs: Sequence) -> "JordanPair":
        """Diagonal pair from per-node ``p x m_i`` rootvector matrices."""
        chains = []
        for x0, V in zip(nodes, vecs):
            V = np.asarray(V, dtype=float)
            if V.ndim == 1:
                V = V[:, None]
            for j in range(V.shape[1]):
                chains.append((x0, [V[:, j]]))
        return cls.from_chains(chains)

    @property
    def p(self) -> int:
        return self.X.shape[0]

    @property
    def size(self) -> int:
        return self.X.shape[1]

    @property
    def is_diagonal(self) -> bool:
        return all(length == 1 for _, length in self.blocks)

    def node_columns(self) -> list[tuple[float, np.ndarray]]:
        """Distinct nodes (first-appearance order) with their column indices."""
        out: list[tuple[float, list[int]]] = []
        col = 0
        for x0, length in self.blocks:
            idx = list(range(col, col + length))
            if out and out[-1][0] == x0:
                out[-1][1].extend(idx)
            else:
                out.append((x0, idx))
            col += length
        return [(x0, np.array(idx)) for x0, idx in out]


@dataclass(frozen=True)
class StandardTriple:
    X: np.ndarray
    T: np.ndarray
    Y: np.ndarray


def col_power(X, T, n: int) -> np.ndarray:
    """``col(X T^l)_{l=0..n-1}``, an ``(n p) x N`` matrix."""
    X = np.asarray(X, dtype=float)
    T = np.asarray(T, dtype=float)
    rows = []
    cur = X
    for _ in range(n):
        rows.append(cur)
        cur = cur @ T
    return np.vstack(rows)


def col_chebyshev(X, T, n: int, interval) -> np.ndarray:
    """``col(X T_l(T~))_{l<n}`` with ``T~`` the affine image of ``T`` that
    maps ``interval`` onto ``[-1, 1]``.

    Row-block equivalent to ``col(X T^l)`` through a block triangular
    invertible transform, so both are singular together; this form stays
    well conditioned long after the monomial one does not.
    """
    X = np.asarray(X, dtype=float)
    T = np.asarray(T, dtype=float)
    a, b = interval
    c, h = 0.5 * (a + b), 0.5 * (b - a)
    if not h > 0:
        raise ValueError("interval must have positive length")
    Tt = (T - c * np.eye(T.shape[0])) / h
    rows = [X]
    if n > 1:
        rows.append(X @ Tt)
    for _ in range(2, n):
        rows.append(2.0 * rows[-1] @ Tt - rows[-2])
    return np.vstack(rows[:n])


def pair_is_nonsingular(pair: "JordanPair", n: int, tol: float = matcore.NULLSPACE_TOL) -> bool:
    """Rank test of ``col(X J^l)_{l<n}``, done in the Chebyshev form over
    the hull of the nodes."""
    if pair.size != n * pair.p:
        return False
    xs = [x for x, _ in pair.blocks]
    lo, hi = min(xs), max(xs)
    half = max(0.5 * (hi - lo), 1.0)
    mid = 0.5 * (hi + lo)
    C = col_chebyshev(pair.X, pair.J, n, (mid - half, mid + half))
    return matcore.rank(C, tol) == n * pair.p


def v_blocks(pair: JordanPair, n: int, cond_max: float = 1e12) -> list[np.ndarray]:
    """Split ``(col(X J^l))^{-1}`` into its ``n`` column blocks ``V_1..V_n``."""
    p = pair.p
    if pair.size != n * p:
        raise InvalidPairError(f"pair has {pair.size} columns, expected n*p = {n * p}")
    S = col_power(pair.X, pair.J, n)
    c = np.linalg.cond(S)
    if not np.isfinite(c) or c > cond_max:
        raise InvalidPairError(f"col(XJ^l) is singular (condition number {c:.3e})")
    Sinv = np.linalg.inv(S)
    return [Sinv[:, k * p : (k + 1) * p] for k in range(n)]


def monic_from_jordan_pair(pair: JordanPair, n: int) -> MatrixPolynomial:
    """Monic polynomial of degree ``n`` with Jordan pair ``(X, J)``:
    ``x^n I - X J^n (V_1 + V_2 x + ... + V_n x^{n-1})``."""
    V = v_blocks(pair, n)
    XJn = pair.X @ np.linalg.matrix_power(pair.J, n)
    c = np.zeros((n + 1, pair.p, pair.p))
    for k in range(n):
        c[k] = -XJn @ V[k]
    c[n] = np.eye(pair.p)
    return MatrixPolynomial(c)


def companion_triple(P: MatrixPolynomial, atol: float = 1e-10) -> StandardTriple:
    """Block companion standard triple ``(X', C_1, Y')`` of a monic polynomial."""
    if not P.is_monic(atol):
        raise ValueError("companion_triple requires a monic polynomial")
    n, p = P.degree, P.p
    if n < 1:
        raise ValueError("companion_triple requires degree >= 1")
    C = np.zeros((n * p, n * p))
    C[: (n - 1) * p, p:] = np.eye((n - 1) * p)
    for k in range(n):
        C[(n - 1) * p :, k * p : (k + 1) * p] = -P.coeffs[k]
    X = np.zeros((p, n * p))
    X[:, :p] = np.eye(p)
    Y = np.zeros((n * p, p))
    Y[(n - 1) * p :] = np.eye(p)
    return StandardTriple(X, C, Y)


def pair_residual(P: MatrixPolynomial, X, T) -> tuple[float, float]:
    """``(||sum A_k X T^k||, scale)`` where scale bounds the terms' sizes."""
    X = np.asarray(X, dtype=float)
    T = np.asarray(T, dtype=float)
    acc = np.zeros_like(X)
    scale = 0.0
    cur = X
    for a in P.coeffs:
        term = a @ cur
        acc += term
        scale += matcore.norm2(a) * matcore.norm2(cur)
        cur = cur @ T
    return matcore.norm2(acc), scale


def is_right_divisor(P: MatrixPolynomial, pair: JordanPair, tol: float = 1e-9) -> bool:
    """Divisibility criterion ``A_m X J^m + ... + A_0 X = 0``."""
    if P.is_zero():
        return True
    res, scale = pair_residual(P, pair.X, pair.J)
    return res <= tol * max(scale, 1e-300)


def jordan_chain_check(P: MatrixPolynomial, x0: float, chain: Sequence, tol: float = 1e-9) -> bool:
    """Check ``sum_{i<=l} P^{(i)}(x0) v_{l-i} / i! = 0`` for every ``l``."""
    vs = [np.asarray(v, dtype=float).ravel() for v in chain]
    if not vs or not np.any(vs[0]):
        raise InvalidChainError("Jordan chain needs a nonzero leading vector")
    taylor = P.taylor(x0, len(vs))
    vscale = max(np.linalg.norm(v) for v in vs)
    for l in range(len(vs)):
        s = sum(taylor[i] @ vs[l - i] for i in range(l + 1))
        scale = sum(matcore.norm2(taylor[i]) for i in range(l + 1)) * vscale
        if np.linalg.norm(s) > tol * max(scale, 1e-300):
            return False
    return True
