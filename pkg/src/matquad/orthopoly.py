"""Weight matrices, the matricial inner product and orthonormal matrix
polynomials generated by the block Stieltjes procedure.

A weight is ``W(x) = sum_k C_k w_k(x)`` on a finite ``[a, b]``: each ``C_k``
is a symmetric PSD matrix and each ``w_k`` a classical scalar weight scaled
to unit mass on ``[a, b]``.

The recurrence is ``x P_n = D_{n+1} P_{n+1} + E_n P_n + D_n P_{n-1}`` with
``P_0 = I``, ``E_n`` symmetric and ``D_n`` symmetric positive definite.
It is generated from exact moment expansions of the inner products.  The
expansions are carried out in the Chebyshev basis of ``[a, b]`` (modified
moments) rather than the monomial basis, whose Hankel matrices lose roughly
``0.6 n`` digits at degree ``n``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import matcore, oracle
from .errors import DegenerateWeightError, NotPSDError, RankDeficiencyError
from .matpoly import MatrixPolynomial

BASE_WEIGHTS = ("chebyshev1", "chebyshev2", "legendre", "jacobi")
SUPPORTED_N = 40


def _base_key(base):
    """Canonical hashable form: a string, or ``("jacobi", alpha, beta)``."""
    if isinstance(base, str):
        if base in ("chebyshev1", "chebyshev2", "legendre"):
            return base
        raise ValueError(f"unknown base weight {base!r}")
    if isinstance(base, dict) and set(base) == {"jacobi"}:
        base = ("jacobi", *base["jacobi"])
    if isinstance(base, (tuple, list)) and len(base) == 3 and base[0] == "jacobi":
        alpha, beta = float(base[1]), float(base[2])
        if alpha <= -1 or beta <= -1:
            raise ValueError("jacobi parameters must exceed -1")
        return ("jacobi", alpha, beta)
    raise ValueError(f"unknown base weight {base!r}")


def _jacobi_log_mass(alpha, beta):
    # int_{-1}^{1} (1-t)^alpha (1+t)^beta dt
    return ((alpha + beta + 1) * math.log(2.0) + math.lgamma(alpha + 1)
            + math.lgamma(beta + 1) - math.lgamma(alpha + beta + 2))


def base_density(base, interval, x) -> float:
    """Unit-mass scalar weight at ``x``; zero outside the open interval."""
    base = _base_key(base)
    a, b = interval
    h = 0.5 * (b - a)
    t = (x - 0.5 * (a + b)) / h
    if not -1.0 < t < 1.0:
        return 0.0
    if base == "chebyshev1":
        return 1.0 / (math.pi * h * math.sqrt(1 - t * t))
    if base == "chebyshev2":
        return 2.0 * math.sqrt(1 - t * t) / (math.pi * h)
    if base == "legendre":
        return 0.5 / h
    _, alpha, beta = base
    return (1 - t) ** alpha * (1 + t) ** beta * math.exp(-_jacobi_log_mass(alpha, beta)) / h


@lru_cache(maxsize=256)
def _reference_chebyshev_moments(base, mmax: int) -> tuple[float, ...]:
    """``int T_m(t) w(t) dt`` on ``[-1, 1]`` for the unit-mass base weight."""
    nu = np.zeros(mmax + 1)
    if base == "chebyshev1":
        nu[0] = 1.0
    elif base == "chebyshev2":
        nu[0] = 1.0
        if mmax >= 2:
            nu[2] = -0.5
    elif base == "legendre":
        m = np.arange(0, mmax + 1, 2)
        nu[::2] = 1.0 / (1.0 - m * m)
    else:
        _, alpha, beta = base
        const = math.exp(-_jacobi_log_mass(alpha, beta))
        for m in range(mmax + 1):
            nu[m] = const * oracle.integrate_scalar(
                lambda t, m=m: math.cos(m * math.acos(max(-1.0, min(1.0, t)))),
                (-1.0, 1.0), base, rel_tol=1e-12, abs_tol=1e-14,
            )
    return tuple(nu)


@lru_cache(maxsize=256)
def _reference_monomial_moments(base, kmax: int) -> tuple[float, ...]:
    """``int t^k w(t) dt`` on ``[-1, 1]`` for the unit-mass base weight."""
    mu = np.zeros(kmax + 1)
    for k in range(0, kmax + 1, 2):
        j = k // 2
        if base == "chebyshev1":
            mu[k] = math.comb(k, j) / 4.0**j
        elif base == "chebyshev2":
            mu[k] = math.comb(k, j) / (4.0**j * (j + 1))
        elif base == "legendre":
            mu[k] = 1.0 / (k + 1)
    if isinstance(base, tuple):
        _, alpha, beta = base
        const = math.exp(-_jacobi_log_mass(alpha, beta))
        for k in range(kmax + 1):
            mu[k] = const * oracle.integrate_scalar(
                lambda t, k=k: t**k, (-1.0, 1.0), base, rel_tol=1e-12, abs_tol=1e-14,
            )
    return tuple(mu)


def _scalar_moment(base, interval, k: int) -> float:
    """``int_a^b x^k w(x) dx`` via the binomial shift from ``[-1, 1]``."""
    a, b = interval
    c, h = 0.5 * (a + b), 0.5 * (b - a)
    mu = _reference_monomial_moments(base, k)
    return float(sum(math.comb(k, j) * c ** (k - j) * h**j * mu[j] for j in range(k + 1)))


@dataclass(frozen=True)
class WeightSpec:
    """``W(x) = sum_k C_k w_k(x)`` on the finite interval ``[a, b]``."""

    interval: tuple[float, float]
    terms: tuple[tuple[np.ndarray, object], ...]
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        a, b = (float(v) for v in self.interval)
        if not (math.isfinite(a) and math.isfinite(b) and a < b):
            raise ValueError(f"interval must be finite with a < b, got {self.interval!r}")
        if not self.terms:
            raise ValueError("weight needs at least one term")
        terms = []
        p = None
        for C, base in self.terms:
            C = matcore.as_matrix(C, copy=True)
            if p is None:
                p = C.shape[0]
            if C.shape != (p, p):
                raise ValueError("all term matrices must be p x p with a common p")
            if not matcore.is_psd(C):
                raise NotPSDError("term matrices must be symmetric PSD")
            C = matcore.symmetrize(C)
            C.setflags(write=False)
            terms.append((C, _base_key(base)))
        object.__setattr__(self, "interval", (a, b))
        object.__setattr__(self, "terms", tuple(terms))

    @property
    def p(self) -> int:
        return self.terms[0][0].shape[0]

    def __call__(self, x: float) -> np.ndarray:
        return sum(C * base_density(base, self.interval, x) for C, base in self.terms)

    def is_nondegenerate(self, samples: int = 7) -> bool:
        """``det W(x) != 0`` at interior sample points."""
        a, b = self.interval
        xs = a + (b - a) * (np.arange(1, samples + 1) / (samples + 1))
        return all(np.linalg.eigvalsh(self(x))[0] > 1e-14 * max(1.0, matcore.norm2(self(x)))
                   for x in xs)

    def congruence(self, S) -> "WeightSpec":
        """Weight ``S W(x) S^T``."""
        S = np.asarray(S, dtype=float)
        return WeightSpec(self.interval, tuple((matcore.symmetrize(S @ C @ S.T), base)
                                              for C, base in self.terms), self.name)

    def scaled(self, s: float) -> "WeightSpec":
        return WeightSpec(self.interval, tuple((s * C, base) for C, base in self.terms),
                          self.name)

    def to_dict(self) -> dict:
        def base_doc(base):
            return base if isinstance(base, str) else {"jacobi": [base[1], base[2]]}

        doc = {
            "interval": list(self.interval),
            "terms": [{"C": C.tolist(), "base": base_doc(base)} for C, base in self.terms],
        }
        if self.name:
            doc["name"] = self.name
        return doc

    @classmethod
    def from_dict(cls, doc: dict) -> "WeightSpec":
        terms = tuple((np.asarray(t["C"], dtype=float), t["base"]) for t in doc["terms"])
        return cls(tuple(doc["interval"]), terms, doc.get("name"))


def mixed_chebyshev_weight() -> WeightSpec:
    """``diag((1/pi)(1-x^2)^(-1/2), (2/pi)(1-x^2)^(1/2))`` on ``[-1, 1]``."""
    return WeightSpec(
        (-1.0, 1.0),
        ((np.diag([1.0, 0.0]), "chebyshev1"), (np.diag([0.0, 1.0]), "chebyshev2")),
        name="paper-chebyshev-mixed",
    )


BUILTIN_WEIGHTS = {
    "paper-chebyshev-mixed": mixed_chebyshev_weight,
    "chebyshev1": lambda: WeightSpec((-1.0, 1.0), ((np.eye(1), "chebyshev1"),), "chebyshev1"),
    "chebyshev2": lambda: WeightSpec((-1.0, 1.0), ((np.eye(1), "chebyshev2"),), "chebyshev2"),
    "legendre": lambda: WeightSpec((-1.0, 1.0), ((np.eye(1), "legendre"),), "legendre"),
}


def builtin_weight(name: str) -> WeightSpec:
    try:
        return BUILTIN_WEIGHTS[name]()
    except KeyError:
        raise KeyError(f"unknown built-in weight {name!r}; "
                       f"choose from {sorted(BUILTIN_WEIGHTS)}") from None


# ---------------------------------------------------------------------------
# moments and inner products


def moment(w: WeightSpec, k: int) -> np.ndarray:
    """``int_a^b x^k W(x) dx``."""
    if k < 0:
        raise ValueError("moment order must be nonnegative")
    return matcore.symmetrize(sum(C * _scalar_moment(base, w.interval, k) for C, base in w.terms))


def chebyshev_moments(w: WeightSpec, mmax: int) -> np.ndarray:
    """Modified moments ``int T_m(t(x)) W(x) dx`` for ``m = 0..mmax``, shape
    ``(mmax + 1, p, p)``."""
    out = np.zeros((mmax + 1, w.p, w.p))
    for C, base in w.terms:
        nu = np.asarray(_reference_chebyshev_moments(base, mmax))
        out += nu[:, None, None] * C
    return out


def normalize(w: WeightSpec) -> tuple[WeightSpec, np.ndarray]:
    """Congruence ``M0^{-1/2} W M0^{-1/2}`` giving unit zeroth moment.

    Returns the normalized weight and ``M0^{1/2}``.
    """
    M0 = moment(w, 0)
    try:
        S = matcore.spd_sqrt(M0)
        Sinv = matcore.spd_inv_sqrt(M0)
    except matcore.NotSPDError as exc:
        raise DegenerateWeightError(f"zeroth moment is singular: {exc}") from exc
    if np.allclose(M0, np.eye(w.p), rtol=0, atol=1e-14):
        return w, np.eye(w.p)
    return w.congruence(Sinv), S


def is_normalized(w: WeightSpec, atol: float = 1e-13) -> bool:
    return bool(np.allclose(moment(w, 0), np.eye(w.p), rtol=0, atol=atol))


def inner_product(P: MatrixPolynomial, Q: MatrixPolynomial, w: WeightSpec) -> np.ndarray:
    """``<P, Q> = int P W Q^T dx = sum_{j,k} A_j M_{j+k} B_k^T``."""
    if P.p != w.p or Q.p != w.p:
        raise ValueError("polynomial and weight sizes differ")
    out = np.zeros((w.p, w.p))
    if P.is_zero() or Q.is_zero():
        return out
    M = [moment(w, k) for k in range(P.degree + Q.degree + 1)]
    for j, A in enumerate(P.coeffs):
        for k, B in enumerate(Q.coeffs):
            out += A @ M[j + k] @ B.T
    return out


# ---------------------------------------------------------------------------
# Chebyshev-basis helpers for the Stieltjes loop


def _cheb_gram(nu: np.ndarray, size: int) -> np.ndarray:
    """``G[j, k] = int T_j T_k W = (nu_{j+k} + nu_{|j-k|}) / 2``."""
    j = np.arange(size)
    return 0.5 * (nu[j[:, None] + j[None, :]] + nu[np.abs(j[:, None] - j[None, :])])


def _cheb_ip(A: np.ndarray, B: np.ndarray, G: np.ndarray) -> np.ndarray:
    return np.einsum("jab,jkbc,kdc->ad", A, G[: A.shape[0], : B.shape[0]], B)


def _cheb_mul_x(A: np.ndarray, c: float, h: float) -> np.ndarray:
    """Coefficients of ``x P(x)`` where ``x = c + h t``."""
    out = np.zeros((A.shape[0] + 1,) + A.shape[1:])
    out[: A.shape[0]] += c * A
    out[1] += h * A[0]
    for k in range(1, A.shape[0]):
        out[k + 1] += 0.5 * h * A[k]
        out[k - 1] += 0.5 * h * A[k]
    return out


def _pad(A: np.ndarray, n: int) -> np.ndarray:
    if A.shape[0] >= n:
        return A
    out = np.zeros((n,) + A.shape[1:])
    out[: A.shape[0]] = A
    return out


# ---------------------------------------------------------------------------
# recurrence


@dataclass(frozen=True)
class Recurrence:
    """Recurrence coefficients ``E_0..E_{N-1}`` and ``D_1..D_N``.

    ``D[n - 1]`` holds ``D_n``.  ``weight`` is the normalized weight the
    family is orthonormal for; ``normalizer`` is ``M0^{1/2}`` of the weight
    originally supplied.
    """

    E: tuple[np.ndarray, ...]
    D: tuple[np.ndarray, ...]
    normalizer: np.ndarray
    weight: WeightSpec

    @property
    def p(self) -> int:
        return self.normalizer.shape[0]

    @property
    def N(self) -> int:
        return len(self.D)

    def Dn(self, n: int) -> np.ndarray:
        """``D_n`` for ``1 <= n <= N``."""
        if not 1 <= n <= self.N:
            raise IndexError(f"D_{n} not available (N = {self.N})")
        return self.D[n - 1]

    def evaluate_all(self, n: int, x: float) -> list[np.ndarray]:
        """``[P_0(x), ..., P_n(x)]`` by the forward recurrence."""
        if not 0 <= n <= self.N:
            raise IndexError(f"P_{n} not available (N = {self.N})")
        p = self.p
        out = [np.eye(p)]
        prev = np.zeros((p, p))
        for k in range(n):
            rhs = (x * out[k] - self.E[k] @ out[k]) - (self.D[k - 1] @ prev if k else 0.0)
            prev = out[k]
            out.append(np.linalg.solve(self.D[k], rhs))
        return out

    def polynomial(self, n: int) -> MatrixPolynomial:
        """``P_n`` as monomial coefficients."""
        return self.polynomials(n)[n]

    def polynomials(self, n: int) -> list[MatrixPolynomial]:
        if not 0 <= n <= self.N:
            raise IndexError(f"P_{n} not available (N = {self.N})")
        p = self.p
        out = [MatrixPolynomial.identity(p)]
        prev = MatrixPolynomial.zero(p)
        for k in range(n):
            rhs = out[k].shift_x() - self.E[k] @ out[k]
            if k:
                rhs = rhs - self.D[k - 1] @ prev
            prev = out[k]
            out.append(np.linalg.inv(self.D[k]) @ rhs)
        return out

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "N": self.N,
            "E": [e.tolist() for e in self.E],
            "D": [d.tolist() for d in self.D],
            "normalizer": self.normalizer.tolist(),
            "weight": self.weight.to_dict(),
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "Recurrence":
        return cls(
            tuple(np.asarray(e, dtype=float) for e in doc["E"]),
            tuple(np.asarray(d, dtype=float) for d in doc["D"]),
            np.asarray(doc["normalizer"], dtype=float),
            WeightSpec.from_dict(doc["weight"]),
        )


def stieltjes_recurrence(w: WeightSpec, N: int, spd_tol: float = 1e-13) -> Recurrence:
    """Block Stieltjes procedure for ``E_0..E_{N-1}``, ``D_1..D_N``.

    ``D_{n+1}`` is the SPD square root of ``<R_n, R_n>``, which both makes the
    ``D_n`` symmetric and fixes the left orthogonal factor of ``P_{n+1}``.
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    if N > SUPPORTED_N:
        warnings.warn(
            f"N = {N} exceeds the supported range N <= {SUPPORTED_N}; "
            "recurrence coefficients may be inaccurate", RuntimeWarning, stacklevel=2,
        )
    wn, S = normalize(w)
    a, b = wn.interval
    c, h = 0.5 * (a + b), 0.5 * (b - a)
    p = wn.p
    G = _cheb_gram(chebyshev_moments(wn, 2 * N + 2), N + 2)

    E: list[np.ndarray] = []
    D: list[np.ndarray] = []
    prev = np.zeros((1, p, p))
    cur = np.eye(p)[None]
    for n in range(N):
        xP = _cheb_mul_x(cur, c, h)
        En = matcore.symmetrize(_cheb_ip(xP, cur, G))
        R = xP - _pad(np.einsum("ab,kbc->kac", En, cur), xP.shape[0])
        if n:
            R -= _pad(np.einsum("ab,kbc->kac", D[-1], prev), xP.shape[0])
        gram = matcore.symmetrize(_cheb_ip(R, R, G))
        lam = np.linalg.eigvalsh(gram)
        if lam[0] <= spd_tol * max(1.0, h * h):
            raise RankDeficiencyError(
                n + 1, f"<R_{n}, R_{n}> has eigenvalue {lam[0]:.3e}; the weight "
                "cannot support an orthonormal family of this degree",
            )
        Dn1 = matcore.spd_sqrt(gram)
        E.append(En)
        D.append(Dn1)
        prev, cur = cur, np.einsum("ab,kbc->kac", np.linalg.inv(Dn1), R)
    return Recurrence(tuple(E), tuple(D), S, wn)


def eval_orthonormal(rec: Recurrence, n: int, x: float) -> np.ndarray:
    """``P_n(x)``."""
    return rec.evaluate_all(n, x)[n]


def kernel(rec: Recurrence, n: int, x: float, y: float) -> np.ndarray:
    """``K_n(x, y) = sum_{i<=n} P_i(y)^T P_i(x)``."""
    Px = rec.evaluate_all(n, x)
    Py = Px if y == x else rec.evaluate_all(n, y)
    return sum(b.T @ a for a, b in zip(Px, Py))


def kernel_polynomial(rec: Recurrence, n: int, y: float) -> MatrixPolynomial:
    """``x -> K_n(x, y)`` as a matrix polynomial in ``x``."""
    Py = rec.evaluate_all(n, y)
    polys = rec.polynomials(n)
    out = MatrixPolynomial.zero(rec.p)
    for Pi, Piy in zip(polys, Py):
        out = out + Piy.T @ Pi
    return out


def christoffel_darboux_residual(rec: Recurrence, n: int, x: float, y: float) -> float:
    """``||P_n(y)^T D P_{n+1}(x) - P_{n+1}(y)^T D P_n(x) - (x - y) K_n(x, y)||``
    with ``D = D_{n+1}``."""
    Px = rec.evaluate_all(n + 1, x)
    Py = rec.evaluate_all(n + 1, y)
    Dn1 = rec.Dn(n + 1)
    lhs = Py[n].T @ Dn1 @ Px[n + 1] - Py[n + 1].T @ Dn1 @ Px[n]
    rhs = (x - y) * sum(b.T @ a for a, b in zip(Px[: n + 1], Py[: n + 1]))
    return matcore.norm2(lhs - rhs)
