"""Gaussian quadrature for matrix weights.

``int F W G^T dx ~ sum_i F(x_i) Lambda_i G(x_i)^T`` with nodes the zeros of
``P_n`` and ``Lambda_i = V_i L_i^{-1} V_i^T``, ``L_i = V_i^T K_{n-1}(x_i, x_i) V_i``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import matcore, oracle
from .errors import KernelDegeneracyError, NotPSDError
from .matpoly import MatrixPolynomial, monic_from_jordan_pair
from .orthopoly import Recurrence, WeightSpec, kernel, moment, stieltjes_recurrence
from .rootfind import SpectralData, zeros_and_rootvectors

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weight matrices for the normalized weight.

    ``denormalizer`` is ``M0^{1/2}`` of the weight the rule was requested
    for; :func:`apply` folds it into ``F`` and ``G``.
    """

    n: int
    nodes: tuple[float, ...]
    weights: tuple[np.ndarray, ...]
    weight_id: str = "custom"
    denormalizer: np.ndarray | None = None

    @property
    def p(self) -> int:
        return self.weights[0].shape[0]

    def effective_weights(self) -> list[np.ndarray]:
        """``S Lambda_i S`` with ``S`` the denormalizer (or ``Lambda_i``)."""
        S = self.denormalizer
        if S is None:
            return list(self.weights)
        return [matcore.symmetrize(S @ L @ S) for L in self.weights]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "nodes": list(self.nodes),
            "weights": [L.tolist() for L in self.weights],
            "weight_id": self.weight_id,
            "denormalizer": None if self.denormalizer is None else self.denormalizer.tolist(),
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "QuadratureRule":
        S = doc.get("denormalizer")
        return cls(
            int(doc["n"]),
            tuple(float(x) for x in doc["nodes"]),
            tuple(np.asarray(L, dtype=float) for L in doc["weights"]),
            str(doc.get("weight_id", "custom")),
            None if S is None else np.asarray(S, dtype=float),
        )


def gauss_rule(rec: Recurrence, spec: SpectralData, weight_id: str | None = None) -> QuadratureRule:
    """Rule from the zeros and rootvectors of ``P_n``."""
    n = spec.n
    weights = []
    for x0, V in zip(spec.nodes, spec.rootvecs):
        L = matcore.symmetrize(V.T @ kernel(rec, n - 1, x0, x0) @ V)
        lam = np.linalg.eigvalsh(L)
        if lam[0] <= 1e-12 * max(1.0, lam[-1]):
            raise KernelDegeneracyError(
                f"L at node {x0!r} has eigenvalue {lam[0]:.3e}; not positive definite"
            )
        weights.append(matcore.symmetrize(V @ np.linalg.solve(L, V.T)))
    S = rec.normalizer
    denorm = None if np.array_equal(S, np.eye(rec.p)) else S
    return QuadratureRule(n, tuple(spec.nodes), tuple(weights),
                          weight_id or rec.weight.name or "custom", denorm)


def rule_for_weight(w: WeightSpec, n: int, rec: Recurrence | None = None) -> QuadratureRule:
    """Recurrence, zeros and rule in one call."""
    if rec is None or rec.N < n:
        rec = stieltjes_recurrence(w, n)
    return gauss_rule(rec, zeros_and_rootvectors(rec, n), w.name or None)


def node_polynomial(rec: Recurrence, spec: SpectralData) -> MatrixPolynomial:
    """Monic degree-``n`` polynomial vanishing on the rule's nodes and
    rootvectors, for the weight as originally supplied.

    Rootvectors of that weight's family are ``M0^{1/2} V_i``.  Any rule of
    this type integrates ``Q W Q^T`` to zero, so it is the witness that
    degree ``2n`` is out of reach.
    """
    S = rec.normalizer
    pair = spec.with_rootvectors([S @ V for V in spec.rootvecs]).pair
    return monic_from_jordan_pair(pair, spec.n)


def _as_function(F, p: int) -> Callable[[float], np.ndarray]:
    if F is None:
        return lambda x: np.eye(p)
    if isinstance(F, MatrixPolynomial) or callable(F):
        return F
    A = matcore.as_matrix(F)
    return lambda x: A


def apply(rule: QuadratureRule, F, G=None) -> np.ndarray:
    """``sum_i F(x_i) Lambda_i G(x_i)^T``; ``G`` defaults to ``F``.

    ``F``/``G`` are callables, matrix polynomials, constant matrices or
    ``None`` (identity).
    """
    p = rule.p
    f = _as_function(F, p)
    g = f if G is None else _as_function(G, p)
    total = np.zeros((p, p))
    for x0, L in zip(rule.nodes, rule.effective_weights()):
        fx = np.asarray(f(x0), dtype=float)
        gx = fx if g is f else np.asarray(g(x0), dtype=float)
        if fx.shape != (p, p) or gx.shape != (p, p):
            raise ValueError(f"integrand values must be {p}x{p}, got {fx.shape} and {gx.shape}")
        total += fx @ L @ gx.T
    return total


def precision_residuals(rule: QuadratureRule, w: WeightSpec, l_max: int) -> list[float]:
    """``||moment(w, l) - sum_i x_i^l Lambda_i||_2 / max(1, ||moment(w, l)||_2)``
    for ``l = 0..l_max``."""
    Ls = rule.effective_weights()
    out = []
    for l in range(l_max + 1):
        M = moment(w, l)
        approx = sum(x0**l * L for x0, L in zip(rule.nodes, Ls))
        out.append(matcore.norm2(M - approx) / max(1.0, matcore.norm2(M)))
    return out


def degree_of_precision(rule: QuadratureRule, w: WeightSpec, l_max: int | None = None,
                        tol: float = 1e-8) -> int:
    """Largest ``m`` with all scaled moment residuals ``l <= m`` within ``tol``.

    Returns ``-1`` if even the zeroth moment fails.  ``l_max`` defaults to
    ``2n``; the residual at ``m + 1`` is logged.
    """
    if l_max is None:
        l_max = 2 * rule.n
    res = precision_residuals(rule, w, l_max)
    m = -1
    for r in res:
        if r > tol:
            break
        m += 1
    if m < l_max:
        log.info("degree of precision %d; residual at %d is %.3e", m, m + 1, res[m + 1])
    return m


def convergence_scan(w: WeightSpec, F, G, n_list: Sequence[int],
                     rel_tol: float = oracle.DEFAULT_REL_TOL) -> list[tuple[int, float]]:
    """``[(n, ||apply(rule_n, F, G) - oracle||_2), ...]``."""
    n_list = list(n_list)
    if not n_list or min(n_list) < 1:
        raise ValueError("n_list must hold positive degrees")
    p = w.p
    f, g = _as_function(F, p), _as_function(G, p)
    ref = oracle.integrate_weighted(f, g, w, rel_tol=rel_tol)
    rec = stieltjes_recurrence(w, max(n_list))
    out = []
    for n in n_list:
        rule = gauss_rule(rec, zeros_and_rootvectors(rec, n))
        out.append((n, matcore.norm2(apply(rule, f, g) - ref)))
    return out


def psd_norm_check(mats: Sequence, rtol: float = 1e-12) -> bool:
    """``sum ||A_i||_2 <= p ||sum A_i||_2`` for PSD ``A_i``."""
    mats = [matcore.as_matrix(A) for A in mats]
    if not mats:
        raise ValueError("need at least one matrix")
    for k, A in enumerate(mats):
        if not matcore.is_psd(A):
            raise NotPSDError(f"matrix {k} is not symmetric positive semidefinite")
    p = mats[0].shape[0]
    lhs = sum(matcore.norm2(A) for A in mats)
    rhs = p * matcore.norm2(sum(mats))
    return lhs <= rhs * (1.0 + rtol) + 1e-300
