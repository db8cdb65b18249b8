"""Brute-force adaptive integration used as an independent reference.

Nothing here touches the moment or recurrence code: weights are read only
through their ``interval`` and ``terms`` data, and every base-weight density
is re-derived locally.  Integration is adaptive Gauss-Kronrod (QUADPACK via
``scipy.integrate.quad``).  Endpoint singularities are removed before
integrating:

* ``"invsqrt"`` -- factor ``(1 - t^2)^(-1/2)``, substitution ``t = cos(theta)``
* ``"sqrt"``    -- factor ``(1 - t^2)^(1/2)``, same substitution
* ``("jacobi", alpha, beta)`` -- factor ``(1 - t)^alpha (1 + t)^beta``,
  handled by QUADPACK's algebraic-weight routine

where ``t`` is ``x`` mapped affinely from ``[a, b]`` onto ``[-1, 1]``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy import integrate

from .errors import OracleError

DEFAULT_REL_TOL = 1e-11


def _parse_tag(tag):
    if tag is None or tag == "none":
        return None
    if tag in ("invsqrt", "sqrt"):
        return tag
    if isinstance(tag, (tuple, list)) and len(tag) == 3 and tag[0] == "jacobi":
        return ("jacobi", float(tag[1]), float(tag[2]))
    raise ValueError(f"unknown endpoint tag {tag!r}")


def integrate_scalar(
    f: Callable[[float], float],
    interval: Sequence[float],
    endpoint_tag=None,
    rel_tol: float = DEFAULT_REL_TOL,
    abs_tol: float = 1e-14,
    points: Sequence[float] = (),
    limit: int = 400,
) -> float:
    """``int_a^b f(x) w(t(x)) dx`` where ``w`` is the factor named by the tag.

    Raises :class:`OracleError` when QUADPACK's error estimate exceeds
    ``max(rel_tol * |result|, abs_tol)``.
    """
    a, b = float(interval[0]), float(interval[1])
    if not (np.isfinite(a) and np.isfinite(b) and a < b):
        raise ValueError(f"need a finite interval a < b, got {interval!r}")
    c, h = 0.5 * (a + b), 0.5 * (b - a)
    tag = _parse_tag(endpoint_tag)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        if tag is None:
            pts = [x for x in points if a < x < b] or None
            val, err = integrate.quad(f, a, b, epsabs=abs_tol, epsrel=rel_tol,
                                      limit=limit, points=pts)
        elif tag in ("invsqrt", "sqrt"):
            # x = c + h cos(theta); dx = -h sin(theta) dtheta
            if tag == "invsqrt":
                def g(th):
                    return h * f(c + h * math.cos(th))
            else:
                def g(th):
                    s = math.sin(th)
                    return h * s * s * f(c + h * math.cos(th))
            pts = [math.acos((x - c) / h) for x in points if a < x < b] or None
            val, err = integrate.quad(g, 0.0, math.pi, epsabs=abs_tol, epsrel=rel_tol,
                                      limit=limit, points=pts)
        else:
            _, alpha, beta = tag
            # (1-t)^alpha (1+t)^beta = h^-(alpha+beta) (x-a)^beta (b-x)^alpha
            val, err = integrate.quad(f, a, b, weight="alg", wvar=(beta, alpha),
                                      epsabs=abs_tol, epsrel=rel_tol, limit=limit)
            scale = h ** (-(alpha + beta))
            val, err = val * scale, err * scale
    # QUADPACK's estimate is pessimistic; allow one decade of slack
    if not np.isfinite(val) or err > max(rel_tol * abs(val), abs_tol) * 10.0:
        raise OracleError(
            f"integration did not converge: estimate {val!r}, error {err:.3e}",
            estimate=val, abserr=err,
        )
    return float(val)


# ---------------------------------------------------------------------------
# matrix integrands


@dataclass
class IntegrandSpec:
    """``sum_k g_k(x) * w_k(t(x))`` over ``[a, b]``.

    Each term pairs a matrix-valued function ``g_k`` (finite on the open
    interval) with the endpoint tag of its singular factor.
    """

    interval: tuple[float, float]
    terms: list[tuple[Callable[[float], np.ndarray], object]]
    points: tuple[float, ...] = field(default_factory=tuple)
    symmetric: bool = False


def integrate_matrix(spec: IntegrandSpec, rel_tol: float = DEFAULT_REL_TOL) -> np.ndarray:
    """Entrywise adaptive integration of a matrix integrand."""
    total = None
    for g, tag in spec.terms:
        cached = lru_cache(maxsize=4096)(lambda x, g=g: np.asarray(g(x), dtype=float))
        shape = cached(0.5 * (spec.interval[0] + spec.interval[1])).shape
        out = np.zeros(shape)
        for idx in np.ndindex(*shape):
            val = integrate_scalar(
                lambda x, idx=idx: cached(float(x))[idx], spec.interval, tag,
                rel_tol=rel_tol, points=spec.points,
            )
            out[idx] = val
        total = out if total is None else total + out
    if total is None:
        raise ValueError("integrand has no terms")
    if spec.symmetric:
        asym = np.max(np.abs(total - total.T), initial=0.0)
        if asym > 1e3 * rel_tol * max(1.0, np.max(np.abs(total))):
            raise OracleError(f"symmetric integrand gave asymmetry {asym:.3e}")
        total = 0.5 * (total + total.T)
    return total


# ---------------------------------------------------------------------------
# base weights, normalized to unit mass on [a, b]


def _base_factor(base, h: float):
    """``(tag, constant)`` such that the normalized base weight is
    ``constant * w_tag(t)``."""
    if base == "chebyshev1":
        return "invsqrt", 1.0 / (math.pi * h)
    if base == "chebyshev2":
        return "sqrt", 2.0 / (math.pi * h)
    if base == "legendre":
        return None, 1.0 / (2.0 * h)
    if isinstance(base, dict) and "jacobi" in base:
        base = ("jacobi", *base["jacobi"])
    if isinstance(base, (tuple, list)) and base[0] == "jacobi":
        alpha, beta = float(base[1]), float(base[2])
        log_mass = ((alpha + beta + 1) * math.log(2.0) + math.lgamma(alpha + 1)
                    + math.lgamma(beta + 1) - math.lgamma(alpha + beta + 2))
        return ("jacobi", alpha, beta), math.exp(-log_mass) / h
    raise ValueError(f"unknown base weight {base!r}")


def weighted_integrand(F, G, weight, points: Sequence[float] = ()) -> IntegrandSpec:
    """Integrand ``F(x) W(x) G(x)^T`` for a weight with ``interval`` and
    ``terms`` of ``(C, base)``.  ``F``/``G`` may be ``None`` (identity)."""
    a, b = weight.interval
    h = 0.5 * (b - a)
    terms = []
    for C, base in weight.terms:
        tag, const = _base_factor(base, h)
        C = np.asarray(C, dtype=float) * const

        def g(x, C=C):
            fx = np.eye(C.shape[0]) if F is None else np.asarray(F(x), dtype=float)
            gx = np.eye(C.shape[0]) if G is None else np.asarray(G(x), dtype=float)
            return fx @ C @ gx.T

        terms.append((g, tag))
    return IntegrandSpec((a, b), terms, tuple(points), symmetric=F is G)


def integrate_weighted(F, G, weight, rel_tol: float = DEFAULT_REL_TOL,
                       points: Sequence[float] = ()) -> np.ndarray:
    """Reference value of ``int_a^b F W G^T dx``."""
    return integrate_matrix(weighted_integrand(F, G, weight, points), rel_tol)
