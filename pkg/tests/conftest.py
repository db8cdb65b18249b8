import math

import numpy as np
import pytest

from matquad import orthopoly, rootfind
from matquad.matpoly import MatrixPolynomial

SQ2 = math.sqrt(2.0)

# worked example, listed in the order x1 = 1/sqrt2, x2 = -1/sqrt2, x3 = 1/2, x4 = -1/2
EXAMPLE_NODES = (1 / SQ2, -1 / SQ2, 0.5, -0.5)
EXAMPLE_VECTORS = (
    np.array([1.0, 0.0]),
    np.array([4.0, 0.0]),
    np.array([0.0, 3.0]),
    np.array([0.0, -2.0]),
)

# F = [[2x+5, 6x], [7, 4x-3]]
F_LINEAR = MatrixPolynomial([[[5, 0], [7, -3]], [[2, 6], [0, 4]]])
# F = [[x^2+1, 6x], [7x+1, 5x^2-1]]
F_QUADRATIC = MatrixPolynomial([[[1, 0], [1, -1]], [[0, 6], [7, 0]], [[1, 0], [0, 5]]])

JACOBI_PARAMS = ((0.5, -0.5), (1.5, 0.25), (-0.3, 0.7))


def example_order(spec):
    """Permutation taking ascending node order to the worked-example order."""
    return [int(np.argmin([abs(x - y) for x in spec.nodes])) for y in EXAMPLE_NODES]


def random_psd(rng, p, rank=None):
    rank = p if rank is None else rank
    B = rng.standard_normal((p, rank))
    return B @ B.T


def random_weight(rng, p, allow_jacobi=True, decoupled=None, interval=None):
    """Seeded random weight.

    A decoupled weight ``S (I_p w) S^T`` has every zero of multiplicity
    ``p``; otherwise a sum of two or three random PSD terms.
    """
    a = float(rng.uniform(-2.0, 1.0))
    b = a + float(rng.uniform(0.5, 3.0))
    if interval is not None:
        a, b = interval
    bases = ["chebyshev1", "chebyshev2", "legendre"]
    if allow_jacobi:
        bases += [("jacobi",) + JACOBI_PARAMS[k] for k in range(len(JACOBI_PARAMS))]
    if decoupled is None:
        decoupled = rng.uniform() < 0.2
    if decoupled:
        base = bases[rng.integers(len(bases))]
        S = rng.standard_normal((p, p)) + 2 * np.eye(p)
        return orthopoly.WeightSpec((a, b), ((S @ S.T, base),))
    nterms = int(rng.integers(2, 4))
    terms = []
    for k in range(nterms):
        rank = p if k == 0 else int(rng.integers(1, p + 1))
        terms.append((random_psd(rng, p, rank), bases[rng.integers(len(bases))]))
    return orthopoly.WeightSpec((a, b), tuple(terms))


def random_poly(rng, p, deg):
    return MatrixPolynomial(rng.standard_normal((deg + 1, p, p)))


@pytest.fixture(scope="session")
def example_w():
    return orthopoly.mixed_chebyshev_weight()


@pytest.fixture(scope="session")
def example_rec(example_w):
    return orthopoly.stieltjes_recurrence(example_w, 12)


@pytest.fixture(scope="session")
def example_spec2(example_rec):
    return rootfind.zeros_and_rootvectors(example_rec, 2)


@pytest.fixture(scope="session")
def example_spec2_scaled(example_spec2):
    """n = 2 spectral data carrying the example's hand-scaled rootvectors."""
    order = example_order(example_spec2)
    vecs = [None] * 4
    for k, i in enumerate(order):
        vecs[i] = EXAMPLE_VECTORS[k]
    return example_spec2.with_rootvectors(vecs)
