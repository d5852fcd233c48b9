"""
Seeded random symbols for the test-suite.

Every generator takes a ``numpy.random.Generator`` so that suites are
reproducible from one seed.
"""

import numpy as np

from src.symbolcore import DEFAULT_ORDER, BlaschkeProduct, TaylorSymbol


def _complex_normal(rng, size):
    return rng.standard_normal(size) + 1j * rng.standard_normal(size)


def random_polynomial(rng, degree, order=DEFAULT_ORDER, scale=1.0):
    """Polynomial with complex Gaussian coefficients"""
    coeffs = scale * _complex_normal(rng, degree + 1)
    return TaylorSymbol.from_coeffs(coeffs, order, label=f"random[{degree}]")


def random_univalent_polynomial(rng, degree, order=DEFAULT_ORDER):
    """q with |c_1| > sum_{j>=2} j |c_j|, hence univalent on the closed disk"""
    c1 = np.exp(2j * np.pi * rng.random()) * rng.uniform(0.5, 2.0)
    coeffs = np.zeros(degree + 1, dtype=complex)
    coeffs[0] = complex(rng.standard_normal(), rng.standard_normal())
    coeffs[1] = c1
    if degree >= 2:
        weights = rng.uniform(0.1, 1.0, degree - 1)
        j = np.arange(2, degree + 1)
        budget = rng.uniform(0.2, 0.6) * abs(c1)
        moduli = weights * budget / np.sum(j * weights)
        coeffs[2:] = moduli * np.exp(2j * np.pi * rng.random(degree - 1))
    return TaylorSymbol.from_coeffs(coeffs, order, label=f"univalent[{degree}]")


def random_bdu_symbol(rng, max_k=5, max_degree=4, order=DEFAULT_ORDER):
    """(phi, k, q) with phi(z) = q(z^k), q univalent"""
    k = int(rng.integers(1, max_k + 1))
    degree = int(rng.integers(1, max_degree + 1))
    q = random_univalent_polynomial(rng, degree, max(order // k, degree))
    coeffs = np.zeros(order + 1, dtype=complex)
    coeffs[:k * degree + 1:k] = q.coeffs[:degree + 1]
    return TaylorSymbol(coeffs, f"q(z^{k})"), k, q


def random_blaschke(rng, max_order=5, max_modulus=0.9):
    """Finite Blaschke product with 1..max_order zeros of modulus <= max_modulus"""
    order = int(rng.integers(1, max_order + 1))
    moduli = rng.uniform(0, max_modulus, order)
    zeros = moduli * np.exp(2j * np.pi * rng.random(order))
    return BlaschkeProduct(tuple(complex(a) for a in zeros))


def geometric_symbol(ratio=0.5, order=DEFAULT_ORDER):
    """sum ratio^k z^k, i.e. 1/(1 - ratio z) truncated"""
    return TaylorSymbol(ratio ** np.arange(order + 1), f"geometric[{ratio}]")
