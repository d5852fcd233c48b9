"""
Factorizations phi = h(z^k) and phi = h(B).

The exponent k is read off the coefficient support (gcd of the indices)
and cross-checked against the least nonzero winding of the boundary
curve. For inner factors B the module extracts the Blaschke part of
phi - phi(lambda) from polynomial roots and fits h by least squares on
the unit circle.
"""

import logging
import math
from dataclasses import dataclass
from functools import reduce

import numpy as np
import scipy.linalg

from .curvegeom import interior_roots, minimal_winding, winding_profile
from .exceptions import BoundaryZeroError, ConstantSymbolError, IllConditioned, UnsupportedSymbol
from .symbolcore import NOISE_FLOOR, BlaschkeProduct, TaylorSymbol

logger = logging.getLogger(__name__)

RESIDUAL_NODES = 4096
CROSSCHECK_GRID = 24
BOUNDARY_BAND = 1e-8
CONDITION_CAP = 1e12


def _unit_nodes(M=RESIDUAL_NODES):
    return np.exp(2j * np.pi * np.arange(M) / M)


@dataclass(frozen=True)
class BDUFactorization:
    k: int
    h: TaylorSymbol
    residual: float

    def to_dict(self):
        return {'k': self.k, 'h': self.h.to_dict(), 'residual': self.residual}


@dataclass(frozen=True)
class TCFactorization:
    B: BlaschkeProduct
    h: TaylorSymbol
    residual: float

    def to_dict(self):
        return {'B': self.B.to_dict(), 'h': self.h.to_dict(), 'residual': self.residual}


def support_gcd(s, tol=NOISE_FLOOR):
    """gcd of the indices j >= 1 carrying a coefficient above ``tol``"""
    support = [int(j) for j in s.support(tol) if j >= 1]
    if not support:
        raise ConstantSymbolError(f"symbol {s.label!r} is constant above the noise floor")
    return reduce(math.gcd, support)


def bdu_factor(s, tol=NOISE_FLOOR):
    """phi(z) = h(z^k) with k maximal; h_j = c_{jk}"""
    k = support_gcd(s, tol)
    h = TaylorSymbol.from_coeffs(s.coeffs[::k], max(s.order // k, 1), label=f"h[{s.label}]" if s.label else '')

    values = s.eval_circle(max(RESIDUAL_NODES, 2 * s.order))
    M = values.size
    # h(z^k) at node j equals h at node jk mod M
    h_values = h.eval(_unit_nodes(M) ** k)
    residual = float(np.max(np.abs(values - h_values)))
    logger.debug("bdu factor of %r: k=%d residual=%.3g", s.label, k, residual)
    return BDUFactorization(k, h, residual)


@dataclass(frozen=True)
class BDUCrosscheck:
    k_gcd: int
    k_wind: int

    @property
    def agree(self):
        return self.k_gcd == self.k_wind

    def __iter__(self):
        return iter((self.k_gcd, self.k_wind, self.agree))

    def to_dict(self):
        return {'k_gcd': self.k_gcd, 'k_wind': self.k_wind, 'agree': self.agree}


def bdu_crosscheck(s, K=CROSSCHECK_GRID, profile=None, M=RESIDUAL_NODES):
    """Algebraic k (support gcd) against geometric k (least nonzero winding)"""
    k_gcd = support_gcd(s)
    if profile is None:
        profile = winding_profile(s, K, M)
    k_wind = minimal_winding(profile)
    if k_gcd != k_wind:
        logger.debug("k mismatch for %r: gcd %d, winding %d", s.label, k_gcd, k_wind)
    return BDUCrosscheck(k_gcd, k_wind)


def tc_inner_part(s, lam):
    """Finite Blaschke product carrying the zeros of phi - phi(lambda) in the disk"""
    if not s.is_polynomial():
        raise UnsupportedSymbol(f"symbol {s.label!r} is not a polynomial at order {s.order}")
    if s.is_constant():
        raise ConstantSymbolError(f"symbol {s.label!r} is constant")
    target = complex(s.eval(lam))
    coeffs = np.array(s.coeffs[:s.degree() + 1], dtype=complex)
    coeffs[0] -= target
    roots = np.roots(coeffs[::-1])
    near = roots[np.abs(np.abs(roots) - 1) <= BOUNDARY_BAND]
    if near.size:
        raise BoundaryZeroError(f"phi - phi({lam}) has a zero at {near[0]} on the unit circle")
    zeros = interior_roots(s, target)
    return BlaschkeProduct(tuple(complex(a) for a in zeros))


def default_fit_degree(s, B):
    return math.ceil(s.degree() / max(B.order, 1)) + 2


def fit_through_blaschke(s, B, d=None):
    """Least-squares h of degree <= d minimizing phi - h(B) on the unit circle"""
    if d is None:
        d = default_fit_degree(s, B)
    if d < 1:
        raise ValueError(f"fit degree must be positive, got {d}")

    values = s.eval_circle(max(RESIDUAL_NODES, 2 * s.order))
    b = B.eval(_unit_nodes(values.size))
    design = np.vander(b, d + 1, increasing=True)

    Q, R = scipy.linalg.qr(design, mode='economic')
    # normal equations: cond(R^H R) = cond(R)^2
    condition = np.linalg.cond(R) ** 2
    if not np.isfinite(condition) or condition > CONDITION_CAP:
        raise IllConditioned(f"fit through a Blaschke product of order {B.order} has condition {condition:.3g}")
    coeffs = scipy.linalg.solve_triangular(R, Q.conj().T @ values)

    residual = float(np.max(np.abs(values - design @ coeffs)))
    h = TaylorSymbol.from_coeffs(coeffs, max(d, 1), label=f"h[{s.label}]" if s.label else '')
    logger.debug("fit of %r through order-%d Blaschke product: residual %.3g", s.label, B.order, residual)
    return TCFactorization(B, h, residual)


@dataclass(frozen=True)
class MinimalWindingReport:
    k: int
    b: int

    @property
    def holds(self):
        return self.k == self.b

    def to_dict(self):
        return {'k': self.k, 'order_B': self.b, 'holds': self.holds}


def minimal_winding_property(s, B, profile=None, K=CROSSCHECK_GRID, M=RESIDUAL_NODES):
    """Compare k(phi) with the order of a candidate inner factor"""
    if profile is None:
        profile = winding_profile(s, K, M)
    return MinimalWindingReport(minimal_winding(profile), B.order)


def power_factor(k):
    """The inner factor z^k as a Blaschke product"""
    return BlaschkeProduct((0j,) * k)
