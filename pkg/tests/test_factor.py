import numpy as np
import pytest
from numpy.testing import assert_allclose

from data.generators import random_bdu_symbol
from src.exceptions import ConstantSymbolError, IllConditioned, UnsupportedSymbol
from src.factor import (
    bdu_crosscheck, bdu_factor, default_fit_degree, fit_through_blaschke, minimal_winding_property,
    power_factor, support_gcd, tc_inner_part,
)
from src.symbol_parser import symbol_from_text
from src.symbolcore import BlaschkeProduct, TaylorSymbol


def test_support_gcd(cardioid):
    assert support_gcd(TaylorSymbol.monomial(6)) == 6
    assert support_gcd(cardioid) == 1
    assert support_gcd(symbol_from_text('z^2+z^4')) == 2


def test_support_gcd_of_constant():
    with pytest.raises(ConstantSymbolError):
        support_gcd(TaylorSymbol.constant(2))


def test_bdu_factor_examples(cardioid):
    factorization = bdu_factor(symbol_from_text('z^2+z^4'))
    assert factorization.k == 2
    assert factorization.h.to_text() == 'z + z^2'
    assert factorization.residual < 1e-12

    assert bdu_factor(cardioid).k == 1
    assert_allclose(bdu_factor(cardioid).h.coeffs, cardioid.coeffs)

    six = bdu_factor(TaylorSymbol.monomial(6))
    assert six.k == 6
    assert six.h.to_text() == 'z'


def test_bdu_crosscheck_examples(cardioid):
    assert tuple(bdu_crosscheck(TaylorSymbol.monomial(6))) == (6, 6, True)
    assert tuple(bdu_crosscheck(cardioid)) == (1, 1, True)
    assert tuple(bdu_crosscheck(symbol_from_text('z^2*(1+0.25*z^2)'))) == (2, 2, True)


def test_bdu_randomized_suite(rng):
    for _ in range(50):
        s, k, q = random_bdu_symbol(rng)
        factorization = bdu_factor(s)
        assert factorization.k == k
        assert factorization.residual <= 1e-8
        assert support_gcd(factorization.h) == 1
        assert bdu_crosscheck(s).agree


def test_tc_inner_part(cardioid, halfshift):
    B = tc_inner_part(cardioid, -0.5)
    assert_allclose(B.zeros, [-0.5, -0.5], atol=1e-6)
    assert tc_inner_part(TaylorSymbol.monomial(3), 0).zeros == (0j, 0j, 0j)
    assert_allclose(tc_inner_part(halfshift, 0).zeros, [0], atol=1e-12)


def test_tc_inner_part_needs_a_polynomial():
    geometric = TaylorSymbol(0.5 ** np.arange(257))
    with pytest.raises(UnsupportedSymbol):
        tc_inner_part(geometric, 0)


def test_fit_through_powers_of_z(cardioid):
    z6 = TaylorSymbol.monomial(6)
    fit = fit_through_blaschke(z6, power_factor(6), 1)
    assert fit.residual < 1e-10
    assert_allclose(fit.h.coeffs, [0, 1], atol=1e-10)

    fit = fit_through_blaschke(z6, power_factor(3), 4)
    assert fit.residual < 1e-10
    assert_allclose(fit.h.coeffs, [0, 0, 1, 0, 0], atol=1e-10)

    assert fit_through_blaschke(cardioid, power_factor(2), 4).residual > 0.01


def test_fit_through_inner_part_reproduces_bdu_symbols(rng):
    for _ in range(10):
        s, k, q = random_bdu_symbol(rng, max_degree=3)
        B = tc_inner_part(s, 0)
        fit = fit_through_blaschke(s, B)
        assert B.order == k
        assert fit.residual <= 1e-6


def test_fit_through_zero_near_the_circle_is_ill_conditioned():
    with pytest.raises(IllConditioned):
        fit_through_blaschke(TaylorSymbol.identity(), BlaschkeProduct((0.999999,)), 4)


def test_fit_through_interior_zero_is_well_conditioned():
    B = BlaschkeProduct((0.5,))
    fit = fit_through_blaschke(symbol_from_text('blaschke[0.5]'), B, 2)
    assert fit.residual < 1e-8
    assert_allclose(fit.h.coeffs, [0, 1, 0], atol=1e-8)


def test_default_fit_degree():
    assert default_fit_degree(TaylorSymbol.monomial(6), power_factor(3)) == 4
    assert default_fit_degree(TaylorSymbol.monomial(5), BlaschkeProduct((0.5, 0.1))) == 5


def test_minimal_winding_property():
    s = symbol_from_text('z^2+z^4')
    assert minimal_winding_property(s, power_factor(2)).holds
    assert not minimal_winding_property(s, power_factor(4)).holds
