import numpy as np
import pytest
from numpy.testing import assert_allclose

from data.generators import random_blaschke
from src.exceptions import CompositionDomainError, ResolutionError
from src.symbol_parser import parse_symbol, symbol_from_text
from src.symbolcore import (
    BlaschkeProduct, TaylorSymbol, blaschke_to_taylor, evaluate, format_complex, lower,
)


def test_lower_binomial_expansion():
    s = symbol_from_text('(z+0.5)^2', 4)
    assert_allclose(s.coeffs, [0.25, 1, 1, 0, 0], atol=1e-15)
    assert s.order == 4


def test_lower_monomial():
    s = symbol_from_text('z^6', 8)
    expected = np.zeros(9)
    expected[6] = 1
    assert np.array_equal(s.coeffs, expected)


def test_lower_composition_matches_direct_expansion():
    s = symbol_from_text('compose(z^2, z^3)', 8)
    assert abs(s.coeffs[6] - 1) <= 1e-9
    others = np.delete(s.coeffs, 6)
    assert np.max(np.abs(others)) <= 1e-9


def test_composition_rejects_inner_map_leaving_the_disk():
    with pytest.raises(CompositionDomainError):
        symbol_from_text('compose(z^2, 2*z)', 16)


def test_lowering_agrees_with_tree_evaluation(rng):
    texts = ['(z+0.5)^2', 'z^3 - 0.25*z + 1i', 'compose(z^2+0.1, blaschke[0.5])',
             '(1+2i)*blaschke[0, -0.3+0.2i] - z']
    points = 0.9 * np.sqrt(rng.random(100)) * np.exp(2j * np.pi * rng.random(100))
    for text in texts:
        expr = parse_symbol(text)
        s = lower(expr, 256)
        assert_allclose(s.eval(points), evaluate(expr, points), atol=1e-8)


def test_lowering_is_linear():
    left, right = parse_symbol('z^2 + 0.5'), parse_symbol('(z-0.25)^3')
    total = lower(parse_symbol('(z^2 + 0.5) + (z-0.25)^3'), 32)
    assert_allclose(total.coeffs, (lower(left, 32) + lower(right, 32)).coeffs, atol=1e-12)


def test_eval_examples(cardioid):
    assert cardioid.eval(0) == pytest.approx(0.25)
    assert abs(cardioid.eval(-0.5)) == 0
    assert TaylorSymbol.identity().eval(0.3 + 0.4j) == pytest.approx(0.3 + 0.4j)


def test_eval_circle_small_grids():
    assert_allclose(TaylorSymbol.identity(2).eval_circle(4), [1, 1j, -1, -1j], atol=1e-15)
    assert_allclose(TaylorSymbol.monomial(2, 2).eval_circle(4), [1, -1, 1, -1], atol=1e-15)


def test_eval_circle_matches_horner(cardioid, rng):
    values = cardioid.eval_circle(4096)
    index = rng.integers(0, 4096, 16)
    nodes = np.exp(2j * np.pi * index / 4096)
    assert_allclose(values[index], cardioid.eval(nodes), rtol=1e-12, atol=1e-12)


def test_eval_circle_needs_twice_the_order(cardioid):
    with pytest.raises(ResolutionError):
        cardioid.eval_circle(256)


def test_derivative():
    d = TaylorSymbol.from_coeffs([0.25, 1, 1]).derivative()
    assert_allclose(d.coeffs, [1, 2])
    assert TaylorSymbol.constant(3, 8).derivative().is_constant()
    assert np.count_nonzero(TaylorSymbol.constant(3, 8).derivative().coeffs) == 0
    six = TaylorSymbol.monomial(6, 8).derivative()
    assert six.order == 7
    assert six.coeffs[5] == 6 and np.count_nonzero(six.coeffs) == 1


def test_derivative_undoes_antiderivative(rng):
    s = TaylorSymbol(rng.standard_normal(17) + 1j * rng.standard_normal(17))
    assert_allclose(s.antiderivative().derivative().coeffs[:s.order], s.coeffs[:s.order], atol=1e-14)


def test_arithmetic():
    z = TaylorSymbol.identity(8)
    assert_allclose(((z + 0.5) ** 2).coeffs[:3], [0.25, 1, 1])
    assert_allclose((z * z - 1).coeffs[:3], [-1, 0, 1])
    assert_allclose((2 * z).coeffs[1], 2)
    assert (z ** 0).is_constant()


def test_blaschke_to_taylor_powers_of_z():
    assert np.array_equal(blaschke_to_taylor(BlaschkeProduct((0,)), 4).coeffs, [0, 1, 0, 0, 0])
    assert np.array_equal(blaschke_to_taylor(BlaschkeProduct((0, 0)), 4).coeffs, [0, 0, 1, 0, 0])


def test_blaschke_series_is_unimodular_on_the_circle():
    s = blaschke_to_taylor(BlaschkeProduct((0.5,)), 64)
    assert np.max(np.abs(np.abs(s.eval_circle(256)) - 1)) <= 1e-10


def test_blaschke_product_vanishes_at_zeros_and_is_unimodular(rng):
    nodes = np.exp(2j * np.pi * np.arange(1024) / 1024)
    for _ in range(20):
        B = random_blaschke(rng)
        assert np.max(np.abs(np.abs(B.eval(nodes)) - 1)) <= 1e-10
        for a in B.zeros:
            assert B.eval(a) == 0


def test_blaschke_product_rejects_zero_outside_disk():
    with pytest.raises(ValueError):
        BlaschkeProduct((1.2,))


def test_to_text_and_json():
    s = symbol_from_text('0.5 + z^2 - 2i*z^3', 8)
    assert s.to_text() == '0.5 + z^2 + (-2i)*z^3'
    restored = TaylorSymbol.from_dict(s.to_dict())
    assert np.array_equal(restored.coeffs, s.coeffs)
    assert restored.label == s.label


def test_format_complex():
    assert format_complex(0.5) == '0.5'
    assert format_complex(2j) == '2i'
    assert format_complex(1 - 0.25j) == '1-0.25i'
