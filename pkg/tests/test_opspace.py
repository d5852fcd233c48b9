import numpy as np
import pytest
from numpy.testing import assert_allclose

from data.generators import geometric_symbol, random_blaschke, random_polynomial
from src.exceptions import DimensionCap, NotACommutantElement, NotUnimodular, OrderMismatch
from src.opspace import (
    DenseAtThisTruncation, DensityWitness, TruncatedOperator, adjoint_eigen_residual, commutant_basis,
    deddens_wong_identity_residual, density_witness, dilation_fiber_check, dilation_matrix,
    double_commutant_basis, fejer_polynomial, fejer_supnorm_check, fejer_wot_gap, kernel_pairing,
    kernel_vector, malmquist_basis, model_expand, polynomial_algebra_dim, shift_operator, toeplitz_truncation,
    wold_components, wold_projection_matrix, wold_reconstruct,
)
from src.symbol_parser import symbol_from_text
from src.symbolcore import BlaschkeProduct, TaylorSymbol, blaschke_to_taylor


def _gram(vectors):
    V = np.column_stack(vectors)
    return V.conj().T @ V


def test_toeplitz_truncation_examples(cardioid):
    assert np.array_equal(toeplitz_truncation(TaylorSymbol.identity(), 3).matrix,
                          [[0, 0, 0], [1, 0, 0], [0, 1, 0]])
    assert np.array_equal(toeplitz_truncation(TaylorSymbol.constant(1), 2).matrix, np.eye(2))
    T = toeplitz_truncation(cardioid, 3).matrix
    assert np.array_equal(T, [[0.25, 0, 0], [1, 0.25, 0], [1, 1, 0.25]])


def test_toeplitz_truncation_checks_order():
    with pytest.raises(OrderMismatch):
        toeplitz_truncation(TaylorSymbol.identity(4), 8)


def test_toeplitz_products(rng):
    s, t = random_polynomial(rng, 5, order=32), random_polynomial(rng, 7, order=32)
    product = toeplitz_truncation(s * t, 16).matrix
    assert_allclose(product, (toeplitz_truncation(s, 16) @ toeplitz_truncation(t, 16)).matrix, atol=1e-12)


def test_truncated_operator_json():
    payload = toeplitz_truncation(TaylorSymbol.identity(), 2).to_dict()
    assert payload == {'n': 2, 'rows': [[[0.0, 0.0], [0.0, 0.0]], [[1.0, 0.0], [0.0, 0.0]]]}


def test_kernel_vector_and_pairing(cardioid):
    k = kernel_vector(0.5 + 0.25j, 5)
    assert np.array_equal(k.entries, np.conj(0.5 + 0.25j) ** np.arange(5))
    assert kernel_pairing(cardioid.coeffs, 0.3) == pytest.approx(cardioid.eval(0.3))


def test_adjoint_eigen_residual(cardioid):
    z = TaylorSymbol.identity()
    assert adjoint_eigen_residual(z, 0, 10) == 0
    assert adjoint_eigen_residual(z, 0.5, 32) <= 2.0 ** -31 / np.sqrt(0.75)
    assert adjoint_eigen_residual(cardioid, 0.3, 64) <= 1e-14


def test_adjoint_residual_decays_geometrically():
    z = TaylorSymbol.identity()
    residuals = [adjoint_eigen_residual(z, 0.5, N) for N in range(8, 33)]
    ratios = np.array(residuals[1:]) / np.array(residuals[:-1])
    assert np.all((ratios >= 0.45) & (ratios <= 0.55))


def test_commutant_dimensions():
    for N in range(2, 13):
        assert len(commutant_basis(shift_operator(N))) == N
    assert len(commutant_basis(shift_operator(4, 2))) == 8
    assert len(commutant_basis(TruncatedOperator(np.eye(3)))) == 9


def test_commutant_cap():
    with pytest.raises(DimensionCap):
        commutant_basis(shift_operator(25))


def test_commutant_contains_polynomials_in_t(cardioid):
    T = toeplitz_truncation(cardioid, 8)
    basis = np.column_stack([X.matrix.ravel() for X in commutant_basis(T)])
    P = T.matrix @ T.matrix - 3 * T.matrix + 2 * np.eye(8)
    v = P.ravel()
    projection = basis @ (basis.conj().T @ v)
    assert np.linalg.norm(v - projection) <= 1e-9


def test_double_commutant_dimensions():
    assert len(double_commutant_basis(commutant_basis(shift_operator(4)))) == 4
    assert len(double_commutant_basis(commutant_basis(shift_operator(4, 2)))) == 2
    assert len(double_commutant_basis(commutant_basis(TruncatedOperator(np.eye(3))))) == 1


def test_double_commutant_equals_polynomial_algebra(rng, cardioid):
    operators = [shift_operator(5), shift_operator(6, 2), shift_operator(6, 3), toeplitz_truncation(cardioid, 6),
                 TruncatedOperator(np.diag([1, 1, 2, 3])),
                 TruncatedOperator(rng.standard_normal((4, 4)))]
    for T in operators:
        assert len(double_commutant_basis(commutant_basis(T))) == polynomial_algebra_dim(T)


def test_polynomial_algebra_dim():
    assert polynomial_algebra_dim(shift_operator(5)) == 5
    assert polynomial_algebra_dim(shift_operator(4, 2)) == 2
    assert polynomial_algebra_dim(TruncatedOperator(np.eye(4))) == 1


def test_cardioid_density_witness(cardioid):
    witness = density_witness(cardioid, 16, 6)
    assert isinstance(witness, DensityWitness)
    assert witness.rank == 7
    assert witness.max_pairing <= 1e-8
    assert witness.pairing >= 0.1
    assert np.linalg.norm(witness.f0) == pytest.approx(1, abs=1e-12)


def test_identity_is_dense():
    assert isinstance(density_witness(TaylorSymbol.identity(), 8, 7), DenseAtThisTruncation)


def test_even_symbol_is_separated_by_z(z_squared):
    witness = density_witness(z_squared, 8, 3)
    assert isinstance(witness, DensityWitness)
    assert witness.separating_h.to_text() == 'z'
    assert witness.pairing == pytest.approx(1)
    assert_allclose(np.abs(witness.f0), np.eye(8)[1], atol=1e-12)


def test_density_witness_checks_dimension(cardioid):
    with pytest.raises(OrderMismatch):
        density_witness(cardioid, 8, 6)


def test_deddens_wong_identity(cardioid, rng):
    T = toeplitz_truncation(cardioid, 16)
    assert deddens_wong_identity_residual(cardioid, T, 0.6) <= 1e-8
    assert deddens_wong_identity_residual(cardioid, TruncatedOperator(np.eye(16)), 0.6) <= 1e-12

    basis = commutant_basis(T)
    weights = rng.standard_normal(len(basis))
    weights /= np.linalg.norm(weights)
    X = TruncatedOperator(sum(w * B.matrix for w, B in zip(weights, basis)))
    assert deddens_wong_identity_residual(cardioid, X, 0.3) <= 1e-6
    assert deddens_wong_identity_residual(cardioid, X, 0.6) <= 1e-3


def test_deddens_wong_rejects_non_commuting(cardioid):
    X = TruncatedOperator(np.diag(np.arange(16.0)))
    with pytest.raises(NotACommutantElement):
        deddens_wong_identity_residual(cardioid, X, 0.3)


def test_fejer_polynomial():
    assert_allclose(fejer_polynomial(TaylorSymbol.identity(4), 1).coeffs, [0, 0.5, 0, 0, 0])
    assert_allclose(fejer_polynomial(TaylorSymbol.constant(1, 4), 7).coeffs, [1, 0, 0, 0, 0])
    h = geometric_symbol(0.5, 8)
    assert_allclose(fejer_polynomial(h, 3).coeffs[:5], [1, 0.375, 0.125, 0.03125, 0])


def test_fejer_supnorm_check(rng):
    fejer_norm, symbol_norm, ok = fejer_supnorm_check(TaylorSymbol.identity(8), 3)
    assert (fejer_norm, symbol_norm, ok) == (pytest.approx(0.75), pytest.approx(1), True)
    assert fejer_supnorm_check(TaylorSymbol.constant(1, 8), 5).ok
    assert fejer_supnorm_check(geometric_symbol(0.5), 16).ok
    for _ in range(200):
        h = random_polynomial(rng, int(rng.integers(1, 12)), order=32)
        assert fejer_supnorm_check(h, int(rng.integers(0, 16))).ok


def test_fejer_gap_decays_like_one_over_n():
    h = geometric_symbol(0.5)
    one = TaylorSymbol.constant(1)
    assert fejer_wot_gap(TaylorSymbol.identity(), 5, 0, one) == 0
    ns = [4 * 2 ** i for i in range(8)]
    gaps = np.array([fejer_wot_gap(h, n, 0.5, one) for n in ns])
    assert np.all(np.diff(gaps) < 0)
    assert (ns[-1] + 1) * gaps[-1] == pytest.approx(4 / 9, rel=1e-2)


def test_wold_components():
    f = TaylorSymbol.from_coeffs([1, 1, 1, 1], 3)
    F1, F2 = wold_components(f, 2)
    assert_allclose(F1.coeffs, [1, 1])
    assert_allclose(F2.coeffs, [1, 1])

    parts = wold_components(TaylorSymbol.monomial(5, 8), 3)
    assert parts[0].is_constant() and parts[1].is_constant()
    assert parts[2].to_text() == 'z'

    (only,) = wold_components(f, 1)
    assert np.array_equal(only.coeffs, f.coeffs)


def test_wold_reconstruction_is_exact(rng):
    for n in (1, 2, 3, 5, 7):
        f = random_polynomial(rng, 40, order=64)
        assert np.array_equal(wold_reconstruct(wold_components(f, n), 64).coeffs, f.coeffs)


def test_wold_projection_commutes_exactly():
    assert np.array_equal(wold_projection_matrix(2, 4).matrix, np.diag([1, 0, 1, 0]))
    assert np.array_equal(wold_projection_matrix(1, 5).matrix, np.eye(5))
    for n in (2, 3, 4):
        P = wold_projection_matrix(n, 12)
        T = toeplitz_truncation(TaylorSymbol.monomial(n), 12)
        assert not np.any(P.commutator(T))


def test_dilation_commutes_exactly_at_roots_of_unity():
    T = toeplitz_truncation(TaylorSymbol.monomial(2), 4)
    assert not np.any(dilation_matrix(-1, 4).commutator(T))
    assert np.any(dilation_matrix(1j, 4).commutator(T))
    assert np.array_equal(dilation_matrix(1, 6).matrix, np.eye(6))
    for n in (2, 3, 4):
        L = dilation_matrix(np.exp(2j * np.pi / n), 12)
        assert not np.any(L.commutator(toeplitz_truncation(TaylorSymbol.monomial(n), 12)))


def test_dilation_needs_unimodular_parameter():
    with pytest.raises(NotUnimodular):
        dilation_matrix(0.5, 4)


def test_dilation_fiber_check():
    even = symbol_from_text('1 + z^3 - 2*z^6')
    check = dilation_fiber_check(even, 3, 12)
    assert check.commutes and check.supported_on_multiples
    check = dilation_fiber_check(symbol_from_text('z^2 + z^3'), 3, 12)
    assert not check.commutes and not check.supported_on_multiples


def test_malmquist_examples():
    (e1,) = malmquist_basis(BlaschkeProduct((0,)), 8)
    assert np.array_equal(e1, np.eye(8)[0])

    e1, e2 = malmquist_basis(BlaschkeProduct((0, 0.5)), 64)
    assert_allclose(e1, np.eye(64)[0])
    expected = np.concatenate([[0], np.sqrt(3) / 2 * 0.5 ** np.arange(63)])
    assert_allclose(e2, expected, atol=1e-15)

    e1, e2 = malmquist_basis(BlaschkeProduct((0, 0)), 8)
    assert_allclose(e2, np.eye(8)[1])


def test_malmquist_orthonormality(rng):
    N = 256
    for _ in range(20):
        B = random_blaschke(rng)
        vectors = malmquist_basis(B, N)
        assert np.max(np.abs(_gram(vectors) - np.eye(B.order))) <= 1e-9
        inner = blaschke_to_taylor(B, N - 1).coeffs
        for m in (0, 5, 40):
            shifted = np.concatenate([np.zeros(m), inner[:N - m]])
            pairings = [abs(np.vdot(shifted, e)) for e in vectors]
            assert max(pairings) <= 1e-8


def test_model_expand_examples():
    B = BlaschkeProduct((0, 0))
    table = model_expand(TaylorSymbol.constant(1, 16), B, 2).table
    assert table.loc[1, 0] == pytest.approx(1)
    assert np.count_nonzero(np.abs(table.to_numpy()) > 1e-12) == 1

    assert model_expand(TaylorSymbol.monomial(2, 16), B, 2).table.loc[1, 1] == pytest.approx(1)
    expansion = model_expand(TaylorSymbol.monomial(3, 16), B, 2)
    assert expansion.table.loc[2, 1] == pytest.approx(1)
    assert expansion.reconstruction_error <= 1e-12


def test_model_expand_error_decays(rng):
    B = BlaschkeProduct((0.1, -0.1j))
    f = random_polynomial(rng, 4, order=127)
    errors = [model_expand(f, B, m).reconstruction_error for m in (1, 3, 6, 12)]
    assert errors[0] > errors[-1]
    assert errors[-1] <= 1e-6
