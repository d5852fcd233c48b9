"""
Truncated Hardy-space operators.

Operators are compressed to span{1, z, ..., z^(N-1)}; an analytic Toeplitz
operator becomes a lower-triangular Toeplitz matrix. The module solves for
commutants and double commutants, builds Krylov density witnesses, and
supplies the exact finite models of the Wold decomposition (coefficient
splitting mod n, dilations, Takenaka-Malmquist bases).
"""

import logging
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import pandas as pd
import scipy.linalg

from .exceptions import DimensionCap, NotACommutantElement, NotUnimodular, OrderMismatch
from .symbolcore import TaylorSymbol, blaschke_to_taylor, complex_pair, truncated_product

logger = logging.getLogger(__name__)

SVD_TOL = 1e-10
MAX_COMMUTANT_DIM = 24
COMMUTATION_TOL = 1e-8
WITNESS_MAX_PAIRING = 1e-8
WITNESS_MIN_SEPARATION = 0.1
SUPNORM_NODES = 4096
SUPNORM_SLACK = 1e-9
UNIMODULAR_TOL = 1e-12
MAX_ROOT_ORDER = 64


@dataclass(frozen=True, eq=False)
class TruncatedOperator:
    """N x N compression to the first N monomials"""

    matrix: np.ndarray
    label: str = ''

    def __post_init__(self):
        matrix = np.array(self.matrix, dtype=complex)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ValueError(f"truncated operators are square, got shape {matrix.shape}")
        matrix.setflags(write=False)
        object.__setattr__(self, 'matrix', matrix)

    @property
    def dim(self):
        return self.matrix.shape[0]

    def __matmul__(self, other):
        return TruncatedOperator(self.matrix @ other.matrix)

    def commutator(self, other):
        """self * other - other * self"""
        return self.matrix @ other.matrix - other.matrix @ self.matrix

    def to_dict(self):
        return {'n': self.dim, 'rows': [[complex_pair(x) for x in row] for row in self.matrix]}


def toeplitz_truncation(s, N):
    """Lower-triangular Toeplitz compression of M_phi"""
    if N > s.order:
        raise OrderMismatch(f"matrix size {N} exceeds the truncation order {s.order} of {s.label!r}")
    column = s.coeffs[:N]
    row = np.zeros(N, dtype=complex)
    row[0] = column[0]
    return TruncatedOperator(scipy.linalg.toeplitz(column, row), f"T[{s.label}]")


def shift_operator(N, power=1):
    """Compression of M_{z^power}"""
    return TruncatedOperator(np.eye(N, k=-power, dtype=complex), 'S' if power == 1 else f"S^{power}")


@dataclass(frozen=True, eq=False)
class KernelVector:
    """Coefficients (1, conj(a), conj(a)^2, ...) of the reproducing kernel k_a"""

    a: complex
    entries: np.ndarray


def kernel_vector(a, N):
    return KernelVector(complex(a), np.power(np.conj(complex(a)), np.arange(N)))


def kernel_pairing(g, a):
    """<g, k_a> = g(a) for a coefficient vector g"""
    g = np.asarray(g, dtype=complex)
    return complex(np.dot(g, np.power(complex(a), np.arange(g.size))))


def adjoint_eigen_residual(s, a, N):
    """|| T^H k_a - conj(phi(a)) k_a || / || k_a ||"""
    T = toeplitz_truncation(s, N)
    k = kernel_vector(a, N).entries
    residual = T.matrix.conj().T @ k - np.conj(s.eval(a)) * k
    return float(np.linalg.norm(residual) / np.linalg.norm(k))


def commutation_map(T):
    """Matrix of X -> XT - TX acting on column-major vec(X)"""
    N = T.shape[0]
    identity = np.eye(N, dtype=complex)
    return np.kron(T.T, identity) - np.kron(identity, T)


def _unvec(v, N, label):
    return TruncatedOperator(v.reshape(N, N, order='F'), label)


def commutant_basis(T, tol=SVD_TOL):
    """Orthonormal basis of {X : XT = TX}"""
    if T.dim > MAX_COMMUTANT_DIM:
        raise DimensionCap(f"commutant solves are capped at N = {MAX_COMMUTANT_DIM}, got {T.dim}")
    null = scipy.linalg.null_space(commutation_map(T.matrix), rcond=tol)
    logger.debug("commutant of %r: dimension %d", T.label, null.shape[1])
    return [_unvec(null[:, i], T.dim, f"X{i}") for i in range(null.shape[1])]


def commutation_spectrum(T):
    """Singular values of the commutation map, descending"""
    return scipy.linalg.svdvals(commutation_map(T.matrix))


def double_commutant_basis(basis, tol=SVD_TOL):
    """Orthonormal basis of the operators commuting with every element of ``basis``"""
    if not basis:
        raise ValueError("double commutant needs a nonempty commutant basis")
    N = basis[0].dim
    if N > MAX_COMMUTANT_DIM:
        raise DimensionCap(f"commutant solves are capped at N = {MAX_COMMUTANT_DIM}, got {N}")
    size = N * N
    # Fold the stacked commutation maps into one triangular factor
    R = np.zeros((0, size), dtype=complex)
    for B in basis:
        stacked = np.vstack([R, commutation_map(B.matrix)])
        R = scipy.linalg.qr(stacked, mode='r')[0][:size]
    null = scipy.linalg.null_space(R, rcond=tol)
    logger.debug("double commutant from %d generators: dimension %d", len(basis), null.shape[1])
    return [_unvec(null[:, i], N, f"Y{i}") for i in range(null.shape[1])]


def polynomial_algebra_dim(T, tol=SVD_TOL):
    """Rank of [vec I, vec T, vec T^2, ...] = degree of the minimal polynomial"""
    N = T.dim
    columns = []
    power = np.eye(N, dtype=complex)
    for _ in range(N + 1):
        norm = np.linalg.norm(power)
        if norm > 0:
            columns.append(power.ravel() / norm)
        power = power @ T.matrix
    singular = scipy.linalg.svdvals(np.column_stack(columns))
    return int(np.sum(singular > tol * singular[0]))


@dataclass(frozen=True, eq=False)
class DensityWitness:
    f0: np.ndarray
    m: int
    max_pairing: float
    separating_h: TaylorSymbol
    pairing: float
    rank: int

    def to_dict(self):
        return {
            'f0': [complex_pair(x) for x in self.f0],
            'm': self.m,
            'max_pairing': self.max_pairing,
            'separating_h': self.separating_h.to_text(),
            'pairing': self.pairing,
            'rank': self.rank,
        }


@dataclass(frozen=True)
class DenseAtThisTruncation:
    N: int
    m: int
    rank: int
    reason: str = 'column span fills the truncated space'

    def to_dict(self):
        return {'dense': True, 'N': self.N, 'm': self.m, 'rank': self.rank, 'reason': self.reason}


def power_columns(s, N, m):
    """Coefficient vectors of phi^0..phi^m truncated to N entries"""
    base = np.array(s.coeffs[:N], dtype=complex)
    column = np.zeros(N, dtype=complex)
    column[0] = 1
    columns = [column]
    for _ in range(m):
        column = truncated_product(column, base, N)
        columns.append(column)
    return np.column_stack(columns)


def density_witness(s, N, m, blaschke=None, tol=SVD_TOL):
    """Unit f0 annihilating phi^0..phi^m but pairing with a dictionary element"""
    if m < 1:
        raise ValueError(f"Krylov depth must be positive, got {m}")
    if N > s.order + 1:
        raise OrderMismatch(f"witness dimension {N} exceeds the coefficients of {s.label!r}")
    if s.is_polynomial() and N < m * s.degree():
        raise OrderMismatch(f"witness dimension {N} below m * deg = {m * s.degree()}")

    A = power_columns(s, N, m)
    U, singular, _ = scipy.linalg.svd(A, full_matrices=True)
    rank = int(np.sum(singular > tol * singular[0]))
    if rank >= N:
        return DenseAtThisTruncation(N, m, rank)
    complement = U[:, rank:]

    dictionary = [np.eye(N, dtype=complex)[j] for j in range(1, N)]
    if blaschke is not None:
        dictionary.extend(v / np.linalg.norm(v) for v in malmquist_basis(blaschke, N))
    projections = [complement @ (complement.conj().T @ h) for h in dictionary]
    scores = np.array([np.linalg.norm(p) for p in projections])
    # ties go to the lowest degree
    best = int(np.flatnonzero(scores >= scores.max() - 1e-12)[0])

    f0 = projections[best] / scores[best]
    max_pairing = float(np.max(np.abs(f0.conj() @ A)))
    pairing = float(abs(np.vdot(f0, dictionary[best])))
    if max_pairing > WITNESS_MAX_PAIRING or pairing < WITNESS_MIN_SEPARATION:
        return DenseAtThisTruncation(N, m, rank, f"no separating element (pairing {pairing:.3g})")

    h = TaylorSymbol.from_coeffs(dictionary[best], max(N - 1, 1), label='separating')
    logger.debug("density witness for %r: rank %d of %d, pairing %.3g", s.label, rank, N, pairing)
    return DensityWitness(f0, m, max_pairing, h, pairing, rank)


def deddens_wong_identity_residual(s, X, a):
    """max_j |(X z^j)(a) - (X 1)(a) a^j| over j < N/2"""
    T = toeplitz_truncation(s, X.dim)
    defect = float(np.linalg.norm(X.commutator(T), 2))
    if defect > COMMUTATION_TOL:
        raise NotACommutantElement(f"operator {X.label!r} fails to commute with {T.label!r} ({defect:.3g})")
    powers = np.power(complex(a), np.arange(X.dim))
    images = powers @ X.matrix
    return float(max(abs(images[j] - images[0] * powers[j]) for j in range(max(X.dim // 2, 1))))


def fejer_polynomial(h, n):
    """Cesaro mean: c_k (1 - k/(n+1)) for k <= n, zero beyond"""
    if n < 0:
        raise ValueError(f"Fejer index must be nonnegative, got {n}")
    k = np.arange(h.order + 1)
    weights = np.clip(1 - k / (n + 1), 0, None)
    return TaylorSymbol(h.coeffs * weights, f"fejer[{n}]({h.label})" if h.label else '')


def fejer_wot_gap(h, n, a, f):
    """|sigma_n(h)(a) f(a) - h(a) f(a)|"""
    fa = f.eval(a)
    return float(abs(fejer_polynomial(h, n).eval(a) * fa - h.eval(a) * fa))


class FejerBound(NamedTuple):
    fejer_norm: float
    symbol_norm: float
    ok: bool


def fejer_supnorm_check(h, n):
    """Sup norms of sigma_n(h) and h over the boundary nodes"""
    fejer_norm = fejer_polynomial(h, n).sup_norm(SUPNORM_NODES)
    symbol_norm = h.sup_norm(SUPNORM_NODES)
    return FejerBound(fejer_norm, symbol_norm, fejer_norm <= symbol_norm * (1 + SUPNORM_SLACK))


def wold_components(f, n):
    """F_1..F_n with f(z) = sum_j z^j F_{j+1}(z^n)"""
    if n < 1:
        raise ValueError(f"Wold index must be positive, got {n}")
    order = max(f.order // n, 1)
    return [TaylorSymbol.from_coeffs(f.coeffs[j::n], order, label=f"F{j + 1}") for j in range(n)]


def wold_reconstruct(components, order):
    """Inverse of wold_components"""
    n = len(components)
    coeffs = np.zeros(order + 1, dtype=complex)
    for k in range(order + 1):
        component = components[k % n]
        if k // n <= component.order:
            coeffs[k] = component.coeffs[k // n]
    return TaylorSymbol(coeffs)


def wold_projection_matrix(n, N):
    """Diagonal projection keeping indices divisible by n"""
    if n < 1:
        raise ValueError(f"Wold index must be positive, got {n}")
    keep = (np.arange(N) % n == 0).astype(complex)
    return TruncatedOperator(np.diag(keep), f"P[{n}]")


def _conjugate_powers(lam, N):
    """conj(lam)^j for j < N, periodic and exact when lam is a root of unity"""
    conj = np.conj(lam)
    for q in range(1, MAX_ROOT_ORDER + 1):
        if abs(lam ** q - 1) <= UNIMODULAR_TOL:
            table = np.cumprod(np.concatenate([[1], np.full(q - 1, conj)]))
            return table[np.arange(N) % q]
    return np.cumprod(np.concatenate([[1], np.full(N - 1, conj)]))[:N]


def dilation_matrix(lam, N):
    """Compression of L_lam f(z) = f(conj(lam) z)"""
    lam = complex(lam)
    if abs(abs(lam) - 1) > UNIMODULAR_TOL:
        raise NotUnimodular(f"dilation parameter {lam} is not on the unit circle")
    return TruncatedOperator(np.diag(_conjugate_powers(lam, N)), f"L[{lam}]")


class FiberCheck(NamedTuple):
    max_commutator: float
    commutes: bool
    supported_on_multiples: bool


def dilation_fiber_check(h, n, N):
    """M_h commutes with the dilation by exp(2 pi i/n) iff h = g(z^n)"""
    T = toeplitz_truncation(h, N)
    L = dilation_matrix(np.exp(2j * np.pi / n), N)
    largest = float(np.max(np.abs(L.commutator(T))))
    support = h.support()
    return FiberCheck(largest, largest == 0, bool(np.all(support % n == 0)))


def _geometric(a, N):
    return np.power(np.conj(a), np.arange(N))


def _blaschke_factor_series(a, N):
    """Coefficients of (z - a)/(1 - conj(a) z)"""
    series = np.zeros(N, dtype=complex)
    if a == 0:
        if N > 1:
            series[1] = 1
        return series
    series[0] = -a
    series[1:] = _geometric(a, N - 1) * (1 - abs(a) ** 2)
    return series


def malmquist_basis(B, N):
    """Takenaka-Malmquist vectors spanning H^2 minus B H^2, truncated to N entries"""
    vectors = []
    prefix = np.zeros(N, dtype=complex)
    prefix[0] = 1
    for a in B.zeros:
        kernel = np.sqrt(1 - abs(a) ** 2) * _geometric(a, N)
        vectors.append(truncated_product(prefix, kernel, N))
        prefix = truncated_product(prefix, _blaschke_factor_series(a, N), N)
    return vectors


@dataclass(frozen=True, eq=False)
class ModelExpansion:
    table: pd.DataFrame
    reconstruction_error: float

    def to_dict(self):
        return {
            'coefficients': [
                {'i': int(i), 'j': int(j), 'alpha': complex_pair(self.table.loc[i, j])}
                for i in self.table.index for j in self.table.columns
            ],
            'reconstruction_error': self.reconstruction_error,
        }


def model_expand(f, B, m):
    """Coefficients of f against the orthonormal family e_i B^j"""
    N = f.order + 1
    if N < (m + 2) * B.order:
        raise OrderMismatch(f"{N} coefficients cannot hold depth {m} for an order-{B.order} product")
    basis = malmquist_basis(B, N)
    inner = blaschke_to_taylor(B, N - 1).coeffs

    coefficients = np.zeros((B.order, m + 1), dtype=complex)
    reconstruction = np.zeros(N, dtype=complex)
    power = np.zeros(N, dtype=complex)
    power[0] = 1
    for j in range(m + 1):
        for i, e in enumerate(basis):
            v = truncated_product(e, power, N)
            coefficients[i, j] = np.vdot(v, f.coeffs)
            reconstruction += coefficients[i, j] * v
        power = truncated_product(power, inner, N)

    table = pd.DataFrame(coefficients, index=pd.Index(range(1, B.order + 1), name='i'),
                         columns=pd.Index(range(m + 1), name='j'))
    error = float(np.linalg.norm(f.coeffs - reconstruction))
    return ModelExpansion(table, error)
