"""
Bounded analytic symbols as truncated Taylor series.

A ``TaylorSymbol`` carries the coefficients c_0..c_N of a symbol on the
unit disk; a ``BlaschkeProduct`` carries the zeros of a finite Blaschke
product. The expression tree produced by the symbol DSL is lowered to a
``TaylorSymbol`` by :func:`lower`.
"""

import logging
from dataclasses import dataclass

import numpy as np

from .exceptions import CompositionDomainError, ResolutionError

logger = logging.getLogger(__name__)

DEFAULT_ORDER = 256
NOISE_FLOOR = 1e-9
COMPOSITION_RADIUS = 0.999
COMPOSITION_OVERSAMPLING = 8
COMPOSITION_SUP_SLACK = 1e-9
SUPNORM_NODES = 4096


def format_real(x):
    return format(float(x), '.17g')


def format_complex(c):
    """Format a complex number with 17 significant digits, DSL style"""
    c = complex(c)
    if c.imag == 0:
        return format_real(c.real)
    if c.real == 0:
        return f"{format_real(c.imag)}i"
    sign = '+' if c.imag >= 0 else '-'
    return f"{format_real(c.real)}{sign}{format_real(abs(c.imag))}i"


def complex_pair(c):
    c = complex(c)
    return [c.real, c.imag]


def truncated_product(a, b, length):
    """First ``length`` coefficients of the Cauchy product of two series"""
    return np.convolve(a[:length], b[:length])[:length]


@dataclass(frozen=True, eq=False)
class TaylorSymbol:
    """Truncated power series c_0 + c_1 z + ... + c_N z^N"""

    coeffs: np.ndarray
    label: str = ''

    def __post_init__(self):
        coeffs = np.array(self.coeffs, dtype=complex).ravel()
        if coeffs.size < 2:
            raise ValueError("a Taylor symbol needs truncation order at least 1")
        coeffs.setflags(write=False)
        object.__setattr__(self, 'coeffs', coeffs)

    # Constructors

    @classmethod
    def from_coeffs(cls, coeffs, order=None, label=''):
        """Build a symbol, zero-padding or truncating to ``order``"""
        coeffs = np.asarray(coeffs, dtype=complex).ravel()
        if order is None:
            order = max(coeffs.size - 1, 1)
        padded = np.zeros(order + 1, dtype=complex)
        count = min(coeffs.size, order + 1)
        padded[:count] = coeffs[:count]
        return cls(padded, label)

    @classmethod
    def constant(cls, value, order=DEFAULT_ORDER, label=''):
        return cls.from_coeffs([value], order, label)

    @classmethod
    def identity(cls, order=DEFAULT_ORDER, label='z'):
        return cls.from_coeffs([0, 1], order, label)

    @classmethod
    def monomial(cls, n, order=DEFAULT_ORDER, label=None):
        coeffs = np.zeros(order + 1, dtype=complex)
        coeffs[n] = 1
        return cls(coeffs, label if label is not None else f"z^{n}")

    # Structure

    @property
    def order(self):
        """Truncation order N"""
        return self.coeffs.size - 1

    def with_order(self, order):
        return TaylorSymbol.from_coeffs(self.coeffs, order, self.label)

    def relabel(self, label):
        return TaylorSymbol(self.coeffs, label)

    def support(self, tol=NOISE_FLOOR):
        return np.flatnonzero(np.abs(self.coeffs) > tol)

    def degree(self, tol=NOISE_FLOOR):
        """Index of the last coefficient above the noise floor (0 for the zero series)"""
        support = self.support(tol)
        return int(support[-1]) if support.size else 0

    def is_polynomial(self, tol=NOISE_FLOOR):
        """True when the series ends before the truncation order"""
        return self.degree(tol) < self.order

    def is_constant(self, tol=NOISE_FLOOR):
        return not np.any(np.abs(self.coeffs[1:]) > tol)

    # Evaluation

    def eval(self, z):
        """Horner evaluation of the truncated series"""
        return np.polyval(self.coeffs[::-1], z)

    __call__ = eval

    def eval_circle(self, M, r=1.0):
        """Values at r * exp(2 pi i j / M), j = 0..M-1, via the DFT"""
        if M < 2 * self.order:
            raise ResolutionError(
                f"{M} circle nodes cannot resolve truncation order {self.order} (need {2 * self.order})"
            )
        scaled = np.zeros(M, dtype=complex)
        scaled[:self.order + 1] = self.coeffs * r ** np.arange(self.order + 1)
        return M * np.fft.ifft(scaled)

    def sup_norm(self, M=SUPNORM_NODES):
        """Maximum modulus over M boundary nodes"""
        return float(np.max(np.abs(self.eval_circle(max(M, 2 * self.order)))))

    # Calculus

    def derivative(self):
        """Coefficients k c_k shifted down one degree"""
        k = np.arange(1, self.order + 1)
        label = f"({self.label})'" if self.label else ''
        return TaylorSymbol.from_coeffs(k * self.coeffs[1:], max(self.order - 1, 1), label)

    def antiderivative(self):
        k = np.arange(1, self.order + 2)
        coeffs = np.concatenate([[0], self.coeffs / k])
        return TaylorSymbol(coeffs, f"int({self.label})" if self.label else '')

    # Arithmetic

    def _coerce(self, other):
        if isinstance(other, TaylorSymbol):
            return other
        return TaylorSymbol.constant(other, self.order)

    def __add__(self, other):
        other = self._coerce(other)
        order = min(self.order, other.order)
        return TaylorSymbol(self.coeffs[:order + 1] + other.coeffs[:order + 1])

    __radd__ = __add__

    def __neg__(self):
        return TaylorSymbol(-self.coeffs, self.label)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, TaylorSymbol):
            return TaylorSymbol(self.coeffs * complex(other))
        order = min(self.order, other.order)
        return TaylorSymbol(truncated_product(self.coeffs, other.coeffs, order + 1))

    __rmul__ = __mul__

    def __pow__(self, n):
        if int(n) != n or n < 0:
            raise ValueError(f"symbol powers must be natural numbers, got {n}")
        result = TaylorSymbol.constant(1, self.order)
        base = self
        n = int(n)
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def allclose(self, other, atol=1e-12):
        order = max(self.order, other.order)
        return np.allclose(self.with_order(order).coeffs, other.with_order(order).coeffs, rtol=0, atol=atol)

    # Serialization

    def to_text(self, tol=NOISE_FLOOR):
        """Compact polynomial rendering of the coefficients above ``tol``"""
        terms = []
        for k in self.support(tol):
            c = self.coeffs[k]
            power = '' if k == 0 else ('z' if k == 1 else f"z^{k}")
            if k == 0:
                terms.append(format_complex(c))
            elif c == 1:
                terms.append(power)
            elif c.imag == 0:
                terms.append(f"{format_real(c.real)}*{power}")
            else:
                terms.append(f"({format_complex(c)})*{power}")
        return ' + '.join(terms) if terms else '0'

    def to_dict(self):
        return {
            'label': self.label,
            'order': self.order,
            'coeffs': [complex_pair(c) for c in self.coeffs],
        }

    @classmethod
    def from_dict(cls, payload):
        order = int(payload['order'])
        coeffs = [complex(re, im) for re, im in payload['coeffs']]
        if len(coeffs) != order + 1:
            raise ValueError(f"expected {order + 1} coefficients, got {len(coeffs)}")
        return cls(coeffs, payload.get('label', ''))

    def __repr__(self):
        return f"TaylorSymbol(label={self.label!r}, order={self.order}, degree={self.degree()})"


def blaschke_factor(a, z):
    """Normalized factor (|a|/a)(a - z)/(1 - conj(a) z), or z when a = 0"""
    if a == 0:
        return z
    return (abs(a) / a) * (a - z) / (1 - np.conj(a) * z)


@dataclass(frozen=True)
class BlaschkeProduct:
    """Finite Blaschke product given by its zeros and a unimodular constant"""

    zeros: tuple
    unimodular_constant: complex = 1 + 0j

    def __post_init__(self):
        zeros = tuple(complex(a) for a in self.zeros)
        for a in zeros:
            if abs(a) >= 1:
                raise ValueError(f"Blaschke zero {a} is not inside the unit disk")
        constant = complex(self.unimodular_constant)
        if abs(abs(constant) - 1) > 1e-12:
            raise ValueError(f"constant {constant} is not unimodular")
        object.__setattr__(self, 'zeros', zeros)
        object.__setattr__(self, 'unimodular_constant', constant)

    @property
    def order(self):
        return len(self.zeros)

    def eval(self, z):
        value = self.unimodular_constant * np.ones_like(np.asarray(z, dtype=complex))
        for a in self.zeros:
            value = value * blaschke_factor(a, z)
        return value

    __call__ = eval

    def to_dict(self):
        return {
            'zeros': [complex_pair(a) for a in self.zeros],
            'unimodular_constant': complex_pair(self.unimodular_constant),
        }


def blaschke_to_taylor(B, N=DEFAULT_ORDER):
    """Taylor coefficients of a finite Blaschke product up to degree N"""
    coeffs = np.zeros(N + 1, dtype=complex)
    coeffs[0] = B.unimodular_constant
    k = np.arange(N + 1)
    for a in B.zeros:
        factor = np.zeros(N + 1, dtype=complex)
        if a == 0:
            factor[1] = 1
        else:
            # (a - z) * sum (conj(a) z)^k = a + sum_{k>=1} conj(a)^(k-1) (|a|^2 - 1) z^k
            factor[0] = a
            factor[1:] = np.conj(a) ** (k[1:] - 1) * (abs(a) ** 2 - 1)
            factor *= abs(a) / a
        coeffs = truncated_product(coeffs, factor, N + 1)
    zeros = ', '.join(format_complex(a) for a in B.zeros)
    return TaylorSymbol(coeffs, f"blaschke[{zeros}]")


# Symbol expression tree

@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Lit:
    value: complex


@dataclass(frozen=True)
class Add:
    left: object
    right: object


@dataclass(frozen=True)
class Sub:
    left: object
    right: object


@dataclass(frozen=True)
class Mul:
    left: object
    right: object


@dataclass(frozen=True)
class Power:
    base: object
    exponent: int


@dataclass(frozen=True)
class Compose:
    outer: object
    inner: object


@dataclass(frozen=True)
class Blaschke:
    zeros: tuple


def evaluate(expr, z):
    """Evaluate an expression tree directly at the points ``z``"""
    if isinstance(expr, Var):
        return np.asarray(z, dtype=complex)
    if isinstance(expr, Lit):
        return expr.value * np.ones_like(np.asarray(z, dtype=complex))
    if isinstance(expr, Add):
        return evaluate(expr.left, z) + evaluate(expr.right, z)
    if isinstance(expr, Sub):
        return evaluate(expr.left, z) - evaluate(expr.right, z)
    if isinstance(expr, Mul):
        return evaluate(expr.left, z) * evaluate(expr.right, z)
    if isinstance(expr, Power):
        return evaluate(expr.base, z) ** expr.exponent
    if isinstance(expr, Compose):
        return evaluate(expr.outer, evaluate(expr.inner, z))
    if isinstance(expr, Blaschke):
        return BlaschkeProduct(expr.zeros).eval(z)
    raise TypeError(f"unknown expression node {expr!r}")


def lower(expr, N=DEFAULT_ORDER):
    """Taylor coefficients of an expression tree, truncated at degree N"""
    if isinstance(expr, Var):
        return TaylorSymbol.identity(N)
    if isinstance(expr, Lit):
        return TaylorSymbol.constant(expr.value, N)
    if isinstance(expr, Add):
        return lower(expr.left, N) + lower(expr.right, N)
    if isinstance(expr, Sub):
        return lower(expr.left, N) - lower(expr.right, N)
    if isinstance(expr, Mul):
        return lower(expr.left, N) * lower(expr.right, N)
    if isinstance(expr, Power):
        return lower(expr.base, N) ** expr.exponent
    if isinstance(expr, Blaschke):
        return blaschke_to_taylor(BlaschkeProduct(expr.zeros), N)
    if isinstance(expr, Compose):
        return _lower_composition(expr, N)
    raise TypeError(f"unknown expression node {expr!r}")


def _lower_composition(expr, N):
    M = COMPOSITION_OVERSAMPLING * N
    nodes = np.exp(2j * np.pi * np.arange(M) / M)

    inner_sup = float(np.max(np.abs(evaluate(expr.inner, nodes))))
    if inner_sup > 1 + COMPOSITION_SUP_SLACK:
        raise CompositionDomainError(
            f"inner map reaches modulus {inner_sup:.6g} on the unit circle; compositions need a disk-to-disk inner map"
        )

    # Sample on a slightly smaller circle and undo the radius per coefficient
    values = evaluate(expr, COMPOSITION_RADIUS * nodes)
    coeffs = np.fft.fft(values)[:N + 1] / M
    coeffs /= COMPOSITION_RADIUS ** np.arange(N + 1)
    logger.debug("lowered composition at order %d from %d samples (inner sup %.3g)", N, M, inner_sup)
    return TaylorSymbol(coeffs)
