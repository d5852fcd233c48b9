"""
Named example symbols.

Fixed names map to DSL text; ``power:n`` and ``blaschke:[a1,...]`` are
parametrized families.
"""

import re

import numpy as np

from src.exceptions import UnknownExample
from src.symbol_parser import symbol_from_text
from src.symbolcore import DEFAULT_ORDER, TaylorSymbol

NAMED_SYMBOLS = {
    'identity': 'z',
    'halfshift': 'z+0.5',
    'cardioid': '(z+0.5)^2',
    'zsquare-plus-z4': 'z^2+z^4',
}

FAMILIES = {
    'power:n': 'z^n for a natural number n, e.g. power:3',
    'blaschke:[...]': 'finite Blaschke product with the listed zeros, e.g. blaschke:[0,0.5]',
}

DESCRIPTIONS = {
    'identity': 'the shift itself',
    'halfshift': 'univalent disk map onto a shifted disk',
    'cardioid': 'square of the half shift; double-covered inner loop',
    'zsquare-plus-z4': 'q(z^2) with q(z) = z + z^2 not univalent',
    'moon-exp': 'exp(pi i z); univalent, boundary kisses itself at -1',
}

SUITE = (
    'identity', 'halfshift', 'cardioid', 'power:2', 'power:3', 'power:4',
    'blaschke:[0,0.5]', 'zsquare-plus-z4', 'moon-exp',
)

_POWER = re.compile(r'power:(\d+)$')
_BLASCHKE = re.compile(r'blaschke:\[(.+)\]$')


def moon_exp(order=DEFAULT_ORDER):
    """exp(pi i z) from its Taylor coefficients (pi i)^k / k!"""
    k = np.arange(1, order + 1)
    coeffs = np.concatenate([[1], np.cumprod(1j * np.pi / k)])
    return TaylorSymbol(coeffs, 'moon-exp')


def resolve_example(name, order=DEFAULT_ORDER):
    """Symbol for a registry name at truncation order ``order``"""
    name = name.strip()
    if name in NAMED_SYMBOLS:
        return symbol_from_text(NAMED_SYMBOLS[name], order).relabel(name)
    if name == 'moon-exp':
        return moon_exp(order)
    match = _POWER.match(name)
    if match:
        n = int(match.group(1))
        if not 1 <= n <= order:
            raise UnknownExample(f"power:{n} needs 1 <= n <= {order}")
        return TaylorSymbol.monomial(n, order, name)
    match = _BLASCHKE.match(name)
    if match:
        return symbol_from_text(f"blaschke[{match.group(1)}]", order).relabel(name)
    raise UnknownExample(f"no example named {name!r}; run the examples subcommand for the list")


def list_examples():
    """(name, description) rows for the examples subcommand"""
    rows = [(name, f"{NAMED_SYMBOLS[name]}: {DESCRIPTIONS[name]}") for name in NAMED_SYMBOLS]
    rows.extend(FAMILIES.items())
    rows.append(('moon-exp', DESCRIPTIONS['moon-exp']))
    return rows


def named_suite(order=DEFAULT_ORDER):
    return [(name, resolve_example(name, order)) for name in SUITE]
