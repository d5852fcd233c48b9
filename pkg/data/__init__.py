"""
Toeplitz Commutant Lab Data Package
Named example symbols and seeded random generators for testing.
"""

__version__ = "1.0.0"
__author__ = "Toeplitz Commutant Lab Team"

from .registry import SUITE, list_examples, named_suite, resolve_example
from .generators import (
    geometric_symbol,
    random_bdu_symbol,
    random_blaschke,
    random_polynomial,
    random_univalent_polynomial,
)

__all__ = [
    'SUITE',
    'list_examples',
    'named_suite',
    'resolve_example',
    'geometric_symbol',
    'random_bdu_symbol',
    'random_blaschke',
    'random_polynomial',
    'random_univalent_polynomial',
]
