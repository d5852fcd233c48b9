"""
Toeplitz Commutant Lab Package
Evidence for the minimal and double commutant properties of analytic Toeplitz operators.
"""

__version__ = "1.0.0"
__author__ = "Toeplitz Commutant Lab Team"

from .config import RunConfig
from .symbolcore import BlaschkeProduct, TaylorSymbol
from .symbol_parser import parse_symbol, symbol_from_text
from .curvegeom import BoundaryCurve, winding_number, winding_profile
from .classify import classify, explain
from .visualization import WindingPlotter

__all__ = [
    'RunConfig',
    'BlaschkeProduct',
    'TaylorSymbol',
    'parse_symbol',
    'symbol_from_text',
    'BoundaryCurve',
    'winding_number',
    'winding_profile',
    'classify',
    'explain',
    'WindingPlotter'
]
