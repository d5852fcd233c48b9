"""
Run configuration for the Toeplitz Commutant Lab.

Values come from a dotenv file (``config.env``, falling back to
``config.env.example``), then from CLI overrides.
"""

import os
import dataclasses
from dataclasses import dataclass

from dotenv import load_dotenv

from .exceptions import ConfigError

MAX_ORDER = 512
MIN_NODES = 256
MAX_NODES = 2 ** 20
MAX_COMMUTANT_DIM = 24
FORMATS = ('json', 'text', 'svg')


def _is_power_of_two(n):
    return n > 0 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class RunConfig:
    order: int = 256
    nodes: int = 4096
    grid: int = 24
    depth: int = 6
    witness_dim: int = 16
    commutant_dim: int = 12
    noise_floor: float = 1e-9
    svd_tol: float = 1e-10
    output_format: str = 'json'
    log_level: str = 'WARNING'

    @classmethod
    def from_env(cls, config_path='config.env'):
        """Load settings from a dotenv file and the process environment"""
        if not os.path.exists(config_path):
            config_path = 'config.env.example'
        load_dotenv(config_path)

        defaults = cls()
        config = cls(
            order=int(os.getenv('TOEPLITZ_ORDER', defaults.order)),
            nodes=int(os.getenv('TOEPLITZ_NODES', defaults.nodes)),
            grid=int(os.getenv('TOEPLITZ_GRID', defaults.grid)),
            depth=int(os.getenv('TOEPLITZ_DEPTH', defaults.depth)),
            witness_dim=int(os.getenv('TOEPLITZ_WITNESS_DIM', defaults.witness_dim)),
            commutant_dim=int(os.getenv('TOEPLITZ_COMMUTANT_DIM', defaults.commutant_dim)),
            noise_floor=float(os.getenv('TOEPLITZ_NOISE_FLOOR', defaults.noise_floor)),
            svd_tol=float(os.getenv('TOEPLITZ_SVD_TOL', defaults.svd_tol)),
            output_format=os.getenv('TOEPLITZ_FORMAT', defaults.output_format),
            log_level=os.getenv('TOEPLITZ_LOG_LEVEL', defaults.log_level),
        )
        return config.validate()

    def replace(self, **overrides):
        """Return a validated copy with the non-None overrides applied"""
        changes = {key: value for key, value in overrides.items() if value is not None}
        return dataclasses.replace(self, **changes).validate()

    def validate(self):
        if not 1 <= self.order <= MAX_ORDER:
            raise ConfigError(f"truncation order must lie in [1, {MAX_ORDER}], got {self.order}")
        if not (MIN_NODES <= self.nodes <= MAX_NODES and _is_power_of_two(self.nodes)):
            raise ConfigError(
                f"curve nodes must be a power of two in [{MIN_NODES}, {MAX_NODES}], got {self.nodes}"
            )
        if self.nodes < 2 * self.order:
            raise ConfigError(f"curve nodes {self.nodes} below twice the order {self.order}")
        if self.grid < 8:
            raise ConfigError(f"grid size must be at least 8, got {self.grid}")
        if self.depth < 1:
            raise ConfigError(f"Krylov depth must be positive, got {self.depth}")
        if self.witness_dim < 1:
            raise ConfigError(f"witness dimension must be positive, got {self.witness_dim}")
        if not 1 <= self.commutant_dim <= MAX_COMMUTANT_DIM:
            raise ConfigError(
                f"commutant dimension must lie in [1, {MAX_COMMUTANT_DIM}], got {self.commutant_dim}"
            )
        if self.output_format not in FORMATS:
            raise ConfigError(f"format must be one of {', '.join(FORMATS)}, got {self.output_format}")
        return self
