"""
Solver and experiment configuration.
Tolerances and tunables are read from BPDD_* environment variables.
"""

import math
import os
from dataclasses import dataclass, fields, replace
from typing import Optional


def _env_float(name: str, default: float) -> float:
    raw = os.environ.get(name)
    return float(raw) if raw not in (None, "") else default


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    return int(raw) if raw not in (None, "") else default


@dataclass(frozen=True)
class SolverConfig:
    """Tolerances and tunables shared by solvers, bounds and sweeps."""

    feasibility_tol: float = 1e-8
    duality_gap_tol: float = 1e-7
    pivot_tol: float = 1e-10
    zero_tol: float = 1e-12
    sparsify_residual_tol: float = 1e-7
    condition_limit: float = 1e14
    gram_block_size: int = 2048
    gram_full_threshold: int = 4096
    q_multiplier: int = 5
    n_jobs: int = 1

    @classmethod
    def from_env(cls) -> "SolverConfig":
        """Load configuration from environment variables."""
        return cls(
            feasibility_tol=_env_float("BPDD_FEASIBILITY_TOL", 1e-8),
            duality_gap_tol=_env_float("BPDD_DUALITY_GAP_TOL", 1e-7),
            pivot_tol=_env_float("BPDD_PIVOT_TOL", 1e-10),
            zero_tol=_env_float("BPDD_ZERO_TOL", 1e-12),
            sparsify_residual_tol=_env_float("BPDD_SPARSIFY_RESIDUAL_TOL", 1e-7),
            condition_limit=_env_float("BPDD_CONDITION_LIMIT", 1e14),
            gram_block_size=_env_int("BPDD_GRAM_BLOCK_SIZE", 2048),
            gram_full_threshold=_env_int("BPDD_GRAM_FULL_THRESHOLD", 4096),
            q_multiplier=_env_int("BPDD_Q_MULTIPLIER", 5),
            n_jobs=_env_int("BPDD_N_JOBS", 1),
        )

    def scaled(self, factor: float) -> "SolverConfig":
        """Return a copy with every acceptance tolerance multiplied by factor."""
        return replace(
            self,
            feasibility_tol=self.feasibility_tol * factor,
            duality_gap_tol=self.duality_gap_tol * factor,
            sparsify_residual_tol=self.sparsify_residual_tol * factor,
        )

    def validate(self) -> bool:
        """Validate configuration."""
        for field in fields(self):
            if field.name == "n_jobs":
                continue
            value = getattr(self, field.name)
            if not math.isfinite(value) or value < 0:
                raise ValueError(f"{field.name} must be finite and non-negative, got {value}")
        if self.gram_block_size < 1:
            raise ValueError("BPDD_GRAM_BLOCK_SIZE must be at least 1")
        if self.q_multiplier < 1:
            raise ValueError("BPDD_Q_MULTIPLIER must be at least 1")
        if self.n_jobs == 0:
            raise ValueError("BPDD_N_JOBS must be non-zero (use -1 for all cores)")
        return True


def resolve_config(config: Optional[SolverConfig]) -> SolverConfig:
    """Return config, or the environment-derived default when None."""
    return config if config is not None else SolverConfig.from_env()
