"""
Core configuration for the regression-graph toolkit.
Centralized settings for inference budgets, numerical tolerances and generators.
"""

from typing import Tuple
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings with environment variable support (prefix ``REGMARK_``)."""

    model_config = SettingsConfigDict(
        env_prefix="REGMARK_",
        env_file=".env",
        case_sensitive=True,
        extra="ignore",
    )

    # Application
    APP_NAME: str = "Regmark"
    VERSION: str = "1.0.0"
    LOG_LEVEL: str = "WARNING"

    # Graphoid inference
    BUDGET: int = 200_000  # Max statements held by one closure
    MAX_ITERATIONS: int = 10_000  # Max closure rounds
    DERIVE_BUDGET: int = 10_000  # Max statements explored by derive
    SET_SIZE_CAP: int = 0  # Cap on |A| and |B|; 0 means the universe size
    THEOREM_MAX_NODES: int = 6  # Largest graph accepted by verify --theorem1
    ORDERING_LIMIT: int = 8  # Alternative valid orderings enumerated per graph

    # Gaussian oracle
    CI_TOLERANCE: float = 1e-8  # "independence holds" threshold
    DEPENDENCE_THRESHOLD: float = 1e-3  # "dependence present" threshold
    CONCENTRATION_RANGE: Tuple[float, float] = (0.1, 0.4)  # full-line entries of K
    REGRESSION_RANGE: Tuple[float, float] = (0.3, 0.8)  # arrow coefficients
    RESIDUAL_RANGE: Tuple[float, float] = (0.1, 0.4)  # dashed-line entries of Lambda

    # Random graph generator
    DASHED_DENSITY: float = 0.5
    FULL_DENSITY: float = 0.5
    ARROW_DENSITY: float = 0.5


# Global settings instance
settings = Settings()
