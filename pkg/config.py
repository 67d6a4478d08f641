"""
Run configuration for the ball space workbench.
Enumeration bounds are read from the environment (optionally a .env file) with in-code defaults.
"""
import os
from dataclasses import dataclass, replace
from typing import Optional

from dotenv import load_dotenv

load_dotenv(override=True)


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    try:
        value = int(raw)
    except ValueError as exc:
        raise RuntimeError(f"{name} must be an integer, got {raw!r}") from exc
    if value < 0:
        raise RuntimeError(f"{name} must be nonnegative, got {value}")
    return value


@dataclass(frozen=True)
class Bounds:
    """
    Limits for the exponential checks. Exceeding one raises instead of sampling.
    """
    max_balls: int = 20
    max_points: int = 24
    max_product_points: int = 4096
    max_family_choices: int = 4096
    max_morphism_domain: int = 4
    max_final_points: int = 16
    max_prime_index: int = 10_000
    series_steps: int = 10_000

    def override(self, **changes: Optional[int]) -> "Bounds":
        """
        Return a copy with the given fields replaced; None values are ignored.

        Args:
            **changes: Field names and new values

        Returns:
            New Bounds instance
        """
        kept = {key: value for key, value in changes.items() if value is not None}
        return replace(self, **kept)


def load_bounds() -> Bounds:
    """Read bounds from the environment."""
    defaults = Bounds()
    return Bounds(
        max_balls=_env_int("BALLSPACE_MAX_BALLS", defaults.max_balls),
        max_points=_env_int("BALLSPACE_MAX_POINTS", defaults.max_points),
        max_product_points=_env_int("BALLSPACE_MAX_PRODUCT_POINTS", defaults.max_product_points),
        max_family_choices=_env_int("BALLSPACE_MAX_FAMILY_CHOICES", defaults.max_family_choices),
        max_morphism_domain=_env_int("BALLSPACE_MAX_MORPHISM_DOMAIN", defaults.max_morphism_domain),
        max_final_points=_env_int("BALLSPACE_MAX_FINAL_POINTS", defaults.max_final_points),
        max_prime_index=_env_int("BALLSPACE_MAX_PRIME_INDEX", defaults.max_prime_index),
        series_steps=_env_int("BALLSPACE_SERIES_STEPS", defaults.series_steps),
    )


def get_corpus_dir() -> str:
    """Directory holding the JSON fixtures."""
    return os.getenv("BALLSPACE_CORPUS_DIR", os.path.join(os.path.dirname(__file__), "corpus"))


# Global instance
_bounds: Optional[Bounds] = None


def get_bounds() -> Bounds:
    """Get or create global bounds instance."""
    global _bounds
    if _bounds is None:
        _bounds = load_bounds()
    return _bounds
