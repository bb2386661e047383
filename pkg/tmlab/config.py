"""Environment configuration for the Thue-Morse lab."""

import os
from functools import lru_cache

from dotenv import load_dotenv

load_dotenv()


def _env(name: str, default: str) -> str:
    return os.getenv(f"TMLAB_{name}", default)


class Settings:
    """Lab settings loaded from environment variables."""

    def __init__(self) -> None:
        # Combinatorics
        self.LEVEL_CAP: int = int(_env("LEVEL_CAP", "64"))
        self.VU_KMAX: int = int(_env("VU_KMAX", "30"))
        self.MAX_WORD_LENGTH: int = int(_env("MAX_WORD_LENGTH", str(1 << 24)))
        self.LANGUAGE_PREFIX_FACTOR: int = int(_env("LANGUAGE_PREFIX_FACTOR", "32"))
        self.ACCIDENT_MIN_LEVEL: int = int(_env("ACCIDENT_MIN_LEVEL", "6"))

        # Renormalization
        self.RENORM_MAX_N: int = int(_env("RENORM_MAX_N", "14"))

        # Induced transfer operator
        self.THERMO_NMAX: int = int(_env("THERMO_NMAX", "64"))
        self.THERMO_NMAX_BOUND: int = int(_env("THERMO_NMAX_BOUND", "128"))
        self.DEFAULT_J: str = _env("DEFAULT_J", "000")
        self.BRUTE_FORCE_LIMIT: int = int(_env("BRUTE_FORCE_LIMIT", "20"))
        self.ROOT_MARGIN: float = float(_env("ROOT_MARGIN", "1e-9"))
        self.TRANSITION_REL_WIDTH: float = float(_env("TRANSITION_REL_WIDTH", "1e-3"))
        self.EXCURSION_REL_TAIL: float = float(_env("EXCURSION_REL_TAIL", "1e-10"))
        self.EPSILON0: float = float(_env("EPSILON0", "0.0"))
        self.N0: int = int(_env("N0", "0"))

        # Invariant measure of the subshift
        self.MUK_DEPTH: int = int(_env("MUK_DEPTH", "16"))
        self.MUK_PREFIX_LENGTH: int = int(_env("MUK_PREFIX_LENGTH", str(1 << 16)))

        # Interval maps
        self.INTERVAL_DEPTH: int = int(_env("INTERVAL_DEPTH", "16"))
        self.INTERVAL_MAX_DEPTH: int = int(_env("INTERVAL_MAX_DEPTH", "20"))
        self.CONFORMAL_TOL: float = float(_env("CONFORMAL_TOL", "1e-12"))
        self.CONFORMAL_MAX_ITER: int = int(_env("CONFORMAL_MAX_ITER", "20000"))
        self.CONFORMAL_EIGEN_TOL: float = float(_env("CONFORMAL_EIGEN_TOL", "1e-3"))

        # Grid sweeps
        self.WORKER_THREADS: int = int(_env("WORKER_THREADS", "0"))
        self.WORKER_BATCH_SIZE: int = int(_env("WORKER_BATCH_SIZE", "16"))

    def validate(self) -> None:
        """Validate that settings are mutually consistent."""
        if self.LEVEL_CAP < 3:
            raise ValueError("TMLAB_LEVEL_CAP must be at least 3")
        if self.VU_KMAX < 1:
            raise ValueError("TMLAB_VU_KMAX must be positive")
        if self.ACCIDENT_MIN_LEVEL < 1:
            raise ValueError("TMLAB_ACCIDENT_MIN_LEVEL must be positive")
        if not 0 <= self.RENORM_MAX_N <= 20:
            raise ValueError("TMLAB_RENORM_MAX_N must lie in [0, 20]")
        if self.THERMO_NMAX > self.THERMO_NMAX_BOUND:
            raise ValueError("TMLAB_THERMO_NMAX exceeds TMLAB_THERMO_NMAX_BOUND")
        if set(self.DEFAULT_J) - {"0", "1"} or not self.DEFAULT_J:
            raise ValueError("TMLAB_DEFAULT_J must be a nonempty binary word")
        if self.INTERVAL_DEPTH > self.INTERVAL_MAX_DEPTH:
            raise ValueError("TMLAB_INTERVAL_DEPTH exceeds TMLAB_INTERVAL_MAX_DEPTH")
        if self.EPSILON0 < 0:
            raise ValueError("TMLAB_EPSILON0 must be nonnegative")
        if self.CONFORMAL_EIGEN_TOL < 0:
            raise ValueError("TMLAB_CONFORMAL_EIGEN_TOL must be nonnegative")


@lru_cache
def get_settings() -> Settings:
    """Get cached settings instance."""
    settings = Settings()
    settings.validate()
    return settings
