"""Application configuration"""
import os
from typing import Optional

from pydantic_settings import BaseSettings, SettingsConfigDict

from goursat4d.schemas.common import IterationMode, QuadratureRule


class Settings(BaseSettings):
    """Application settings"""
    model_config = SettingsConfigDict(
        env_prefix="GOURSAT4D_",
        env_file=".env",
        case_sensitive=False,
        extra="ignore",
    )

    app_name: str = "goursat4d"
    app_version: str = "1.0.0"
    threads: int = 0
    norm_p: float = float("inf")
    tol: float = 1e-10
    max_iter: int = 200
    rule: QuadratureRule = QuadratureRule.TRAP
    mode: IterationMode = IterationMode.PICARD
    compat_tol: float = 1e-8
    log_level: str = "WARNING"
    debug: bool = False

    def worker_count(self, threads: Optional[int] = None) -> int:
        """Resolve the worker count; 0 means one worker per CPU"""
        requested = self.threads if threads is None else threads
        if requested < 0:
            raise ValueError(f"threads must be >= 0, got {requested}")
        return requested or (os.cpu_count() or 1)


settings = Settings()
