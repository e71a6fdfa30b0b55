from pydantic_settings import BaseSettings, SettingsConfigDict
from typing import Optional


class Settings(BaseSettings):
    """Toolkit defaults, overridable through UST_* environment variables"""

    # Solver
    default_budget: int = 100_000_000  # assignment applications
    debug_recount: bool = False

    # Bench (reference p, r grid)
    bench_n: int = 100
    bench_count: int = 200
    bench_seed: int = 20160516
    bench_budget: int = 1_000_000
    bench_steps: str = "assignments"  # or "trail"
    workers: int = 1

    # Audit log (SQLAlchemy URL), e.g. sqlite:///./data/bench.db
    per_instance_url: Optional[str] = None

    # Analysis
    skew_decimals: int = 3
    ust_advice_threshold: float = 0.3

    # Logging
    log_level: str = "INFO"

    model_config = SettingsConfigDict(env_prefix="UST_", case_sensitive=False)


settings = Settings()
