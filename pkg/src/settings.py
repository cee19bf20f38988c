"""
Settings - Environment-driven configuration (OBSERVA_* variables, optional .env)
"""

from pathlib import Path
from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

PROJECT_ROOT = Path(__file__).parent.parent


class Settings(BaseSettings):
    """Defaults for every tunable; CLI flags override these"""

    model_config = SettingsConfigDict(env_prefix='OBSERVA_', env_file='.env', extra='ignore')

    workers: int = Field(default=1, ge=1)
    verbose: bool = False
    run_log: Optional[Path] = None

    # Enumeration guard for 'observa enum'
    max_enum_length: int = Field(default=16, ge=0)

    # Suite populations
    seed: int = 20240601
    random_samples: int = Field(default=1000, ge=0)
    pair_samples: int = Field(default=300, ge=0)
    sweep_max_states: int = Field(default=4, ge=1, le=4)
    budget_seconds: Optional[float] = Field(default=600.0, gt=0)

    bounds_file: Path = PROJECT_ROOT / 'config' / 'witness_bounds.json'


def load_settings(**overrides) -> Settings:
    """Settings from the environment, with explicit values taking precedence"""
    return Settings(**{key: value for key, value in overrides.items() if value is not None})
