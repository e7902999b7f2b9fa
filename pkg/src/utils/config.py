"""
Configuration management for invol
"""

import os
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from dotenv import load_dotenv
from pydantic import BaseModel, Field

DEFAULT_CONFIG_DIR = str(Path(__file__).resolve().parents[2] / "config")
CONFIG_FILE_NAME = "invol.yaml"


class LoggingComponentsConfig(BaseModel):
    poly: str = "WARNING"
    endo: str = "WARNING"
    membership: str = "WARNING"
    tame: str = "WARNING"
    conditions: str = "WARNING"
    harness: str = "INFO"


class LoggingConfig(BaseModel):
    level: str = "WARNING"
    format: str = "human"
    file: Optional[str] = None
    max_size: str = "10MB"
    backup_count: int = 3
    components: LoggingComponentsConfig = LoggingComponentsConfig()


class AlgebraConfig(BaseModel):
    # per-variable exponent limit on parsed input; arithmetic itself stops at 2^16
    degree_cap: int = Field(default=2 ** 16, gt=0, le=2 ** 16)
    groebner_degree_cap: int = Field(default=64, gt=0)


class ChecksConfig(BaseModel):
    assert_postconditions: bool = True


class CorpusConfig(BaseModel):
    count: int = Field(default=200, gt=0)
    max_factors: int = Field(default=4, ge=0)
    max_tri_degree: int = Field(default=4, gt=0)
    coeff_height: int = Field(default=8, gt=0)
    seed: int = Field(default=0, ge=0, lt=2 ** 64)


class SuiteConfig(BaseModel):
    parity_max_exponent: int = 6
    random_pairs: int = 500
    random_degree: int = 8
    membership_samples: int = 3
    membership_degree: int = 6
    wang_pairs: int = 200
    wang_max_a_degree: int = 4
    wang_max_h_degree: int = 5
    involution_samples: int = 100


class Config(BaseModel):
    """Main configuration class"""
    logging: LoggingConfig = LoggingConfig()
    algebra: AlgebraConfig = AlgebraConfig()
    checks: ChecksConfig = ChecksConfig()
    corpus: CorpusConfig = CorpusConfig()
    suite: SuiteConfig = SuiteConfig()

    @classmethod
    def load_from_files(cls, config_dir: Optional[str] = None) -> "Config":
        """Load configuration from invol.yaml, then apply environment overrides"""
        config_path = Path(config_dir or os.getenv("INVOL_CONFIG_DIR") or DEFAULT_CONFIG_DIR)

        merged_config: Dict[str, Any] = {}
        config_file = config_path / CONFIG_FILE_NAME
        if config_file.exists():
            with open(config_file, "r") as f:
                merged_config = yaml.safe_load(f) or {}

        load_dotenv()
        cls._override_with_env(merged_config)

        return cls(**merged_config)

    @staticmethod
    def _override_with_env(config: Dict[str, Any]):
        """Override configuration with environment variables"""
        if os.getenv("INVOL_LOG_LEVEL"):
            config.setdefault("logging", {})["level"] = os.getenv("INVOL_LOG_LEVEL")
        if os.getenv("INVOL_LOG_FORMAT"):
            config.setdefault("logging", {})["format"] = os.getenv("INVOL_LOG_FORMAT")
        if os.getenv("INVOL_LOG_FILE"):
            config.setdefault("logging", {})["file"] = os.getenv("INVOL_LOG_FILE")

        if os.getenv("INVOL_SEED"):
            config.setdefault("corpus", {})["seed"] = int(os.getenv("INVOL_SEED"))
        if os.getenv("INVOL_GROEBNER_DEGREE_CAP"):
            config.setdefault("algebra", {})["groebner_degree_cap"] = int(os.getenv("INVOL_GROEBNER_DEGREE_CAP"))
        if os.getenv("INVOL_ASSERT_POSTCONDITIONS"):
            config.setdefault("checks", {})["assert_postconditions"] = (
                os.getenv("INVOL_ASSERT_POSTCONDITIONS").lower() == "true"
            )


_config_instance: Optional[Config] = None


def get_config(config_dir: Optional[str] = None) -> Config:
    """Get global configuration instance"""
    global _config_instance
    if _config_instance is None or config_dir is not None:
        _config_instance = Config.load_from_files(config_dir)
    return _config_instance
