"""
Shared pytest fixtures for invol
"""

import sys
from pathlib import Path

import pytest

# Add src to path
sys.path.insert(0, str(Path(__file__).parent / "src"))

from services.conditions_service import ConditionsService  # noqa: E402
from services.corpus_service import CorpusService  # noqa: E402
from utils.config import Config, CorpusConfig, SuiteConfig  # noqa: E402


def pytest_addoption(parser):
    parser.addoption("--run-slow", action="store_true", default=False, help="Run the default-size suite budgets")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: runs a suite at its default size against its time budget")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--run-slow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --run-slow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def config() -> Config:
    return Config()


@pytest.fixture
def conditions(config) -> ConditionsService:
    return ConditionsService(config)


@pytest.fixture
def small_params() -> CorpusConfig:
    return CorpusConfig(count=6, max_factors=3, max_tri_degree=2, coeff_height=3, seed=7)


@pytest.fixture
def small_corpus(small_params):
    return CorpusService(small_params).random_tame()


@pytest.fixture
def small_config(small_params) -> Config:
    """Suite sizes small enough for unit tests"""
    return Config(
        corpus=small_params,
        suite=SuiteConfig(
            parity_max_exponent=2,
            random_pairs=5,
            random_degree=3,
            membership_samples=1,
            membership_degree=2,
            wang_pairs=5,
            wang_max_a_degree=2,
            wang_max_h_degree=2,
            involution_samples=4,
        ),
    )
