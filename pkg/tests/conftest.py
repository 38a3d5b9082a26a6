import numpy as np
import pytest

from dqnsoccer.config import AppConfig


@pytest.fixture(scope="session")
def cfg() -> AppConfig:
    return AppConfig()


@pytest.fixture(scope="session")
def field(cfg):
    return cfg.field


@pytest.fixture()
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)
