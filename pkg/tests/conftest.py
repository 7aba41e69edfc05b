import pytest

from gaitlab.hybrid import IntegratorConfig
from gaitlab.lip import LipParams, default_params


@pytest.fixture(scope="session")
def lip_params() -> LipParams:
    return default_params()


@pytest.fixture(scope="session")
def iconfig() -> IntegratorConfig:
    return IntegratorConfig()
