import pytest

from helpers.config import Config
from controllers.RootSystemController import RootSystemController
from models.algebra import CartanSpec


@pytest.fixture
def conf():
    return Config()


@pytest.fixture
def root_systems(conf):
    return RootSystemController(conf)


@pytest.fixture
def build(root_systems):
    def _build(name: str):
        return root_systems.build_root_system(CartanSpec.parse(name))
    return _build


@pytest.fixture
def a2(build):
    return build("A2")


@pytest.fixture
def b2(build):
    return build("B2")
