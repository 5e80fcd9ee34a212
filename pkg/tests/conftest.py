import datetime

import pytest
from loguru import logger

from koalition_py.config import load_config
from koalition_py.data_access import (
    CONFIG_DATA_FILE,
    POLLS_DATA_FILE,
    PartyRegistry,
    get_data_path,
    read_polls,
)
from koalition_py.posterior import DirichletPosterior, posterior_from

FIXTURE_AS_OF = datetime.date(2018, 3, 5)
# Concentration of the near point-mass posteriors used by threshold tests
POINT_MASS = 1e12


def pytest_addoption(parser):
    parser.addoption(
        "--update-golden",
        action="store_true",
        default=False,
        help="rewrite tests/golden/*.svg from the fixed figure inputs",
    )


@pytest.fixture
def update_golden(request):
    return request.config.getoption("--update-golden")


@pytest.fixture(autouse=True)
def quiet_logger():
    yield
    # The CLI binds its sink to the captured stderr of the test that ran it
    logger.remove()


@pytest.fixture(scope="session")
def config():
    return load_config(get_data_path(CONFIG_DATA_FILE))


@pytest.fixture(scope="session")
def registry(config):
    return config.registry


@pytest.fixture(scope="session")
def polls(registry):
    return read_polls(get_data_path(POLLS_DATA_FILE), registry)


@pytest.fixture(scope="session")
def nowcast(config, polls):
    pooled = config.pooling.pool(polls, FIXTURE_AS_OF, registry=config.registry)
    return posterior_from(pooled, config.prior_alpha)


@pytest.fixture
def small_registry():
    return PartyRegistry.from_tuples(
        [
            ("A", "Alpha", "#ff0000"),
            ("B", "Beta", "#0000ff"),
            ("C", "Gamma", "#00ff00"),
            ("other", "Other", "#bbbbbb"),
        ],
        "other",
    )


@pytest.fixture
def point_mass():
    """Build a posterior concentrated on the given share vector."""

    def build(shares):
        return DirichletPosterior(
            alpha={party_id: share * POINT_MASS for party_id, share in shares.items()}
        )

    return build
