import pytest

from ustsat.cnf import parse_dimacs

EXAMPLE_51 = "p cnf 3 3\n1 2 3 0\n-1 -2 -3 0\n-1 2 -3 0\n"


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run slow sweeps and the full reference grid")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long statistical sweep, needs --runslow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def sweep(request) -> int:
    """Instances per randomized sweep: full size under --runslow"""
    return 1000 if request.config.getoption("--runslow") else 150


@pytest.fixture
def example51():
    return parse_dimacs(EXAMPLE_51)


@pytest.fixture
def example51_file(tmp_path):
    path = tmp_path / "example51.cnf"
    path.write_text(EXAMPLE_51)
    return path
