import pytest

from diffgalois.system import DifferenceSystem

FIB = [["0", "1"], ["1", "1"]]
CYCLIC_X = [["0", "1", "0"], ["0", "0", "1"], ["x", "0", "0"]]
TWO_COSETS = [["0", "1", "0"], ["x", "0", "0"], ["0", "0", "1/x"]]


@pytest.fixture(scope="session")
def fib():
    return DifferenceSystem.parse(FIB)


@pytest.fixture(scope="session")
def cyclic_x():
    return DifferenceSystem.parse(CYCLIC_X)


@pytest.fixture(scope="session")
def two_cosets():
    return DifferenceSystem.parse(TWO_COSETS)


@pytest.fixture(scope="session")
def cyclic_x_relations(cyclic_x):
    from diffgalois.relations import RelationsIdealRequest, relations_ideal

    return relations_ideal(RelationsIdealRequest(cyclic_x, 2, 0))


@pytest.fixture(scope="session")
def two_cosets_relations(two_cosets):
    from diffgalois.relations import RelationsIdealRequest, relations_ideal

    return relations_ideal(RelationsIdealRequest(two_cosets, 2, 0))


@pytest.fixture(scope="session")
def two_cosets_output(two_cosets):
    from diffgalois.pipeline import compute_galois_group

    return compute_galois_group(two_cosets, 2, 0, 1)


@pytest.fixture(scope="session")
def cyclic_x_output(cyclic_x):
    from diffgalois.pipeline import compute_galois_group

    return compute_galois_group(cyclic_x, 2, 0, 1)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
