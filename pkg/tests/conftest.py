import pytest

from bredon import (
    PointGroup,
    bredon_cochain_complex,
    builtin_block,
    cohomology_table,
)


@pytest.fixture(scope="session")
def pg4():
    return PointGroup(4)


@pytest.fixture(scope="session")
def line_block():
    return builtin_block("line-minus")


@pytest.fixture(scope="session")
def plane_block():
    return builtin_block("plane-i")


@pytest.fixture(scope="session")
def point_block():
    return builtin_block("point")


@pytest.fixture(scope="session")
def line_complex(line_block):
    return bredon_cochain_complex(line_block)


@pytest.fixture(scope="session")
def plane_complex(plane_block):
    return bredon_cochain_complex(plane_block)


@pytest.fixture(scope="session")
def point_complex(point_block):
    return bredon_cochain_complex(point_block)


@pytest.fixture(scope="session")
def line_table(line_complex):
    return cohomology_table(line_complex)


@pytest.fixture(scope="session")
def plane_table(plane_complex):
    return cohomology_table(plane_complex)


@pytest.fixture(scope="session")
def point_table(point_complex):
    return cohomology_table(point_complex)
