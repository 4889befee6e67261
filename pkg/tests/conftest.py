import pytest

from padic_herman.padic import FieldContext


@pytest.fixture
def ctx5():
    return FieldContext(5)


@pytest.fixture
def geo5():
    return FieldContext(5, 2)
