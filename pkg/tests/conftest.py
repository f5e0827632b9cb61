import pytest

from torushom.field import QQ, PrimeField


@pytest.fixture(params=["Q", "F2", "F3"], ids=["Q", "F2", "F3"])
def any_field(request):
    if request.param == "Q":
        return QQ
    return PrimeField(int(request.param[1:]))


@pytest.fixture
def field():
    return QQ
