import pytest

import ola


@pytest.fixture(scope="session")
def lid():
    return ola.default_identifier()
