import warnings

import pytest

from gbdilog.errors import NearDegenerateWarning
from gbdilog.qdilog import make_params


@pytest.fixture(scope="session")
def p():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NearDegenerateWarning)
        return make_params(0.775)


@pytest.fixture(scope="session")
def p_small():
    return make_params(0.35)
