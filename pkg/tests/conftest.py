import logging
import warnings

import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=50)
settings.load_profile("default")


@pytest.fixture(autouse=True)
def _quiet():
    # linear-fallback and multi-crossing notices are expected on coarse grids
    logging.getLogger("mib_elasticity").setLevel(logging.ERROR)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", category=RuntimeWarning)
        yield


def slope(errors, hs):
    """Least-squares log-log slope of ``errors`` against ``hs``."""
    return float(np.polyfit(np.log(hs), np.log(errors), 1)[0])
