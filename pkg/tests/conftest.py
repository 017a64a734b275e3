import numpy as np
import pytest

from qbath import TimeGrid, compute_propagator, stock_model
from qbath.propagator import plateau_window


@pytest.fixture(scope="session")
def rwa_n1():
    # grid step 0.05 keeps the generator singularity t = pi/0.7 off-grid
    return compute_propagator(stock_model("rwa-n1-resonant"), TimeGrid.linspace(9.0, 180))


@pytest.fixture(scope="session")
def ohmic_rwa():
    return compute_propagator(stock_model("ohmic-rwa-n64"), TimeGrid.linspace(40.0, 100))


@pytest.fixture(scope="session")
def ohmic_pp():
    return compute_propagator(stock_model("ohmic-pp-n64"), TimeGrid.linspace(40.0, 100))


@pytest.fixture(scope="session")
def flat_custom():
    return compute_propagator(stock_model("flat-custom-n128"), TimeGrid.linspace(100.0, 500))


@pytest.fixture(scope="session")
def plateau_index():
    def pick(p):
        i0, i1 = plateau_window(p)
        sup = np.maximum(np.abs(p.A[i0 : i1 + 1]), np.abs(p.C[i0 : i1 + 1]))
        return i0 + int(np.argmin(sup))

    return pick
