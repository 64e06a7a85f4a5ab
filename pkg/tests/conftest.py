import numpy as np
import pytest

from vgpricer import EsscherMeasure, VGParams, annualized_daily_params, solve_h_star

TABLE1 = VGParams(mu=0.0848, delta=-0.0577, sigma=1.0295, alpha=0.8845, theta=0.9378)
RATE = 0.06
SPOT = 438.98
BS_VOL = 0.1848


@pytest.fixture(scope="session")
def table1() -> VGParams:
    return TABLE1


@pytest.fixture(scope="session")
def table1_yearly() -> VGParams:
    return annualized_daily_params(TABLE1, 365.0)


@pytest.fixture(scope="session")
def measure(table1) -> EsscherMeasure:
    return solve_h_star(table1, RATE)


@pytest.fixture(scope="session")
def measure_yearly(table1_yearly) -> EsscherMeasure:
    return solve_h_star(table1_yearly, RATE)


def random_params(rng: np.random.Generator) -> VGParams:
    return VGParams(
        mu=float(rng.uniform(-0.5, 0.5)),
        delta=float(rng.uniform(-0.5, 0.5)),
        sigma=float(rng.uniform(0.3, 2.0)),
        alpha=float(rng.uniform(0.3, 3.0)),
        theta=float(rng.uniform(0.3, 2.0)),
    )
