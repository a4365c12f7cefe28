import numpy as np
import pytest

from drcontract import AspTypeProfile, UtilityParams
from drcontract.config import RunConfig


@pytest.fixture(scope="session")
def default_cfg():
    return RunConfig()


@pytest.fixture(scope="session")
def default_profile(default_cfg):
    return default_cfg.profile()


@pytest.fixture(scope="session")
def unit_params():
    return UtilityParams(gamma1=1.0, gamma2=1.0, gamma3=1.0)


@pytest.fixture(scope="session")
def train_samples(default_cfg):
    return default_cfg.train_samples()


@pytest.fixture(scope="session")
def eval_samples(default_cfg):
    return default_cfg.eval_samples()


def random_monotone_instance(rng, n_types=None):
    """Random (profile, latencies) pair with sorted thetas and latencies."""
    if n_types is None:
        n_types = int(rng.integers(1, 9))
    thetas = np.sort(rng.uniform(50.0, 500.0, n_types))
    alphas = rng.dirichlet(np.ones(n_types))
    latencies = np.sort(rng.uniform(0.0, 300.0, n_types))
    profile = AspTypeProfile(thetas=thetas, alphas=alphas / alphas.sum())
    return profile, latencies
