import numpy as np
import pytest

from toytrainer import write_cifar_batches


@pytest.fixture
def rng():
    return np.random.default_rng(424242)


@pytest.fixture(scope="session")
def micro_data(tmp_path_factory):
    """A small dataset shared by the fast tests."""
    path = tmp_path_factory.mktemp("toydata")
    write_cifar_batches(path, n_train=400, n_test=200, seed=7)
    return path
