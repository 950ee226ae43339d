import numpy as np
import pytest

from slagcond.data import Dataset, Sample, write_csv
from slagcond.network import Network


def random_samples(rng: np.random.Generator, n: int) -> list[Sample]:
    """Valid rows: positive temperature, fractions on the simplex."""
    samples = []
    for _ in range(n):
        t = rng.uniform(1300.0, 1756.0)
        fractions = rng.uniform(0.05, 1.0, size=5)
        fractions /= fractions.sum()
        sio2, cao, mgo, al2o3, feo = fractions
        y = rng.uniform(0.0, 250.0)
        samples.append(Sample(t, sio2, cao, mgo, al2o3, feo, y))
    return samples


def linear_conductivity_samples(rng: np.random.Generator, n: int) -> list[Sample]:
    """Rows whose conductivity is an exact linear function of T and CaO."""
    samples = []
    for _ in range(n):
        t = rng.uniform(1400.0, 1756.0)
        cao = rng.uniform(0.05, 0.55)
        props = rng.uniform(0.05, 1.0, size=4)
        props /= props.sum()
        sio2, mgo, al2o3, feo = (1.0 - cao) * props
        y = 0.05 * t + 100.0 * cao
        samples.append(Sample(t, sio2, cao, mgo, al2o3, feo, y))
    return samples


@pytest.fixture
def make_dataset():
    def _make(n: int = 50, seed: int = 0) -> Dataset:
        return Dataset(tuple(random_samples(np.random.default_rng(seed), n)))

    return _make


@pytest.fixture
def make_linear_dataset():
    def _make(n: int = 300, seed: int = 0) -> Dataset:
        return Dataset(tuple(linear_conductivity_samples(np.random.default_rng(seed), n)))

    return _make


@pytest.fixture
def make_csv(tmp_path):
    """Write a dataset to a temp CSV and return the path."""

    def _make(dataset: Dataset, name: str = "data.csv") -> str:
        path = tmp_path / name
        write_csv(dataset, str(path))
        return str(path)

    return _make


@pytest.fixture
def hand_net():
    """2-2-1 network with weights small enough to verify by hand."""
    return Network(
        w1=np.array([[1.0, -2.0], [0.5, 1.0]]),
        b1=np.array([0.0, 0.0]),
        w2=np.array([[1.0, 0.5]]),
        b2=np.array([0.0]),
    )
