import json
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

DATA = Path(__file__).parent / "data"


def load_reference_pairs() -> dict:
    with open(DATA / "reference_pairs.json", encoding="utf-8") as fh:
        return json.load(fh)


@pytest.fixture(scope="session")
def reference_pairs() -> dict:
    return load_reference_pairs()


def random_antisym(rng: np.random.Generator, n: int, complex_: bool = True) -> np.ndarray:
    A = rng.normal(size=(n, n))
    if complex_:
        A = A + 1j * rng.normal(size=(n, n))
    return A - A.T


def spin_configs(L: int):
    import itertools

    for bra in itertools.product((1, -1), repeat=L):
        for ket in itertools.product((1, -1), repeat=L):
            yield bra, ket
