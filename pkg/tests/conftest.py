import json
import pathlib

import numpy as np
import pytest

DATA = pathlib.Path(__file__).parent / "data"


def load_grid(name: str) -> tuple[np.ndarray, np.ndarray]:
    xs, refs = [], []
    with open(DATA / name, encoding="utf-8") as fh:
        next(fh)
        for line in fh:
            x, v = line.strip().split(",")
            xs.append(float(x))
            refs.append(float(v))
    return np.array(xs), np.array(refs)


@pytest.fixture(scope="session")
def ref_values() -> dict:
    """Frozen high-precision reference constants (see data/make_bessel_reference.py)."""
    with open(DATA / "reference_values.json", encoding="utf-8") as fh:
        return json.load(fh)


@pytest.fixture(scope="session")
def j0_grid():
    return load_grid("j0_reference.csv")


@pytest.fixture(scope="session")
def k1_grid():
    return load_grid("k1_reference.csv")
