import os

import pytest

from sdckit.dataset import Column, Dataset

REPO_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
GRANTS_CSV = os.path.join(REPO_ROOT, "data", "grants.csv")


def make_dataset(**columns):
    """Build a Dataset from keyword lists; str columns become categorical.

    None entries are missing.  Numbers are coerced to float, matching what
    load_csv would have produced.
    """
    cols = []
    n = None
    for name, values in columns.items():
        if n is None:
            n = len(values)
        assert len(values) == n, "all columns must have equal length"
        non_missing = [v for v in values if v is not None]
        if non_missing and all(isinstance(v, str) for v in non_missing):
            kind, conv = "categorical", str
        else:
            kind, conv = "numeric", float
        cols.append(
            Column(
                name,
                kind,
                tuple(None if v is None else conv(v) for v in values),
            )
        )
    return Dataset(tuple(cols), n or 0)


@pytest.fixture(scope="session")
def grants_path():
    return GRANTS_CSV


@pytest.fixture(scope="session")
def grants(grants_path):
    from sdckit import load_csv

    return load_csv(grants_path)
