import numpy as np
import pytest

from reliopt import Dataset


@pytest.fixture
def six_point_dataset() -> Dataset:
    """Symmetric 1-D dataset whose MLE has a zero intercept and slope ln 2."""
    x = np.array([[-1.0], [-1.0], [-1.0], [1.0], [1.0], [1.0]])
    y = np.array([0, 0, 1, 0, 1, 1])
    return Dataset(features=x, labels=y, feature_names=("x1",))


def write_csv(path, text: str) -> str:
    path.write_text(text, encoding="utf-8")
    return str(path)
