import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from clusterbench.core import DataMatrix

TRUE_MEANS_3G = np.array([[0.0, 0.0], [10.0, 0.0], [0.0, 10.0]])


def make_gauss3(seed: int, per_cluster: int = 100, sigma: float = 0.5) -> DataMatrix:
    """Three well-separated 2-D Gaussian blobs with generation labels."""
    gen = np.random.Generator(
        np.random.PCG64(np.random.SeedSequence(entropy=seed, spawn_key=(990,)))
    )
    pts = np.vstack(
        [gen.normal(mu, sigma, size=(per_cluster, 2)) for mu in TRUE_MEANS_3G]
    )
    labels = np.repeat(np.arange(3), per_cluster)
    return DataMatrix(values=pts, labels=labels)


@pytest.fixture
def gauss3():
    return make_gauss3(0)


def write_spectf_like(path, n=267, cols=45, class_col=44, seed=7) -> None:
    """A synthetic file shaped like the SPECTF table: n rows, cols columns,
    one binary class column, integer-ish feature values."""
    gen = np.random.Generator(np.random.PCG64(seed))
    labels = gen.integers(0, 2, size=n)
    feats = gen.integers(0, 80, size=(n, cols - 1)).astype(float)
    feats += labels[:, None] * gen.uniform(0, 10, size=(n, cols - 1))
    lines = []
    for i in range(n):
        row = ["%g" % v for v in feats[i]]
        row.insert(class_col, str(int(labels[i])))
        lines.append(",".join(row))
    Path(path).write_text("\n".join(lines) + "\n")


@pytest.fixture
def spectf_csv(tmp_path):
    p = tmp_path / "spectf_like.csv"
    write_spectf_like(p)
    return p
