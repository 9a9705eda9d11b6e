import numpy as np
import pytest

from retroflow.fields import GridSpec, ScalarField


@pytest.fixture
def grid64():
    return GridSpec(64)


@pytest.fixture
def grid32():
    return GridSpec(32)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_field(grid: GridSpec, rng, boundary_clean: bool = False) -> ScalarField:
    v = rng.standard_normal((grid.n, grid.n))
    if boundary_clean:
        v[0, :] = v[-1, :] = v[:, 0] = v[:, -1] = 0.0
    return ScalarField(grid, v)


def field_diff_norm(a: ScalarField, b: ScalarField) -> float:
    from retroflow.fields import l2_norm
    return l2_norm(ScalarField(a.grid, a.values - b.values))
