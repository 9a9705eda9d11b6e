import numpy as np
import pytest

from retroflow.analysis import reynolds, u_max
from retroflow.datasets import get_dataset, list_datasets, resolution_chart, smooth_blobs
from retroflow.fields import velocity_from_stream, vorticity_from_stream
from retroflow.imageio import intensity_to_stream


def test_deterministic():
    assert np.array_equal(resolution_chart(256).pixels, resolution_chart(256).pixels)
    assert np.array_equal(smooth_blobs(64).pixels, smooth_blobs(64).pixels)


def test_registry():
    names = {d["name"] for d in list_datasets()}
    assert {"chart", "blobs"} <= names
    assert get_dataset("chart", 64).width == 64
    with pytest.raises(KeyError):
        get_dataset("nonexistent")


def test_chart_matches_hurricane_class_diagnostics():
    # image-class stream functions: U_max of order 1e2, RE of order 1e4,
    # sup|omega| of order 1e5 at the standard rescaling
    psi = intensity_to_stream(resolution_chart(256), taper_width=8)
    u, v = velocity_from_stream(psi)
    om = vorticity_from_stream(psi)
    umax = u_max(u, v)
    assert 3e1 <= umax <= 3e2
    assert 3e3 <= reynolds(umax, 0.01) <= 3e4
    assert 1e4 <= np.abs(om.values).max() <= 1e6


def test_blobs_are_smooth():
    psi = intensity_to_stream(smooth_blobs(256), taper_width=8)
    om = vorticity_from_stream(psi)
    assert np.abs(om.values).max() < 5e3
