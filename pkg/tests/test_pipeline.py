import numpy as np
import pytest

from retroflow.datasets import smooth_blobs
from retroflow.errors import DivergenceError
from retroflow.imageio import intensity_to_stream
from retroflow.pipeline import desired_state, run_assimilation

FAST = dict(t_final=1e-4, steps=25, gamma=1e-8, p=3.25, nu=0.01,
            taper_width=4)


@pytest.fixture(scope="module")
def blob_psi():
    return intensity_to_stream(smooth_blobs(64), taper_width=4)


def test_small_round_trip_report(blob_psi):
    result = run_assimilation(blob_psi, **FAST)
    rows = result.report.rows
    for var in ("psi", "u", "v", "omega"):
        d, c, e = rows[var]
        assert np.isfinite([d, c, e]).all()
        assert d >= 0 and c >= 0 and e >= 0
    # short horizon on smooth data: the evolved state stays close to desired
    d, _, e = rows["psi"]
    assert abs(e - d) / d < 0.05
    assert result.report.reynolds == pytest.approx(
        result.report.u_max / FAST["nu"])
    assert result.backward.final.time == pytest.approx(0.0, abs=1e-18)
    assert result.forward.final.time == pytest.approx(FAST["t_final"])


def test_determinism(blob_psi):
    r1 = run_assimilation(blob_psi, **FAST)
    r2 = run_assimilation(blob_psi, **FAST)
    assert r1.report.to_json() == r2.report.to_json()
    assert np.array_equal(r1.computed0.omega.values, r2.computed0.omega.values)


def test_desired_state_consistency(blob_psi):
    s = desired_state(blob_psi, 0.5)
    assert s.time == 0.5
    assert s.u is not None and s.omega is not None


def test_divergence_carries_partial_trajectory(blob_psi):
    with pytest.raises(DivergenceError) as exc:
        run_assimilation(blob_psi, t_final=0.05, steps=40, gamma=0.0, p=3.25,
                         nu=0.01, taper_width=4)
    assert exc.value.trajectory is not None
    assert exc.value.trajectory.direction == "backward"
