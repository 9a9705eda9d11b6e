import numpy as np
import pytest
from hypothesis import given, strategies as st

from retroflow.errors import ParameterError
from retroflow.fields import (GridSpec, ScalarField, apply_taper, ddx, ddy,
                              inner, l2_norm, laplacian, sample,
                              velocity_from_stream, vorticity_from_stream,
                              zero_ring)

from conftest import field_diff_norm, random_field

TWO_PI = 2.0 * np.pi


class TestGridSpec:
    def test_mesh_width(self):
        g = GridSpec(256)
        assert g.h == pytest.approx(1.0 / 256, abs=1e-18)
        assert g.area == 1.0

    @pytest.mark.parametrize("n", [8, 12, 100, 255])
    def test_rejects_bad_sizes(self, n):
        with pytest.raises(ParameterError):
            GridSpec(n)


class TestDerivatives:
    def test_ddx_linear_function_exact(self, grid64):
        f = sample(grid64, lambda x, y: x)
        d = ddx(f)
        assert np.allclose(d.values[1:-1, 1:-1], 1.0, atol=1e-13)
        assert d.is_boundary_clean()

    def test_ddx_of_zero(self, grid64):
        assert l2_norm(ddx(ScalarField.zeros(grid64))) == 0.0

    def test_ddy_linear_and_cross(self, grid64):
        assert np.allclose(ddy(sample(grid64, lambda x, y: y)).values[1:-1, 1:-1],
                           1.0, atol=1e-13)
        assert np.allclose(ddy(sample(grid64, lambda x, y: x)).values, 0.0,
                           atol=1e-13)

    @pytest.mark.parametrize("op,fn,dfn", [
        (ddx, lambda x, y: np.sin(TWO_PI * x), lambda x, y: TWO_PI * np.cos(TWO_PI * x)),
        (ddy, lambda x, y: np.sin(TWO_PI * y), lambda x, y: TWO_PI * np.cos(TWO_PI * y)),
    ])
    def test_sine_derivative_taylor_bound(self, op, fn, dfn):
        g = GridSpec(256)
        d = op(sample(g, fn))
        exact = sample(g, dfn)
        err = np.abs(d.values[1:-1, 1:-1] - exact.values[1:-1, 1:-1]).max()
        assert err <= TWO_PI ** 3 * g.h ** 2 / 6.0

    def test_laplacian_constant_and_quadratic(self, grid64):
        assert np.allclose(laplacian(ScalarField.full(grid64, 3.7)).values, 0.0,
                           atol=1e-13)
        q = sample(grid64, lambda x, y: x ** 2 + y ** 2)
        assert np.allclose(laplacian(q).values[1:-1, 1:-1], 4.0, atol=1e-9)

    def test_laplacian_sine_product(self):
        g = GridSpec(256)
        f = sample(g, lambda x, y: np.sin(np.pi * x) * np.sin(np.pi * y))
        lap = laplacian(f)
        exact = -2.0 * np.pi ** 2 * f.values
        mask = np.abs(f.values) > 0.5  # stay away from small denominators
        rel = np.abs(lap.values[mask] - exact[mask]) / np.abs(exact[mask])
        assert rel.max() <= np.pi ** 2 * g.h ** 2 / 6.0


class TestStreamRelations:
    def test_zero_stream(self, grid64):
        u, v = velocity_from_stream(ScalarField.zeros(grid64))
        assert l2_norm(u) == 0.0 and l2_norm(v) == 0.0

    def test_uniform_flow(self, grid64):
        u, v = velocity_from_stream(sample(grid64, lambda x, y: y))
        assert np.allclose(u.values[1:-1, 1:-1], 1.0, atol=1e-13)
        assert np.allclose(v.values, 0.0, atol=1e-13)

    def test_discrete_incompressibility(self, grid64):
        psi = sample(grid64, lambda x, y: np.sin(np.pi * x) * np.sin(np.pi * y))
        u, v = velocity_from_stream(psi)
        div = ddx(u).values + ddy(v).values
        assert np.abs(div[2:-2, 2:-2]).max() < 1e-12

    def test_incompressibility_random_stream(self, grid64, rng):
        psi = zero_ring(random_field(grid64, rng))
        u, v = velocity_from_stream(psi)
        div = ddx(u).values + ddy(v).values
        # commutation of centered stencils holds two cells in from the edge
        assert np.abs(div[2:-2, 2:-2]).max() < 1e-9

    def test_vorticity_sign_and_scale(self, grid64):
        psi = sample(grid64, lambda x, y: np.sin(np.pi * x) * np.sin(np.pi * y))
        om = vorticity_from_stream(psi)
        expect = 2.0 * np.pi ** 2 * psi.values[1:-1, 1:-1]
        assert np.allclose(om.values[1:-1, 1:-1], expect,
                           rtol=np.pi ** 2 * grid64.h ** 2)


class TestNorms:
    def test_unit_field(self, grid64):
        assert l2_norm(ScalarField.full(grid64, 1.0)) == pytest.approx(1.0)
        assert l2_norm(ScalarField.zeros(grid64)) == 0.0

    def test_sine_product_integral(self):
        g = GridSpec(256)
        f = sample(g, lambda x, y: np.sin(TWO_PI * x) * np.sin(TWO_PI * y))
        assert l2_norm(f) == pytest.approx(0.5, abs=1e-6)

    @given(c=st.floats(min_value=-1e6, max_value=1e6,
                       allow_nan=False, allow_infinity=False))
    def test_homogeneity(self, c):
        g = GridSpec(16)
        rng = np.random.default_rng(7)
        f = ScalarField(g, rng.standard_normal((16, 16)))
        scaled = ScalarField(g, c * f.values)
        assert l2_norm(scaled) == pytest.approx(abs(c) * l2_norm(f), rel=1e-13)

    def test_skew_symmetry_of_ddx(self, grid64, rng):
        # zero two rings so summation by parts has no edge remainder
        def clean(fld):
            v = fld.values.copy()
            v[:2, :] = v[-2:, :] = v[:, :2] = v[:, -2:] = 0.0
            return ScalarField(grid64, v)

        f = clean(random_field(grid64, rng))
        h = clean(random_field(grid64, rng))
        assert inner(ddx(f), h) == pytest.approx(-inner(f, ddx(h)), abs=1e-12)

    def test_derivatives_annihilate_affine(self, grid64, rng):
        for _ in range(5):
            a, b, c = rng.standard_normal(3)
            f = sample(grid64, lambda x, y: a * x + b * y + c)
            assert np.abs(ddx(f).values[1:-1, 1:-1] - a).max() < 1e-12
            assert np.abs(ddy(f).values[1:-1, 1:-1] - b).max() < 1e-12
            assert np.abs(laplacian(f).values).max() < 1e-9


class TestTaper:
    def test_width_zero_is_ring_mask(self, grid64):
        out = apply_taper(ScalarField.full(grid64, 1.0), 0)
        assert np.allclose(out.values[1:-1, 1:-1], 1.0)
        assert out.is_boundary_clean()

    def test_ring_always_zero(self, grid64, rng):
        out = apply_taper(random_field(grid64, rng), 5)
        assert out.is_boundary_clean()

    def test_half_height_at_half_width(self):
        g = GridSpec(256)
        out = apply_taper(ScalarField.full(g, 1.0), 8)
        # distance 4 from the edge, far from corners
        assert out.values[4, 128] == pytest.approx(np.sin(np.pi * 4 / 16) ** 2)
        assert out.values[4, 128] == pytest.approx(0.5)

    def test_width_range_checked(self, grid64):
        with pytest.raises(ParameterError):
            apply_taper(ScalarField.zeros(grid64), grid64.n // 4 + 1)
        with pytest.raises(ParameterError):
            apply_taper(ScalarField.zeros(grid64), -1)


def test_fields_are_immutable(grid64):
    f = ScalarField.zeros(grid64)
    with pytest.raises(ValueError):
        f.values[0, 0] = 1.0
