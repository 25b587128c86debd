import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bluedots import (
    DataSet,
    DotLayout,
    MetricKind,
    MetricSpec,
    PlotDomain,
    X_REF_HALF_DIFFERENCE,
    estimate_density,
    metric_distance,
    normalize,
)

finite_floats = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False)
unit_floats = st.floats(min_value=0.0, max_value=1.0)


def make_warped_spec(**kwargs):
    dens = estimate_density(np.linspace(0.1, 0.9, 32))
    return MetricSpec(kind=MetricKind.DENSITY_WARPED, density=dens, **kwargs)


class TestDataSet:
    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            DataSet(values=np.array([]))

    def test_rejects_non_finite_with_index(self):
        with pytest.raises(ValueError, match="index 2"):
            DataSet(values=np.array([1.0, 2.0, np.nan, 4.0]))
        with pytest.raises(ValueError, match="index 0"):
            DataSet(values=np.array([np.inf, 1.0]))

    def test_label_length_checked(self):
        with pytest.raises(ValueError):
            DataSet(values=np.array([1.0, 2.0]), labels=("a",))

    def test_values_immutable(self):
        ds = DataSet(values=np.array([1.0, 2.0]))
        with pytest.raises(ValueError):
            ds.values[0] = 9.0


class TestNormalize:
    def test_affine_endpoints(self):
        xs, (lo, hi) = normalize(DataSet(values=np.array([2.0, 4.0, 6.0])))
        assert xs.tolist() == [0.0, 0.5, 1.0]
        assert (lo, hi) == (2.0, 6.0)

    def test_degenerate_range(self):
        xs, (lo, hi) = normalize(DataSet(values=np.array([5.0, 5.0, 5.0])))
        assert xs.tolist() == [0.5, 0.5, 0.5]
        assert (lo, hi) == (4.5, 5.5)

    def test_affine_arithmetic(self):
        xs, _ = normalize(DataSet(values=np.array([1.0, 2.0, 4.0])))
        assert xs.tolist() == [0.0, (2.0 - 1.0) / (4.0 - 1.0), 1.0]

    @given(st.lists(finite_floats, min_size=2, max_size=40))
    def test_idempotent_on_normalized_data(self, raw):
        data = DataSet(values=np.array(raw))
        xs, _ = normalize(data)
        again, _ = normalize(DataSet(values=xs))
        assert np.array_equal(xs, again)

    @given(st.lists(finite_floats, min_size=1, max_size=40))
    def test_range_always_unit_interval(self, raw):
        xs, (lo, hi) = normalize(DataSet(values=np.array(raw)))
        assert lo < hi
        assert np.all(xs >= 0.0) and np.all(xs <= 1.0)


class TestPlotDomain:
    def test_validation(self):
        with pytest.raises(ValueError):
            PlotDomain(x_min=1.0, x_max=1.0, height=0.2, radius=0.01)
        with pytest.raises(ValueError):
            PlotDomain(x_min=0.0, x_max=1.0, height=0.0, radius=0.01)
        with pytest.raises(ValueError):
            PlotDomain(x_min=0.0, x_max=1.0, height=0.2, radius=-0.01)

    def test_radius_larger_than_height_allowed(self):
        PlotDomain(x_min=0.0, x_max=1.0, height=0.01, radius=0.05)

    def test_normalize_roundtrip(self):
        dom = PlotDomain(x_min=3.0, x_max=7.0, height=0.2, radius=0.01)
        raw = np.array([3.0, 5.0, 7.0])
        assert dom.normalize_x(raw).tolist() == [0.0, 0.5, 1.0]
        assert np.allclose(dom.denormalize_x(dom.normalize_x(raw)), raw)


class TestMetricDistance:
    def test_uniform_unit_square_diagonal(self):
        assert metric_distance(MetricSpec(), (0.0, 0.0), (1.0, 1.0)) == 3.0

    def test_identity(self):
        assert metric_distance(MetricSpec(), (0.3, 0.1), (0.3, 0.1)) == 0.0

    def test_pure_vertical(self):
        assert metric_distance(MetricSpec(), (0.5, 0.2), (0.5, 0.0)) == pytest.approx(0.2)

    def test_warped_requires_density(self):
        with pytest.raises(ValueError):
            MetricSpec(kind=MetricKind.DENSITY_WARPED)

    def test_warped_weight_range(self):
        spec = make_warped_spec()
        w = spec.encoding_weight(np.linspace(0, 1, 64), np.linspace(0, 1, 64))
        assert np.all(w > 1.0) and np.all(w <= 2.0)

    def test_warped_weight_is_two_at_peak(self):
        spec = make_warped_spec()
        peak = spec.density.grid[np.argmax(spec.density.values)]
        assert float(spec.encoding_weight(peak, peak)) == pytest.approx(2.0)

    def test_half_difference_alternative(self):
        mid = make_warped_spec()
        half = make_warped_spec(x_reference=X_REF_HALF_DIFFERENCE)
        p1, p2 = (0.2, 0.0), (0.8, 0.0)
        # midpoint samples d(0.5); half-difference samples d(-0.3) clamped to 0
        d_mid = mid.density.evaluate(0.5)
        d_half = mid.density.evaluate(0.0)
        assert metric_distance(mid, p1, p2) == pytest.approx((1 + d_mid / mid.density.d_max) * 0.6)
        assert metric_distance(half, p1, p2) == pytest.approx((1 + d_half / mid.density.d_max) * 0.6)

    @given(unit_floats, st.floats(0, 0.5), unit_floats, st.floats(0, 0.5))
    def test_symmetry_uniform(self, x1, y1, x2, y2):
        spec = MetricSpec()
        assert metric_distance(spec, (x1, y1), (x2, y2)) == metric_distance(
            spec, (x2, y2), (x1, y1)
        )

    @given(unit_floats, st.floats(0, 0.5), unit_floats, st.floats(0, 0.5))
    @settings(max_examples=25)
    def test_symmetry_warped_midpoint(self, x1, y1, x2, y2):
        spec = make_warped_spec()
        assert metric_distance(spec, (x1, y1), (x2, y2)) == pytest.approx(
            metric_distance(spec, (x2, y2), (x1, y1)), abs=1e-15
        )

    @given(unit_floats, st.floats(0, 0.5), unit_floats, st.floats(0, 0.5))
    def test_positive_for_distinct(self, x1, y1, x2, y2):
        if (x1, y1) != (x2, y2):
            assert metric_distance(MetricSpec(), (x1, y1), (x2, y2)) > 0.0

    @given(
        st.tuples(unit_floats, unit_floats),
        st.tuples(unit_floats, unit_floats),
        st.tuples(unit_floats, unit_floats),
    )
    def test_triangle_inequality_uniform(self, a, b, c):
        spec = MetricSpec()
        ac = metric_distance(spec, a, c)
        detour = metric_distance(spec, a, b) + metric_distance(spec, b, c)
        assert ac <= detour + 1e-12


class TestDotLayout:
    def test_shape_checks(self):
        dom = PlotDomain(x_min=0.0, x_max=1.0, height=0.2, radius=0.01)
        with pytest.raises(ValueError):
            DotLayout(x=np.array([0.1, 0.2]), y=np.array([0.1]), domain=dom)
        with pytest.raises(ValueError):
            DotLayout(x=np.array([0.1]), y=np.array([0.1]), domain=dom, labels=("a", "b"))

    def test_replace_y_keeps_x_object_semantics(self):
        dom = PlotDomain(x_min=0.0, x_max=1.0, height=0.2, radius=0.01)
        lay = DotLayout(x=np.array([0.1, 0.9]), y=np.array([0.0, 0.1]), domain=dom)
        moved = lay.replace_y(np.array([0.05, 0.15]), iterations_run=3)
        assert np.array_equal(moved.x, lay.x)
        assert moved.iterations_run == 3
        assert lay.iterations_run == 0
