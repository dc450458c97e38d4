import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chlodowsky.basis import ShiftedInterval
from chlodowsky.domain import CurveDomain, NodeScheme, mk, transform_point, y_step
from chlodowsky.errors import BasisIndexError, DegenerateColumnError, DomainError, InvalidDomainError


def band(b=2.0, alpha=0.0, beta=1.0):
    return CurveDomain(ShiftedInterval(alpha, beta, b), lambda x: 0.0, lambda x: b)


class TestNodeScheme:
    def test_examples(self):
        assert mk(NodeScheme.DESCENDING, 5, 5) == 0
        assert mk(NodeScheme.ASCENDING, 5, 0) == 0
        assert mk(NodeScheme.CONSTANT, 5, 3) == 5
        assert NodeScheme.DESCENDING.degrees(3) == [3, 2, 1, 0]

    def test_index_range(self):
        with pytest.raises(BasisIndexError):
            mk(NodeScheme.CONSTANT, 4, 5)
        with pytest.raises(BasisIndexError):
            NodeScheme.ASCENDING.mk(4, -1)

    def test_parse(self):
        assert NodeScheme.parse(" Ascending ") is NodeScheme.ASCENDING
        with pytest.raises(ValueError, match="descending"):
            NodeScheme.parse("diagonal")

    @given(st.sampled_from(list(NodeScheme)), st.integers(1, 200), st.data())
    def test_nonnegative(self, scheme, m, data):
        k = data.draw(st.integers(0, m))
        assert 0 <= mk(scheme, m, k) <= m


class TestYStep:
    def test_examples(self):
        dom = band(2.0)
        assert y_step(NodeScheme.CONSTANT, dom, 4, 2) == 0.5
        with pytest.raises(DegenerateColumnError):
            y_step(NodeScheme.DESCENDING, dom, 4, 4)
        unit = CurveDomain(ShiftedInterval(0, 1, 1.0), lambda x: 0.0, lambda x: 1.0)
        assert y_step(NodeScheme.CONSTANT, unit, 10, 3) == pytest.approx(0.1)

    @settings(deadline=None)
    @given(st.floats(0.1, 20), st.integers(1, 50), st.data())
    def test_constant_scheme_consistency(self, b, m, data):
        k = data.draw(st.integers(0, m))
        assert y_step(NodeScheme.CONSTANT, band(b), m, k) * m == pytest.approx(b, rel=1e-15)

    def test_tracks_fiber_height(self):
        dom = CurveDomain(ShiftedInterval(0, 1, 3.0), lambda x: -x, lambda x: 1 + x)
        assert y_step(NodeScheme.ASCENDING, dom, 6, 2) == pytest.approx((1 + 2 * 1.0) / 2)


class TestCurveDomain:
    def test_rejects_touching_curves(self):
        with pytest.raises(InvalidDomainError, match="not strictly separated"):
            CurveDomain(ShiftedInterval(0, 1, 1), lambda x: 0.0, lambda x: x)
        with pytest.raises(InvalidDomainError):
            CurveDomain(ShiftedInterval(0, 1, 1), lambda x: 1.0, lambda x: 0.5)

    def test_unvalidated_domain_may_fold(self):
        dom = CurveDomain(ShiftedInterval(0, 1, 1), lambda x: math.sin(6 * x), lambda x: 0.1, validate=False)
        assert dom.transform_point(0.5, 1.0) == (0.5, 0.1)

    def test_corners_and_centre(self):
        dom = CurveDomain(ShiftedInterval(0.5, 2.0, 2.0), lambda x: x - 3, lambda x: x * x)
        assert transform_point(dom, 0.0, 0.0) == (1.0, -2.0)
        assert transform_point(dom, 1.0, 1.0) == (4.0, 16.0)
        assert transform_point(band(2.0), 0.5, 0.5) == (1.0, 1.0)
        with pytest.raises(DomainError):
            dom.transform_point(1.2, 0.5)

    def test_to_parametric(self):
        dom = band(2.0)
        assert dom.to_parametric(1.0, 1.0) == (0.5, 0.5)
        for point in [(2.5, 1.0), (1.0, -0.1), (1.0, 2.1)]:
            with pytest.raises(DomainError, match="outside domain"):
                dom.to_parametric(*point)
        assert not dom.contains(1.0, 3.0)
        assert dom.contains(2.0, 2.0)

    def test_phi_tilde(self):
        dom = CurveDomain(ShiftedInterval(1.0, 3.0, 0.5), lambda x: x, lambda x: x + 1)
        assert dom.phi_tilde(1, 0.0) == 0.5
        assert dom.phi_tilde(2, 1.0) == 2.5
        assert not dom.is_classical
        assert band().is_classical

    def test_image_containment(self):
        dom = CurveDomain(ShiftedInterval(-0.5, 1.5, 2.0), lambda x: math.sin(x) - 1, lambda x: 1 + x * x / 4)
        rng = np.random.default_rng(7)
        for u, v in rng.random((10_000, 2)):
            x, y = dom.transform_point(float(u), float(v))
            lo, hi = dom.fiber(x)
            eps = 1e-9 * (hi - lo)
            assert dom.interval.left <= x <= dom.interval.right
            assert lo - eps <= y <= hi + eps

    @settings(deadline=None)
    @given(st.floats(0, 1), st.floats(0, 1))
    def test_round_trip(self, u, v):
        dom = CurveDomain(ShiftedInterval(0.2, 1.2, 3.0), lambda x: -1 - math.cos(x), lambda x: 1 + x)
        x, y = dom.transform_point(u, v)
        back = dom.to_parametric(x, y)
        assert back == pytest.approx((u, v), abs=1e-9)
