"""Tests for closed-form maps, snowflakes, polygon geometry and the zipper."""

import math
import os
import sys
import tempfile
import unittest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

import numpy as np
import pytest

from conformal.geometry import (
    CurveDistance,
    check_simple,
    contains,
    densify,
    hausdorff_distance,
    interior_point,
    orient_ccw,
    subdivide,
)
from conformal.maps import (
    CayleyMap,
    ChordalSlitMap,
    IdentityMap,
    KoebeMap,
    MobiusMap,
    RadialSlitMap,
    image_curve,
    map_from_dict,
    winding_number,
)
from conformal.snowflake import (
    CLASSICAL_FLATNESS,
    displacement_bound,
    koch_snowflake,
    similarity_dimension,
    read_curve_csv,
    write_curve_csv,
)
from conformal.zipper import BoundaryFittedMap, build_boundary_map
from errors import DomainError, GeometryError, ParameterError, ResourceError
from models.conformal import JordanCurve, SourceDomain


def regular_polygon(n, radius=1.0, center=0.0):
    k = np.arange(n)
    return JordanCurve(vertices=center + radius * np.exp(2j * np.pi * k / n))


class TestClosedFormMaps(unittest.TestCase):
    """Closed-form maps evaluate with matching derivatives."""

    def setUp(self):
        self.z = np.array([0.1 + 0.2j, -0.4 + 0.05j, 0.6j])

    def assert_derivative(self, fmap, z):
        h = 1e-6
        numeric = (fmap.eval(z + h) - fmap.eval(z - h)) / (2 * h)
        np.testing.assert_allclose(fmap.deriv(z), numeric, rtol=1e-6)

    def test_derivatives(self):
        for fmap in (MobiusMap(a=0.3 - 0.2j, theta=0.4), KoebeMap(), RadialSlitMap(theta=1.0, capacity=0.2)):
            with self.subTest(kind=fmap.kind.value):
                self.assert_derivative(fmap, self.z)

    def test_half_plane_derivatives(self):
        z = np.array([0.5 + 1.0j, -2.0 + 0.3j])
        for fmap in (CayleyMap(rotation=0.5), ChordalSlitMap(u=0.1, capacity=0.25)):
            with self.subTest(kind=fmap.kind.value):
                self.assert_derivative(fmap, z)

    def test_scalar_in_scalar_out(self):
        value = MobiusMap(a=0.5).eval(0.0)
        self.assertIsInstance(value, complex)
        self.assertAlmostEqual(value, -0.5)

    def test_mobius_inverse(self):
        m = MobiusMap(a=0.4 + 0.1j, theta=1.2)
        np.testing.assert_allclose(m.inverse().eval(m.eval(self.z)), self.z, atol=1e-12)

    def test_mobius_max_derivative(self):
        self.assertAlmostEqual(MobiusMap(a=0.5).max_derivative(), 3.0)

    def test_outside_disk(self):
        with pytest.raises(DomainError):
            IdentityMap().eval(1.2)

    def test_outside_half_plane(self):
        with pytest.raises(DomainError):
            CayleyMap().eval(-1j)

    def test_invalid_mobius(self):
        with pytest.raises(ParameterError):
            MobiusMap(a=1.0)

    def test_compose_chain_rule(self):
        outer = MobiusMap(a=0.2)
        composed = outer.compose(CayleyMap())
        z = np.array([0.3 + 0.4j])
        np.testing.assert_allclose(composed.eval(z), outer.eval(CayleyMap().eval(z)))
        self.assert_derivative(composed, z)
        self.assertEqual(composed.source, SourceDomain.HALF_PLANE)

    def test_closure_only_for_continuous_maps(self):
        self.assertAlmostEqual(MobiusMap(a=0.5).eval_closure(1.0), 1.0)
        with pytest.raises(DomainError):
            KoebeMap().eval_closure(1.0)


class TestMapDescriptors(unittest.TestCase):
    """map_from_dict rebuilds maps from their JSON descriptors."""

    def test_rebuild_preserves_values(self):
        z = np.array([0.2 + 0.1j, -0.3j])
        for fmap in (IdentityMap(), MobiusMap(a=0.5, theta=0.3), KoebeMap(), RadialSlitMap(2.0, 0.3)):
            with self.subTest(kind=fmap.kind.value):
                again = map_from_dict(fmap.to_dict())
                np.testing.assert_allclose(again.eval(z), fmap.eval(z))

    def test_complex_parameter_as_pair(self):
        fmap = map_from_dict({'kind': 'mobius', 'a': [0.8, 0.0]})
        self.assertEqual(fmap.a, 0.8)

    def test_mobius_alias(self):
        self.assertIsInstance(map_from_dict({'kind': 'möbius', 'a': 0.1}), MobiusMap)

    def test_unknown_kind(self):
        with pytest.raises(ParameterError):
            map_from_dict({'kind': 'riemann'})

    def test_malformed(self):
        with pytest.raises(ParameterError):
            map_from_dict({'kind': 'composed', 'outer': {'kind': 'identity'}})


class TestImageCurve(unittest.TestCase):

    def test_identity_is_circle(self):
        curve = image_curve(IdentityMap(), radius=0.5, n=512)
        np.testing.assert_allclose(np.abs(curve.vertices), 0.5)
        self.assertEqual(winding_number(curve, 0.0), 1)
        self.assertEqual(winding_number(curve, 0.9), 0)

    def test_needs_disk_map(self):
        with pytest.raises(ParameterError):
            image_curve(CayleyMap())


class TestSnowflake(unittest.TestCase):
    """Koch-type snowflake construction."""

    def test_depth_zero_is_triangle(self):
        curve = koch_snowflake(0)
        self.assertEqual(curve.n_segments, 3)
        self.assertAlmostEqual(curve.length, 3.0)

    def test_segment_count_and_length(self):
        for depth in range(4):
            curve = koch_snowflake(depth)
            self.assertEqual(curve.n_segments, 3 * 4 ** depth)
            self.assertAlmostEqual(curve.length, 3.0 * (4.0 / 3.0) ** depth)

    def test_counter_clockwise_and_simple(self):
        curve = koch_snowflake(3)
        self.assertGreater(curve.signed_area, 0)
        check_simple(curve)

    def test_area_grows(self):
        self.assertGreater(koch_snowflake(2).signed_area, koch_snowflake(0).signed_area)

    def test_stays_near_triangle(self):
        curve = koch_snowflake(4, flatness=0.3)
        triangle = koch_snowflake(0).vertices
        distance = hausdorff_distance(curve.vertices, triangle, 0.005)
        self.assertLessEqual(distance, displacement_bound(0.3) + 0.01)

    def test_classical_dimension(self):
        self.assertAlmostEqual(similarity_dimension(CLASSICAL_FLATNESS), math.log(4) / math.log(3), places=10)

    def test_dimension_increases_with_flatness(self):
        self.assertLess(similarity_dimension(0.2), similarity_dimension(0.4))

    def test_closing_vertex_not_duplicated(self):
        for depth in range(4):
            vertices = koch_snowflake(depth, flatness=0.3).vertices
            steps = np.abs(np.diff(vertices))
            self.assertGreater(steps.min(), 1e-6)
            self.assertEqual(vertices[0], vertices[-1])

    def test_csv_round_trip(self):
        curve = koch_snowflake(2, flatness=0.3)
        with tempfile.TemporaryDirectory() as tmpdir:
            path = write_curve_csv(curve, os.path.join(tmpdir, "curve.csv"))
            with open(path, encoding="utf-8") as f:
                self.assertEqual(f.readline().strip(), "re,im")
            again = read_curve_csv(path, depth=2, flatness=0.3)
        self.assertEqual(again.n_segments, curve.n_segments)
        np.testing.assert_allclose(again.vertices, curve.vertices, atol=1e-15)
        check_simple(again)

    def test_csv_too_short(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            path = os.path.join(tmpdir, "short.csv")
            with open(path, "w", encoding="utf-8") as f:
                f.write("re,im\n0,0\n1,0\n")
            with pytest.raises(ParameterError):
                read_curve_csv(path)

    def test_bad_parameters(self):
        with pytest.raises(ParameterError):
            koch_snowflake(9)
        with pytest.raises(ParameterError):
            koch_snowflake(2, flatness=1.0)
        with pytest.raises(ParameterError):
            koch_snowflake(1.5)


class TestGeometry(unittest.TestCase):
    """Polyline helpers."""

    def test_bowtie_not_simple(self):
        bowtie = JordanCurve(vertices=[0, 1 + 1j, 1, 1j])
        with pytest.raises(GeometryError):
            check_simple(bowtie)

    def test_orient_ccw(self):
        clockwise = JordanCurve(vertices=regular_polygon(8).vertices[::-1])
        self.assertLess(clockwise.signed_area, 0)
        self.assertGreater(orient_ccw(clockwise).signed_area, 0)

    def test_densify_spacing(self):
        pts = densify(np.array([0, 1, 1 + 1j]), 0.1)
        self.assertLessEqual(np.max(np.abs(np.diff(pts))), 0.1 + 1e-12)
        self.assertEqual(pts[0], 0)
        self.assertEqual(pts[-1], 1 + 1j)

    def test_subdivide_keeps_corners(self):
        square = JordanCurve(vertices=[0, 1, 1 + 1j, 1j])
        fine = subdivide(square, 40)
        self.assertEqual(fine.n_segments, 40)
        self.assertAlmostEqual(fine.length, 4.0)

    def test_contains_and_interior_point(self):
        square = JordanCurve(vertices=[0, 1, 1 + 1j, 1j])
        np.testing.assert_array_equal(contains(square, [0.5 + 0.5j, 2.0]), [True, False])
        self.assertAlmostEqual(interior_point(square), 0.5 + 0.5j)

    def test_curve_distance(self):
        dist = CurveDistance(np.array([0, 1]), 0.01)
        self.assertAlmostEqual(float(dist(0.5 + 0.3j)), 0.3, places=6)


class TestZipper(unittest.TestCase):
    """Boundary-fitted maps against known Riemann maps."""

    @classmethod
    def setUpClass(cls):
        cls.circle = regular_polygon(512)
        cls.disk_map = build_boundary_map(cls.circle, center=0.0, min_vertices=512)

    def test_circle_gives_identity(self):
        z = np.array([0.0, 0.3, 0.2 - 0.4j, -0.5j])
        np.testing.assert_allclose(self.disk_map.eval(z), z, atol=5e-3)

    def test_normalisation(self):
        self.assertAlmostEqual(self.disk_map.eval(0.0), 0.0, places=10)
        d0 = self.disk_map.deriv(0.0)
        self.assertGreater(d0.real, 0)
        self.assertAlmostEqual(d0.imag, 0.0, places=10)

    def test_off_center_gives_mobius(self):
        fmap = build_boundary_map(self.circle, center=-0.5, min_vertices=512)
        z = np.array([0.0, 0.4, 0.3j, -0.2 - 0.2j])
        np.testing.assert_allclose(fmap.eval(z), MobiusMap(a=0.5).eval(z), atol=5e-3)
        self.assertAlmostEqual(fmap.center, -0.5)

    def test_inverse_eval(self):
        z = np.array([0.1 + 0.1j, -0.6, 0.5j])
        np.testing.assert_allclose(self.disk_map.inverse_eval(self.disk_map.eval(z)), z, atol=1e-8)

    def test_descriptor_round_trip(self):
        again = map_from_dict(self.disk_map.to_dict())
        self.assertIsInstance(again, BoundaryFittedMap)
        z = np.array([0.25 - 0.1j])
        np.testing.assert_allclose(again.eval(z), self.disk_map.eval(z), atol=1e-12)

    def test_snowflake_image_inside_curve(self):
        flake = koch_snowflake(2)
        fmap = build_boundary_map(flake)
        inner = 0.9 * np.exp(2j * np.pi * np.arange(64) / 64)
        self.assertTrue(np.all(contains(flake, fmap.eval(inner))))
        self.assertLess(abs(fmap.eval(0.0) - fmap.center), 1e-10)

    def test_deep_snowflake_builds(self):
        flake = koch_snowflake(3, flatness=0.3)
        fmap = build_boundary_map(flake, center=0.0)
        inner = 0.8 * np.exp(2j * np.pi * np.arange(48) / 48)
        self.assertTrue(np.all(contains(flake, fmap.eval(inner))))

    def test_deep_snowflake_self_convergence(self):
        flake = koch_snowflake(3, flatness=0.3)
        coarse = build_boundary_map(flake, center=0.0, min_vertices=512)
        fine = build_boundary_map(flake, center=0.0, min_vertices=2048)
        z = np.concatenate([
            0.6 * np.exp(2j * np.pi * np.arange(50) / 50),
            np.array([0.0, 0.2, -0.3j, 0.1 + 0.4j]),
        ])
        self.assertLess(np.max(np.abs(coarse.eval(z) - fine.eval(z))), 1e-3)

    def test_center_outside(self):
        with pytest.raises(GeometryError):
            build_boundary_map(self.circle, center=2.0)

    def test_non_simple(self):
        with pytest.raises(GeometryError):
            build_boundary_map(JordanCurve(vertices=[0, 1 + 1j, 1, 1j]))

    def test_vertex_limit(self):
        with pytest.raises(ResourceError):
            build_boundary_map(regular_polygon(64), max_vertices=32)


if __name__ == '__main__':
    unittest.main()
