"""Tests for dyadic squares, weight quadrature, classification and good-set checks."""

import math
import os
import sys
import unittest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

import numpy as np
import pytest

from conformal.maps import CayleyMap, IdentityMap, KoebeMap, MobiusMap
from errors import GeometryError, ParameterError, ResourceError
from models.sieve import DyadicSquare, SieveMode, SieveResult
from sieve.classify import (
    chain_inequality,
    classify_squares,
    refined_budget,
    refined_parameters,
    total_squares,
)
from sieve.holder import (
    holder_exponent_for,
    image_hausdorff_bound,
    verify_derivative_bound,
    verify_holder,
)
from sieve.john import PuncturedDisk, build_john_domain, build_john_domain_from_triangles, sieve_triangles
from sieve.quadrature import integrate_squares, integrate_weight
from sieve.squares import (
    content_of,
    disc_cover,
    generation,
    good_set_contains,
    hausdorff_content,
    square_cover_check,
    square_index,
)
from spectrum.means import image_area


def empty_sieve(p=0.5, n_max=10, mode=SieveMode.BOUNDED):
    return SieveResult(mode=mode, p=p, N=2, n_max=n_max)


class TestDyadicSquares(unittest.TestCase):
    """Square geometry and covers."""

    def test_generation_size(self):
        self.assertEqual(len(generation(5)), 32)

    def test_invalid_square(self):
        with pytest.raises(ValueError):
            DyadicSquare(2, 4)

    def test_square_geometry(self):
        sq = DyadicSquare(2, 1)
        self.assertEqual(sq.side, 0.25)
        self.assertEqual(sq.r_inner, 0.75)
        self.assertEqual(sq.angles, (math.pi / 2, math.pi))
        self.assertAlmostEqual(sq.boundary_center, complex(math.cos(3 * math.pi / 4), math.sin(3 * math.pi / 4)))

    def test_square_index(self):
        z = 0.9 * np.exp(1j * np.array([0.1, math.pi / 2 + 0.1, 2 * math.pi - 0.01]))
        np.testing.assert_array_equal(square_index(z, 2), [0, 1, 3])

    def test_total_squares(self):
        self.assertEqual(total_squares(2, 3), 12)
        self.assertEqual(total_squares(1, 1), 2)

    def test_disc_cover_contains_squares(self):
        for sq in (DyadicSquare(1, 0), DyadicSquare(4, 7), DyadicSquare(9, 300)):
            with self.subTest(square=sq):
                self.assertTrue(square_cover_check(sq))

    def test_small_factor_fails_cover(self):
        self.assertFalse(square_cover_check(DyadicSquare(3, 2), factor=0.5))

    def test_hausdorff_content(self):
        cover = disc_cover([DyadicSquare(1, 0), DyadicSquare(2, 3)], factor=1.0)
        self.assertAlmostEqual(hausdorff_content(cover, 1.0), 0.75)
        with pytest.raises(ParameterError):
            hausdorff_content(cover, 0.0)
        with pytest.raises(ParameterError):
            hausdorff_content([(1.0, 0.0)], 0.5)

    def test_content_of(self):
        self.assertAlmostEqual(content_of([DyadicSquare(2, 0), DyadicSquare(2, 1)], 0.5), 1.0)

    def test_good_set_contains(self):
        sieve = SieveResult(mode=SieveMode.BOUNDED, p=0.5, N=2, n_max=2, bad_squares=[DyadicSquare(2, 0)])
        z = np.array([0.9 * np.exp(0.1j), 0.5, 0.9j, 1.0])
        np.testing.assert_array_equal(good_set_contains(sieve, z), [False, True, True, False])
        self.assertIsInstance(good_set_contains(sieve, 0.1), bool)


class TestQuadrature(unittest.TestCase):
    """Weight integrals over T(Q) and L(Q)."""

    def test_identity_bounded_is_area(self):
        sq = DyadicSquare(3, 1)
        self.assertAlmostEqual(integrate_weight(IdentityMap(), sq), sq.inner_half_area(), places=12)

    def test_identity_unbounded_equals_bounded(self):
        sq = DyadicSquare(4, 5)
        self.assertAlmostEqual(
            integrate_weight(IdentityMap(), sq, SieveMode.UNBOUNDED),
            integrate_weight(IdentityMap(), sq, SieveMode.BOUNDED),
            places=12,
        )

    def test_identity_refined_is_length(self):
        sq = DyadicSquare(5, 9)
        value = integrate_weight(IdentityMap(), sq, SieveMode.REFINED, t_exp=0.3)
        self.assertAlmostEqual(value, sq.inner_segment_length(), places=12)

    def test_refinement_agrees_with_high_order(self):
        fmap = MobiusMap(a=0.8)
        squares = [DyadicSquare(3, 0), DyadicSquare(3, 7)]
        adaptive = integrate_squares(fmap, squares)
        fine = integrate_squares(fmap, squares, quadrature_order=64)
        np.testing.assert_allclose(adaptive, fine, rtol=1e-4)

    def test_generation_integrals_sum_to_image_area(self):
        """The T(Q) of one generation tile a ring, so their weights add up to its image area."""
        r_in, r_mid = 1 - 2**-4, 1 - 2**-5
        direct = integrate_squares(IdentityMap(), generation(4))
        self.assertAlmostEqual(direct.sum(), math.pi * (r_mid**2 - r_in**2), places=10)

        fmap = MobiusMap(a=0.3)
        values = integrate_squares(fmap, generation(4))
        self.assertAlmostEqual(values.sum() / image_area(fmap, r_in, r_mid), 1.0, places=6)

    def test_empty_batch(self):
        self.assertEqual(integrate_squares(IdentityMap(), []).size, 0)

    def test_bad_order(self):
        with pytest.raises(ParameterError):
            integrate_weight(IdentityMap(), DyadicSquare(1, 0), quadrature_order=2)


class TestClassify(unittest.TestCase):
    """classify_squares on maps with known behaviour."""

    def test_identity_sieve_is_empty(self):
        sieve = classify_squares(IdentityMap(), 1 / 3, 2, n_max=8, threads=1)
        self.assertEqual(sieve.bad_squares, [])
        self.assertEqual(sieve.content_bound, 0.0)
        self.assertEqual(sieve.squares_scanned, total_squares(2, 8))

    def test_mobius_has_bad_squares_near_pole(self):
        sieve = classify_squares(MobiusMap(a=0.8), 0.9, 2, n_max=7, threads=1)
        self.assertTrue(sieve.bad_squares)
        self.assertGreater(sieve.content_bound, 0.0)
        for sq in sieve.bad_squares:
            a0, a1 = sq.angles
            mid = (a0 + a1) / 2
            self.assertLess(abs(math.remainder(mid, 2 * math.pi)), math.pi / 2)
        self.assertTrue(all(w > sq.side ** 0.9 for sq, w in zip(sieve.bad_squares, sieve.bad_weights)))

    def test_content_monotone_in_N(self):
        fmap = MobiusMap(a=0.9)
        contents = [classify_squares(fmap, 0.9, N, n_max=8, threads=1).content_bound for N in (4, 6, 8)]
        self.assertTrue(all(c > 0.0 for c in contents))
        self.assertGreaterEqual(contents[0], contents[1])
        self.assertGreaterEqual(contents[1], contents[2])

    def test_koebe_unbounded_content_is_bounded(self):
        fmap = KoebeMap()
        total = sum(
            integrate_squares(fmap, generation(n), mode=SieveMode.UNBOUNDED).sum() for n in range(4, 9)
        )
        self.assertLess(total, 21.0)
        contents = []
        for N in (4, 6, 8):
            sieve = classify_squares(fmap, 0.9, N, mode=SieveMode.UNBOUNDED, n_max=8, threads=1)
            self.assertLessEqual(sieve.content_bound, sum(sieve.bad_weights) + 1e-12)
            contents.append(sieve.content_bound)
        self.assertGreater(contents[0], 0.0)
        self.assertLess(contents[0], total)
        self.assertGreaterEqual(contents[0], contents[1])
        self.assertGreaterEqual(contents[1], contents[2])

    def test_threads_do_not_change_result(self):
        fmap = MobiusMap(a=0.6 + 0.2j)
        one = classify_squares(fmap, 0.4, 2, n_max=11, threads=1)
        many = classify_squares(fmap, 0.4, 2, n_max=11, threads=4)
        self.assertEqual(one.bad_squares, many.bad_squares)
        self.assertEqual(one.content_bound, many.content_bound)

    def test_refined_mode_threshold(self):
        t, delta = refined_parameters(0.99)
        self.assertAlmostEqual(t, 0.1)
        self.assertAlmostEqual(delta, 0.05)
        sieve = classify_squares(IdentityMap(), 0.99, 4, mode=SieveMode.REFINED, n_max=6, threads=1)
        self.assertAlmostEqual(sieve.delta, 0.05)
        self.assertEqual(sieve.mode, SieveMode.REFINED)

    def test_budget(self):
        with pytest.raises(ResourceError):
            classify_squares(IdentityMap(), 0.5, 2, n_max=10, max_squares=100)

    def test_parameter_errors(self):
        with pytest.raises(ParameterError):
            classify_squares(IdentityMap(), 1.2, 2, n_max=4)
        with pytest.raises(ParameterError):
            classify_squares(IdentityMap(), 0.5, 0, n_max=4)
        with pytest.raises(ParameterError):
            classify_squares(IdentityMap(), 0.5, 5, n_max=4)
        with pytest.raises(ParameterError):
            classify_squares(CayleyMap(), 0.5, 2, n_max=4)

    def test_round_trip_dict(self):
        sieve = classify_squares(MobiusMap(a=0.8), 0.9, 3, n_max=6, threads=1)
        self.assertTrue(sieve.bad_squares)
        again = SieveResult.from_dict(sieve.to_dict())
        self.assertEqual(again.bad_squares, sieve.bad_squares)
        self.assertEqual(again.content_bound, sieve.content_bound)


class TestChainInequality(unittest.TestCase):
    """content <= weight sum <= area of the image annulus."""

    def test_mobius_maps(self):
        for a in (0.3, 0.6, 0.8j):
            with self.subTest(a=a):
                fmap = MobiusMap(a=a)
                sieve = classify_squares(fmap, 0.9, 2, n_max=8, threads=1)
                report = chain_inequality(fmap, sieve)
                self.assertTrue(report.lower_ok)
                self.assertTrue(report.upper_ok)
                self.assertLessEqual(report.content, report.weight_sum)
                self.assertLessEqual(report.annulus_area, math.pi)
                if a == 0.8j:
                    self.assertTrue(sieve.bad_squares)
                    self.assertGreater(report.content, 0.0)
                    self.assertGreater(report.weight_sum, 0.0)

    def test_identity_annulus_area(self):
        sieve = classify_squares(IdentityMap(), 1 / 3, 2, n_max=4, threads=1)
        report = chain_inequality(IdentityMap(), sieve)
        self.assertAlmostEqual(report.annulus_area, math.pi * (1 - 0.75**2), places=8)
        self.assertEqual(report.weight_sum, 0.0)

    def test_refined_budget_identity(self):
        sieve = classify_squares(IdentityMap(), 0.99, 4, mode=SieveMode.REFINED, n_max=6, threads=1)
        budget = refined_budget(IdentityMap(), sieve)
        self.assertEqual(budget.generations, [4, 5, 6])
        self.assertTrue(all(budget.term_ok))
        expected = 2 ** (-4 * 0.05) * 2 * math.pi * (1 - 2**-4)
        self.assertAlmostEqual(budget.terms[0], expected, places=8)

    def test_refined_budget_needs_refined_sieve(self):
        with pytest.raises(ParameterError):
            refined_budget(IdentityMap(), empty_sieve())


class TestHolder(unittest.TestCase):
    """Derivative and Holder constants on the good set."""

    def test_exponent_for_modes(self):
        self.assertAlmostEqual(holder_exponent_for(empty_sieve(p=0.5)), 0.25)
        self.assertAlmostEqual(holder_exponent_for(empty_sieve(p=0.99, mode=SieveMode.REFINED)), 0.4)
        self.assertLess(holder_exponent_for(empty_sieve(p=0.5, mode=SieveMode.REFINED)), 0)

    def test_image_hausdorff_bound(self):
        self.assertAlmostEqual(image_hausdorff_bound(0.5, 1.0), 2.0)
        with pytest.raises(ParameterError):
            image_hausdorff_bound(0.0, 1.0)

    def test_identity_derivative_constant_is_one(self):
        self.assertEqual(verify_derivative_bound(IdentityMap(), empty_sieve(), samples=500), 1.0)

    def test_derivative_constant_grows_with_samples(self):
        fmap = MobiusMap(a=0.5)
        few = verify_derivative_bound(fmap, empty_sieve(), samples=100, seed=4)
        more = verify_derivative_bound(fmap, empty_sieve(), samples=1000, seed=4)
        self.assertLessEqual(few, more)

    def test_identity_holder(self):
        report = verify_holder(IdentityMap(), empty_sieve(), 0.5, pairs=2000)
        self.assertLessEqual(report.constant, math.sqrt(2) + 1e-12)
        self.assertEqual(report.pairs, 2000)
        self.assertEqual(report.path_in_domain, 1.0)

    def test_mobius_lipschitz(self):
        report = verify_holder(MobiusMap(a=0.5), empty_sieve(), 1.0, pairs=4000, seed=1)
        self.assertLessEqual(report.constant, 3.0 + 1e-9)
        self.assertGreater(report.constant, 2.0)

    def test_identity_constant_stable_under_more_pairs(self):
        few = verify_holder(IdentityMap(), empty_sieve(p=0.5), 0.25, pairs=1000, seed=3)
        more = verify_holder(IdentityMap(), empty_sieve(p=0.5), 0.25, pairs=10000, seed=3)
        self.assertGreaterEqual(more.constant, few.constant)
        self.assertLess(more.constant / few.constant, 1.2)
        self.assertLessEqual(more.constant, 2 ** 0.75 + 1e-12)

    def test_refined_constant_stable_under_more_pairs(self):
        fmap = MobiusMap(a=0.5)
        sieve = classify_squares(fmap, 0.99, 4, mode=SieveMode.REFINED, n_max=8, threads=1)
        exponent = holder_exponent_for(sieve)
        self.assertAlmostEqual(exponent, 0.4)
        few = verify_holder(fmap, sieve, exponent, pairs=1000, seed=5)
        more = verify_holder(fmap, sieve, exponent, pairs=10000, seed=5)
        self.assertGreaterEqual(more.constant, few.constant)
        self.assertLess(more.constant / few.constant, 1.2)
        self.assertLessEqual(more.constant, 3.0 * 2 ** 0.6)

    def test_same_seed_same_report(self):
        a = verify_holder(MobiusMap(a=0.5), empty_sieve(), 0.5, pairs=500, seed=9)
        b = verify_holder(MobiusMap(a=0.5), empty_sieve(), 0.5, pairs=500, seed=9)
        self.assertEqual(a.constant, b.constant)
        self.assertEqual(a.worst_pair, b.worst_pair)

    def test_invalid_exponent(self):
        with pytest.raises(ParameterError):
            verify_holder(IdentityMap(), empty_sieve(), -0.2)
        with pytest.raises(ParameterError):
            verify_holder(IdentityMap(), empty_sieve(), 1.5)


class TestJohnDomain(unittest.TestCase):
    """Triangle-punctured disks."""

    def test_empty_sieve_is_disk(self):
        report = build_john_domain(empty_sieve(), probes=60, grid=64, seed=2)
        self.assertLessEqual(report.john_constant_estimate, 2.0)
        self.assertGreaterEqual(report.holder_exponent_estimate, 0.95)
        self.assertTrue(report.simply_connected)
        self.assertEqual(report.triangles, [])

    def test_triangle_removes_points(self):
        domain = PuncturedDisk([(1.0, 0.2)])
        np.testing.assert_array_equal(domain.contains(np.array([0.9, -0.9, 0.0])), [False, True, True])
        self.assertAlmostEqual(float(domain.radius(np.array([0.0]))[0]), 0.6)
        self.assertAlmostEqual(float(domain.radius(np.array([math.pi]))[0]), 1.0)

    def test_large_triangles_rejected(self):
        with pytest.raises(GeometryError):
            PuncturedDisk([(1.0, 0.6)])
        with pytest.raises(GeometryError):
            PuncturedDisk([(1.2, 0.1)])

    def test_sieve_triangles_at_generation_two_are_too_large(self):
        sieve = SieveResult(mode=SieveMode.BOUNDED, p=1 / 3, N=2, n_max=2, bad_squares=[DyadicSquare(2, 0)])
        triangles = sieve_triangles(sieve)
        self.assertAlmostEqual(triangles[0][1], (math.pi + 1) / 8)
        with pytest.raises(GeometryError):
            build_john_domain(sieve, probes=10, grid=32)

    def test_sieve_triangles_inside_cover_discs(self):
        sieve = SieveResult(mode=SieveMode.BOUNDED, p=1 / 3, N=5, n_max=5, bad_squares=[DyadicSquare(5, 3)])
        (x, r), = sieve_triangles(sieve, factor=2.0)
        (centre, rho), = disc_cover(sieve.bad_squares, 2.0)
        self.assertEqual(x, centre)
        self.assertAlmostEqual(r, rho / 2)
        domain = PuncturedDisk([(x, r)])
        corners = domain.radius(domain.corner_angles()) * np.exp(1j * domain.corner_angles())
        self.assertTrue(np.all(np.abs(corners - x) <= rho + 1e-12))

    def test_single_triangle(self):
        report = build_john_domain_from_triangles([(1j, 0.1)], probes=40, grid=64, seed=0)
        self.assertTrue(report.simply_connected)
        self.assertGreaterEqual(report.john_constant_estimate, 1.0)
        self.assertEqual(len(report.triangles), 1)

    def test_uniform_constant_over_triangle_families(self):
        triangles = [(complex(np.exp(2j * np.pi * (k + 0.5) / 16)), 1 / 16) for k in range(16)]
        for size in (1, 4, 16):
            with self.subTest(size=size):
                chosen = triangles[:: 16 // size]
                report = build_john_domain_from_triangles(chosen, probes=40, grid=64, seed=1)
                self.assertEqual(len(report.triangles), size)
                self.assertTrue(report.simply_connected)
                self.assertGreaterEqual(report.john_constant_estimate, 1.0)
                self.assertLessEqual(report.john_constant_estimate, 4.0)


if __name__ == '__main__':
    unittest.main()
