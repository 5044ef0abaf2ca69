"""Exact polyhedral geometry: dual cones, Gorenstein vectors, slices."""

import random
from fractions import Fraction

import mpmath
import pytest

import reebcone.linalg as linalg
from reebcone import (
    DegenerateSolutionSet,
    GorensteinVector,
    IrrationalReeb,
    NonIntegerRay,
    NotFullDimensional,
    NotPointed,
    NotQGorenstein,
    RayPrimitivizedWarning,
    RedundantRayWarning,
    UnboundedSlice,
    dual_cone,
    gorenstein_vector,
    lattice_points,
    polytope_Q,
    reeb_vector,
    triangulate_cone,
)
from conftest import random_cone_suite, random_height_one_cone, random_interior_xi


class TestDualCone:
    def test_orthant2(self, orthant2):
        assert orthant2.rays == ((1, 0), (0, 1))
        assert orthant2.dual_rays == ((0, 1), (1, 0))
        assert orthant2.facets_sigma == orthant2.dual_rays

    def test_a1(self, a1):
        assert a1.dual_rays == ((0, 1), (2, -1))

    def test_conifold(self, conifold):
        assert conifold.dual_rays == ((0, 0, 1), (0, 1, 0), (1, -1, 0), (1, 0, -1))

    def test_y21(self, y21):
        assert y21.dual_rays == ((0, 0, 1), (0, 1, 0), (2, -2, 1), (2, 1, -2))

    def test_duality_involution_fixtures(self, fixture_cone):
        again = dual_cone(fixture_cone.dual_rays, fixture_cone.dim)
        assert set(again.dual_rays) == set(fixture_cone.rays)

    def test_duality_involution_random(self):
        rng = random.Random(5)
        for _ in range(25):
            cone = random_height_one_cone(rng, rng.choice([2, 3, 4]))
            again = dual_cone(cone.dual_rays, cone.dim)
            assert set(again.dual_rays) == set(cone.rays)

    def test_pairings_nonnegative(self, fixture_cone):
        for v in fixture_cone.rays:
            for u in fixture_cone.dual_rays:
                assert linalg.dot(v, u) >= 0

    def test_primitivize_warning(self):
        with pytest.warns(RayPrimitivizedWarning):
            cone = dual_cone([(2, 0), (0, 1)], 2)
        assert cone.rays == ((1, 0), (0, 1))

    def test_redundant_ray_dropped(self):
        with pytest.warns(RedundantRayWarning):
            cone = dual_cone([(1, 0), (1, 1), (0, 1)], 2)
        assert cone.rays == ((1, 0), (0, 1))

    def test_duplicate_ray_dropped(self):
        with pytest.warns(RedundantRayWarning):
            cone = dual_cone([(1, 0), (1, 0), (0, 1)], 2)
        assert cone.rays == ((1, 0), (0, 1))

    def test_not_full_dimensional(self):
        with pytest.raises(NotFullDimensional):
            dual_cone([(1, 0)], 2)
        with pytest.raises(NotFullDimensional):
            dual_cone([(1, 0, 0), (0, 1, 0)], 3)

    def test_not_pointed(self):
        with pytest.raises(NotPointed):
            dual_cone([(1, 0), (-1, 0), (0, 1)], 2)
        with pytest.raises(NotPointed):
            dual_cone([(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, 0, 1)], 3)

    def test_line_is_not_full_dimensional(self):
        # two opposite rays span a line, which fails the rank check first
        with pytest.raises(NotFullDimensional):
            dual_cone([(1, 0), (-1, 0)], 2)

    def test_non_integer_ray(self):
        with pytest.raises(NonIntegerRay):
            dual_cone([(1, 0), (0, Fraction(1, 2))], 2)

    def test_integer_valued_floats_accepted(self):
        with pytest.warns(RayPrimitivizedWarning):
            cone = dual_cone([(1.0, 0), (0, 2.0)], 2)
        assert cone.rays == ((1, 0), (0, 1))

    def test_contains(self, conifold):
        assert conifold.contains((1, 0, 0))
        assert conifold.contains((2, 1, 1))
        assert not conifold.contains((0, 1, 0))
        assert conifold.interior_contains((1, Fraction(1, 2), Fraction(1, 2)))
        assert not conifold.interior_contains((1, 0, 0))


class TestGorensteinVector:
    def test_fixture_values(self, orthant2, orthant3, a1, conifold, y21):
        assert gorenstein_vector(orthant2).l == (1, 1)
        assert gorenstein_vector(orthant3).l == (1, 1, 1)
        assert gorenstein_vector(a1).l == (1, 0)
        assert gorenstein_vector(conifold).l == (1, 0, 0)
        assert gorenstein_vector(y21).l == (1, 0, 0)

    def test_pairing_is_one(self, fixture_cone):
        l = gorenstein_vector(fixture_cone).l
        for v in fixture_cone.rays:
            assert linalg.dot(v, l) == 1

    def test_interiority(self, fixture_cone):
        l = gorenstein_vector(fixture_cone).l
        assert fixture_cone.interior_contains(l) or any(
            linalg.dot(l, u) > 0 for u in fixture_cone.rays
        )
        # l lies in the dual cone's interior: positive against every ray
        assert all(linalg.dot(v, l) > 0 for v in fixture_cone.rays)

    def test_not_q_gorenstein(self):
        cone = dual_cone([(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 2, -1)], 3)
        with pytest.raises(NotQGorenstein):
            gorenstein_vector(cone)

    def test_boundary_coefficients(self, a1):
        l = gorenstein_vector(a1, boundary=(Fraction(1, 2), 0)).l
        assert linalg.dot(a1.rays[0], l) == Fraction(1, 2)
        assert linalg.dot(a1.rays[1], l) == 1

    def test_boundary_coefficient_range(self, a1):
        with pytest.raises(ValueError):
            gorenstein_vector(a1, boundary=(1, 0))
        with pytest.raises(ValueError):
            gorenstein_vector(a1, boundary=(Fraction(-1, 2), 0))

    def test_rational_gorenstein_index(self):
        # rays at height 2: l = (1/2, 0, ...) is rational, not integral
        cone = dual_cone([(2, -1), (2, 1)], 2)
        l = gorenstein_vector(cone).l
        assert l == (Fraction(1, 2), 0)


class TestReebVector:
    def test_interior_required(self, orthant2):
        with pytest.raises(UnboundedSlice):
            reeb_vector(orthant2, (1, 0))
        with pytest.raises(UnboundedSlice):
            reeb_vector(orthant2, (-1, 1))

    def test_normalized_flag(self, orthant2, a1):
        assert reeb_vector(orthant2, (Fraction(1, 2), Fraction(1, 2))).normalized
        assert not reeb_vector(orthant2, (1, 1)).normalized
        assert reeb_vector(a1, (1, Fraction(3, 2))).normalized  # <xi, (1,0)> = 1

    def test_rationality(self, orthant2):
        assert reeb_vector(orthant2, (1, 2)).is_rational
        assert not reeb_vector(orthant2, (1.0, mpmath.sqrt(2))).is_rational


class TestPolytopeQ:
    def test_orthant2_worked(self, orthant2):
        slice_ = polytope_Q(orthant2, (Fraction(1, 2), Fraction(1, 2)))
        assert set(slice_.vertices_Q) == {(0, 0), (2, 0), (0, 2)}
        assert slice_.volume_Q == 2
        assert slice_.bary_Q == (Fraction(2, 3), Fraction(2, 3))
        assert slice_.bary_P == (1, 1)

    def test_orthant3_worked(self, orthant3):
        slice_ = polytope_Q(orthant3, (Fraction(1, 3),) * 3)
        assert slice_.volume_Q == Fraction(9, 2)
        assert slice_.bary_Q == (Fraction(3, 4),) * 3
        assert slice_.bary_P == (1, 1, 1)

    def test_a1_worked(self, a1):
        slice_ = polytope_Q(a1, (1, 1))
        assert slice_.bary_P == (1, 0)
        assert slice_.volume_Q == 1
        slice_ = polytope_Q(a1, (1, Fraction(1, 2)))
        assert slice_.bary_P == (Fraction(2, 3), Fraction(2, 3))

    def test_conifold_critical(self, conifold):
        slice_ = polytope_Q(conifold, (1, Fraction(1, 2), Fraction(1, 2)))
        assert slice_.volume_Q == Fraction(8, 3)
        assert slice_.bary_P == (1, 0, 0)

    def test_barycenter_relation_random(self):
        for cone, xi in random_cone_suite(seed=23, count=40):
            slice_ = polytope_Q(cone, xi)
            n = cone.dim
            assert slice_.bary_P == tuple(
                Fraction(n + 1, n) * b for b in slice_.bary_Q
            )
            assert linalg.dot(xi, slice_.bary_P) == 1

    def test_hrep_holds_on_vertices(self, fixture_cone):
        rng = random.Random(3)
        xi = random_interior_xi(fixture_cone, rng)
        slice_ = polytope_Q(fixture_cone, xi)
        for vec, rel, rhs in slice_.hrep_Q:
            for vertex in slice_.vertices_Q:
                val = linalg.dot(vec, vertex)
                assert val >= rhs if rel == ">=" else val <= rhs

    def test_unbounded_slice(self, orthant2):
        with pytest.raises(UnboundedSlice):
            polytope_Q(orthant2, (1, 0))

    def test_scaling(self, conifold):
        xi = (1, Fraction(1, 3), Fraction(1, 2))
        s1 = polytope_Q(conifold, xi)
        s2 = polytope_Q(conifold, tuple(2 * x for x in xi))
        assert s2.volume_Q == s1.volume_Q / Fraction(2) ** conifold.dim
        assert s2.bary_Q == tuple(b / 2 for b in s1.bary_Q)

    def test_mpf_path_close_to_exact(self, conifold):
        xi = (1, Fraction(1, 2), Fraction(1, 2))
        exact = polytope_Q(conifold, xi)
        approx = polytope_Q(conifold, tuple(mpmath.mpf(str(float(x))) for x in xi))
        assert abs(float(approx.volume_Q) - float(exact.volume_Q)) < 1e-12
        for a, b in zip(approx.bary_P, exact.bary_P):
            assert abs(float(a) - float(b)) < 1e-12


class TestTriangulation:
    def test_conifold_two_simplices(self, conifold):
        fwd = triangulate_cone(conifold.dual_rays, conifold.rays)
        rev = triangulate_cone(conifold.dual_rays, conifold.rays, reverse=True)
        assert len(fwd) == 2 and len(rev) == 2
        assert set(fwd) != set(rev)  # genuinely different triangulations
        for tri in (fwd, rev):
            total = sum(
                abs(linalg.det([list(conifold.dual_rays[i]) for i in simplex]))
                for simplex in tri
            )
            assert total == 2  # lattice volume of the square cone

    def test_simplex_passthrough(self, orthant2):
        tri = triangulate_cone(orthant2.dual_rays, orthant2.rays)
        assert tri == ((0, 1),)


class TestLatticePoints:
    def test_orthant2_m1_m2(self, orthant2):
        assert lattice_points(orthant2, (1, 1), 1) == ((0, 0), (0, 1), (1, 0))
        pts = lattice_points(orthant2, (1, 1), 2)
        assert set(pts) == {(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)}

    def test_a1_m2(self, a1):
        # constraints u1 >= 0, u1 + 2 u2 >= 0, u1 + u2 <= 2
        pts = lattice_points(a1, (1, 1), 2)
        assert set(pts) == {
            (0, 0), (0, 1), (0, 2), (1, 0), (1, 1),
            (2, -1), (2, 0), (3, -1), (4, -2),
        }

    def test_points_satisfy_constraints(self, conifold):
        xi = (1, Fraction(1, 2), Fraction(1, 2))
        for u in lattice_points(conifold, xi, 3):
            assert all(linalg.dot(v, u) >= 0 for v in conifold.rays)
            assert linalg.dot(xi, u) <= 3

    def test_count_grows_like_volume(self, conifold):
        # leading Ehrhart term: #(mQ) ~ vol(Q) m^n
        xi = (1, Fraction(1, 2), Fraction(1, 2))
        vol = polytope_Q(conifold, xi).volume_Q
        m = 20
        count = len(lattice_points(conifold, xi, m))
        assert abs(count / m**3 - float(vol)) < 0.6

    def test_irrational_xi_rejected(self, orthant2):
        with pytest.raises(IrrationalReeb):
            lattice_points(orthant2, (1.0, float(mpmath.sqrt(2))), 2)

    def test_fractional_xi_exact(self, a1):
        # denominators are cleared internally, not rounded: (0, 2) sits
        # exactly on the boundary <xi, u> = 1 and must be included
        pts_half = lattice_points(a1, (1, Fraction(1, 2)), 1)
        assert set(pts_half) == {(0, 0), (0, 1), (0, 2), (1, 0)}


class TestImmutability:
    def test_frozen_types(self, orthant2):
        with pytest.raises(AttributeError):
            orthant2.dim = 5
        l = gorenstein_vector(orthant2)
        with pytest.raises(AttributeError):
            l.l = (0, 0)

    def test_degenerate_solution_set_direct(self):
        # unreachable through dual_cone (cones are validated full-dimensional
        # first), so exercised on a hand-made degenerate instance
        from reebcone.geometry import ToricCone

        cone = ToricCone(
            dim=2,
            rays=((1, 0),),
            facets_sigma=((0, 1), (1, 0)),
            dual_rays=((0, 1), (1, 0)),
        )
        with pytest.raises((DegenerateSolutionSet, NotQGorenstein)):
            gorenstein_vector(cone)

    def test_gorenstein_vector_type(self, orthant2):
        assert isinstance(gorenstein_vector(orthant2), GorensteinVector)
