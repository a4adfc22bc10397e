"""Conjugate calculus on piecewise affine functions.

Reference values are hand-derived: |x| has conjugate 0 on [-1, 1] (+infinity
outside), x restricted to [0, 2] has conjugate max(0, 2u - 2), and the
conjugate epigraph of a max of pieces is the hull of (slope, -offset) points
plus the vertical ray.
"""

import pytest
from hypothesis import given, settings, strategies as st

from farkaskit import calculus, sets
from farkaskit.rational import INF, NEG_INF, Q


def abs_fn():
    return calculus.PiecewiseAffine(dim=1, slopes=[[1], [-1]], offsets=[0, 0])


def interval(lo, hi):
    return sets.Box(bounds=[(lo, hi)]).to_polyhedron()


class TestEvaluation:
    def test_abs_values(self):
        f = abs_fn()
        assert f.value([Q(-3, 2)]) == Q(3, 2)
        assert f.value([0]) == Q(0)
        assert f.value([2]) == Q(2)

    def test_outside_domain_is_inf(self):
        f = calculus.PiecewiseAffine(dim=1, slopes=[[1]], offsets=[0],
                                     domain=interval(0, 2))
        assert f.value([1]) == Q(1)
        assert f.value([3]) is INF

    def test_tilt_shifts_value(self):
        f = abs_fn()
        g = f.tilted([Q(1, 2)], lift=Q(3))
        # |x| - x/2 - 3 at x = 2: 2 - 1 - 3 = -2
        assert g.value([2]) == Q(-2)

    def test_validation(self):
        with pytest.raises(ValueError):
            calculus.PiecewiseAffine(dim=1, slopes=[], offsets=[])
        with pytest.raises(ValueError):
            calculus.PiecewiseAffine(dim=2, slopes=[[1]], offsets=[0])
        with pytest.raises(ValueError):
            calculus.PiecewiseAffine(
                dim=1, slopes=[[1]], offsets=[0],
                domain=sets.Polyhedron(dim=1, G=[[1], [-1]], h=[-1, 0]))


class TestMinimize:
    def test_min_of_abs_over_shifted_interval(self):
        m = calculus.minimize_over(abs_fn(), interval(-3, -1))
        assert m.value == Q(1)
        assert m.point == [Q(-1)]
        assert m.ray is None

    def test_min_over_empty_is_inf(self):
        empty = sets.Polyhedron(dim=1, G=[[1], [-1]], h=[-1, 0])
        m = calculus.minimize_over(abs_fn(), empty)
        assert m.value is INF and m.point is None

    def test_unbounded_min_reports_ray(self):
        f = calculus.PiecewiseAffine(dim=1, slopes=[[1]], offsets=[0])
        half = sets.Polyhedron(dim=1, G=[[1]], h=[0])
        m = calculus.minimize_over(f, half)
        assert m.value is NEG_INF
        assert m.point is not None and m.point[0] <= 0
        assert m.ray is not None and m.ray[0] < 0

    def test_domain_restricts_minimization(self):
        f = calculus.PiecewiseAffine(dim=1, slopes=[[1]], offsets=[0],
                                     domain=interval(2, 5))
        m = calculus.minimize_over(f, sets.whole_space_polyhedron(1))
        assert m.value == Q(2) and m.point == [Q(2)]

    def test_two_dim_min(self):
        # max(x + y, -x - y + 1) over the unit box: value 1/2 on the
        # crossing line x + y = 1/2
        f = calculus.PiecewiseAffine(dim=2, slopes=[[1, 1], [-1, -1]],
                                     offsets=[0, 1])
        m = calculus.minimize_over(
            f, sets.Box(bounds=[(0, 1), (0, 1)]).to_polyhedron())
        assert m.value == Q(1, 2)
        assert sum(m.point) == Q(1, 2)


class TestFenchel:
    def test_abs_conjugate_values(self):
        f = abs_fn()
        assert calculus.fenchel_value(f, [Q(1, 2)]) == Q(0)
        assert calculus.fenchel_value(f, [1]) == Q(0)
        assert calculus.fenchel_value(f, [-1]) == Q(0)
        assert calculus.fenchel_value(f, [2]) is INF
        assert calculus.fenchel_value(f, [Q(-3, 2)]) is INF

    def test_restricted_linear_conjugate(self):
        # f(x) = x on [0, 2]: f*(u) = max(0, 2(u - 1))
        f = calculus.PiecewiseAffine(dim=1, slopes=[[1]], offsets=[0],
                                     domain=interval(0, 2))
        assert calculus.fenchel_value(f, [0]) == Q(0)
        assert calculus.fenchel_value(f, [1]) == Q(0)
        assert calculus.fenchel_value(f, [2]) == Q(2)
        assert calculus.fenchel_value(f, [3]) == Q(4)
        assert calculus.fenchel_value(f, [Q(-7, 2)]) == Q(0)

    @settings(max_examples=60, deadline=None)
    @given(st.data())
    def test_fenchel_young_inequality(self, data):
        dim = data.draw(st.integers(1, 3))
        coords = st.integers(-3, 3)
        k = data.draw(st.integers(1, 3))
        f = calculus.PiecewiseAffine(
            dim=dim,
            slopes=[data.draw(st.lists(coords, min_size=dim, max_size=dim))
                    for _ in range(k)],
            offsets=data.draw(st.lists(coords, min_size=k, max_size=k)))
        x = [Q(v) for v in data.draw(st.lists(coords, min_size=dim, max_size=dim))]
        u = [Q(v) for v in data.draw(st.lists(coords, min_size=dim, max_size=dim))]
        star = calculus.fenchel_value(f, u)
        if star is not INF:
            pairing = sum(a * b for a, b in zip(u, x))
            assert f.value(x) + star >= pairing


class TestConjugateEpigraph:
    def test_abs_conjugate_epigraph_is_band(self):
        # epi f* for |x| is [-1, 1] x R+
        s = sets.as_lifted(calculus.conjugate_epigraph(abs_fn()))
        assert sets.member(s, [0, 0])
        assert sets.member(s, [Q(1, 2), 5])
        assert sets.member(s, [-1, 0])
        assert not sets.member(s, [2, 0])
        assert not sets.member(s, [0, -1])

    def test_epigraph_carries_fenchel_values(self):
        f = calculus.PiecewiseAffine(dim=1, slopes=[[1]], offsets=[0],
                                     domain=interval(0, 2))
        s = sets.as_lifted(calculus.conjugate_epigraph(f))
        for u in ([0], [1], [2], [3], [Q(-7, 2)]):
            v = calculus.fenchel_value(f, u)
            assert sets.member(s, list(u) + [v])
            assert not sets.member(s, list(u) + [v - 1])

    def test_generated_and_lp_forms_agree(self):
        f = calculus.PiecewiseAffine(dim=2, slopes=[[1, 0], [0, 1], [-1, -1]],
                                     offsets=[0, Q(1, 2), -1])
        a = sets.as_lifted(calculus.conjugate_epigraph(f))
        b = calculus.restricted_conjugate_epigraph(
            f, sets.whole_space_polyhedron(2))
        dirs = sets.probe_directions(3, n_random=8, seed=5)
        assert sets.support_mismatches(a, b, dirs) == []

    def test_restriction_matches_minkowski_sum(self):
        # epi (f + indicator)* must equal epi f* + epi of the support
        # function, exactly, when the domains meet
        f = abs_fn()
        p = interval(1, 3)
        direct = calculus.restricted_conjugate_epigraph(f, p)
        summed = sets.minkowski_sum(
            sets.as_lifted(calculus.conjugate_epigraph(f)),
            calculus.support_epigraph(p))
        dirs = sets.probe_directions(2, n_random=8, seed=9)
        assert sets.support_mismatches(direct, summed, dirs) == []
        # hand values: (f + indicator)*(u) = max(u - 1, 3u - 3)
        for u, v in ((Q(0), Q(-1)), (Q(1), Q(0)), (Q(2), Q(3)), (Q(-2), Q(-3))):
            assert sets.member(direct, [u, v])
            assert not sets.member(direct, [u, v - Q(1, 100)])

    def test_restriction_missing_domain_gives_whole_space(self):
        f = calculus.PiecewiseAffine(dim=1, slopes=[[1]], offsets=[0],
                                     domain=interval(0, 1))
        s = calculus.restricted_conjugate_epigraph(f, interval(2, 3))
        assert sets.member(s, [5, Q(-1000)])


class TestSupportEpigraph:
    def test_triangle_support_epigraph(self):
        tri = sets.Polyhedron(dim=2, G=[[-1, 0], [0, -1], [1, 1]], h=[0, 0, 2])
        s = calculus.support_epigraph(tri)
        assert sets.member(s, [1, 1, 2])
        assert not sets.member(s, [1, 1, Q(3, 2)])
        assert sets.member(s, [-1, -1, 0])
        assert not sets.member(s, [-1, -1, Q(-1, 2)])

    def test_box_support_epigraph_matches_closed_form(self):
        box = sets.Box(bounds=[(-1, 2), (0, 3)])
        s = calculus.support_epigraph(box)
        for d in sets.probe_directions(2, n_random=5, seed=2):
            v = box.support(d)
            assert sets.member(s, list(d) + [v])
            assert not sets.member(s, list(d) + [v - 1])

    def test_empty_set_support_epigraph_is_everything(self):
        empty = sets.Polyhedron(dim=1, G=[[1], [-1]], h=[-1, 0])
        s = calculus.support_epigraph(empty)
        assert sets.member(s, [7, -100])

    def test_generator_form_matches_lifted_form(self):
        tri = sets.Polyhedron(dim=2, G=[[-1, 0], [0, -1], [1, 1]], h=[0, 0, 2],
                              E=[[1, -1]], e=[0])
        lifted = calculus.support_epigraph(tri)
        gens = sets.GeneratedSet(
            dim=3, points=[[0, 0, 0]],
            rays=calculus.support_epigraph_generators(tri))
        dirs = sets.probe_directions(3, n_random=6, seed=4)
        assert sets.support_mismatches(lifted, sets.as_lifted(gens), dirs) == []

    def test_generators_of_empty_set_rejected(self):
        empty = sets.Polyhedron(dim=1, G=[[1], [-1]], h=[-1, 0])
        with pytest.raises(ValueError):
            calculus.support_epigraph_generators(empty)
