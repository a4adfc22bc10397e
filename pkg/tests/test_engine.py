"""Engine checks against hand-worked instances and random consistency."""

import pytest
from hypothesis import given, settings, strategies as st

from farkaskit import calculus, engine, sets
from farkaskit.calculus import PiecewiseAffine
from farkaskit.engine import FarkasInstance, TriVerdict
from farkaskit.errors import InvariantViolation
from farkaskit.rational import INF, NEG_INF, Q, ZERO, is_finite
from farkaskit.sets import Box, Polyhedron


def unit_square():
    return Box([(0, 1), (0, 1)]).to_polyhedron()


def whole_line():
    return sets.whole_space_polyhedron(1)


def plain(fn_slopes, fn_offsets, dim=None):
    dim = dim if dim is not None else len(fn_slopes[0])
    return PiecewiseAffine(dim=dim, slopes=fn_slopes, offsets=fn_offsets)


def basic_instance(offset=0):
    # ground [0,1]^2, map (x1, x1+x2), target [0,2]^2, f = x1 + x2 + offset
    return FarkasInstance(
        ground=unit_square(),
        matrix=[[1, 0], [1, 1]],
        target=Box([(0, 2), (0, 2)]),
        objective=plain([[1, 1]], [offset]))


def vacuous_no_cert():
    # ground = R, map = 0, target = {1}: infeasible, f = -x kills any tilt
    return FarkasInstance(
        ground=whole_line(), matrix=[[0]], target=Box([(1, 1)]),
        objective=plain([[-1]], [0]))


def vacuous_with_cert():
    # ground = {0}, map = id, target = [1,2]: infeasible, f = x certified
    return FarkasInstance(
        ground=Polyhedron(dim=1, G=[], h=[], E=[[1]], e=[0]),
        matrix=[[1]], target=Box([(1, 2)]),
        objective=plain([[1]], [0]))


class TestStatements:
    def test_nonnegative_holds(self):
        rep = engine.check_nonnegativity(basic_instance())
        assert rep.verdict is TriVerdict.TRUE
        assert rep.minimum == 0

    def test_negative_with_witness(self):
        rep = engine.check_nonnegativity(basic_instance(offset=-1))
        assert rep.verdict is TriVerdict.FALSE
        assert rep.minimum == -1
        x = rep.witness
        assert basic_instance().objective.value(x) - 1 < 0

    def test_vacuous(self):
        rep = engine.check_nonnegativity(vacuous_no_cert())
        assert rep.verdict is TriVerdict.VACUOUS
        assert rep.minimum is INF
        assert rep.verdict.holds

    def test_unbounded_below_walks_to_witness(self):
        inst = FarkasInstance(
            ground=whole_line(), matrix=[[1]],
            target=Polyhedron(dim=1, G=[[-1]], h=[0], E=[], e=[]),
            objective=plain([[-1]], [0]))
        rep = engine.check_nonnegativity(inst)
        assert rep.verdict is TriVerdict.FALSE
        assert rep.minimum is NEG_INF
        assert rep.witness is not None
        assert inst.objective.value(rep.witness) < 0
        assert rep.witness[0] >= 0  # stays feasible

    def test_domain_outside_feasible_is_plain_true(self):
        # feasible nonempty but misses dom f: implication holds, not vacuous
        inst = FarkasInstance(
            ground=Box([(0, 1)]).to_polyhedron(), matrix=[[1]],
            target=Box([(0, 1)]),
            objective=PiecewiseAffine(
                dim=1, slopes=[[-1]], offsets=[0],
                domain=Box([(5, 6)]).to_polyhedron()))
        rep = engine.check_nonnegativity(inst)
        assert rep.verdict is TriVerdict.TRUE
        assert rep.minimum is INF


class TestCertificates:
    def test_found_and_validated(self):
        inst = basic_instance()
        cert = engine.find_certificate(inst)
        assert cert is not None
        assert cert.total() <= 0
        link = [a + b + c for a, b, c in
                zip(cert.u, cert.v, inst.adjoint(cert.lam))]
        assert all(v == 0 for v in link)

    def test_absent_when_implication_fails(self):
        assert engine.find_certificate(basic_instance(offset=-1)) is None

    def test_vacuous_instance_may_still_have_one(self):
        cert = engine.find_certificate(vacuous_with_cert())
        assert cert is not None
        assert cert.total() <= 0

    def test_vacuous_instance_may_lack_one(self):
        assert engine.find_certificate(vacuous_no_cert()) is None

    def test_tampering_is_caught(self):
        inst = basic_instance()
        cert = engine.find_certificate(inst)
        cert.u[0] += 1
        with pytest.raises(InvariantViolation):
            engine._validate_certificate(inst, cert)

    def test_domain_restricted_objective(self):
        inst = FarkasInstance(
            ground=Box([(0, 10)]).to_polyhedron(), matrix=[[1]],
            target=Box([(0, 10)]),
            objective=PiecewiseAffine(
                dim=1, slopes=[[1], [-1]], offsets=[0, 0],
                domain=Box([(1, 3)]).to_polyhedron()))
        rep = engine.check_nonnegativity(inst)
        assert rep.verdict is TriVerdict.TRUE and rep.minimum == 1
        cert = engine.find_certificate(inst)
        assert cert is not None
        assert is_finite(cert.conjugate_value)

    def test_reduced_matches_full_when_domains_meet(self):
        for inst in (basic_instance(), basic_instance(offset=-1)):
            full = engine.find_certificate(inst)
            red = engine.find_reduced_certificate(inst)
            assert (full is None) == (red is None)
            if red is not None:
                assert red.total() <= 0

    def test_reduced_trivial_when_ground_misses_domain(self):
        inst = FarkasInstance(
            ground=Box([(0, 1)]).to_polyhedron(), matrix=[[1]],
            target=Box([(0, 1)]),
            objective=PiecewiseAffine(
                dim=1, slopes=[[1]], offsets=[0],
                domain=Box([(5, 6)]).to_polyhedron()))
        red = engine.find_reduced_certificate(inst)
        assert red is not None
        assert red.lam == [0]
        assert red.restricted_conjugate is NEG_INF

    def test_reduced_meaning(self):
        # lam certifies f(x) + lam . map(x) >= sigma_target(lam) on ground
        inst = basic_instance()
        red = engine.find_reduced_certificate(inst)
        tilt = [-v for v in inst.adjoint(red.lam)]
        worst = calculus.minimize_over(
            inst.objective.tilted(tilt), inst.ground)
        assert worst.value >= inst.target_support(red.lam)


class TestPrimalCriterion:
    def test_consistent_on_true_instance(self):
        rep = engine.check_primal_criterion(basic_instance())
        assert rep.criterion_holds
        assert rep.certificate is not None
        assert rep.verdict == "consistent"
        assert not rep.details["probe_in_cone"]

    def test_consistent_on_false_instance(self):
        rep = engine.check_primal_criterion(basic_instance(offset=-1))
        assert rep.criterion_holds  # fails A, fails B: equivalence intact
        assert rep.certificate is None
        assert rep.details["probe_in_cone"]

    def test_gap_detected(self):
        rep = engine.check_primal_criterion(vacuous_no_cert())
        assert not rep.criterion_holds
        assert rep.certificate is None
        assert rep.nonnegativity.verdict is TriVerdict.VACUOUS
        assert not rep.details["probe_in_cone"]
        assert rep.details["probe_in_closure"]
        assert rep.probe_point == [0, 0, -1]

    def test_no_gap_when_vacuous_but_certified(self):
        rep = engine.check_primal_criterion(vacuous_with_cert())
        assert rep.criterion_holds
        assert rep.certificate is not None


class TestReducedCriterion:
    def test_consistent(self):
        rep = engine.check_reduced_criterion(basic_instance())
        assert rep.criterion_holds
        assert rep.certificate is not None

    def test_gap_detected(self):
        rep = engine.check_reduced_criterion(vacuous_no_cert())
        assert not rep.criterion_holds
        assert rep.probe_point == [0, -1]

    def test_hypothesis_error(self):
        inst = FarkasInstance(
            ground=Box([(0, 1)]).to_polyhedron(), matrix=[[1]],
            target=Box([(0, 1)]),
            objective=PiecewiseAffine(
                dim=1, slopes=[[1]], offsets=[0],
                domain=Box([(5, 6)]).to_polyhedron()))
        with pytest.raises(ValueError):
            engine.check_reduced_criterion(inst)
        with pytest.raises(ValueError):
            engine.residual_epigraph(inst)


class TestDualCriterion:
    def test_consistent_true(self):
        rep = engine.check_dual_criterion(basic_instance())
        assert rep.criterion_holds
        assert rep.details["origin_in_sum"]
        assert rep.certificate is not None

    def test_consistent_false(self):
        rep = engine.check_dual_criterion(basic_instance(offset=-1))
        assert rep.criterion_holds
        assert not rep.details["origin_in_sum"]
        assert rep.certificate is None

    def test_hypothesis_error_on_infeasible(self):
        with pytest.raises(ValueError):
            engine.check_dual_criterion(vacuous_no_cert())

    def test_polyhedral_target_and_domain(self):
        inst = FarkasInstance(
            ground=unit_square(), matrix=[[1, 2], [0, 1]],
            target=Polyhedron(dim=2, G=[[1, 1]], h=[5], E=[], e=[]),
            objective=PiecewiseAffine(
                dim=2, slopes=[[1, 0], [0, 1]], offsets=[0, 0],
                domain=unit_square()))
        rep = engine.check_dual_criterion(inst)
        assert rep.criterion_holds and rep.certificate is not None


class TestBuildersAreFaithful:
    def test_decoupled_set_carries_definition_points(self):
        inst = basic_instance()
        F = engine.decoupled_residual_epigraph(inst)
        # x in ground, v anywhere (full domain), d in target, r >= f(v)
        for x, v, d, eta in [
            ([Q(0), Q(1)], [Q(3), Q(-2)], [Q(2), Q(0)], Q(0)),
            ([Q(1), Q(1)], [Q(0), Q(0)], [Q(0), Q(2)], Q(5)),
        ]:
            z = ([a - b for a, b in zip(x, v)]
                 + [a - b for a, b in zip(inst.apply(x), d)]
                 + [inst.objective.value(v) + eta])
            assert sets.member(F, z)
        # r below f(v) must be rejected
        bad = [Q(0), Q(0), Q(0), Q(0), Q(-1)]
        assert not sets.member(F, bad)

    def test_residual_set_carries_definition_points(self):
        inst = basic_instance()
        F0 = engine.residual_epigraph(inst)
        for x, d, eta in [
            ([Q(1), Q(0)], [Q(0), Q(0)], Q(0)),
            ([Q(0), Q(0)], [Q(2), Q(2)], Q(3)),
        ]:
            z = ([a - b for a, b in zip(inst.apply(x), d)]
                 + [inst.objective.value(x) + eta])
            assert sets.member(F0, z)
        assert not sets.member(F0, [Q(0), Q(0), Q(-1)])

    def test_multiplier_cone_graph_points(self):
        inst = basic_instance()
        lam = [Q(1), Q(-2)]
        cone = engine.multiplier_cone(inst)
        sup = inst.target_support(lam)
        z = inst.adjoint(lam) + [sup]
        assert sets.member(cone, z)
        below = inst.adjoint(lam) + [sup - 1]
        assert not sets.member(cone, below)

    def test_certificate_cone_matches_feasible_supports(self):
        inst = basic_instance()
        cone = engine.certificate_cone(inst)
        feas = calculus.support_epigraph(inst.feasible_polyhedron())
        dirs = sets.probe_directions(3, n_random=10, seed=7)
        assert sets.support_mismatches(cone, feas, dirs) == []


class TestExistence:
    def test_feasible(self):
        rep = engine.check_existence(basic_instance())
        assert rep.feasible and rep.preimage_nonempty
        assert rep.point is not None
        assert basic_instance().feasible_polyhedron().contains(rep.point)

    def test_infeasible_via_empty_preimage(self):
        rep = engine.check_existence(vacuous_no_cert())
        assert not rep.feasible
        assert not rep.preimage_nonempty
        assert rep.point is None

    def test_infeasible_with_nonempty_preimage(self):
        rep = engine.check_existence(vacuous_with_cert())
        assert not rep.feasible
        assert rep.preimage_nonempty


class TestStability:
    def test_survives_tilt_grid(self):
        rep = engine.check_stability(basic_instance(), seed=3)
        assert rep.criterion_holds and rep.all_equivalent
        assert rep.tilts_checked == 25

    def test_explicit_tilts(self):
        tilts = [([Q(0), Q(0)], Q(0)), ([Q(1), Q(-1)], Q(2))]
        rep = engine.check_stability(basic_instance(), tilts=tilts)
        assert rep.tilts_checked == 2

    def test_hypothesis_error(self):
        with pytest.raises(ValueError):
            engine.check_stability(vacuous_no_cert())


class TestSublevel:
    def _inst(self, offset):
        return FarkasInstance(
            ground=whole_line(), matrix=[[1]], target=Box([(-2, -1)]),
            objective=plain([[1]], [offset]))

    def test_hand_example_true(self):
        rep = engine.check_sublevel(self._inst(0))
        assert rep.nonpositive and rep.epigraph_contained
        assert rep.maximum == -1
        assert rep.simili_closed

    def test_hand_example_false(self):
        rep = engine.check_sublevel(self._inst(3))
        assert not rep.nonpositive and not rep.epigraph_contained
        assert rep.maximum == 2

    def test_generator_that_escapes(self):
        # the conjugate epigraph vertex (1, -3) must fall outside the cone
        inst = self._inst(3)
        cone = engine.certificate_cone(inst)
        assert not sets.member(cone, [Q(1), Q(-3)])
        assert sets.member(cone, [Q(1), Q(-1)])  # the support graph point

    def test_needs_full_domain(self):
        inst = FarkasInstance(
            ground=whole_line(), matrix=[[1]], target=Box([(-2, -1)]),
            objective=PiecewiseAffine(
                dim=1, slopes=[[1]], offsets=[0],
                domain=Box([(-5, 5)]).to_polyhedron()))
        with pytest.raises(ValueError):
            engine.check_sublevel(inst)

    def test_needs_feasible_point(self):
        with pytest.raises(ValueError):
            engine.check_sublevel(vacuous_no_cert())

    def test_unbounded_maximum(self):
        inst = FarkasInstance(
            ground=whole_line(), matrix=[[0]], target=Box([(0, 0)]),
            objective=plain([[1]], [0]))
        rep = engine.check_sublevel(inst)
        assert rep.maximum is INF
        assert not rep.nonpositive and not rep.epigraph_contained


class TestInstanceValidation:
    def test_rejects_empty_ground(self):
        with pytest.raises(ValueError):
            FarkasInstance(
                ground=Polyhedron(dim=1, G=[[1], [-1]], h=[0, -1], E=[], e=[]),
                matrix=[[1]], target=Box([(0, 1)]),
                objective=plain([[1]], [0]))

    def test_rejects_empty_target(self):
        with pytest.raises(ValueError):
            FarkasInstance(
                ground=whole_line(), matrix=[[1]],
                target=Polyhedron(dim=1, G=[[1], [-1]], h=[0, -1], E=[], e=[]),
                objective=plain([[1]], [0]))

    def test_rejects_dimension_mismatch(self):
        with pytest.raises(ValueError):
            FarkasInstance(
                ground=whole_line(), matrix=[[1, 2]], target=Box([(0, 1)]),
                objective=plain([[1]], [0]))
        with pytest.raises(ValueError):
            FarkasInstance(
                ground=whole_line(), matrix=[[1]], target=Box([(0, 1)]),
                objective=plain([[1, 1]], [0]))


small_int = st.integers(min_value=-2, max_value=2)


def _random_instance(draw, n, m):
    lo = [draw(small_int) for _ in range(n)]
    wid = [draw(st.integers(min_value=0, max_value=3)) for _ in range(n)]
    ground = Box([(a, a + w) for a, w in zip(lo, wid)]).to_polyhedron()
    matrix = [[draw(small_int) for _ in range(n)] for _ in range(m)]
    tlo = [draw(small_int) for _ in range(m)]
    twid = [draw(st.integers(min_value=0, max_value=4)) for _ in range(m)]
    target = Box([(a, a + w) for a, w in zip(tlo, twid)])
    k = draw(st.integers(min_value=1, max_value=2))
    f = PiecewiseAffine(
        dim=n,
        slopes=[[draw(small_int) for _ in range(n)] for _ in range(k)],
        offsets=[draw(small_int) for _ in range(k)])
    return FarkasInstance(ground=ground, matrix=matrix, target=target,
                          objective=f)


@st.composite
def instances(draw):
    n = draw(st.integers(min_value=1, max_value=2))
    m = draw(st.integers(min_value=1, max_value=2))
    return _random_instance(draw, n, m)


@settings(max_examples=40, deadline=None)
@given(instances())
def test_random_instances_stay_consistent(inst):
    # every forced agreement inside the checks would raise on violation
    rep1 = engine.check_primal_criterion(inst)
    rep2 = engine.check_reduced_criterion(inst)
    assert rep1.verdict == rep2.verdict == "consistent"
    assert (rep1.certificate is None) == (rep2.certificate is None)
    engine.check_existence(inst)
    if not inst.feasible_polyhedron().is_empty():
        rep3 = engine.check_dual_criterion(inst, n_random=2, seed=11)
        assert rep3.criterion_holds


@settings(max_examples=25, deadline=None)
@given(instances())
def test_random_certificates_bound_the_objective(inst):
    cert = engine.find_certificate(inst)
    if cert is None:
        rep = engine.check_nonnegativity(inst)
        assert rep.verdict is not TriVerdict.TRUE or rep.minimum is INF
    else:
        rep = engine.check_nonnegativity(inst)
        assert rep.verdict.holds
