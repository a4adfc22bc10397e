"""Tolerance sweeps for one-sided polynomial fitting."""

import csv

import pytest

from farkaskit import engine, polyapprox, semiinf
from farkaskit.errors import InvariantViolation
from farkaskit.polyapprox import ApproxProblem, uniform_nodes
from farkaskit.rational import NEG_INF, Q


def square_problem(node_count=11, epsilons=(Q(1, 100), Q(1, 10))):
    nodes = uniform_nodes(node_count)
    return ApproxProblem(degree_bound=3, nodes=nodes,
                         values=[t * t for t in nodes],
                         epsilons=list(epsilons))


def vee_problem(epsilons):
    # g = |t - 1/2| sampled at three nodes, fitted by an affine function
    return ApproxProblem(degree_bound=2, nodes=[0, Q(1, 2), 1],
                         values=[Q(1, 2), 0, Q(1, 2)],
                         epsilons=list(epsilons))


class TestValidation:
    def test_uniform_nodes(self):
        assert uniform_nodes(5) == [0, Q(1, 4), Q(1, 2), Q(3, 4), 1]
        with pytest.raises(ValueError):
            uniform_nodes(1)

    def test_nodes_sorted_and_in_range(self):
        with pytest.raises(ValueError):
            ApproxProblem(degree_bound=1, nodes=[0, 0], values=[1, 1],
                          epsilons=[1])
        with pytest.raises(ValueError):
            ApproxProblem(degree_bound=1, nodes=[0, 2], values=[1, 1],
                          epsilons=[1])

    def test_value_count(self):
        with pytest.raises(ValueError):
            ApproxProblem(degree_bound=1, nodes=[0, 1], values=[1],
                          epsilons=[1])

    def test_epsilons_positive_ascending(self):
        with pytest.raises(ValueError):
            ApproxProblem(degree_bound=1, nodes=[0, 1], values=[0, 0],
                          epsilons=[0])
        with pytest.raises(ValueError):
            ApproxProblem(degree_bound=1, nodes=[0, 1], values=[0, 0],
                          epsilons=[Q(1, 2), Q(1, 2)])

    def test_vandermonde(self):
        p = square_problem()
        assert p.vandermonde_row(Q(1, 2)) == [1, Q(1, 2), Q(1, 4)]
        assert p.objective_slope() == [1, Q(1, 2), Q(1, 3)]


class TestSolve:
    def test_square_fit_is_exact(self):
        p = square_problem()
        row = polyapprox.solve_eps(p, Q(1, 100))
        assert row.objective == Q(1, 3)
        assert row.coefficients == [0, 0, 1]

    def test_moment_conditions_hold(self):
        p = square_problem()
        row = polyapprox.solve_eps(p, Q(1, 10))
        lam = row.dual.value()
        for i in range(1, 4):
            total = sum(l * t ** (i - 1)
                        for l, t in zip(lam, p.nodes))
            assert total == -Q(1, i)

    def test_certificate_value_matches(self):
        p = square_problem()
        eps = Q(1, 10)
        row = polyapprox.solve_eps(p, eps)
        bound = -sum(l * g + eps * pl for l, pl, g in
                     zip(row.dual.value(), row.dual.plus, p.values))
        assert bound == row.objective

    def test_vee_requires_wide_band(self):
        # the kink value forces p(1/2) <= eps while the ends need >= 1/2
        assert not polyapprox.check_consistency(vee_problem([1]), Q(1, 4))
        assert polyapprox.check_consistency(vee_problem([1]), Q(1, 2))
        with pytest.raises(ValueError):
            polyapprox.solve_eps(vee_problem([1]), Q(1, 4))

    def test_vee_objective(self):
        row = polyapprox.solve_eps(vee_problem([1]), Q(1, 2))
        assert row.objective == Q(1, 2)

    def test_unbounded_objective(self):
        # a single node pins the polynomial nowhere else: value escapes
        p = ApproxProblem(degree_bound=2, nodes=[0], values=[0],
                          epsilons=[1])
        row = polyapprox.solve_eps(p, 1)
        assert row.objective is NEG_INF
        assert row.coefficients is None

    def test_consistency_matches_engine_route(self):
        for prob, eps in ((square_problem(), Q(1, 10)),
                          (vee_problem([1]), Q(1, 4)),
                          (vee_problem([1]), Q(3, 4))):
            mine = polyapprox.check_consistency(prob, eps)
            system = polyapprox.to_grid(prob, eps)
            other = engine.check_existence(semiinf.to_instance(system))
            assert mine == other.feasible


class TestSweep:
    def test_square_frontier(self):
        rows = polyapprox.sweep(square_problem())
        assert [r.objective for r in rows] == [Q(1, 3), Q(1, 3)]
        assert all(r.coefficients == [0, 0, 1] for r in rows)

    def test_frontier_not_increasing(self):
        rows = polyapprox.sweep(vee_problem([Q(1, 2), Q(3, 4), Q(2)]))
        objs = [r.objective for r in rows]
        assert objs == sorted(objs, reverse=True)

    def test_csv_output(self, tmp_path):
        out = tmp_path / "frontier.csv"
        rows = polyapprox.sweep(square_problem())
        polyapprox.write_frontier(rows, out, degree_bound=3)
        with open(out) as fh:
            got = list(csv.reader(fh))
        assert got[0] == ["epsilon", "objective", "x1", "x2", "x3"]
        assert got[1] == ["1/100", "1/3", "0", "0", "1"]
        assert got[2] == ["1/10", "1/3", "0", "0", "1"]

    def test_csv_unbounded_row(self, tmp_path):
        p = ApproxProblem(degree_bound=2, nodes=[0], values=[0],
                          epsilons=[1])
        out = tmp_path / "frontier.csv"
        polyapprox.write_frontier(polyapprox.sweep(p), out, degree_bound=2)
        with open(out) as fh:
            got = list(csv.reader(fh))
        assert got[1] == ["1", "-inf", "", ""]
