"""Piecewise affine convex functions and their conjugate calculus.

A function here is a finite max of affine pieces, optionally restricted to a
polyhedral domain (+infinity outside). For this class every conjugate object
is again polyhedral and every epigraph identity that normally needs a closure
holds exactly, with attainment, so the conjugate epigraphs below are computed
by row surgery and single LPs rather than by approximation:

  * epi of the conjugate of (max of pieces) is the convex hull of the points
    (slope_i, -offset_i) plus the vertical ray,
  * epi of a support function of {x : Gx <= h, Ex = e} (nonempty) is the cone
    generated by the rows (g_i, h_i), +-(e_k rows) and the vertical ray,
  * the conjugate of a sum with an indicator is the Minkowski sum of the two
    epigraphs whenever the domains meet.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import lp, sets
from .rational import INF, NEG_INF, ONE, ZERO, as_q_matrix, as_q_vector, is_finite


def _dot(a, b):
    s = ZERO
    for x, y in zip(a, b):
        if x and y:
            s += x * y
    return s


@dataclass
class PiecewiseAffine:
    """max_i (slopes[i] . x + offsets[i]), restricted to `domain` if given.

    At least one piece is required and a given domain must be nonempty, so
    the function is always proper.
    """

    dim: int
    slopes: list
    offsets: list
    domain: sets.Polyhedron | None = None

    def __post_init__(self):
        self.slopes = as_q_matrix(self.slopes)
        self.offsets = as_q_vector(self.offsets)
        if not self.slopes:
            raise ValueError("a piecewise affine function needs at least one piece")
        if len(self.slopes) != len(self.offsets):
            raise ValueError("piece count mismatch between slopes and offsets")
        for row in self.slopes:
            if len(row) != self.dim:
                raise ValueError("slope width != dim")
        if self.domain is not None:
            if self.domain.dim != self.dim:
                raise ValueError("domain dimension mismatch")
            if self.domain.is_empty():
                raise ValueError("empty domain would make the function improper")

    def value(self, x):
        x = as_q_vector(x)
        if self.domain is not None and not self.domain.contains(x):
            return INF
        return max(_dot(a, x) + b for a, b in zip(self.slopes, self.offsets))

    def tilted(self, shift, lift=ZERO) -> "PiecewiseAffine":
        """x -> f(x) - shift . x - lift, same domain."""
        shift = as_q_vector(shift)
        return PiecewiseAffine(
            dim=self.dim,
            slopes=[[a - s for a, s in zip(row, shift)] for row in self.slopes],
            offsets=[b - lift for b in self.offsets],
            domain=self.domain)


@dataclass
class Minimum:
    """Outcome of an exact minimization. value is a rational, INF when the
    feasible set is empty, NEG_INF when the objective is unbounded below;
    point is a feasible point whenever one exists (a minimizer when the value
    is finite) and ray an improving feasible direction when unbounded."""

    value: object
    point: list | None = None
    ray: list | None = None


def _stacked_rows(f: PiecewiseAffine, over: sets.Polyhedron):
    G = [list(r) for r in over.G]
    h = list(over.h)
    E = [list(r) for r in over.E]
    e = list(over.e)
    if f.domain is not None:
        G += [list(r) for r in f.domain.G]
        h += list(f.domain.h)
        E += [list(r) for r in f.domain.E]
        e += list(f.domain.e)
    return G, h, E, e


def minimize_over(f: PiecewiseAffine, over: sets.Polyhedron) -> Minimum:
    """Minimize f over a polyhedron (intersected with dom f), exactly."""
    if f.dim != over.dim:
        raise ValueError("dimension mismatch")
    n = f.dim
    G, h, E, e = _stacked_rows(f, over)
    rows = [row + [ZERO] for row in G]
    rhs = list(h)
    for a, b in zip(f.slopes, f.offsets):
        rows.append(list(a) + [-ONE])
        rhs.append(-b)
    prog = lp.LinearProgram(c=[ZERO] * n + [ONE],
                            G=rows, h=rhs,
                            E=[row + [ZERO] for row in E], e=e,
                            nonneg=[False] * (n + 1))
    out = lp.solve(prog)
    if out.status == lp.INFEASIBLE:
        return Minimum(value=INF)
    if out.status == lp.UNBOUNDED:
        return Minimum(value=NEG_INF, point=out.x[:n], ray=out.ray[:n])
    return Minimum(value=out.value, point=out.x[:n])


def fenchel_value(f: PiecewiseAffine, u):
    """f*(u) = sup_x (u . x - f(x)); INF when the sup is unbounded."""
    u = as_q_vector(u)
    m = minimize_over(f.tilted(u), sets.whole_space_polyhedron(f.dim))
    if m.value is NEG_INF:
        return INF
    if m.value is INF:
        # unreachable for a proper function; kept as a guard
        return NEG_INF
    return -m.value


def support_epigraph(p) -> sets.LiftedSet:
    """Epigraph of the support function of a Polyhedron or Box, as a lifted
    set over (direction, value). Exact: for a nonempty polyhedron the LP dual
    of sup is attained, and an empty set has support -infinity everywhere, so
    the epigraph is the whole space."""
    if isinstance(p, sets.Box):
        p = p.to_polyhedron()
    if p.is_empty():
        return sets.whole_space(p.dim + 1)
    n = p.dim
    n_ineq, n_eq = len(p.G), len(p.E)
    wd = n_ineq + n_eq
    eq_z, eq_w, eq_rhs = [], [], []
    for j in range(n):
        row = [ZERO] * (n + 1)
        row[j] = ONE
        eq_z.append(row)
        eq_w.append([-g[j] for g in p.G] + [-r[j] for r in p.E])
        eq_rhs.append(ZERO)
    ineq_z = [[ZERO] * n + [-ONE]]
    ineq_w = [list(p.h) + list(p.e)]
    return sets.LiftedSet(dim=n + 1, witness_dim=wd,
                          ineq_z=ineq_z, ineq_w=ineq_w, ineq_rhs=[ZERO],
                          eq_z=eq_z, eq_w=eq_w, eq_rhs=eq_rhs,
                          witness_nonneg=[True] * n_ineq + [False] * n_eq)


def support_epigraph_generators(p: sets.Polyhedron) -> list:
    """Ray generators of the support function epigraph of a nonempty
    polyhedron: its rows paired with their right hand sides, equality rows in
    both signs, and the vertical ray."""
    if p.is_empty():
        raise ValueError("the support epigraph of an empty set is not a cone")
    rays = [list(g) + [b] for g, b in zip(p.G, p.h)]
    for r, b in zip(p.E, p.e):
        rays.append(list(r) + [b])
        rays.append([-v for v in r] + [-b])
    rays.append([ZERO] * p.dim + [ONE])
    return rays


def conjugate_epigraph(f: PiecewiseAffine) -> sets.GeneratedSet:
    """epi f* as points + rays: one point (slope, -offset) per piece, the
    vertical ray, and the domain's support-epigraph rays when f is
    restricted."""
    points = [list(a) + [-b] for a, b in zip(f.slopes, f.offsets)]
    rays = [[ZERO] * f.dim + [ONE]]
    if f.domain is not None:
        rays += support_epigraph_generators(f.domain)
    return sets.GeneratedSet(dim=f.dim + 1, points=points, rays=rays)


def restricted_conjugate_epigraph(f: PiecewiseAffine,
                                  over: sets.Polyhedron) -> sets.LiftedSet:
    """epi (f + indicator of `over`)*, by the LP dual of the sup defining the
    conjugate. Exact whenever `over` meets dom f; if it does not, the
    restriction is identically +infinity and the epigraph of its conjugate is
    the whole space."""
    if f.dim != over.dim:
        raise ValueError("dimension mismatch")
    n = f.dim
    G, h, E, e = _stacked_rows(f, over)
    if sets.Polyhedron(dim=n, G=G, h=h, E=E, e=e).is_empty():
        return sets.whole_space(n + 1)
    k = len(f.slopes)
    n_ineq, n_eq = len(G), len(E)
    wd = k + n_ineq + n_eq
    eq_z, eq_w, eq_rhs = [], [], []
    for j in range(n):
        row = [ZERO] * (n + 1)
        row[j] = ONE
        eq_z.append(row)
        eq_w.append([-a[j] for a in f.slopes]
                    + [-g[j] for g in G] + [-r[j] for r in E])
        eq_rhs.append(ZERO)
    eq_z.append([ZERO] * (n + 1))
    eq_w.append([ONE] * k + [ZERO] * (n_ineq + n_eq))
    eq_rhs.append(ONE)
    ineq_z = [[ZERO] * n + [-ONE]]
    ineq_w = [[-b for b in f.offsets] + list(h) + list(e)]
    return sets.LiftedSet(dim=n + 1, witness_dim=wd,
                          ineq_z=ineq_z, ineq_w=ineq_w, ineq_rhs=[ZERO],
                          eq_z=eq_z, eq_w=eq_w, eq_rhs=eq_rhs,
                          witness_nonneg=[True] * (k + n_ineq) + [False] * n_eq)


def barrier_cone_member(p: sets.Polyhedron, direction) -> bool:
    """Whether sigma_P is finite along `direction` (membership in the
    barrier cone). Errors on an empty set, where every support value is
    -infinity and the cone degenerates."""
    if p.is_empty():
        raise ValueError("barrier cone of an empty set")
    return is_finite(sets.support(p.to_lifted(), direction))


def recession_cone(p: sets.Polyhedron) -> sets.Polyhedron:
    """Directions along which P recedes: same rows, zero right-hand sides."""
    return sets.Polyhedron(dim=p.dim,
                           G=[list(r) for r in p.G], h=[ZERO] * len(p.G),
                           E=[list(r) for r in p.E], e=[ZERO] * len(p.E))


def normal_cone_at(p: sets.Polyhedron, point) -> sets.GeneratedSet:
    """Outer normals to P at a point of P: the cone spanned by the active
    inequality rows plus both signs of every equality row."""
    point = as_q_vector(point)
    if not p.contains(point):
        raise ValueError("normal cone requested at a point outside the set")
    rays = []
    for row, rhs in zip(p.G, p.h):
        if _dot(row, point) == rhs:
            rays.append(list(row))
    for row in p.E:
        rays.append(list(row))
        rays.append([-v for v in row])
    return sets.GeneratedSet(dim=p.dim, points=[[ZERO] * p.dim], rays=rays)
