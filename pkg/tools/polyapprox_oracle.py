#!/usr/bin/env python3
"""Pre-build oracle for the polynomial band-approximation demo.

Computes, independently of the package (pure fractions.Fraction plus a scipy
float cross-check), the exact optimum of

    min  sum_i x_i / i
    s.t. g(t_k) <= sum_i x_i t_k^(i-1) <= g(t_k) + eps,   t_k = k/100

for g(t) = t^2, n = 3, k = 0..100, eps in {1/10, 1/100}.

Method: exhibit a feasible point and a dual quadrature certificate whose
bound matches the point's objective exactly; the sandwich proves optimality
with no LP solver involved. scipy's float LP is run as a sanity cross-check
of the same value.

Frozen output (copied into tests/test_acceptance.py):
    eps=1/10   objective = 1/3   x = (0, 0, 1)
    eps=1/100  objective = 1/3   x = (0, 0, 1)
"""

from __future__ import annotations

from fractions import Fraction as F

N = 3
NODES = [F(k, 100) for k in range(101)]


def g(t):
    return t * t


def poly(x, t):
    return sum(x[i] * t**i for i in range(N))


def check_exact(eps):
    # candidate primal point: p(t) = t^2
    x = [F(0), F(0), F(1)]
    for t in NODES:
        v = poly(x, t)
        assert g(t) <= v <= g(t) + eps, (t, v)
    objective = sum(x[i] / (i + 1) for i in range(N))

    # dual certificate: lambda <= 0 supported on nodes 0, 1/2, 1 with
    # -lambda = Simpson weights (1/6, 4/6, 1/6); moment conditions
    # sum lambda_t t^(i-1) = -1/i hold because Simpson integrates degree <= 2
    # exactly, and the bound is -sum(lambda_t g(t) + eps lambda_t^+)
    lam = {F(0): -F(1, 6), F(1, 2): -F(4, 6), F(1): -F(1, 6)}
    for i in range(1, N + 1):
        moment = sum(l * t ** (i - 1) for t, l in lam.items())
        assert moment == -F(1, i), (i, moment)
    bound = -sum(l * g(t) for t, l in lam.items())  # lambda^+ = 0 throughout
    assert bound == objective, (bound, objective)
    return objective, x


def cross_check_float(eps):
    import numpy as np
    from scipy.optimize import linprog

    ts = np.array([float(t) for t in NODES])
    vander = np.vstack([ts**i for i in range(N)]).T
    A_ub = np.vstack([vander, -vander])
    b_ub = np.concatenate([ts**2 + float(eps), -(ts**2)])
    c = np.array([1.0, 0.5, 1.0 / 3.0])
    res = linprog(c, A_ub=A_ub, b_ub=b_ub, bounds=[(None, None)] * N,
                  method="highs")
    assert res.status == 0, res.message
    return res.fun


def main():
    for eps in (F(1, 10), F(1, 100)):
        objective, x = check_exact(eps)
        approx = cross_check_float(eps)
        drift = abs(float(objective) - approx)
        assert drift < 1e-7, drift
        print(f"eps={eps}: objective={objective} x={tuple(map(str, x))} "
              f"(scipy float agrees to {drift:.2e})")


if __name__ == "__main__":
    main()
