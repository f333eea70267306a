"""Reference values for the one-dimensional sum-space norm and K-functional.

Independent of the C++ solver: the convex problem
    min_v  a * (sum |v_{i+1}-v_i|^p dx_i^(1-p))^(1/p) + (sum w_i |f_i - v_i|^p)^(1/p)
is handed to cvxpy. Run with `python3 tests/oracles/oracle1d_ref.py`; the
printed numbers are frozen in tests/test_oracle.cpp.
"""

import cvxpy as cp
import numpy as np

CASES = {
    "two_atom": ([0.0, 1.0], [1.0, 1.0], [0.0, 1.0], 2.0),
    "three_uneven": ([0.0, 0.3, 2.0], [2.0, 0.5, 1.0], [1.0, -1.0, 0.5], 2.0),
    "four_p3": ([-1.0, 0.0, 0.25, 4.0], [1.0, 0.1, 3.0, 0.7], [0.0, 2.0, -1.0, 1.0], 3.0),
    "five_p15": ([0.0, 1.0, 1.5, 3.0, 10.0], [0.2, 5.0, 1.0, 1.0, 0.05], [1.0, 0.0, 0.3, -0.4, 2.0], 1.5),
}


def solve(x, w, f, p, a=1.0):
    x, w, f = map(np.asarray, (x, w, f))
    dx = np.diff(x)
    v = cp.Variable(len(x))
    semi = cp.pnorm(cp.multiply(dx ** ((1 - p) / p), cp.diff(v)), p)
    resid = cp.pnorm(cp.multiply(w ** (1 / p), f - v), p)
    prob = cp.Problem(cp.Minimize(a * semi + resid))
    prob.solve(solver=cp.CLARABEL, tol_gap_abs=1e-12, tol_gap_rel=1e-12, tol_feas=1e-12)
    return prob.value


if __name__ == "__main__":
    for name, (x, w, f, p) in CASES.items():
        print(f"{name} sigma {solve(x, w, f, p):.10f}")
    x, w, f, p = CASES["two_atom"]
    for t in (0.1, 0.5, 0.70711, 5.0):
        print(f"two_atom K({t}) {solve(x, w, f, p, a=t):.10f}")
    x, w, f, p = CASES["three_uneven"]
    for t in (0.01, 0.3, 1.0, 30.0):
        print(f"three_uneven K({t}) {solve(x, w, f, p, a=t):.10f}")
