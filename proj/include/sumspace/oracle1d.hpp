#pragma once

#include <vector>

#include "sumspace/measure.hpp"

namespace sumspace {

// One-dimensional sum-space norm by finite-dimensional convex minimization.
// For values v prescribed at x_1 < ... < x_m the least ||g'||_p over
// interpolants is S(v) = (sum |v_{i+1} - v_i|^p (x_{i+1} - x_i)^(1-p))^(1/p),
// attained by the piecewise-linear interpolant (Holder on each gap; constant
// outside [x_1, x_m]). Hence
//   ||f||_Sigma = min_v S(v) + M(v),  M(v) = (sum w_i |f_i - v_i|^p)^(1/p).
struct OracleProblem {
    std::vector<double> x, w, f;  // x strictly increasing
    double p = 2.0;
    double t = 1.0;

    static OracleProblem from(const AtomicMeasure& mu, const SampledFunction& f, double p, double t = 1.0);
    void validate() const;  // throws InputError; p must lie in (1, 8]
};

struct OracleResult {
    double value = 0.0;
    std::vector<double> v;  // minimizer
    double lower = 0.0;     // certified dual lower bound
    double gap = 0.0;       // (value - lower) / max(value, tiny)
    int newton_steps = 0;
};

double oracle_seminorm(const OracleProblem& prob, const std::vector<double>& v);
double oracle_mu_norm(const OracleProblem& prob, const std::vector<double>& v);

// min_c M(c), the limit of K(t) as t grows.
double min_constant_residual(const OracleProblem& prob);

// min_v S(v) + M(v). Throws ConvergenceError when the certified relative gap
// exceeds 1e-8.
OracleResult sigma_norm_exact(const OracleProblem& prob);

// K(t) = min_v M(v) + t S(v).
OracleResult k_exact(const OracleProblem& prob);

}  // namespace sumspace
