#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "sumspace/concentration.hpp"
#include "sumspace/measure.hpp"
#include "sumspace/params.hpp"
#include "sumspace/report.hpp"
#include "sumspace/whitney.hpp"

namespace sumspace {

// Measure plus everything built from it alone: net, Whitney cover.
struct Construction {
    AtomicMeasure mu;
    Params prm;
    ConcentrationNet net;
    WhitneyCover cover;

    static Construction build(AtomicMeasure mu, const Params& prm);
};

// f = f1 + f2 with f1 the Whitney extension of the averages over K(e).
// Holds a pointer to its Construction, which must outlive it.
struct Decomposition {
    const Construction* con = nullptr;
    std::vector<double> tilde_f1;  // per net point: average of f over K(e)
    std::vector<double> f1_atoms;  // per stored atom
    std::vector<double> f2_values; // f - f1 per stored atom
};

Decomposition build_extension(const Construction& con, const SampledFunction& f);

struct F1Value {
    double value = 0.0;
    std::array<double, 2> grad{0.0, 0.0};
};

// Inside the working box: f~(e) at net points (gradient 0 by convention),
// sum phi_Q f~(a_Q) elsewhere. Outside: degree-0 radial extension from the
// box centre, f1(x) = f1(c + H (x - c) / |x - c|).
F1Value eval_f1(const Decomposition& d, const Point& x);

enum class SeminormMethod { quadrature, discrete };

struct QuadratureResult {
    double value = 0.0;      // ||grad f1||_p
    double interior = 0.0;   // integral of |grad f1|^p over the box
    double exterior = 0.0;   // same over the complement (closed form in the radius)
    int levels = 0;          // global refinement levels used
    double rel_change = 0.0; // relative change at the last level
};

// Tensor Gauss-Legendre (4 nodes per axis) on the pieces of each cover cube
// cut at every bump breakpoint, refined globally by halving until the
// relative change is below rel_tol. Throws ConvergenceError naming the cube
// with the largest change otherwise.
QuadratureResult quadrature_seminorm(const Decomposition& d, double rel_tol, int max_levels);

// Default tolerances: 1e-9 / 8 levels in 1D, 1e-3 / 3 levels in 2D.
QuadratureResult quadrature_seminorm(const Decomposition& d);

// (sum_K sum_{Q meeting K} |f~(a_Q) - f~(a_K)|^p / (diam K)^(p-n))^(1/p).
// A monitoring surrogate, equal to the seminorm only up to a constant.
double discrete_seminorm(const Decomposition& d);

double estimate_sobolev_seminorm(const Decomposition& d, SeminormMethod m);

// Exact atomic L_p(mu) norm of f2.
double mu_norm_f2(const Decomposition& d);

}  // namespace sumspace

namespace sumspace {

// Identity f1 + f2 = f at atoms (to one rounding), linearity of
// f -> (f~, f1, f2) at net points, atoms and `samples` probes in 1.5x the
// box (1e-10 relative to |alpha| max|f| + |beta| max|g|), constants mapped
// to (c, 0), and the analytic gradient of f1 against central differences at
// samples / 2 probes (1e-4 relative).
Report verify_decomposition(const Construction& con, const SampledFunction& f, const SampledFunction& g,
                            double alpha, double beta, std::uint64_t seed, std::size_t samples = 1000);

}  // namespace sumspace
