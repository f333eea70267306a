#pragma once

#include <cstdint>
#include <vector>

#include "sumspace/geometry.hpp"
#include "sumspace/measure.hpp"
#include "sumspace/params.hpp"
#include "sumspace/report.hpp"

namespace sumspace {

// R(x) = inf{r > 0 : mu(Q(x, r)) >= r^(n-p)}, exact: the mass is a step
// function of r with jumps at the atom distances, and on each step the
// crossing has a closed form.
double concentration_radius(const AtomicMeasure& mu, const Point& x, double p);

// Reusable evaluator; avoids reallocating scratch buffers per call.
class RadiusFn {
public:
    RadiusFn(const AtomicMeasure& mu, double p);
    double operator()(const Point& x) const;
    const AtomicMeasure& measure() const { return *mu_; }
    double p() const { return p_; }

private:
    const AtomicMeasure* mu_;
    double p_;
    mutable std::vector<double> dist_;
    mutable std::vector<std::size_t> order_;
};

struct NetPoint {
    Point e;
    double R = 0.0;
    int layer = 0;  // R in (2^-(layer+1), 2^-layer]
};

struct ConcentrationNet {
    std::vector<NetPoint> points;
    Cube box;                // working box
    double delta_grid = 0.0; // candidate spacing relative to the layer net scale
    int refinement_rounds = 0;
    std::size_t separation_drops = 0;
    double p = 2.0;

    std::vector<Point> positions() const;
    // Nearest net point to a cube (ell-inf), ties by lowest index.
    std::size_t nearest_to(const Cube& q) const;
    std::size_t nearest_to(const Point& x) const;
};

// Working box: half side box_inflation * (bbox half side + 2 max_i R(atom_i)),
// rounded up to a power of two, centre snapped to the H/8 grid.
Cube working_box(const AtomicMeasure& mu, const Params& prm);

// Layered maximal nets in rho_R, pruned across layers, then filtered for
// exact separation. Throws VerificationError when the covering check still
// fails after the refinement rounds.
ConcentrationNet build_net(const AtomicMeasure& mu, const Params& prm);

// Covering constant used by the sampled covering check.
inline constexpr double kCoverConstant = 83.0;

// Separation, sampled covering, Lipschitz, PR-5K, 5K doubling and Q-NE checks.
// `samples` points (seeded) are used for the sampled checks.
Report verify_concentration(const ConcentrationNet& net, const AtomicMeasure& mu, double p,
                            std::uint64_t seed, std::size_t samples = 1000);

}  // namespace sumspace
