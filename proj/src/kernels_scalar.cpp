#include <algorithm>
#include <cmath>
#include <limits>

#include "sumspace/kernels.hpp"

namespace sumspace::kernels {

namespace scalar {

double cube_mass(const double* xs, const double* ys, const double* w, std::size_t n, double cx,
                 double cy, double r) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        bool in = std::abs(xs[i] - cx) <= r;
        if (ys) in = in && std::abs(ys[i] - cy) <= r;
        if (in) s += w[i];
    }
    return s;
}

double min_dist_to_cube(const double* xs, const double* ys, std::size_t n, double cx, double cy,
                        double r) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        double d = std::abs(xs[i] - cx) - r;
        if (ys) d = std::max(d, std::abs(ys[i] - cy) - r);
        best = std::min(best, std::max(d, 0.0));
    }
    return best;
}

void linf_distances(const double* xs, const double* ys, std::size_t n, double px, double py,
                    double* out) {
    for (std::size_t i = 0; i < n; ++i) {
        double d = std::abs(xs[i] - px);
        if (ys) d = std::max(d, std::abs(ys[i] - py));
        out[i] = d;
    }
}

double weighted_power_sum(const double* v, const double* w, std::size_t n, double p) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += w[i] * std::pow(std::abs(v[i]), p);
    return s;
}

double pair_power_sum(const double* fa, const double* wa, std::size_t na, const double* fb,
                      const double* wb, std::size_t nb, double p) {
    double s = 0.0;
    for (std::size_t i = 0; i < na; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < nb; ++j) row += wb[j] * std::pow(std::abs(fa[i] - fb[j]), p);
        s += wa[i] * row;
    }
    return s;
}

}  // namespace scalar

const Table& scalar_table() {
    static const Table t{scalar::cube_mass, scalar::min_dist_to_cube, scalar::linf_distances,
                         scalar::weighted_power_sum, scalar::pair_power_sum};
    return t;
}

}  // namespace sumspace::kernels
