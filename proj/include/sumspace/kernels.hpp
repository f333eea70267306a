#pragma once

// Hot loops over atom arrays. Coordinates are stored structure-of-arrays;
// `ys` is nullptr for one-dimensional data. Every kernel has a scalar
// reference version and, where the host supports it, a SIMD version with
// the same contract. Membership uses |a_i - c_i| <= r, the same predicate
// as Cube::contains, so results agree bit-for-bit on which atoms count.

#include <cstddef>
#include <string_view>

namespace sumspace::kernels {

enum class Isa { scalar, avx2, neon };

struct Table {
    double (*cube_mass)(const double* xs, const double* ys, const double* w, std::size_t n,
                        double cx, double cy, double r);
    double (*min_dist_to_cube)(const double* xs, const double* ys, std::size_t n, double cx,
                               double cy, double r);
    void (*linf_distances)(const double* xs, const double* ys, std::size_t n, double px,
                           double py, double* out);
    double (*weighted_power_sum)(const double* v, const double* w, std::size_t n, double p);
    double (*pair_power_sum)(const double* fa, const double* wa, std::size_t na, const double* fb,
                             const double* wb, std::size_t nb, double p);
};

const Table& scalar_table();
// nullptr when the ISA is not compiled in or not supported by this CPU.
const Table* table_for(Isa isa);

// The table chosen at startup: best supported ISA unless SUMSPACE_SIMD
// (scalar|avx2|neon|auto) says otherwise.
const Table& active();
Isa active_isa();
std::string_view isa_name(Isa isa);
// Testing hook. Throws if the ISA is unavailable.
void force_isa(Isa isa);

inline double cube_mass(const double* xs, const double* ys, const double* w, std::size_t n,
                        double cx, double cy, double r) {
    return active().cube_mass(xs, ys, w, n, cx, cy, r);
}
inline double min_dist_to_cube(const double* xs, const double* ys, std::size_t n, double cx,
                               double cy, double r) {
    return active().min_dist_to_cube(xs, ys, n, cx, cy, r);
}
inline void linf_distances(const double* xs, const double* ys, std::size_t n, double px,
                           double py, double* out) {
    active().linf_distances(xs, ys, n, px, py, out);
}
inline double weighted_power_sum(const double* v, const double* w, std::size_t n, double p) {
    return active().weighted_power_sum(v, w, n, p);
}
inline double pair_power_sum(const double* fa, const double* wa, std::size_t na,
                             const double* fb, const double* wb, std::size_t nb, double p) {
    return active().pair_power_sum(fa, wa, na, fb, wb, nb, p);
}

}  // namespace sumspace::kernels
