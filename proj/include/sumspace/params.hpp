#pragma once

#include <cstdint>

namespace sumspace {

struct Params {
    double p = 2.0;
    double tau = 9.0;
    double gamma = 256.0 * 81.0;  // 2^8 tau^2 for tau = 9
    double box_inflation = 4.0;
    std::uint64_t seed = 0;

    double eta() const { return 1.0 / (21.0 * tau); }
    // Throws InputError unless n < p <= 64, tau >= 9, gamma >= 1, box_inflation >= 1.
    void validate(int n) const;
};

// Relative slack used by every "<= constant" invariant check.
inline constexpr double kCheckSlack = 1e-9;

}  // namespace sumspace
