#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "sumspace/report.hpp"

namespace sumspace {

struct SelftestOptions {
    std::uint64_t seed = 0;
    std::size_t instances_1d = 24;
    std::size_t instances_2d = 4;
    std::size_t families = 100;  // random cube families for select / colour
    std::size_t samples = 200;   // sampled points per instance and check
};

// Every invariant suite on a seeded random corpus. Failures of the numerics
// (convergence, verification errors) are recorded as violations rather than
// thrown. No timings or addresses enter the report.
Report run_selftest(const SelftestOptions& opt);

// Header line plus Report::to_text(); byte-identical for equal options.
std::string selftest_text(const SelftestOptions& opt, const Report& rep);

}  // namespace sumspace
