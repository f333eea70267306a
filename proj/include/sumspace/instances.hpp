#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "sumspace/measure.hpp"

namespace sumspace {

struct Instance {
    AtomicMeasure mu;
    SampledFunction f;  // aligned with mu's stored atoms
    double p = 2.0;
    std::string label;
};

// One random instance with m input atoms in R^n. Layouts rotate through
// uniform, clustered and geometric-gap placements so that concentration
// radii span several scales; weights are log-uniform on [1e-2, 1e2] and
// values uniform on [-1, 1].
Instance random_instance(int n, std::size_t m, double p, std::mt19937_64& rng);

// `count` instances with m cycling through 2..max_atoms and p through ps.
std::vector<Instance> random_suite(int n, std::size_t count, std::size_t max_atoms, std::span<const double> ps,
                                   std::uint64_t seed);

// Random finite cube family in R^n: `count` cubes with centres uniform in
// [0, 10]^n and half sides log-uniform on [1e-2, 2], ids 0..count-1.
CubeFamily random_family(int n, std::size_t count, std::mt19937_64& rng);

}  // namespace sumspace
