#include "sumspace/instances.hpp"

#include <cmath>

#include <fmt/format.h>

namespace sumspace {

Instance random_instance(int n, std::size_t m, double p, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int layout = static_cast<int>(rng() % 3);
    std::vector<Atom> atoms;
    std::vector<double> values;
    auto coord = [&](double lo, double hi) { return lo + (hi - lo) * u(rng); };
    std::vector<Point> centres;
    for (int k = 0; k < 3; ++k) centres.push_back(n == 1 ? Point(coord(0, 10)) : Point(coord(0, 10), coord(0, 10)));
    Point walk = n == 1 ? Point(0.0) : Point(0.0, 0.0);

    for (std::size_t i = 0; i < m; ++i) {
        Point x;
        if (layout == 0) {
            x = n == 1 ? Point(coord(0, 10)) : Point(coord(0, 10), coord(0, 10));
        } else if (layout == 1) {
            const Point& c = centres[rng() % centres.size()];
            const double spread = std::pow(10.0, coord(-3.0, 0.0));
            x = n == 1 ? Point(c[0] + spread * coord(-1, 1)) : Point(c[0] + spread * coord(-1, 1), c[1] + spread * coord(-1, 1));
        } else {
            for (int j = 0; j < n; ++j) walk[j] += std::pow(10.0, coord(-2.0, 1.0)) * (j == 0 ? 1.0 : coord(-1, 1));
            x = walk;
        }
        atoms.push_back({x, std::pow(10.0, coord(-2.0, 2.0))});
        values.push_back(coord(-1.0, 1.0));
    }
    Instance inst;
    inst.mu = AtomicMeasure(n, std::move(atoms));
    inst.f = align_values(inst.mu, values);
    inst.p = p;
    return inst;
}

std::vector<Instance> random_suite(int n, std::size_t count, std::size_t max_atoms, std::span<const double> ps,
                                   std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Instance> out;
    const std::size_t span = max_atoms >= 2 ? max_atoms - 1 : 1;
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t m = 2 + i % span;
        const double p = ps[(i / span) % ps.size()];
        Instance inst = random_instance(n, m, p, rng);
        inst.label = fmt::format("{}d#{} m={} p={}", n, i, m, p);
        out.push_back(std::move(inst));
    }
    return out;
}

CubeFamily random_family(int n, std::size_t count, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Cube> cubes;
    for (std::size_t i = 0; i < count; ++i) {
        const Point c = n == 1 ? Point(10.0 * u(rng)) : Point(10.0 * u(rng), 10.0 * u(rng));
        cubes.emplace_back(c, std::pow(10.0, -2.0 + (std::log10(2.0) + 2.0) * u(rng)));
    }
    return CubeFamily(std::move(cubes));
}

}  // namespace sumspace
