#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "sumspace/error.hpp"
#include "sumspace/kernels.hpp"
#include "sumspace/measure.hpp"

using namespace sumspace;

TEST_CASE("mass with closed cubes") {
    AtomicMeasure d0(1, {{Point(0.0), 1.0}});
    CHECK(d0.mass(Cube(Point(0.0), 5)) == 1.0);
    CHECK(d0.mass(Cube(Point(2.0), 2)) == 1.0);
    AtomicMeasure two(1, {{Point(0.0), 1.0}, {Point(1.0), 1.0}});
    CHECK(two.mass(Cube(Point(0.5), 0.1)) == 0.0);
}

TEST_CASE("average and lp norm") {
    AtomicMeasure one(1, {{Point(0.0), 1.0}});
    CHECK(average(one, SampledFunction({7.0}), Cube(Point(0.0), 1)) == 7.0);
    AtomicMeasure two(1, {{Point(0.0), 1.0}, {Point(1.0), 1.0}});
    CHECK(average(two, SampledFunction({0.0, 1.0}), Cube(Point(0.5), 1)) == 0.5);
    AtomicMeasure uneven(1, {{Point(0.0), 1.0}, {Point(1.0), 3.0}});
    CHECK(average(uneven, SampledFunction({0.0, 1.0}), Cube(Point(0.5), 1)) == 0.75);
    const std::vector<double> z{0.0, 0.0}, f{3.0, 4.0}, g{6.0, 8.0};
    CHECK(lp_norm(two, z, 2) == 0.0);
    CHECK(lp_norm(two, f, 2) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(lp_norm(two, g, 2) == doctest::Approx(2 * lp_norm(two, f, 2)).epsilon(1e-15));
}

TEST_CASE("duplicates merge and values align") {
    AtomicMeasure mu(1, {{Point(2.0), 1.0}, {Point(0.0), 1.0}, {Point(2.0), 0.5}});
    CHECK(mu.size() == 2);
    CHECK(mu.input_size() == 3);
    CHECK(mu.weight(1) == 1.5);
    const std::vector<double> raw{4.0, 1.0, 4.0};
    const SampledFunction f = align_values(mu, raw);
    CHECK(f[0] == 1.0);
    CHECK(f[1] == 4.0);
    const std::vector<double> bad{4.0, 1.0, 5.0};
    CHECK_THROWS_AS(align_values(mu, bad), InputError);
}

TEST_CASE("invalid measures are rejected") {
    CHECK_THROWS_AS(AtomicMeasure(1, {}), InputError);
    CHECK_THROWS_AS(AtomicMeasure(1, {{Point(0.0), -1.0}}), InputError);
    CHECK_THROWS_AS(AtomicMeasure(3, {{Point(0.0), 1.0}}), InputError);
    CHECK_THROWS_AS(AtomicMeasure(2, {{Point(0.0), 1.0}}), InputError);
}

TEST_CASE("2D masses match a brute-force count") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Atom> atoms;
    for (int i = 0; i < 300; ++i) atoms.push_back({Point(10 * u(rng), 10 * u(rng)), 0.1 + u(rng)});
    AtomicMeasure mu(2, atoms);
    for (int k = 0; k < 200; ++k) {
        const Cube q(Point(10 * u(rng), 10 * u(rng)), 3 * u(rng));
        double brute = 0.0;
        for (std::size_t i = 0; i < mu.size(); ++i)
            if (q.contains(mu.point(i))) brute += mu.weight(i);
        CHECK(mu.mass(q) == doctest::Approx(brute).epsilon(1e-12));
        CHECK(mu.atoms_in(q).size() == [&] {
            std::size_t c = 0;
            for (std::size_t i = 0; i < mu.size(); ++i) c += q.contains(mu.point(i));
            return c;
        }());
    }
}

TEST_CASE("SIMD kernels agree with the scalar reference") {
    using namespace kernels;
    const Table& ref = scalar_table();
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (Isa isa : {Isa::avx2, Isa::neon}) {
        const Table* t = table_for(isa);
        if (!t) continue;
        INFO("isa " << isa_name(isa));
        for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 33u, 257u}) {
            std::vector<double> xs(n), ys(n), w(n), v(n), out1(n), out2(n);
            for (std::size_t i = 0; i < n; ++i) {
                xs[i] = u(rng);
                ys[i] = u(rng);
                w[i] = std::abs(u(rng)) + 0.1;
                v[i] = u(rng);
            }
            xs.size() > 2 ? (void)(xs[2] = 1.0) : (void)0;  // exact boundary hit for r = 1 at centre 0
            for (const double* y : {static_cast<const double*>(nullptr), static_cast<const double*>(ys.data())}) {
                CHECK(t->cube_mass(xs.data(), y, w.data(), n, 0.0, 0.0, 1.0) ==
                      doctest::Approx(ref.cube_mass(xs.data(), y, w.data(), n, 0.0, 0.0, 1.0)).epsilon(1e-14));
                CHECK(t->min_dist_to_cube(xs.data(), y, n, 0.5, -0.5, 0.25) ==
                      ref.min_dist_to_cube(xs.data(), y, n, 0.5, -0.5, 0.25));
                t->linf_distances(xs.data(), y, n, 0.3, 0.1, out1.data());
                ref.linf_distances(xs.data(), y, n, 0.3, 0.1, out2.data());
                CHECK(out1 == out2);
            }
            for (double p : {1.5, 2.0, 3.0}) {
                CHECK(t->weighted_power_sum(v.data(), w.data(), n, p) ==
                      doctest::Approx(ref.weighted_power_sum(v.data(), w.data(), n, p)).epsilon(1e-12));
                CHECK(t->pair_power_sum(v.data(), w.data(), n, xs.data(), w.data(), n, p) ==
                      doctest::Approx(ref.pair_power_sum(v.data(), w.data(), n, xs.data(), w.data(), n, p)).epsilon(1e-12));
            }
        }
    }
}
