#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "sumspace/decompose.hpp"
#include "sumspace/error.hpp"
#include "sumspace/instances.hpp"
#include "sumspace/oracle1d.hpp"

using namespace sumspace;

namespace {
Construction build(std::vector<Atom> atoms, double p, int n = 1) {
    Params prm;
    prm.p = p;
    return Construction::build(AtomicMeasure(n, std::move(atoms)), prm);
}
}  // namespace

TEST_CASE("constant function maps to (constant, 0)") {
    const Construction con = build({{Point(0.0), 1.0}, {Point(2.0), 3.0}, {Point(2.5), 0.1}}, 2);
    const Decomposition d = build_extension(con, SampledFunction({5.0, 5.0, 5.0}));
    for (double v : d.tilde_f1) CHECK(v == doctest::Approx(5.0).epsilon(1e-14));
    for (double v : d.f2_values) CHECK(std::abs(v) <= 1e-12);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-50, 50);
    for (int k = 0; k < 200; ++k) {
        const F1Value f1 = eval_f1(d, Point(u(rng)));
        CHECK(f1.value == doctest::Approx(5.0).epsilon(1e-12));
        CHECK(std::abs(f1.grad[0]) <= 1e-10);
    }
    CHECK(quadrature_seminorm(d).value <= 1e-10);
    CHECK(discrete_seminorm(d) <= 1e-10);
    CHECK(mu_norm_f2(d) <= 1e-10);
}

TEST_CASE("single atom") {
    const Construction con = build({{Point(0.0), 1.0}}, 2);
    const Decomposition d = build_extension(con, SampledFunction({-2.5}));
    for (std::size_t e = 0; e < d.tilde_f1.size(); ++e)
        if (Cube(con.net.points[e].e, con.net.points[e].R).contains(Point(0.0))) CHECK(d.tilde_f1[e] == -2.5);
    CHECK(d.f2_values[0] == 0.0);
}

TEST_CASE("net points carry the average with zero gradient") {
    const Construction con = build({{Point(0.0), 1.0}, {Point(1.0), 1.0}}, 2);
    const Decomposition d = build_extension(con, SampledFunction({0.0, 1.0}));
    for (std::size_t e = 0; e < d.tilde_f1.size(); ++e) {
        const F1Value v = eval_f1(d, con.net.points[e].e);
        CHECK(v.value == d.tilde_f1[e]);
        CHECK(v.grad[0] == 0.0);
    }
    CHECK_THROWS_AS(build_extension(con, SampledFunction({1.0})), InputError);
}

TEST_CASE("two-atom instance: upper bound over the oracle") {
    const Construction con = build({{Point(0.0), 1.0}, {Point(1.0), 1.0}}, 2);
    const SampledFunction f({0.0, 1.0});
    const Decomposition d = build_extension(con, f);
    const double U = quadrature_seminorm(d).value + mu_norm_f2(d);
    const double O = sigma_norm_exact(OracleProblem::from(con.mu, f, 2)).value;
    CHECK(O <= U * (1 + 1e-9));
    CHECK(U / O <= 4.0);
}

TEST_CASE("homogeneity of the norms") {
    const double ps[] = {1.5, 3.0};
    for (const Instance& in : random_suite(1, 6, 8, ps, 51)) {
        Params prm;
        prm.p = in.p;
        const Construction con = Construction::build(in.mu, prm);
        std::vector<double> g = in.f.values;
        for (double& v : g) v *= -3.0;
        const Decomposition a = build_extension(con, in.f), b = build_extension(con, SampledFunction(g));
        CHECK(quadrature_seminorm(b).value == doctest::Approx(3 * quadrature_seminorm(a).value).epsilon(1e-9));
        CHECK(mu_norm_f2(b) == doctest::Approx(3 * mu_norm_f2(a)).epsilon(1e-12));
        CHECK(discrete_seminorm(b) == doctest::Approx(3 * discrete_seminorm(a)).epsilon(1e-12));
    }
}

TEST_CASE("identity, linearity, constants and gradients on random instances") {
    const double p1[] = {1.5, 2.0, 3.0}, p2[] = {2.5, 3.0};
    auto suite = random_suite(1, 18, 12, p1, 61);
    for (Instance& in : random_suite(2, 4, 8, p2, 62)) suite.push_back(std::move(in));
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1, 1);
    for (const Instance& in : suite) {
        Params prm;
        prm.p = in.p;
        const Construction con = Construction::build(in.mu, prm);
        std::vector<double> g(in.f.size());
        for (double& v : g) v = u(rng);
        const Report rep = verify_decomposition(con, in.f, SampledFunction(g), 0.7, -2.2, 3, 1000);
        CHECK_MESSAGE(rep.ok(), in.label << "\n" << rep.to_text());
    }
}
