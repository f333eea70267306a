#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "sumspace/error.hpp"
#include "sumspace/instances.hpp"
#include "sumspace/oracle1d.hpp"

using namespace sumspace;

namespace {
OracleProblem make(std::vector<double> x, std::vector<double> w, std::vector<double> f, double p, double t = 1) {
    OracleProblem pr;
    pr.x = std::move(x);
    pr.w = std::move(w);
    pr.f = std::move(f);
    pr.p = p;
    pr.t = t;
    return pr;
}
}  // namespace

// Frozen from tests/oracles/oracle1d_ref.py (cvxpy, Clarabel).
TEST_CASE("reference values") {
    CHECK(sigma_norm_exact(make({0, 1}, {1, 1}, {0, 1}, 2)).value == doctest::Approx(0.7071067812).epsilon(1e-9));
    CHECK(sigma_norm_exact(make({0, 0.3, 2}, {2, 0.5, 1}, {1, -1, 0.5}, 2)).value ==
          doctest::Approx(1.2677313821).epsilon(1e-9));
    CHECK(sigma_norm_exact(make({-1, 0, 0.25, 4}, {1, 0.1, 3, 0.7}, {0, 2, -1, 1}, 3)).value ==
          doctest::Approx(1.5545412405).epsilon(1e-9));
    CHECK(sigma_norm_exact(make({0, 1, 1.5, 3, 10}, {0.2, 5, 1, 1, 0.05}, {1, 0, 0.3, -0.4, 2}, 1.5)).value ==
          doctest::Approx(0.8317759467).epsilon(1e-9));
    const double k3[][2] = {{0.01, 0.0382842823}, {0.3, 1.1485284703}, {1.0, 1.2677313821}, {30.0, 1.2677313821}};
    for (const auto& [t, k] : k3)
        CHECK(k_exact(make({0, 0.3, 2}, {2, 0.5, 1}, {1, -1, 0.5}, 2, t)).value == doctest::Approx(k).epsilon(1e-9));
}

TEST_CASE("two-atom K-functional") {
    for (double t : {0.1, 0.5, 0.70711, 5.0, 0.3, 10.0})
        CHECK(k_exact(make({0, 1}, {1, 1}, {0, 1}, 2, t)).value ==
              doctest::Approx(std::min(t, std::sqrt(0.5))).epsilon(1e-6));
}

TEST_CASE("trivial cases") {
    CHECK(sigma_norm_exact(make({3}, {2}, {7}, 2)).value == 0.0);
    CHECK(sigma_norm_exact(make({0, 1, 4}, {1, 2, 3}, {2, 2, 2}, 3)).value == 0.0);
}

TEST_CASE("small t: K(t) / t tends to the interpolant seminorm") {
    const OracleProblem pr = make({0, 0.3, 2}, {2, 0.5, 1}, {1, -1, 0.5}, 2, 1e-6);
    const double S = oracle_seminorm(pr, pr.f);
    CHECK(k_exact(pr).value / 1e-6 == doctest::Approx(S).epsilon(1e-5));
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(sigma_norm_exact(make({0, 1}, {1, 1}, {0, 1}, 9)), InputError);
    CHECK_THROWS_AS(sigma_norm_exact(make({0, 1}, {1, 1}, {0, 1}, 1)), InputError);
    CHECK_THROWS_AS(sigma_norm_exact(make({1, 0}, {1, 1}, {0, 1}, 2)), InputError);
    CHECK_THROWS_AS(sigma_norm_exact(make({0, 1}, {1, 0}, {0, 1}, 2)), InputError);
}

TEST_CASE("optimality, certificates and convexity on random problems") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-1, 1);
    const double ps[] = {1.5, 2.0, 3.0, 6.0};
    for (const Instance& in : random_suite(1, 80, 12, ps, 71)) {
        const OracleProblem pr = OracleProblem::from(in.mu, in.f, in.p);
        const OracleResult r = sigma_norm_exact(pr);
        CHECK(r.gap <= 1e-8);
        CHECK(r.lower <= r.value);
        CHECK(oracle_seminorm(pr, r.v) + oracle_mu_norm(pr, r.v) == doctest::Approx(r.value).epsilon(1e-12));
        // no random perturbation does better
        for (int k = 0; k < 10; ++k) {
            std::vector<double> v = r.v;
            for (double& x : v) x += 1e-3 * u(rng);
            CHECK(oracle_seminorm(pr, v) + oracle_mu_norm(pr, v) >= r.value * (1 - 1e-9));
        }
        // v = f and the best constant are feasible points
        CHECK(r.value <= oracle_seminorm(pr, pr.f) * (1 + 1e-12));
        // norm: homogeneous and subadditive
        OracleProblem scaled = pr, other = pr, sum = pr;
        for (double& x : scaled.f) x *= -2.0;
        for (std::size_t i = 0; i < other.f.size(); ++i) {
            other.f[i] = u(rng);
            sum.f[i] = pr.f[i] + other.f[i];
        }
        CHECK(sigma_norm_exact(scaled).value == doctest::Approx(2 * r.value).epsilon(1e-8));
        CHECK(sigma_norm_exact(sum).value <= (r.value + sigma_norm_exact(other).value) * (1 + 1e-8));
    }
}

TEST_CASE("route equivalence k(t) = t sigma(mu / t^p) across six decades") {
    const double ps[] = {1.5, 2.0, 3.0};
    for (const Instance& in : random_suite(1, 12, 10, ps, 81)) {
        for (double t = 1e-3; t <= 1e3 * 1.0001; t *= 10) {
            const double k = k_exact(OracleProblem::from(in.mu, in.f, in.p, t)).value;
            const double r = t * sigma_norm_exact(OracleProblem::from(in.mu.scaled(std::pow(t, -in.p)), in.f, in.p)).value;
            CHECK(k == doctest::Approx(r).epsilon(1e-7));
        }
    }
}
