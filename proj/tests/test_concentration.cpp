#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "sumspace/concentration.hpp"
#include "sumspace/error.hpp"
#include "sumspace/instances.hpp"

using namespace sumspace;

namespace {
Params with_p(double p) {
    Params prm;
    prm.p = p;
    return prm;
}
}  // namespace

TEST_CASE("concentration radius closed forms") {
    AtomicMeasure d0(1, {{Point(0.0), 1.0}});
    CHECK(concentration_radius(d0, Point(0.0), 2) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(concentration_radius(d0, Point(2.0), 2) == doctest::Approx(2.0).epsilon(1e-15));
    AtomicMeasure d4(1, {{Point(0.0), 4.0}});
    CHECK(concentration_radius(d4, Point(0.0), 2) == doctest::Approx(0.25).epsilon(1e-15));
    for (double x : {-7.0, -0.3, 0.5, 1.0, 3.25}) CHECK(concentration_radius(d0, Point(x), 2) == std::max(std::abs(x), 1.0));
    CHECK_THROWS_AS(concentration_radius(d0, Point(0.0), 1.0), InputError);
}

TEST_CASE("radius is 1-Lipschitz") {
    std::mt19937_64 rng(2);
    const double ps[] = {1.5, 3.0};
    for (const Instance& in : random_suite(1, 20, 12, ps, 4)) {
        RadiusFn R(in.mu, in.p);
        std::uniform_real_distribution<double> u(-20, 20);
        for (int k = 0; k < 50; ++k) {
            const Point a(u(rng)), b(u(rng));
            CHECK(std::abs(R(a) - R(b)) <= linf_dist(a, b) * (1 + 1e-12));
        }
    }
}

TEST_CASE("single atom net") {
    AtomicMeasure d0(1, {{Point(0.0), 1.0}});
    const ConcentrationNet net = build_net(d0, with_p(2));
    REQUIRE_FALSE(net.points.empty());
    CHECK(net.delta_grid <= 0.25);
    for (std::size_t i = 0; i < net.points.size(); ++i)
        for (std::size_t j = i + 1; j < net.points.size(); ++j) {
            CHECK(linf_dist(net.points[i].e, net.points[j].e) >= 6 * (net.points[i].R + net.points[j].R));
            CHECK(linf_dist(net.points[i].e, net.points[j].e) >= 12.0);
        }
    const std::size_t k = net.nearest_to(Point(0.0));
    double best = INFINITY;
    for (const NetPoint& e : net.points) best = std::min(best, std::abs(e.e[0]) + e.R);
    CHECK(best <= kCoverConstant * (1 + net.delta_grid) * 1.0);
    (void)k;
    const Report rep = verify_concentration(net, d0, 2, 0, 500);
    CHECK_MESSAGE(rep.ok(), rep.to_text());
    // lower PR-5K bound is tight for this example
    CHECK(rep.find("pr5k.lower")->worst == doctest::Approx(1.0));
}

TEST_CASE("two far atoms are both covered") {
    AtomicMeasure mu(1, {{Point(0.0), 1.0}, {Point(1000.0), 1.0}});
    const ConcentrationNet net = build_net(mu, with_p(2));
    for (double a : {0.0, 1000.0}) {
        const double R = concentration_radius(mu, Point(a), 2);
        bool hit = false;
        for (const NetPoint& e : net.points)
            hit = hit || linf_dist(e.e, Point(a)) + e.R <= kCoverConstant * (1 + net.delta_grid) * R;
        CHECK(hit);
    }
}

TEST_CASE("random instances pass every concentration check") {
    const double p1[] = {1.5, 2.0, 3.0}, p2[] = {2.5, 3.0};
    auto suite = random_suite(1, 30, 12, p1, 21);
    for (Instance& in : random_suite(2, 8, 8, p2, 22)) suite.push_back(std::move(in));
    for (const Instance& in : suite) {
        const ConcentrationNet net = build_net(in.mu, with_p(in.p));
        const Report rep = verify_concentration(net, in.mu, in.p, 1, 300);
        CHECK_MESSAGE(rep.ok(), in.label << "\n" << rep.to_text());
        // working box: dyadic half side holding every atom
        CHECK(std::log2(net.box.half_side) == std::round(std::log2(net.box.half_side)));
        for (std::size_t i = 0; i < in.mu.size(); ++i) CHECK(net.box.contains(in.mu.point(i)));
    }
}
