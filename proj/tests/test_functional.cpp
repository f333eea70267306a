#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "sumspace/error.hpp"
#include "sumspace/functional.hpp"
#include "sumspace/instances.hpp"
#include "sumspace/oracle1d.hpp"

using namespace sumspace;

namespace {
const AtomicMeasure kTwo(1, {{Point(0.0), 1.0}, {Point(1.0), 1.0}});
const SampledFunction kRamp({0.0, 1.0});

FamilyAssignment worked_family() {
    FamilyAssignment fa;
    fa.add(Cube(Point(0.5), 0.6), 0, 0);
    return fa;
}
}  // namespace

TEST_CASE("CR worked example") {
    // (1.2)^-1 * 2 / ((1.2)^-1 + 2)^2 over the two ordered atom pairs
    const double expect = (1 / 1.2) * 2 / std::pow(1 / 1.2 + 2, 2);
    const double v = eval_family_functional(worked_family(), Variant::CR, kTwo, kRamp, 2, FamilyRules{});
    CHECK(v == doctest::Approx(expect).epsilon(1e-14));
    CHECK(v == doctest::Approx(0.207612457).epsilon(1e-9));
}

TEST_CASE("constant f gives zero for every variant") {
    const SampledFunction c({4.0, 4.0});
    for (Variant v : kAllVariants) CHECK(family_sum(worked_family(), v, kTwo, c, 2) == 0.0);
}

TEST_CASE("homogeneity of degree p") {
    const SampledFunction g({0.0, -3.0});
    for (Variant v : kAllVariants) {
        const double a = family_sum(worked_family(), v, kTwo, kRamp, 2.5);
        CHECK(family_sum(worked_family(), v, kTwo, g, 2.5) == doctest::Approx(std::pow(3.0, 2.5) * a).epsilon(1e-13));
    }
}

TEST_CASE("variant names round-trip") {
    for (Variant v : kAllVariants) CHECK(parse_variant(variant_name(v)) == v);
    CHECK_THROWS_AS(parse_variant("V9"), InputError);
}

TEST_CASE("admissibility") {
    FamilyRules rules;
    SUBCASE("overlapping cubes") {
        FamilyAssignment fa;
        fa.add(Cube(Point(0.0), 1), 0, 0);
        fa.add(Cube(Point(1.5), 1), 1, 1);
        CHECK_FALSE(check_family(fa, Variant::CR, kTwo, 2, rules).ok);
        CHECK(check_family(fa, Variant::N11, kTwo, 2, rules).ok);  // multiplicity 2
        CHECK_THROWS_AS(eval_family_functional(fa, Variant::CR, kTwo, kRamp, 2, rules), InputError);
    }
    SUBCASE("touching cubes are fine") {
        FamilyAssignment fa;
        fa.add(Cube(Point(0.0), 0.5), 0, 1);
        fa.add(Cube(Point(1.0), 0.5), 1, 0);
        const Admissibility ad = check_family(fa, Variant::CR, kTwo, 2, rules);
        CHECK(ad.ok);
        CHECK(ad.gamma_needed == doctest::Approx(3.0));
        rules.gamma = 2.0;
        CHECK_FALSE(check_family(fa, Variant::CR, kTwo, 2, rules).ok);
    }
    SUBCASE("mass condition for V1") {
        const Admissibility ad = check_family(worked_family(), Variant::V1, kTwo, 2, rules);
        CHECK_FALSE(ad.ok);
        CHECK(ad.reason.find("mass") != std::string::npos);
    }
    SUBCASE("null cubes for VTH3") {
        FamilyAssignment fa;
        fa.add(Cube(Point(5.0), 0.5), 0, 0);
        CHECK_FALSE(check_family(fa, Variant::VTH3, kTwo, 2, rules).ok);
        CHECK(family_sum(fa, Variant::VTH3, kTwo, kRamp, 2) == 0.0);
    }
}

TEST_CASE("covering multiplicity counts open cubes") {
    CHECK(covering_multiplicity({}) == 0);
    CHECK(covering_multiplicity({Cube(Point(0.0), 1), Cube(Point(2.0), 1)}) == 1);
    CHECK(covering_multiplicity({Cube(Point(0.0), 1), Cube(Point(1.0), 1), Cube(Point(0.5), 0.1)}) == 3);
    CHECK(covering_multiplicity({Cube(Point(0.0, 0.0), 1), Cube(Point(2.0, 2.0), 1), Cube(Point(1.0, 1.0), 0.5)}) == 2);
    CHECK(covering_multiplicity({Cube(Point(0.0, 0.0), 1), Cube(Point(2.0, 0.0), 1), Cube(Point(0.0, 2.0), 1),
                                 Cube(Point(2.0, 2.0), 1)}) == 1);
}

// Under the M-DM-V1 mass condition each term satisfies V1 <= 4 CR and
// VTH3 <= V4 <= 1.25 VTH3.
TEST_CASE("termwise dominance between variants") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0, 1);
    std::size_t tested = 0;
    for (int trial = 0; trial < 4000; ++trial) {
        const int n = 1 + trial % 2;
        const double p = n + 0.2 + 2.5 * u(rng);
        std::vector<Atom> atoms;
        std::vector<double> vals;
        for (int i = 0; i < 10; ++i) {
            atoms.push_back({n == 1 ? Point(4 * u(rng)) : Point(4 * u(rng), 4 * u(rng)), std::pow(10.0, -3 + 2 * u(rng))});
            vals.push_back(u(rng));
        }
        const AtomicMeasure mu(n, atoms);
        const SampledFunction f = align_values(mu, vals);
        auto rc = [&] { return n == 1 ? Point(4 * u(rng)) : Point(4 * u(rng), 4 * u(rng)); };
        const Cube q(rc(), 0.05 + u(rng)), a(rc(), 0.05 + 2 * u(rng)), b(rc(), 0.05 + 2 * u(rng));
        const double ma = mu.mass(a), mb = mu.mass(b);
        if (ma <= 0 || mb <= 0) continue;
        if (std::pow(a.diam(), p - n) * ma + std::pow(b.diam(), p - n) * mb > 1.0) continue;
        ++tested;
        const double cr = family_term(Variant::CR, q, a, b, mu, f, p);
        const double v1 = family_term(Variant::V1, q, a, b, mu, f, p);
        const double v4 = family_term(Variant::V4, q, a, b, mu, f, p);
        const double th = family_term(Variant::VTH3, q, a, b, mu, f, p);
        CHECK(v1 <= 4 * cr * (1 + 1e-12));
        CHECK(th <= v4 * (1 + 1e-12));
        CHECK(v4 <= 1.25 * th * (1 + 1e-12));
        CHECK(family_term(Variant::N11, q, a, b, mu, f, p) == th);
    }
    CHECK(tested > 100);
}

TEST_CASE("proof family on the two-atom instance") {
    Params prm;
    const Construction con = Construction::build(kTwo, prm);
    const LacunaPartition lac = partition_lacunae(con.cover);
    const ProofFamily pf = construct_proof_family(con, lac);
    CHECK(pf.fa.size() > 0);
    const Admissibility ad = check_family(pf.fa, Variant::CR, con.mu, 2, FamilyRules{});
    CHECK_MESSAGE(ad.ok, ad.reason);
    const double O = sigma_norm_exact(OracleProblem::from(con.mu, kRamp, 2)).value;
    const double L = std::pow(family_sum(pf.fa, Variant::CR, con.mu, kRamp, 2), 0.5);
    const double R = std::pow(eval_weighted_pairs(pf.ref2, con.mu, kRamp, 2), 0.5);
    CHECK(L / O <= 32.0);
    CHECK(R / O >= 0.5);
    CHECK(R / O <= 16.0);
}

TEST_CASE("single atom, constant f") {
    const AtomicMeasure one(1, {{Point(0.0), 2.0}});
    const Construction con = Construction::build(one, Params{});
    const ProofFamily pf = construct_proof_family(con, partition_lacunae(con.cover));
    for (Variant v : kAllVariants) CHECK(family_sum(pf.fa, v, con.mu, SampledFunction({3.0}), 2) == 0.0);
    CHECK(eval_weighted_pairs(pf.ref2, con.mu, SampledFunction({3.0}), 2) == 0.0);
}

TEST_CASE("proof families are admissible on random suites") {
    const double p1[] = {1.5, 2.0, 3.0}, p2[] = {2.5, 3.0};
    auto suite = random_suite(1, 30, 12, p1, 91);
    for (Instance& in : random_suite(2, 6, 8, p2, 92)) suite.push_back(std::move(in));
    for (const Instance& in : suite) {
        Params prm;
        prm.p = in.p;
        const Construction con = Construction::build(in.mu, prm);
        const ProofFamily pf = construct_proof_family(con, partition_lacunae(con.cover));
        const Admissibility ad = check_family(pf.fa, Variant::CR, con.mu, in.p, FamilyRules{});
        CHECK_MESSAGE(ad.ok, in.label << ": " << ad.reason);
        CHECK(pf.q1_count + pf.q2_count + pf.n_ke == pf.fa.size());
    }
}

TEST_CASE("search engine") {
    const FamilyRules rules;
    SUBCASE("dominates the worked example and is monotone") {
        const SearchResult r = search_lower_bound(kTwo, kRamp, 2, Variant::CR, 12, 5, rules, {worked_family()});
        CHECK(r.value >= 0.207612457 * (1 - 1e-12));
        for (std::size_t i = 1; i < r.history.size(); ++i) CHECK(r.history[i] >= r.history[i - 1]);
        CHECK(check_family(r.best, Variant::CR, kTwo, 2, rules).ok);
        CHECK(family_sum(r.best, Variant::CR, kTwo, kRamp, 2) == doctest::Approx(r.value).epsilon(1e-12));
    }
    SUBCASE("deterministic for a fixed seed") {
        const SearchResult a = search_lower_bound(kTwo, kRamp, 2, Variant::CR, 8, 3, rules);
        const SearchResult b = search_lower_bound(kTwo, kRamp, 2, Variant::CR, 8, 3, rules);
        CHECK(a.value == b.value);
        CHECK(a.history == b.history);
    }
    SUBCASE("constant f") {
        CHECK(search_lower_bound(kTwo, SampledFunction({1.0, 1.0}), 2, Variant::CR, 6, 1, rules).value == 0.0);
    }
    SUBCASE("V1 and V4 searches respect the mass condition") {
        for (Variant v : {Variant::V1, Variant::V4}) {
            const SearchResult r = search_lower_bound(kTwo, kRamp, 2, v, 6, 2, rules);
            CHECK(check_family(r.best, v, kTwo, 2, rules).ok);
        }
    }
}

TEST_CASE("k-curve on the two-atom instance") {
    Params prm;
    const std::vector<double> grid{0.1, 0.5, 0.70711, 5.0};
    const auto pts = k_curve(kTwo, kRamp, prm, grid);
    REQUIRE(pts.size() == 4);
    for (const KCurvePoint& k : pts) {
        REQUIRE(k.oracle);
        CHECK(*k.oracle == doctest::Approx(std::min(k.t, std::sqrt(0.5))).epsilon(1e-6));
        CHECK(*k.oracle <= k.upper * (1 + 1e-9));
        CHECK(k.lower <= kKCurveSlack * k.upper);
    }
    const auto g = log_grid(1e-2, 1e2, 5);
    REQUIRE(g.size() == 5);
    CHECK(g[2] == doctest::Approx(1.0));
    const auto d = default_t_grid(kTwo, kRamp, 2);
    CHECK(d.size() == 32);
}
