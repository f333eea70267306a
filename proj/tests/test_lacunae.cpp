#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "sumspace/decompose.hpp"
#include "sumspace/instances.hpp"
#include "sumspace/lacunae.hpp"

using namespace sumspace;

namespace {
Construction build(std::vector<Atom> atoms, double p) {
    Params prm;
    prm.p = p;
    return Construction::build(AtomicMeasure(1, std::move(atoms)), prm);
}
}  // namespace

TEST_CASE("single point: every cube lies in one true lacuna") {
    const Construction con = build({{Point(0.0), 1.0}}, 2);
    const LacunaPartition lac = partition_lacunae(con.cover);
    const Report rep = verify_lacunae(lac, con.cover);
    CHECK_MESSAGE(rep.ok(), rep.to_text());
    if (con.net.points.size() == 1) {
        REQUIRE(lac.lacunae.size() == 1);
        CHECK(lac.lacunae[0].kind == LacunaKind::true_lacuna);
        CHECK(lac.lacunae[0].members.size() == con.cover.size());
        CHECK(contact_graph(lac, con.cover)[0].empty());
    }
    for (std::size_t c = 0; c < con.cover.size(); ++c) CHECK_FALSE(net_in(con.cover, con.cover.cubes[c].q, 90).empty());
}

TEST_CASE("mid-gap cubes between two far points are elementary") {
    const Construction con = build({{Point(0.0), 1.0}, {Point(100.0), 1.0}}, 2);
    const LacunaPartition lac = partition_lacunae(con.cover);
    CHECK(verify_lacunae(lac, con.cover).ok());
    std::size_t elementary = 0;
    for (std::size_t c = 0; c < con.cover.size(); ++c) {
        const Cube& q = con.cover.cubes[c].q;
        const bool differ = net_in(con.cover, q, 10) != net_in(con.cover, q, 90);
        const Lacuna& l = lac.lacunae[lac.of_cube[c]];
        CHECK((l.kind == LacunaKind::elementary) == differ);
        if (differ) {
            ++elementary;
            CHECK(l.members.size() == 1);
        }
    }
    CHECK(elementary > 0);
}

TEST_CASE("projection picks the nearest net point, ties by id") {
    const Construction con = build({{Point(0.0), 1.0}, {Point(100.0), 1.0}}, 2);
    const LacunaPartition lac = partition_lacunae(con.cover);
    for (const Lacuna& l : lac.lacunae) {
        double g = 0;
        const std::size_t a = project_lacuna(l, con.cover, &g);
        CHECK(a == l.projection);
        const Cube big = con.cover.cubes[l.q_min].q.scaled(g);
        CHECK(big.contains(con.cover.net_points[a]));
        const Point c = con.cover.cubes[l.q_min].q.center;
        for (std::size_t e = 0; e < con.cover.net_points.size(); ++e)
            if (big.contains(con.cover.net_points[e])) {
                const double de = linf_dist(con.cover.net_points[e], c), da = linf_dist(con.cover.net_points[a], c);
                CHECK((de > da || (de == da && e >= a)));
            }
    }
}

TEST_CASE("contact graph is symmetric and stats are finite") {
    const double ps[] = {1.5, 2.0, 3.0};
    for (const Instance& in : random_suite(1, 24, 12, ps, 41)) {
        Params prm;
        prm.p = in.p;
        const Construction con = Construction::build(in.mu, prm);
        const LacunaPartition lac = partition_lacunae(con.cover);
        const Report rep = verify_lacunae(lac, con.cover);
        CHECK_MESSAGE(rep.ok(), in.label << "\n" << rep.to_text());
        const auto g = contact_graph(lac, con.cover);
        for (std::size_t a = 0; a < g.size(); ++a)
            for (std::size_t b : g[a]) CHECK(std::find(g[b].begin(), g[b].end(), a) != g[b].end());
        const LacunaStats st = lacuna_stats(lac, con.cover);
        CHECK(st.true_count + st.elementary_count == lac.lacunae.size());
        CHECK(st.max_multiplicity >= 1);
        CHECK(std::isfinite(st.max_gamma));
    }
}
