#include "sumspace/lacunae.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include <fmt/format.h>

#include "sumspace/error.hpp"
#include "sumspace/log.hpp"

namespace sumspace {

namespace {

double set_diam(const WhitneyCover& cover, const std::vector<std::size_t>& ids) {
    double d = 0.0;
    for (std::size_t a = 0; a < ids.size(); ++a)
        for (std::size_t b = a + 1; b < ids.size(); ++b)
            d = std::max(d, linf_dist(cover.net_points[ids[a]], cover.net_points[ids[b]]));
    return d;
}

}  // namespace

std::vector<std::size_t> net_in(const WhitneyCover& cover, const Cube& q, double alpha) {
    const Cube big = q.scaled(alpha);
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < cover.net_points.size(); ++i)
        if (big.contains(cover.net_points[i])) out.push_back(i);
    return out;
}

std::size_t project_lacuna(const Lacuna& l, const WhitneyCover& cover, double* gamma_used) {
    const Cube& q = cover.cubes.at(l.q_min).q;
    for (double g = 1.0; g <= 1e12; g *= 2.0) {
        auto cand = net_in(cover, q, g);
        if (cand.empty()) continue;
        std::size_t best = cand.front();
        double bd = std::numeric_limits<double>::infinity();
        for (std::size_t i : cand) {
            double d = linf_dist(cover.net_points[i], q.center);
            if (d < bd) {
                bd = d;
                best = i;
            }
        }
        if (gamma_used) *gamma_used = g;
        return best;
    }
    throw VerificationError("lacuna projection: no net point within gamma Q_L");
}

LacunaPartition partition_lacunae(const WhitneyCover& cover) {
    LacunaPartition part;
    part.of_cube.assign(cover.size(), 0);
    std::map<std::vector<std::size_t>, std::size_t> by_set;
    for (std::size_t id = 0; id < cover.size(); ++id) {
        const Cube& q = cover.cubes[id].q;
        auto v10 = net_in(cover, q, 10.0);
        auto v90 = net_in(cover, q, 90.0);
        if (v10 == v90) {
            auto it = by_set.find(v10);
            if (it == by_set.end()) {
                Lacuna l;
                l.kind = LacunaKind::true_lacuna;
                l.V = v90;
                it = by_set.emplace(v10, part.lacunae.size()).first;
                part.lacunae.push_back(std::move(l));
            }
            part.lacunae[it->second].members.push_back(id);
            part.of_cube[id] = it->second;
        } else {
            Lacuna l;
            l.kind = LacunaKind::elementary;
            l.V = v90;
            l.members.push_back(id);
            part.of_cube[id] = part.lacunae.size();
            part.lacunae.push_back(std::move(l));
        }
    }
    for (auto& l : part.lacunae) {
        l.q_min = l.q_max = l.members.front();
        for (std::size_t id : l.members) {
            const double d = cover.cubes[id].q.diam();
            if (d < cover.cubes[l.q_min].q.diam()) l.q_min = id;
            if (d > cover.cubes[l.q_max].q.diam()) l.q_max = id;
            if (cover.cubes[id].boundary) l.unbounded = true;
        }
        l.projection = project_lacuna(l, cover, &l.projection_gamma);
    }
    log::info("lacunae: {} classes over {} cubes", part.lacunae.size(), cover.size());
    return part;
}

std::vector<std::vector<std::size_t>> contact_graph(const LacunaPartition& part,
                                                    const WhitneyCover& cover) {
    std::vector<std::vector<std::size_t>> adj(part.lacunae.size());
    for (std::size_t id = 0; id < cover.size(); ++id)
        for (std::size_t k : cover.cubes[id].neighbors) {
            std::size_t a = part.of_cube[id], b = part.of_cube[k];
            if (a != b) adj[a].push_back(b);
        }
    for (auto& v : adj) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }
    return adj;
}

LacunaStats lacuna_stats(const LacunaPartition& part, const WhitneyCover& cover) {
    LacunaStats st;
    auto adj = contact_graph(part, cover);
    std::vector<std::size_t> mult(cover.net_points.size(), 0);
    bool first_cld = true;
    for (std::size_t i = 0; i < part.lacunae.size(); ++i) {
        const Lacuna& l = part.lacunae[i];
        (l.kind == LacunaKind::true_lacuna ? st.true_count : st.elementary_count)++;
        st.max_contacts = std::max(st.max_contacts, adj[i].size());
        st.max_gamma = std::max(st.max_gamma, l.projection_gamma);
        ++mult[l.projection];
        if (l.kind == LacunaKind::true_lacuna)
            for (std::size_t j : adj[i])
                if (j > i && part.lacunae[j].kind == LacunaKind::true_lacuna) ++st.true_true_contacts;
        if (!l.unbounded && l.V.size() < cover.net_points.size()) {
            double d = std::numeric_limits<double>::infinity();
            for (std::size_t a : l.V)
                for (std::size_t b = 0; b < cover.net_points.size(); ++b)
                    if (!std::binary_search(l.V.begin(), l.V.end(), b))
                        d = std::min(d, linf_dist(cover.net_points[a], cover.net_points[b]));
            double r = cover.cubes[l.q_max].q.diam() / d;
            st.cld_min = first_cld ? r : std::min(st.cld_min, r);
            st.cld_max = first_cld ? r : std::max(st.cld_max, r);
            first_cld = false;
        }
    }
    for (std::size_t m : mult) st.max_multiplicity = std::max(st.max_multiplicity, m);
    return st;
}

Report verify_lacunae(const LacunaPartition& part, const WhitneyCover& cover) {
    Report rep;
    auto& exh = rep["lacunae.partition"];
    auto& ident = rep["lacunae.true_identity"];
    auto& elem = rep["lacunae.elementary_diam"];
    auto& proj = rep["lacunae.projection"];
    auto& ext = rep["lacunae.extremal"];

    std::vector<std::size_t> count(cover.size(), 0);
    for (std::size_t i = 0; i < part.lacunae.size(); ++i) {
        const Lacuna& l = part.lacunae[i];
        for (std::size_t id : l.members) {
            ++count[id];
            exh.require(part.of_cube[id] == i, fmt::format("cube {} index mismatch", id));
            ext.require(cover.cubes[l.q_min].q.diam() <= cover.cubes[id].q.diam() &&
                            cover.cubes[l.q_max].q.diam() >= cover.cubes[id].q.diam(),
                        fmt::format("extremal members of lacuna {}", i));
        }
        if (l.kind == LacunaKind::true_lacuna) {
            for (std::size_t id : l.members) {
                const Cube& q = cover.cubes[id].q;
                ident.require(net_in(cover, q, 10.0) == l.V && net_in(cover, q, 90.0) == l.V,
                              fmt::format("cube {} of true lacuna {}", id, i));
            }
        } else {
            const Cube& q = cover.cubes[l.members.front()].q;
            elem.le(0.5 * q.diam(), set_diam(cover, l.V), kCheckSlack,
                    fmt::format("elementary lacuna {}", i));
        }
        const Cube g = cover.cubes[l.q_min].q.scaled(l.projection_gamma);
        proj.require(g.contains(cover.net_points[l.projection]), fmt::format("projection of lacuna {}", i));
    }
    for (std::size_t id = 0; id < cover.size(); ++id)
        exh.require(count[id] == 1, fmt::format("cube {} in {} lacunae", id, count[id]));
    return rep;
}

}  // namespace sumspace
