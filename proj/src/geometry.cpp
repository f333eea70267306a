#include "sumspace/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <fmt/format.h>

#include "sumspace/error.hpp"

namespace sumspace {

namespace {

void require_same_dim(int a, int b) {
    if (a != b)
        throw InputError("dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
}

}  // namespace

Point Point::from(std::span<const double> coords) {
    if (coords.size() == 1) return Point(coords[0]);
    if (coords.size() == 2) return Point(coords[0], coords[1]);
    throw InputError("points must have 1 or 2 coordinates, got " + std::to_string(coords.size()));
}

double linf_dist(const Point& a, const Point& b) {
    require_same_dim(a.n, b.n);
    double d = std::abs(a.x[0] - b.x[0]);
    if (a.n == 2) d = std::max(d, std::abs(a.x[1] - b.x[1]));
    return d;
}

double rho_w(const Point& a, const Point& b, double wa, double wb) {
    if (!(wa > 0.0) || !(wb > 0.0) || !std::isfinite(wa) || !std::isfinite(wb))
        throw InputError("rho_w needs positive finite weights");
    if (a == b) return 0.0;
    return linf_dist(a, b) + wa + wb;
}

double rho_w(const Point& a, const Point& b, const std::function<double(const Point&)>& w) {
    require_same_dim(a.n, b.n);
    return rho_w(a, b, w(a), w(b));
}

Cube::Cube(Point c, double r) : center(c), half_side(r) {
    if (!(r > 0.0) || !std::isfinite(r))
        throw InputError("cube half side must be positive and finite");
}

bool Cube::contains(const Point& p) const {
    require_same_dim(dim(), p.n);
    for (int i = 0; i < p.n; ++i)
        if (!(std::abs(p[i] - center[i]) <= half_side)) return false;
    return true;
}

bool Cube::contains(const Cube& q) const {
    require_same_dim(dim(), q.dim());
    for (int i = 0; i < dim(); ++i)
        if (q.lo(i) < lo(i) || q.hi(i) > hi(i)) return false;
    return true;
}

bool cubes_intersect(const Cube& a, const Cube& b) {
    require_same_dim(a.dim(), b.dim());
    for (int i = 0; i < a.dim(); ++i)
        if (std::abs(a.center[i] - b.center[i]) > a.half_side + b.half_side) return false;
    return true;
}

bool interiors_intersect(const Cube& a, const Cube& b) {
    require_same_dim(a.dim(), b.dim());
    for (int i = 0; i < a.dim(); ++i)
        if (std::abs(a.center[i] - b.center[i]) >= a.half_side + b.half_side) return false;
    return true;
}

double dist_point_cube(const Point& p, const Cube& q) {
    require_same_dim(p.n, q.dim());
    double d = 0.0;
    for (int i = 0; i < p.n; ++i) d = std::max(d, std::abs(p[i] - q.center[i]) - q.half_side);
    return d;
}

double dist_cube_cube(const Cube& a, const Cube& b) {
    require_same_dim(a.dim(), b.dim());
    double d = 0.0;
    for (int i = 0; i < a.dim(); ++i)
        d = std::max(d, std::abs(a.center[i] - b.center[i]) - a.half_side - b.half_side);
    return d;
}

double dist_cube_set(const Cube& q, std::span<const Point> pts) {
    if (pts.empty()) throw InputError("distance to an empty set");
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : pts) best = std::min(best, dist_point_cube(p, q));
    return best;
}

double containment_ratio(const Cube& q, const Cube& outer) {
    require_same_dim(q.dim(), outer.dim());
    double g = 0.0;
    for (int i = 0; i < q.dim(); ++i)
        g = std::max(g, (std::abs(q.center[i] - outer.center[i]) + q.half_side) / outer.half_side);
    return g;
}

CubeFamily::CubeFamily(std::vector<Cube> cs) : cubes(std::move(cs)), ids(cubes.size()) {
    std::iota(ids.begin(), ids.end(), std::size_t{0});
}

CubeFamily::CubeFamily(std::vector<Cube> cs, std::vector<std::size_t> id)
    : cubes(std::move(cs)), ids(std::move(id)) {
    if (cubes.size() != ids.size()) throw InputError("cube family: ids and cubes differ in length");
}

void CubeFamily::push_back(const Cube& c, std::size_t id) {
    cubes.push_back(c);
    ids.push_back(id);
}

CubeFamily select_min_disjoint(const CubeFamily& family) {
    const std::size_t n = family.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        double da = family.cubes[a].diam(), db = family.cubes[b].diam();
        if (da != db) return da < db;
        return family.ids[a] < family.ids[b];
    });

    // Walking in (diam, id) order, a cube survives exactly when it misses
    // every cube kept before it.
    CubeFamily out;
    std::vector<char> removed(n, 0);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t i = order[k];
        if (removed[i]) continue;
        out.push_back(family.cubes[i], family.ids[i]);
        for (std::size_t l = k + 1; l < n; ++l) {
            std::size_t j = order[l];
            if (!removed[j] && cubes_intersect(family.cubes[i], family.cubes[j])) removed[j] = 1;
        }
    }
    return out;
}

std::vector<CubeFamily> color_disjoint(const CubeFamily& family, std::size_t max_degree) {
    const std::size_t n = family.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return family.ids[a] < family.ids[b]; });

    std::vector<std::vector<std::size_t>> adj(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (cubes_intersect(family.cubes[i], family.cubes[j])) {
                adj[i].push_back(j);
                adj[j].push_back(i);
            }
    for (std::size_t i : order)
        if (adj[i].size() > max_degree)
            throw VerificationError("cube id " + std::to_string(family.ids[i]) + " meets " +
                                    std::to_string(adj[i].size()) + " cubes, bound is " +
                                    std::to_string(max_degree));

    std::vector<std::size_t> color(n, SIZE_MAX);
    std::size_t ncolors = 0;
    for (std::size_t i : order) {
        std::vector<char> used(max_degree + 1, 0);
        for (std::size_t j : adj[i])
            if (color[j] != SIZE_MAX) used[color[j]] = 1;
        std::size_t c = 0;
        while (used[c]) ++c;
        color[i] = c;
        ncolors = std::max(ncolors, c + 1);
    }

    std::vector<CubeFamily> out(ncolors);
    for (std::size_t i : order) out[color[i]].push_back(family.cubes[i], family.ids[i]);
    return out;
}

std::size_t max_intersection_degree(const CubeFamily& family) {
    std::size_t best = 0;
    for (std::size_t i = 0; i < family.size(); ++i) {
        std::size_t d = 0;
        for (std::size_t j = 0; j < family.size(); ++j)
            if (j != i && cubes_intersect(family.cubes[i], family.cubes[j])) ++d;
        best = std::max(best, d);
    }
    return best;
}

Report verify_select(const CubeFamily& family) {
    Report rep;
    auto& cov = rep["select.dominated"];
    auto& dis = rep["select.disjoint"];
    const CubeFamily sel = select_min_disjoint(family);
    for (std::size_t i = 0; i < family.size(); ++i) {
        bool hit = false;
        for (const Cube& k : sel.cubes)
            if (cubes_intersect(family.cubes[i], k) && k.diam() <= family.cubes[i].diam()) {
                hit = true;
                break;
            }
        cov.require(hit, fmt::format("input id {}", family.ids[i]));
    }
    for (std::size_t i = 0; i < sel.size(); ++i)
        for (std::size_t j = i + 1; j < sel.size(); ++j)
            dis.require(!cubes_intersect(sel.cubes[i], sel.cubes[j]), fmt::format("ids {} {}", sel.ids[i], sel.ids[j]));
    return rep;
}

Report verify_coloring(const CubeFamily& family) {
    Report rep;
    auto& dis = rep["color.disjoint"];
    auto& cnt = rep["color.class_bound"];
    auto& part = rep["color.partition"];
    const std::size_t N = max_intersection_degree(family);
    const std::vector<CubeFamily> classes = color_disjoint(family, N);
    cnt.le(static_cast<double>(classes.size()), static_cast<double>(N + 1), 0.0, fmt::format("N = {}", N));
    std::vector<std::size_t> seen;
    for (const CubeFamily& c : classes) {
        for (std::size_t i = 0; i < c.size(); ++i) {
            seen.push_back(c.ids[i]);
            for (std::size_t j = i + 1; j < c.size(); ++j)
                dis.require(!cubes_intersect(c.cubes[i], c.cubes[j]), fmt::format("ids {} {}", c.ids[i], c.ids[j]));
        }
    }
    std::vector<std::size_t> want = family.ids;
    std::sort(seen.begin(), seen.end());
    std::sort(want.begin(), want.end());
    part.require(seen == want, "class union");
    return rep;
}

}  // namespace sumspace
