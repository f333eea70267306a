#include "sumspace/whitney.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <fmt/format.h>

#include "sumspace/error.hpp"
#include "sumspace/kernels.hpp"
#include "sumspace/log.hpp"

namespace sumspace {

namespace {

std::string cube_str(const Cube& q) {
    if (q.dim() == 1) return fmt::format("Q({:.9g}, {:.9g})", q.center[0], q.half_side);
    return fmt::format("Q(({:.9g},{:.9g}), {:.9g})", q.center[0], q.center[1], q.half_side);
}

bool touches_box(const Cube& q, const Cube& box) {
    for (int i = 0; i < q.dim(); ++i)
        if (std::abs(q.center[i] - box.center[i]) + q.half_side >= box.half_side * (1.0 - 1e-12))
            return true;
    return false;
}

}  // namespace

std::size_t WhitneyCover::max_degree() const {
    std::size_t d = 0;
    for (const auto& c : cubes) d = std::max(d, c.neighbors.size());
    return d;
}

void WhitneyCover::visit(const std::function<bool(const Cube&)>& node_pred,
                         const std::function<void(std::size_t)>& on_leaf) const {
    if (nodes.empty()) return;
    const int kids = 1 << box.dim();
    std::vector<std::size_t> stack{0};
    while (!stack.empty()) {
        const Node& nd = nodes[stack.back()];
        stack.pop_back();
        if (!node_pred(nd.q)) continue;
        if (nd.leaf >= 0) {
            on_leaf(static_cast<std::size_t>(nd.leaf));
            continue;
        }
        for (int k = 0; k < kids; ++k) stack.push_back(static_cast<std::size_t>(nd.first_child + k));
    }
}

std::vector<std::size_t> WhitneyCover::query(const Cube& region) const {
    std::vector<std::size_t> out;
    visit([&](const Cube& q) { return cubes_intersect(q, region); },
          [&](std::size_t id) { out.push_back(id); });
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::size_t> WhitneyCover::query_star(const Cube& q) const {
    // A leaf inside node N has half side <= r_N, so N can hold a K with
    // K* meeting q* only if |c_N - c_q| <= r_N + 9/8 (r_q + r_N) per axis.
    std::vector<std::size_t> out;
    visit(
        [&](const Cube& nq) {
            for (int i = 0; i < q.dim(); ++i)
                if (std::abs(nq.center[i] - q.center[i]) > nq.half_side + kStar * (q.half_side + nq.half_side))
                    return false;
            return true;
        },
        [&](std::size_t id) {
            const Cube& k = cubes[id].q;
            if (cubes_intersect(k.scaled(kStar), q.scaled(kStar))) out.push_back(id);
        });
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t WhitneyCover::locate(const Point& x) const {
    if (nodes.empty() || !box.contains(x)) throw InputError("point outside the working box");
    std::size_t i = 0;
    while (nodes[i].leaf < 0) {
        const Cube& q = nodes[i].q;
        int k = 0;
        for (int a = 0; a < q.dim(); ++a)
            if (x[a] >= q.center[a]) k |= 1 << a;
        i = static_cast<std::size_t>(nodes[i].first_child + k);
    }
    return static_cast<std::size_t>(nodes[i].leaf);
}

WhitneyCover build_whitney(const ConcentrationNet& net, const Params& prm) {
    if (net.points.empty()) throw InputError("Whitney cover of an empty net");
    const int n = net.box.dim();
    prm.validate(n);
    WhitneyCover cover;
    cover.box = net.box;
    cover.tau = prm.tau;
    cover.eta = prm.eta();
    std::vector<double> ex, ey;
    for (const auto& e : net.points) {
        cover.net_points.push_back(e.e);
        cover.net_radii.push_back(e.R);
        ex.push_back(e.e[0]);
        ey.push_back(e.e[1]);
    }
    const double* eyp = n == 2 ? ey.data() : nullptr;

    struct Pending {
        std::size_t node;
        int depth;
    };
    cover.nodes.push_back({net.box, -1, -1});
    std::vector<Pending> queue{{0, 0}};
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const auto [ni, depth] = queue[head];
        const Cube q = cover.nodes[ni].q;
        const double d = kernels::min_dist_to_cube(ex.data(), eyp, ex.size(), q.center[0], q.center[1],
                                                   q.half_side);
        bool leaf = q.diam() <= d;
        bool core = false;
        if (!leaf) {
            std::size_t e = net.nearest_to(q);
            if (q.diam() <= cover.eta * net.points[e].R / 8.0) leaf = core = true;
        }
        if (leaf) {
            WhitneyCube wc;
            wc.q = q;
            wc.core = core;
            wc.depth = depth;
            wc.boundary = touches_box(q, net.box);
            cover.nodes[ni].leaf = static_cast<std::int64_t>(cover.cubes.size());
            cover.cubes.push_back(std::move(wc));
            continue;
        }
        if (depth >= kWhitneyDepthLimit)
            throw VerificationError(fmt::format("Whitney refinement exceeded depth {} near {}",
                                                kWhitneyDepthLimit, cube_str(q)));
        const double h = 0.5 * q.half_side;
        cover.nodes[ni].first_child = static_cast<std::int64_t>(cover.nodes.size());
        for (int k = 0; k < (1 << n); ++k) {
            Point c = q.center;
            for (int a = 0; a < n; ++a) c[a] += ((k >> a) & 1) ? h : -h;
            queue.push_back({cover.nodes.size(), depth + 1});
            cover.nodes.push_back({Cube(c, h), -1, -1});
        }
    }

    for (std::size_t id = 0; id < cover.cubes.size(); ++id) {
        auto nb = cover.query(cover.cubes[id].q);
        nb.erase(std::remove(nb.begin(), nb.end(), id), nb.end());
        cover.cubes[id].neighbors = std::move(nb);
    }
    assign_anchors(cover, net, prm);
    log::info("whitney: {} cubes, max degree {}", cover.cubes.size(), cover.max_degree());
    return cover;
}

void assign_anchors(WhitneyCover& cover, const ConcentrationNet& net, const Params& prm) {
    for (auto& c : cover.cubes) {
        c.anchor = net.nearest_to(c.q);
        const Point& a = net.points[c.anchor].e;
        if (linf_dist(a, c.q.center) > prm.tau * c.q.half_side * (1.0 + 1e-12))
            throw VerificationError("nearest net point lies outside tau*Q for " + cube_str(c.q));
    }
}

Report verify_whitney(const WhitneyCover& cover, const AtomicMeasure& mu, const Params& prm) {
    Report rep;
    const int n = cover.box.dim();
    const double p = prm.p, np = n - p;
    const auto& E = cover.net_points;

    auto& dqe = rep["whitney.dqe"];
    auto& ratio = rep["whitney.neighbor_ratio"];
    auto& star = rep["whitney.star_equivalence"];
    auto& anchor = rep["whitney.anchor_in_tau"];
    auto& wqm = rep["whitney.wqm"];
    auto& pwke = rep["whitney.pwke"];
    auto& vol = rep["whitney.volume"];
    auto& smc = rep["whitney.smc"];

    double volume = 0.0;
    for (std::size_t id = 0; id < cover.size(); ++id) {
        const WhitneyCube& c = cover.cubes[id];
        const Cube& q = c.q;
        volume += std::pow(q.diam(), n);
        const std::string where = cube_str(q);
        if (!c.core) {
            double d = dist_cube_set(q, E);
            dqe.le(q.diam(), d, kCheckSlack, where + " lower");
            dqe.le(d, 4.0 * q.diam(), kCheckSlack, where + " upper");
        }
        if (!c.core) {
            wqm.le(mu.mass(q), std::pow(84.0, p) * std::pow(q.half_side, np), kCheckSlack, where);
            pwke.le(mu.mass(q), std::pow(2.0, 15.0 * p) * std::pow(q.diam(), np), kCheckSlack, where);
        }
        anchor.le(linf_dist(E[c.anchor], q.center), prm.tau * q.half_side, 1e-12, where);
        for (std::size_t k : c.neighbors) {
            const Cube& o = cover.cubes[k].q;
            ratio.le(o.diam(), 4.0 * q.diam(), kCheckSlack, where + " vs " + cube_str(o));
        }
        auto st = cover.query_star(q);
        st.erase(std::remove(st.begin(), st.end(), id), st.end());
        star.require(st == c.neighbors, "star neighbours differ from neighbours at " + where);
    }
    vol.require(std::abs(volume / std::pow(cover.box.diam(), n) - 1.0) <= 1e-12,
                "leaf volumes do not add up to the box");

    for (std::size_t e = 0; e < E.size(); ++e) {
        const Cube near(E[e], cover.eta * cover.net_radii[e]);
        for (std::size_t k : cover.query(near)) {
            bool ok = cover.cubes[k].anchor == e;
            for (std::size_t j : cover.cubes[k].neighbors) ok = ok && cover.cubes[j].anchor == e;
            smc.require(ok, "anchors differ around net point " + std::to_string(e));
        }
    }
    return rep;
}

double bump(const Cube& q, const Point& x, std::array<double, 2>* grad) {
    const int n = q.dim();
    const double r = q.half_side, w = r / 8.0;
    std::array<double, 2> s{1.0, 1.0}, ds{0.0, 0.0};
    for (int i = 0; i < n; ++i) {
        const double off = x[i] - q.center[i];
        const double u = std::abs(off);
        if (u <= r) continue;
        if (u >= kStar * r) {
            if (grad) *grad = {0.0, 0.0};
            return 0.0;
        }
        const double t = (kStar * r - u) / w;
        s[i] = t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
        ds[i] = -30.0 * t * t * (1.0 - t) * (1.0 - t) / w * (off > 0 ? 1.0 : -1.0);
    }
    if (grad) {
        (*grad)[0] = ds[0] * s[1];
        (*grad)[1] = n == 2 ? s[0] * ds[1] : 0.0;
    }
    return s[0] * s[1];
}

std::vector<PartitionTerm> partition_eval(const WhitneyCover& cover, const Point& x) {
    for (const auto& e : cover.net_points)
        if (e == x) throw InputError("partition undefined on E");
    return partition_eval_in(cover, cover.locate(x), x);
}

std::vector<PartitionTerm> partition_eval_in(const WhitneyCover& cover, std::size_t home, const Point& x) {
    std::vector<std::size_t> cand = cover.cubes[home].neighbors;
    cand.push_back(home);
    std::sort(cand.begin(), cand.end());

    std::vector<PartitionTerm> out;
    double S = 0.0;
    std::array<double, 2> dS{0.0, 0.0};
    for (std::size_t id : cand) {
        std::array<double, 2> g;
        double b = bump(cover.cubes[id].q, x, &g);
        if (b <= 0.0) continue;
        out.push_back({id, b, g});
        S += b;
        dS[0] += g[0];
        dS[1] += g[1];
    }
    for (auto& t : out) {
        t.phi /= S;
        for (int i = 0; i < 2; ++i) t.grad[i] = (t.grad[i] - t.phi * dS[i]) / S;
    }
    return out;
}

Report verify_partition(const WhitneyCover& cover, std::uint64_t seed, std::size_t samples) {
    Report rep;
    const int n = cover.box.dim();
    auto& sum1 = rep["partition.sum"];
    auto& gsum = rep["partition.gradient_sum"];
    auto& fd = rep["partition.finite_difference"];
    auto& range = rep["partition.range"];
    auto& gb = rep["partition.gradient_bound"];
    const double cbound = std::sqrt(static_cast<double>(n)) * (30.0 + 120.0 * (cover.max_degree() + 1.0));

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::size_t s = 0; s < samples; ++s) {
        Point x = cover.box.center;
        for (int i = 0; i < n; ++i) x[i] += cover.box.half_side * u(rng);
        auto terms = partition_eval(cover, x);
        const std::string where = n == 1 ? fmt::format("x={:.9g}", x[0])
                                         : fmt::format("x=({:.9g},{:.9g})", x[0], x[1]);
        double total = 0.0, gx = 0.0, gy = 0.0, dmin = std::numeric_limits<double>::infinity();
        for (const auto& t : terms) {
            total += t.phi;
            gx += t.grad[0];
            gy += t.grad[1];
            const double diam = cover.cubes[t.id].q.diam();
            dmin = std::min(dmin, diam);
            range.require(t.phi >= 0.0 && t.phi <= 1.0, where);
            gb.le(std::hypot(t.grad[0], t.grad[1]) * diam, cbound, 0.0, where);
        }
        sum1.le(std::abs(total - 1.0), 1e-12, 0.0, where);
        gsum.le(std::hypot(gx, gy), 1e-9 / dmin, 0.0, where);

        // Central differences on one term per sample, cycling through terms.
        if (terms.empty()) continue;
        const auto& t = terms[s % terms.size()];
        const double diam = cover.cubes[t.id].q.diam();
        const double h = 1e-6 * diam;
        auto phi_at = [&](const Point& y) {
            for (const auto& o : partition_eval(cover, y))
                if (o.id == t.id) return o.phi;
            return 0.0;
        };
        double err = 0.0;
        for (int i = 0; i < n; ++i) {
            Point a = x, b = x;
            a[i] += h;
            b[i] -= h;
            if (!cover.box.contains(a) || !cover.box.contains(b)) continue;
            double num = (phi_at(a) - phi_at(b)) / (2.0 * h);
            err = std::max(err, std::abs(num - t.grad[static_cast<std::size_t>(i)]));
        }
        const double scale = std::max(std::hypot(t.grad[0], t.grad[1]), 1.0 / diam);
        fd.le(err / scale, 1e-5, 0.0, where);
    }
    return rep;
}

}  // namespace sumspace
