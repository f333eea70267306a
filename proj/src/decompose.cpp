#include "sumspace/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <fmt/format.h>

#include "sumspace/error.hpp"
#include "sumspace/log.hpp"

namespace sumspace {

namespace {

constexpr std::array<double, 4> kGLx{-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                     0.8611363115940526};
constexpr std::array<double, 4> kGLw{0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                     0.3478548451374538};

F1Value eval_in(const Decomposition& d, std::size_t home, const Point& x) {
    const WhitneyCover& cover = d.con->cover;
    F1Value out;
    for (const auto& t : partition_eval_in(cover, home, x)) {
        const double v = d.tilde_f1[cover.cubes[t.id].anchor];
        out.value += t.phi * v;
        out.grad[0] += t.grad[0] * v;
        out.grad[1] += t.grad[1] * v;
    }
    return out;
}

F1Value eval_box(const Decomposition& d, const Point& x) {
    const WhitneyCover& cover = d.con->cover;
    for (std::size_t i = 0; i < cover.net_points.size(); ++i)
        if (cover.net_points[i] == x) return {d.tilde_f1[i], {0.0, 0.0}};
    return eval_in(d, cover.locate(x), x);
}

// Gradient of the radial extension at a point y of the box boundary, given
// the inside gradient g there; k is the face axis.
std::array<double, 2> exterior_grad(const Cube& box, const Point& y, int k, std::array<double, 2> g) {
    const int n = box.dim();
    const double H = box.half_side;
    double ug = 0.0;
    for (int i = 0; i < n; ++i) ug += (y[i] - box.center[i]) * g[static_cast<std::size_t>(i)];
    const double s = y[k] >= box.center[k] ? 1.0 : -1.0;
    g[static_cast<std::size_t>(k)] -= s * ug / H;
    return g;
}

// Interval end points of the smooth pieces of f1 along `axis` inside q.
std::vector<double> cuts(const WhitneyCover& cover, std::size_t id, int axis) {
    const Cube& q = cover.cubes[id].q;
    const double lo = q.center[axis] - q.half_side, hi = q.center[axis] + q.half_side;
    std::vector<double> out{lo, hi};
    auto add = [&](std::size_t k) {
        const Cube& c = cover.cubes[k].q;
        for (double off : {c.half_side, kStar * c.half_side})
            for (double v : {c.center[axis] - off, c.center[axis] + off})
                if (v > lo && v < hi) out.push_back(v);
    };
    add(id);
    for (std::size_t k : cover.cubes[id].neighbors) add(k);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// Nodes and weights on [a, b] split into 2^level equal parts.
void gl_nodes(double a, double b, int level, std::vector<double>& xs, std::vector<double>& ws) {
    const int parts = 1 << level;
    const double h = (b - a) / parts;
    for (int s = 0; s < parts; ++s) {
        const double m = a + (s + 0.5) * h;
        for (std::size_t j = 0; j < 4; ++j) {
            xs.push_back(m + 0.5 * h * kGLx[j]);
            ws.push_back(0.5 * h * kGLw[j]);
        }
    }
}

void axis_rule(const std::vector<double>& c, int level, std::vector<double>& xs, std::vector<double>& ws) {
    xs.clear();
    ws.clear();
    for (std::size_t i = 0; i + 1 < c.size(); ++i) gl_nodes(c[i], c[i + 1], level, xs, ws);
}

double norm_p(const std::array<double, 2>& g, double p) { return std::pow(std::hypot(g[0], g[1]), p); }

double cube_interior(const Decomposition& d, std::size_t id, int level, const std::vector<std::vector<double>>& cut) {
    const int n = d.con->mu.dim();
    const double p = d.con->prm.p;
    std::vector<double> x0, w0, x1, w1;
    axis_rule(cut[0], level, x0, w0);
    double sum = 0.0;
    if (n == 1) {
        for (std::size_t i = 0; i < x0.size(); ++i) sum += w0[i] * norm_p(eval_in(d, id, Point(x0[i])).grad, p);
        return sum;
    }
    axis_rule(cut[1], level, x1, w1);
    for (std::size_t i = 0; i < x0.size(); ++i)
        for (std::size_t j = 0; j < x1.size(); ++j)
            sum += w0[i] * w1[j] * norm_p(eval_in(d, id, Point(x0[i], x1[j])).grad, p);
    return sum;
}

// Boundary integral of |grad f1_ext|^p over the faces of q on the box
// boundary (2D only; in 1D the exterior gradient vanishes).
double cube_exterior(const Decomposition& d, std::size_t id, int level, const std::vector<std::vector<double>>& cut) {
    const Cube& box = d.con->cover.box;
    const Cube& q = d.con->cover.cubes[id].q;
    const double p = d.con->prm.p;
    double sum = 0.0;
    std::vector<double> xs, ws;
    for (int k = 0; k < 2; ++k) {
        const int o = 1 - k;
        axis_rule(cut[static_cast<std::size_t>(o)], level, xs, ws);
        for (double side : {-1.0, 1.0}) {
            const double face = box.center[k] + side * box.half_side;
            if (std::abs(q.center[k] + side * q.half_side - face) > 1e-12 * box.half_side) continue;
            for (std::size_t i = 0; i < xs.size(); ++i) {
                Point y(0.0, 0.0);
                y[k] = face;
                y[o] = xs[i];
                auto g = exterior_grad(box, y, k, eval_in(d, id, y).grad);
                sum += ws[i] * norm_p(g, p);
            }
        }
    }
    return sum;
}

}  // namespace

Construction Construction::build(AtomicMeasure mu, const Params& prm) {
    prm.validate(mu.dim());
    Construction c;
    c.mu = std::move(mu);
    c.prm = prm;
    c.net = build_net(c.mu, prm);
    c.cover = build_whitney(c.net, prm);
    return c;
}

Decomposition build_extension(const Construction& con, const SampledFunction& f) {
    if (f.size() != con.mu.size())
        throw InputError(fmt::format("function has {} values for {} atoms", f.size(), con.mu.size()));
    Decomposition d;
    d.con = &con;
    d.tilde_f1.reserve(con.net.points.size());
    for (const auto& np : con.net.points) d.tilde_f1.push_back(average(con.mu, f, Cube(np.e, np.R)));
    d.f1_atoms.resize(con.mu.size());
    d.f2_values.resize(con.mu.size());
    for (std::size_t i = 0; i < con.mu.size(); ++i) {
        d.f1_atoms[i] = eval_box(d, con.mu.point(i)).value;
        d.f2_values[i] = f[i] - d.f1_atoms[i];
    }
    return d;
}

F1Value eval_f1(const Decomposition& d, const Point& x) {
    const Cube& box = d.con->cover.box;
    if (box.contains(x)) return eval_box(d, x);
    const int n = box.dim();
    const double H = box.half_side;
    int k = 0;
    double nu = 0.0;
    for (int i = 0; i < n; ++i) {
        const double a = std::abs(x[i] - box.center[i]);
        if (a > nu) {
            nu = a;
            k = i;
        }
    }
    Point y = box.center;
    for (int i = 0; i < n; ++i) y[i] += (x[i] - box.center[i]) * H / nu;
    y[k] = box.center[k] + (x[k] >= box.center[k] ? H : -H);  // exact face
    F1Value in = eval_box(d, y);
    F1Value out{in.value, exterior_grad(box, y, k, in.grad)};
    out.grad[0] *= H / nu;
    out.grad[1] *= H / nu;
    return out;
}

QuadratureResult quadrature_seminorm(const Decomposition& d, double rel_tol, int max_levels) {
    const WhitneyCover& cover = d.con->cover;
    const int n = cover.box.dim();
    const double p = d.con->prm.p;
    std::vector<std::vector<std::vector<double>>> cut(cover.size());
    for (std::size_t id = 0; id < cover.size(); ++id)
        for (int a = 0; a < n; ++a) cut[id].push_back(cuts(cover, id, a));

    // Round-off floor: gradients at the level eps * max|f~| / diam Q.
    double fmax = 0.0;
    for (double v : d.tilde_f1) fmax = std::max(fmax, std::abs(v));
    double floor = 0.0;
    for (const auto& c : cover.cubes) floor += std::pow(1e-13 * fmax, p) * std::pow(c.q.diam(), n - p);

    std::vector<double> prev(cover.size(), 0.0), cur(cover.size(), 0.0);
    QuadratureResult res;
    double prev_total = 0.0;
    for (int level = 0; level <= max_levels; ++level) {
        double interior = 0.0, exterior = 0.0;
        for (std::size_t id = 0; id < cover.size(); ++id) {
            const double in = cube_interior(d, id, level, cut[id]);
            double ex = 0.0;
            if (n == 2 && cover.cubes[id].boundary) ex = cube_exterior(d, id, level, cut[id]);
            interior += in;
            exterior += ex;
            cur[id] = in + cover.box.half_side / (p - n) * ex;
        }
        exterior *= cover.box.half_side / (p - n);
        const double total = interior + exterior;
        res = {std::pow(total, 1.0 / p), interior, exterior, level, 0.0};
        if (level > 0) {
            const double change = std::abs(total - prev_total);
            res.rel_change = total > 0.0 ? change / total : 0.0;
            if (change <= rel_tol * total + floor) {
                log::debug("quadrature: {} levels, rel change {:.3g}", level, res.rel_change);
                return res;
            }
            if (level == max_levels) {
                std::size_t worst = 0;
                for (std::size_t id = 0; id < cover.size(); ++id)
                    if (std::abs(cur[id] - prev[id]) > std::abs(cur[worst] - prev[worst])) worst = id;
                throw ConvergenceError(
                    fmt::format("seminorm quadrature did not converge (worst cube {})", worst), res.rel_change);
            }
        }
        prev_total = total;
        std::swap(prev, cur);
    }
    return res;
}

QuadratureResult quadrature_seminorm(const Decomposition& d) {
    return d.con->mu.dim() == 1 ? quadrature_seminorm(d, 1e-9, 8) : quadrature_seminorm(d, 1e-3, 3);
}

double discrete_seminorm(const Decomposition& d) {
    const WhitneyCover& cover = d.con->cover;
    const double p = d.con->prm.p;
    const int n = cover.box.dim();
    double sum = 0.0;
    for (const auto& k : cover.cubes) {
        const double vk = d.tilde_f1[k.anchor];
        const double scale = std::pow(k.q.diam(), p - n);
        for (std::size_t qid : k.neighbors)
            sum += std::pow(std::abs(d.tilde_f1[cover.cubes[qid].anchor] - vk), p) / scale;
    }
    return std::pow(sum, 1.0 / p);
}

double estimate_sobolev_seminorm(const Decomposition& d, SeminormMethod m) {
    return m == SeminormMethod::quadrature ? quadrature_seminorm(d).value : discrete_seminorm(d);
}

double mu_norm_f2(const Decomposition& d) { return lp_norm(d.con->mu, d.f2_values, d.con->prm.p); }

namespace {

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

std::string at(const Point& x) {
    return x.n == 1 ? fmt::format("x={:.9g}", x[0]) : fmt::format("x=({:.9g},{:.9g})", x[0], x[1]);
}

}  // namespace

Report verify_decomposition(const Construction& con, const SampledFunction& f, const SampledFunction& g,
                            double alpha, double beta, std::uint64_t seed, std::size_t samples) {
    Report rep;
    auto& ident = rep["decompose.identity"];
    auto& lin = rep["decompose.linearity"];
    auto& cst = rep["decompose.constant"];
    auto& fd = rep["decompose.gradient_fd"];
    const int n = con.mu.dim();
    const Cube& box = con.cover.box;

    std::vector<double> hv(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) hv[i] = alpha * f[i] + beta * g[i];
    const SampledFunction h(hv);
    const double cval = 3.7;
    const SampledFunction c(std::vector<double>(f.size(), cval));
    const Decomposition df = build_extension(con, f), dg = build_extension(con, g), dh = build_extension(con, h),
                        dc = build_extension(con, c);
    const double scale = std::max(std::abs(alpha) * max_abs(f.values) + std::abs(beta) * max_abs(g.values),
                                  std::numeric_limits<double>::min());
    const double eps = std::numeric_limits<double>::epsilon();

    for (std::size_t i = 0; i < f.size(); ++i) {
        const std::string where = fmt::format("atom {}", i);
        ident.le(std::abs(df.f1_atoms[i] + df.f2_values[i] - f[i]), eps * std::max(std::abs(df.f1_atoms[i]), std::abs(f[i])), 0.0, where);
        lin.le(std::abs(dh.f2_values[i] - (alpha * df.f2_values[i] + beta * dg.f2_values[i])), 1e-10 * scale, 0.0, where);
        cst.le(std::abs(dc.f2_values[i]), 1e-10 * cval, 0.0, where);
    }
    for (std::size_t e = 0; e < df.tilde_f1.size(); ++e) {
        const std::string where = fmt::format("net point {}", e);
        lin.le(std::abs(dh.tilde_f1[e] - (alpha * df.tilde_f1[e] + beta * dg.tilde_f1[e])), 1e-10 * scale, 0.0, where);
        lin.le(std::abs(eval_f1(dh, con.net.points[e].e).value -
                        (alpha * eval_f1(df, con.net.points[e].e).value + beta * eval_f1(dg, con.net.points[e].e).value)),
               1e-10 * scale, 0.0, where);
        cst.le(std::abs(dc.tilde_f1[e] - cval), 1e-10 * cval, 0.0, where);
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double osc = [&] {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (double v : df.tilde_f1) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        return hi - lo;
    }();
    for (std::size_t s = 0; s < samples; ++s) {
        Point x = box.center;
        for (int i = 0; i < n; ++i) x[i] += 1.5 * box.half_side * u(rng);
        const std::string where = at(x);
        const F1Value a = eval_f1(df, x), b = eval_f1(dg, x), ab = eval_f1(dh, x), cc = eval_f1(dc, x);
        lin.le(std::abs(ab.value - (alpha * a.value + beta * b.value)), 1e-10 * scale, 0.0, where);
        cst.le(std::abs(cc.value - cval), 1e-10 * cval, 0.0, where);
        // |grad| against the local length scale: the home cube, or for x
        // outside the box the home cube of its radial image stretched by
        // |x - c| / H.
        double local = 0.0;
        if (box.contains(x)) {
            local = con.cover.cubes[con.cover.locate(x)].q.diam();
        } else {
            const double nu = linf_dist(x, box.center);
            Point px = box.center;
            for (int i = 0; i < n; ++i) px[i] += box.half_side * (x[i] - box.center[i]) / nu;
            local = con.cover.cubes[con.cover.locate(px)].q.diam() * nu / box.half_side;
        }
        cst.le(std::hypot(cc.grad[0], cc.grad[1]) * local, 1e-10 * cval, 0.0, where);

        if (s % 2 != 0 || osc == 0.0 || !box.contains(x)) continue;
        const double diam = con.cover.cubes[con.cover.locate(x)].q.diam();
        const double step = 1e-6 * diam;
        double err = 0.0;
        for (int i = 0; i < n; ++i) {
            Point p1 = x, p2 = x;
            p1[i] += step;
            p2[i] -= step;
            if (!box.contains(p1) || !box.contains(p2)) continue;
            const double num = (eval_f1(df, p1).value - eval_f1(df, p2).value) / (2.0 * step);
            err = std::max(err, std::abs(num - a.grad[static_cast<std::size_t>(i)]));
        }
        fd.le(err, 1e-4 * std::max(std::hypot(a.grad[0], a.grad[1]), osc / diam), 0.0, where);
    }
    return rep;
}

}  // namespace sumspace
