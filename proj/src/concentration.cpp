#include "sumspace/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "sumspace/error.hpp"
#include "sumspace/kernels.hpp"
#include "sumspace/log.hpp"

namespace sumspace {

RadiusFn::RadiusFn(const AtomicMeasure& mu, double p)
    : mu_(&mu), p_(p), dist_(mu.size()), order_(mu.size()) {
    if (mu.empty()) throw InputError("concentration radius of an empty measure");
    if (!(p > mu.dim())) throw InputError("concentration radius needs p > n");
}

double RadiusFn::operator()(const Point& x) const {
    const AtomicMeasure& mu = *mu_;
    if (x.n != mu.dim()) throw InputError("point dimension does not match measure");
    const std::size_t m = mu.size();
    kernels::linf_distances(mu.xs(), mu.ys(), m, x[0], x[1], dist_.data());
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::sort(order_.begin(), order_.end(),
              [&](std::size_t a, std::size_t b) { return dist_[a] < dist_[b]; });

    // On [d_k, d_{k+1}) the mass is the constant s_k, and s_k >= r^(n-p)
    // iff r >= s_k^(-1/(p-n)).
    const double e = -1.0 / (p_ - mu.dim());
    double s = 0.0;
    std::size_t k = 0;
    while (k < m) {
        const double d = dist_[order_[k]];
        while (k < m && dist_[order_[k]] == d) s += mu.weight(order_[k++]);
        const double next = k < m ? dist_[order_[k]] : std::numeric_limits<double>::infinity();
        const double r = std::max(d, std::pow(s, e));
        if (r < next) return r;
    }
    return std::numeric_limits<double>::infinity();  // unreachable: last step has next = inf
}

double concentration_radius(const AtomicMeasure& mu, const Point& x, double p) {
    return RadiusFn(mu, p)(x);
}

std::vector<Point> ConcentrationNet::positions() const {
    std::vector<Point> out;
    out.reserve(points.size());
    for (const auto& np : points) out.push_back(np.e);
    return out;
}

std::size_t ConcentrationNet::nearest_to(const Cube& q) const {
    std::size_t best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points.size(); ++i) {
        double d = dist_point_cube(points[i].e, q);
        if (d < bd) {
            bd = d;
            best = i;
        }
    }
    return best;
}

std::size_t ConcentrationNet::nearest_to(const Point& x) const {
    std::size_t best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points.size(); ++i) {
        double d = linf_dist(points[i].e, x);
        if (d < bd) {
            bd = d;
            best = i;
        }
    }
    return best;
}

Cube working_box(const AtomicMeasure& mu, const Params& prm) {
    prm.validate(mu.dim());
    RadiusFn R(mu, prm.p);
    Cube bb = mu.bounding_cube();
    double half = 0.0, maxR = 0.0;
    for (int i = 0; i < mu.dim(); ++i) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (const auto& a : mu.points()) {
            lo = std::min(lo, a[i]);
            hi = std::max(hi, a[i]);
        }
        half = std::max(half, 0.5 * (hi - lo));
    }
    for (const auto& a : mu.points()) maxR = std::max(maxR, R(a));
    // Power-of-two half side and a centre on the H/8 grid keep every dyadic
    // subdivision exactly representable, so touching cubes compare exactly.
    const double H = std::exp2(std::ceil(std::log2(prm.box_inflation * (half + 2.0 * maxR))));
    Point c = bb.center;
    for (int i = 0; i < mu.dim(); ++i) c[i] = std::round(c[i] / (H / 8.0)) * (H / 8.0);
    return Cube(c, H);
}

namespace {

constexpr int kMaxRounds = 3;

bool in_layer(double r, int j) { return r > std::ldexp(1.0, -j - 1) && r <= std::ldexp(1.0, -j); }

// Grid candidates of layer j: centres of dyadic cells of the box with half
// side <= spacing/2, pruned by the 1-Lipschitz bound on R.
std::vector<NetPoint> layer_candidates(const RadiusFn& R, const Cube& box, int j, double spacing) {
    const int n = box.dim();
    const double top = std::ldexp(1.0, -j), bottom = std::ldexp(1.0, -j - 1);
    std::vector<NetPoint> out;
    std::vector<Cube> stack{box};
    while (!stack.empty()) {
        Cube c = stack.back();
        stack.pop_back();
        const double rc = R(c.center);
        if (rc - c.half_side > top || rc + c.half_side <= bottom) continue;
        if (c.half_side <= 0.5 * spacing) {
            if (in_layer(rc, j)) out.push_back({c.center, rc, j});
            continue;
        }
        const double h = 0.5 * c.half_side;
        for (int k = 0; k < (1 << n); ++k) {
            Point q = c.center;
            for (int i = 0; i < n; ++i) q[i] += ((k >> i) & 1) ? h : -h;
            stack.emplace_back(q, h);
        }
    }
    return out;
}

bool point_less(const NetPoint& a, const NetPoint& b) {
    if (a.R != b.R) return a.R < b.R;
    return a.e.x < b.e.x;
}

double rho(const NetPoint& a, const NetPoint& b) { return rho_w(a.e, b.e, a.R, b.R); }

ConcentrationNet build_once(const AtomicMeasure& mu, const RadiusFn& R, const Cube& box, double p,
                            double spacing_factor) {
    const int n = mu.dim();
    const double rlo = std::pow(mu.total_mass(), -1.0 / (p - n));
    const double rhi = R(box.center) + box.half_side;
    const int jmin = static_cast<int>(std::floor(-std::log2(rhi))) - 1;
    const int jmax = static_cast<int>(std::ceil(-std::log2(rlo))) + 1;

    std::vector<std::vector<NetPoint>> B(static_cast<std::size_t>(jmax - jmin + 1));
    for (int j = jmin; j <= jmax; ++j) {
        auto cand = layer_candidates(R, box, j, std::ldexp(1.0, -j) / spacing_factor);
        for (const auto& a : mu.points()) {
            double ra = R(a);
            if (in_layer(ra, j)) cand.push_back({a, ra, j});
        }
        std::sort(cand.begin(), cand.end(), point_less);
        cand.erase(std::unique(cand.begin(), cand.end(),
                               [](const NetPoint& a, const NetPoint& b) { return a.e == b.e; }),
                   cand.end());
        const double eps = 14.0 * std::ldexp(1.0, -j);
        auto& net = B[static_cast<std::size_t>(j - jmin)];
        for (const auto& c : cand) {
            bool far = std::all_of(net.begin(), net.end(),
                                   [&](const NetPoint& b) { return rho(c, b) >= eps; });
            if (far) net.push_back(c);
        }
        log::debug("layer {}: {} candidates, {} net points", j, cand.size(), net.size());
    }

    ConcentrationNet out;
    out.box = box;
    out.p = p;
    std::vector<NetPoint> pruned;
    for (int j = jmin; j <= jmax; ++j) {
        const double eps = 14.0 * std::ldexp(1.0, -j);
        for (const auto& b : B[static_cast<std::size_t>(j - jmin)]) {
            bool covered = false;
            for (int i = j + 1; i <= jmax && !covered; ++i)
                for (const auto& c : B[static_cast<std::size_t>(i - jmin)])
                    if (rho(b, c) <= eps) {
                        covered = true;
                        break;
                    }
            if (!covered) pruned.push_back(b);
        }
    }
    std::sort(pruned.begin(), pruned.end(), point_less);
    for (const auto& e : pruned) {
        bool sep = std::all_of(out.points.begin(), out.points.end(), [&](const NetPoint& f) {
            return linf_dist(e.e, f.e) >= 6.0 * (e.R + f.R);
        });
        if (sep)
            out.points.push_back(e);
        else
            ++out.separation_drops;
    }
    if (out.points.empty()) throw VerificationError("net construction produced no points");
    return out;
}

Point sample_in(const Cube& box, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Point x = box.center;
    for (int i = 0; i < box.dim(); ++i) x[i] += box.half_side * u(rng);
    return x;
}

double cover_ratio(const ConcentrationNet& net, const Point& x, double rx) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& e : net.points) best = std::min(best, linf_dist(x, e.e) + e.R);
    return best / rx;
}

std::string pt(const Point& x) {
    return x.n == 1 ? fmt::format("x=({:.9g})", x[0]) : fmt::format("x=({:.9g},{:.9g})", x[0], x[1]);
}

}  // namespace

ConcentrationNet build_net(const AtomicMeasure& mu, const Params& prm) {
    prm.validate(mu.dim());
    RadiusFn R(mu, prm.p);
    const Cube box = working_box(mu, prm);
    double worst = 0.0;
    Point worst_x = box.center;
    for (int round = 0; round < kMaxRounds; ++round) {
        const double factor = 4.0 * std::ldexp(1.0, round);
        ConcentrationNet net = build_once(mu, R, box, prm.p, factor);
        net.delta_grid = 1.0 / (14.0 * factor);
        net.refinement_rounds = round;
        const double bound = kCoverConstant * (1.0 + net.delta_grid);

        std::mt19937_64 rng(prm.seed ^ 0x6e6574ULL);
        worst = 0.0;
        for (int s = 0; s < 1000; ++s) {
            Point x = sample_in(box, rng);
            double ratio = cover_ratio(net, x, R(x));
            if (ratio > worst) {
                worst = ratio;
                worst_x = x;
            }
        }
        log::info("net: {} points, round {}, worst cover ratio {:.6g}", net.points.size(), round, worst);
        if (worst <= bound) return net;
    }
    throw VerificationError(fmt::format("covering check failed after {} rounds at {} (ratio {:.9g})",
                                        kMaxRounds, pt(worst_x), worst));
}

Report verify_concentration(const ConcentrationNet& net, const AtomicMeasure& mu, double p,
                            std::uint64_t seed, std::size_t samples) {
    Report rep;
    RadiusFn R(mu, p);
    const int n = mu.dim();
    const double np = n - p;

    auto& sep = rep["net.separation"];
    for (std::size_t a = 0; a < net.points.size(); ++a)
        for (std::size_t b = a + 1; b < net.points.size(); ++b) {
            const auto& e1 = net.points[a];
            const auto& e2 = net.points[b];
            sep.le(6.0 * (e1.R + e2.R), linf_dist(e1.e, e2.e), 0.0, pt(e1.e) + " " + pt(e2.e));
        }

    auto& rcheck = rep["net.radius_consistency"];
    for (const auto& e : net.points)
        rcheck.require(e.R == R(e.e), "stored R differs at " + pt(e.e));

    auto& k5lo = rep["pr5k.lower"];
    auto& k5hi = rep["pr5k.upper"];
    auto& k5d = rep["pr5k.doubling"];
    for (const auto& e : net.points) {
        Cube K(e.e, e.R);
        double mk = mu.mass(K);
        k5lo.le(std::pow(2.0, p - n) * std::pow(K.diam(), np), mk, kCheckSlack, pt(e.e));
        k5hi.le(mk, std::pow(2.0, 15.0 * p) * std::pow(K.diam(), np), kCheckSlack, pt(e.e));
        k5d.le(mu.mass(K.scaled(5.0)), std::pow(2.0, 14.0 * p) * mk, kCheckSlack, pt(e.e));
    }

    std::mt19937_64 rng(seed);
    auto& cov = rep["net.covering"];
    auto& lip = rep["radius.lipschitz"];
    auto& qne = rep["qne"];
    const double bound = kCoverConstant * (1.0 + net.delta_grid);
    const auto E = net.positions();
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const double thetas[] = {0.5, 1.0, 2.0};
    for (std::size_t s = 0; s < samples; ++s) {
        Point x = sample_in(net.box, rng);
        double rx = R(x);
        cov.le(cover_ratio(net, x, rx), bound, 0.0, pt(x));

        Point y = x;
        double scale = std::pow(10.0, -6.0 * u01(rng)) * net.box.half_side;
        for (int i = 0; i < n; ++i) y[i] += scale * (2.0 * u01(rng) - 1.0);
        lip.le(std::abs(rx - R(y)), linf_dist(x, y) + 1e-14 * rx, kCheckSlack, pt(x) + " " + pt(y));

        double D = std::numeric_limits<double>::infinity();
        for (const auto& e : E) D = std::min(D, linf_dist(x, e));
        if (D > 0.0) {
            double theta = thetas[s % 3];
            double r = theta * D / (2.0 + theta) * (0.05 + 0.95 * u01(rng));
            Cube Q(x, r);
            qne.le(mu.mass(Q), std::pow(42.0 * (1.0 + theta), p) * std::pow(r, np), kCheckSlack, pt(x));
        }
    }
    return rep;
}

}  // namespace sumspace
