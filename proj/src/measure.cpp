#include "sumspace/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sumspace/error.hpp"
#include "sumspace/kernels.hpp"

namespace sumspace {

AtomicMeasure::AtomicMeasure(int n, std::vector<Atom> atoms) : n_(n) {
    if (n != 1 && n != 2) throw InputError("measure dimension must be 1 or 2");
    if (atoms.empty()) throw InputError("measure has no atoms");
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        const auto& a = atoms[i];
        if (a.x.n != n) throw InputError("atom " + std::to_string(i) + " has wrong dimension");
        if (!std::isfinite(a.x[0]) || !std::isfinite(a.x[1]))
            throw InputError("atom " + std::to_string(i) + " has a non-finite coordinate");
        if (!(a.w > 0.0) || !std::isfinite(a.w))
            throw InputError("atom " + std::to_string(i) + " has a non-positive weight");
    }

    std::vector<std::size_t> order(atoms.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return atoms[a].x.x < atoms[b].x.x; });

    origin_.assign(atoms.size(), 0);
    for (std::size_t k = 0; k < order.size(); ++k) {
        const Atom& a = atoms[order[k]];
        if (!points_.empty() && points_.back() == a.x) {
            w_.back() += a.w;
        } else {
            points_.push_back(a.x);
            w_.push_back(a.w);
        }
        origin_[order[k]] = points_.size() - 1;
    }
    for (const auto& p : points_) {
        xs_.push_back(p[0]);
        ys_.push_back(p[1]);
    }
    build_index();
}

void AtomicMeasure::build_index() {
    total_ = 0.0;
    for (double w : w_) total_ += w;
    if (n_ == 1) {
        prefix_.assign(w_.size() + 1, 0.0);
        for (std::size_t i = 0; i < w_.size(); ++i) prefix_[i + 1] = prefix_[i] + w_[i];
        return;
    }
    double x0 = *std::min_element(xs_.begin(), xs_.end());
    double x1 = *std::max_element(xs_.begin(), xs_.end());
    double y0 = *std::min_element(ys_.begin(), ys_.end());
    double y1 = *std::max_element(ys_.begin(), ys_.end());
    double side = std::max({x1 - x0, y1 - y0, 1e-300});
    int k = std::max(1, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(size())))));
    gx0_ = x0;
    gy0_ = y0;
    gh_ = side / k;
    gnx_ = std::max(1, static_cast<int>(std::floor((x1 - x0) / gh_)) + 1);
    gny_ = std::max(1, static_cast<int>(std::floor((y1 - y0) / gh_)) + 1);
    buckets_.assign(static_cast<std::size_t>(gnx_) * gny_, {});
    for (std::size_t i = 0; i < size(); ++i) {
        int bx = std::clamp(static_cast<int>(std::floor((xs_[i] - gx0_) / gh_)), 0, gnx_ - 1);
        int by = std::clamp(static_cast<int>(std::floor((ys_[i] - gy0_) / gh_)), 0, gny_ - 1);
        Bucket& b = buckets_[static_cast<std::size_t>(by) * gnx_ + bx];
        b.xs.push_back(xs_[i]);
        b.ys.push_back(ys_[i]);
        b.w.push_back(w_[i]);
        b.idx.push_back(i);
    }
}

template <class F>
void AtomicMeasure::for_buckets(const Cube& q, F&& f) const {
    // One bucket of slack on each side absorbs rounding in the floor().
    auto cell = [&](double v, double v0, int nmax) {
        double t = std::floor((v - v0) / gh_);
        if (t < -1.0) return -1;
        if (t > nmax) return nmax;
        return static_cast<int>(t);
    };
    int bx0 = std::max(0, cell(q.lo(0), gx0_, gnx_) - 1);
    int bx1 = std::min(gnx_ - 1, cell(q.hi(0), gx0_, gnx_) + 1);
    int by0 = std::max(0, cell(q.lo(1), gy0_, gny_) - 1);
    int by1 = std::min(gny_ - 1, cell(q.hi(1), gy0_, gny_) + 1);
    for (int by = by0; by <= by1; ++by)
        for (int bx = bx0; bx <= bx1; ++bx) {
            const Bucket& b = buckets_[static_cast<std::size_t>(by) * gnx_ + bx];
            if (!b.idx.empty()) f(b);
        }
}

namespace {

// Index range [lo, hi) of sorted 1D coordinates with |a - c| <= r. The
// predicate is monotone on each side of c, so both ends are binary searches.
std::pair<std::size_t, std::size_t> range_1d(const std::vector<double>& xs, double c, double r) {
    auto lo = std::partition_point(xs.begin(), xs.end(),
                                   [&](double a) { return a < c && !(std::abs(a - c) <= r); });
    auto hi = std::partition_point(lo, xs.end(),
                                   [&](double a) { return !(a > c) || std::abs(a - c) <= r; });
    return {static_cast<std::size_t>(lo - xs.begin()), static_cast<std::size_t>(hi - xs.begin())};
}

}  // namespace

double AtomicMeasure::mass(const Cube& q) const {
    if (q.dim() != n_) throw InputError("cube dimension does not match measure");
    if (n_ == 1) {
        auto [lo, hi] = range_1d(xs_, q.center[0], q.half_side);
        return prefix_[hi] - prefix_[lo];
    }
    double s = 0.0;
    for_buckets(q, [&](const Bucket& b) {
        s += kernels::cube_mass(b.xs.data(), b.ys.data(), b.w.data(), b.idx.size(), q.center[0],
                                q.center[1], q.half_side);
    });
    return s;
}

std::vector<std::size_t> AtomicMeasure::atoms_in(const Cube& q) const {
    if (q.dim() != n_) throw InputError("cube dimension does not match measure");
    std::vector<std::size_t> out;
    if (n_ == 1) {
        auto [lo, hi] = range_1d(xs_, q.center[0], q.half_side);
        for (std::size_t i = lo; i < hi; ++i) out.push_back(i);
        return out;
    }
    for_buckets(q, [&](const Bucket& b) {
        for (std::size_t k = 0; k < b.idx.size(); ++k)
            if (q.contains(points_[b.idx[k]])) out.push_back(b.idx[k]);
    });
    std::sort(out.begin(), out.end());
    return out;
}

Cube AtomicMeasure::bounding_cube() const {
    Point c = points_.front();
    double half = 0.0;
    for (int i = 0; i < n_; ++i) {
        const auto& v = i == 0 ? xs_ : ys_;
        auto [mn, mx] = std::minmax_element(v.begin(), v.end());
        c[i] = 0.5 * (*mn + *mx);
        half = std::max(half, 0.5 * (*mx - *mn));
    }
    // A single atom still gets a non-degenerate cube.
    if (half == 0.0) half = 1.0;
    return Cube(c, half);
}

AtomicMeasure AtomicMeasure::scaled(double factor) const {
    if (!(factor > 0.0) || !std::isfinite(factor)) throw InputError("scale factor must be positive");
    AtomicMeasure m = *this;
    for (double& w : m.w_) w *= factor;
    for (auto& b : m.buckets_)
        for (double& w : b.w) w *= factor;
    m.total_ = 0.0;
    for (double w : m.w_) m.total_ += w;
    if (n_ == 1)
        for (std::size_t i = 0; i < m.w_.size(); ++i) m.prefix_[i + 1] = m.prefix_[i] + m.w_[i];
    return m;
}

SampledFunction align_values(const AtomicMeasure& mu, std::span<const double> raw) {
    if (raw.size() != mu.input_size())
        throw InputError("function has " + std::to_string(raw.size()) + " values but measure has " +
                         std::to_string(mu.input_size()) + " atoms");
    std::vector<double> v(mu.size(), 0.0);
    std::vector<char> seen(mu.size(), 0);
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (!std::isfinite(raw[i])) throw InputError("function value " + std::to_string(i) + " is not finite");
        std::size_t k = mu.origin()[i];
        if (seen[k] && std::abs(v[k] - raw[i]) > 1e-12)
            throw InputError("duplicate atom " + std::to_string(i) + " carries a conflicting value");
        if (!seen[k]) v[k] = raw[i];
        seen[k] = 1;
    }
    return SampledFunction(std::move(v));
}

double average(const AtomicMeasure& mu, const SampledFunction& f, const Cube& q) {
    if (f.size() != mu.size()) throw InputError("function and measure sizes differ");
    auto idx = mu.atoms_in(q);
    double num = 0.0, den = 0.0;
    for (std::size_t i : idx) {
        num += mu.weight(i) * f[i];
        den += mu.weight(i);
    }
    if (den == 0.0) throw InputError("average over a mu-null set");
    return num / den;
}

double lp_norm(const AtomicMeasure& mu, std::span<const double> f, double p) {
    if (f.size() != mu.size()) throw InputError("function and measure sizes differ");
    if (!(p >= 1.0)) throw InputError("lp_norm needs p >= 1");
    return std::pow(kernels::weighted_power_sum(f.data(), mu.weights().data(), f.size(), p), 1.0 / p);
}

}  // namespace sumspace
