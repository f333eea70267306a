#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sumspace/geometry.hpp"

namespace sumspace {

struct Atom {
    Point x;
    double w = 0.0;
};

// Finite positive combination of point masses. Atoms are stored in
// lexicographic order with duplicates merged (weights summed); origin()
// maps each input index to its stored index.
class AtomicMeasure {
public:
    AtomicMeasure() = default;
    AtomicMeasure(int n, std::vector<Atom> atoms);

    int dim() const { return n_; }
    std::size_t size() const { return points_.size(); }
    bool empty() const { return points_.empty(); }
    const Point& point(std::size_t i) const { return points_[i]; }
    double weight(std::size_t i) const { return w_[i]; }
    std::span<const Point> points() const { return points_; }
    std::span<const double> weights() const { return w_; }
    const std::vector<std::size_t>& origin() const { return origin_; }
    std::size_t input_size() const { return origin_.size(); }

    // Structure-of-arrays view; ys() is nullptr when n == 1.
    const double* xs() const { return xs_.data(); }
    const double* ys() const { return n_ == 2 ? ys_.data() : nullptr; }

    double total_mass() const { return total_; }
    double mass(const Cube& q) const;
    std::vector<std::size_t> atoms_in(const Cube& q) const;

    // Smallest cube holding every atom, centred at the bounding-box centre.
    Cube bounding_cube() const;
    // Same atoms, weights multiplied by factor.
    AtomicMeasure scaled(double factor) const;

private:
    struct Bucket {
        std::vector<double> xs, ys, w;
        std::vector<std::size_t> idx;
    };

    void build_index();
    template <class F>
    void for_buckets(const Cube& q, F&& f) const;

    int n_ = 1;
    std::vector<Point> points_;
    std::vector<double> w_, xs_, ys_;
    std::vector<double> prefix_;  // 1D prefix sums of weights
    std::vector<std::size_t> origin_;
    double total_ = 0.0;

    // 2D grid bucket index
    double gx0_ = 0, gy0_ = 0, gh_ = 1;
    int gnx_ = 1, gny_ = 1;
    std::vector<Bucket> buckets_;
};

// Values of a function at the atoms, aligned with the stored atom order.
struct SampledFunction {
    std::vector<double> values;

    SampledFunction() = default;
    explicit SampledFunction(std::vector<double> v) : values(std::move(v)) {}
    std::size_t size() const { return values.size(); }
    double operator[](std::size_t i) const { return values[i]; }
};

// Aligns raw per-input-atom values with mu's stored atoms. Values of merged
// duplicates must agree within 1e-12.
SampledFunction align_values(const AtomicMeasure& mu, std::span<const double> raw);

double average(const AtomicMeasure& mu, const SampledFunction& f, const Cube& q);
double lp_norm(const AtomicMeasure& mu, std::span<const double> f, double p);

}  // namespace sumspace
