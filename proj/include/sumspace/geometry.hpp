#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "sumspace/report.hpp"

namespace sumspace {

// Point in R^n for n in {1, 2}. Unused coordinates are zero.
struct Point {
    std::array<double, 2> x{0.0, 0.0};
    int n = 1;

    Point() = default;
    explicit Point(double a) : x{a, 0.0}, n(1) {}
    Point(double a, double b) : x{a, b}, n(2) {}
    static Point from(std::span<const double> coords);

    double operator[](int i) const { return x[static_cast<std::size_t>(i)]; }
    double& operator[](int i) { return x[static_cast<std::size_t>(i)]; }
    bool operator==(const Point& o) const { return n == o.n && x == o.x; }
};

double linf_dist(const Point& a, const Point& b);

// rho_w(x, y) = |x - y| + w(x) + w(y) for x != y, zero on the diagonal.
double rho_w(const Point& a, const Point& b, double wa, double wb);
double rho_w(const Point& a, const Point& b, const std::function<double(const Point&)>& w);

// Closed cube {y : |y - center|_inf <= half_side}.
struct Cube {
    Point center;
    double half_side = 0.0;

    Cube() = default;
    Cube(Point c, double r);

    int dim() const { return center.n; }
    double diam() const { return 2.0 * half_side; }
    double lo(int i) const { return center[i] - half_side; }
    double hi(int i) const { return center[i] + half_side; }
    Cube scaled(double alpha) const { return Cube(center, alpha * half_side); }
    bool contains(const Point& p) const;
    bool contains(const Cube& q) const;
};

bool cubes_intersect(const Cube& a, const Cube& b);
// Interiors intersect (touching boundaries do not count).
bool interiors_intersect(const Cube& a, const Cube& b);
double dist_point_cube(const Point& p, const Cube& q);
double dist_cube_cube(const Cube& a, const Cube& b);
double dist_cube_set(const Cube& q, std::span<const Point> pts);
// Smallest gamma with q subset of gamma*outer.
double containment_ratio(const Cube& q, const Cube& outer);

// Cubes with stable integer ids (defaults to 0..size-1).
struct CubeFamily {
    std::vector<Cube> cubes;
    std::vector<std::size_t> ids;

    CubeFamily() = default;
    explicit CubeFamily(std::vector<Cube> cs);
    CubeFamily(std::vector<Cube> cs, std::vector<std::size_t> id);

    std::size_t size() const { return cubes.size(); }
    bool empty() const { return cubes.empty(); }
    void push_back(const Cube& c, std::size_t id);
};

// Greedy selection: repeatedly keep the smallest remaining cube (ties by
// lowest id) and discard every remaining cube that meets it.
CubeFamily select_min_disjoint(const CubeFamily& family);

// First-fit colouring in id order. Each cube may meet at most max_degree
// others; the result has at most max_degree + 1 pairwise-disjoint classes.
std::vector<CubeFamily> color_disjoint(const CubeFamily& family, std::size_t max_degree);

// Runs select_min_disjoint and checks (a) every input cube meets a chosen
// cube no larger than itself and (b) chosen cubes are pairwise disjoint.
Report verify_select(const CubeFamily& family);

// Colours with N = the family's actual maximum degree and checks each class
// is pairwise disjoint, the classes partition the input and there are at
// most N + 1 of them.
Report verify_coloring(const CubeFamily& family);

// Largest number of other cubes meeting a single cube.
std::size_t max_intersection_degree(const CubeFamily& family);

}  // namespace sumspace
