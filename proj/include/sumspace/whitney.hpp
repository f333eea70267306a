#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "sumspace/concentration.hpp"
#include "sumspace/geometry.hpp"
#include "sumspace/measure.hpp"
#include "sumspace/params.hpp"
#include "sumspace/report.hpp"

namespace sumspace {

struct WhitneyCube {
    Cube q;
    std::size_t anchor = 0;  // index into the net
    bool boundary = false;   // touches the working-box boundary
    // Truncation cell around a net point e, of side <= eta R(e) / 8. These
    // are not Whitney cubes (dist(Q,E) < diam Q) and skip the DQ-E check;
    // f1 is constant on them.
    bool core = false;
    int depth = 0;
    std::vector<std::size_t> neighbors;  // other cubes meeting q, ascending
};

// Dyadic cubes of the working box: Whitney cubes of box \ E (maximal cubes
// with diam Q <= dist(Q,E)) plus core cells around each net point.
class WhitneyCover {
public:
    std::vector<WhitneyCube> cubes;  // cube id = index
    std::vector<Point> net_points;
    std::vector<double> net_radii;
    Cube box;
    double tau = 9.0;
    double eta = 1.0 / 189.0;

    std::size_t size() const { return cubes.size(); }
    std::size_t max_degree() const;
    // A cube containing x; throws InputError when x is outside the box.
    std::size_t locate(const Point& x) const;
    // Ids of cubes meeting the closed region, ascending.
    std::vector<std::size_t> query(const Cube& region) const;
    // Ids of cubes K with (9/8)K meeting (9/8)q, ascending.
    std::vector<std::size_t> query_star(const Cube& q) const;

    struct Node {
        Cube q;
        std::int64_t first_child = -1;
        std::int64_t leaf = -1;
    };
    std::vector<Node> nodes;

private:
    void visit(const std::function<bool(const Cube&)>& node_pred,
               const std::function<void(std::size_t)>& on_leaf) const;
};

inline constexpr int kWhitneyDepthLimit = 60;
inline constexpr double kStar = 9.0 / 8.0;

WhitneyCover build_whitney(const ConcentrationNet& net, const Params& prm);
// Nearest net point to each cube (ties by net index); throws
// VerificationError if it lies outside tau*Q.
void assign_anchors(WhitneyCover& cover, const ConcentrationNet& net, const Params& prm);

// DQ-E, neighbour ratio, star-intersection equivalence, anchors in tau Q,
// WQ-M, P-WKE, SMC and exact volume coverage.
Report verify_whitney(const WhitneyCover& cover, const AtomicMeasure& mu, const Params& prm);

struct PartitionTerm {
    std::size_t id;
    double phi;
    std::array<double, 2> grad;
};

// Bump b_Q: product over axes of a quintic smoothstep, 1 on Q, 0 off (9/8)Q.
double bump(const Cube& q, const Point& x, std::array<double, 2>* grad);

// Terms with x in the interior of (9/8)Q, ascending by id. Throws InputError
// on an exact hit of a net point or outside the working box.
std::vector<PartitionTerm> partition_eval(const WhitneyCover& cover, const Point& x);
// Same, for x known to lie in cube `home` and off E.
std::vector<PartitionTerm> partition_eval_in(const WhitneyCover& cover, std::size_t home, const Point& x);

// Sum-to-one, gradient sum, finite-difference and gradient-bound checks at
// `samples` seeded points. The largest |grad phi_Q| * diam Q is recorded
// as the worst ratio of "partition.gradient_bound" against 1.
Report verify_partition(const WhitneyCover& cover, std::uint64_t seed, std::size_t samples = 1000);

}  // namespace sumspace
