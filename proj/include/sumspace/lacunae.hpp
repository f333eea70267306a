#pragma once

#include <cstddef>
#include <vector>

#include "sumspace/report.hpp"
#include "sumspace/whitney.hpp"

namespace sumspace {

enum class LacunaKind { true_lacuna, elementary };

struct Lacuna {
    LacunaKind kind = LacunaKind::true_lacuna;
    std::vector<std::size_t> members;  // cube ids, ascending
    std::vector<std::size_t> V;        // (90Q) cap E as net ids, ascending
    std::size_t q_min = 0;             // Q_L: smallest member, ties by id
    std::size_t q_max = 0;             // Q^L: largest member; meaningless when unbounded
    bool unbounded = false;            // holds a cube touching the working-box boundary
    std::size_t projection = 0;        // Pr(L), a net id
    double projection_gamma = 1.0;     // dilation of Q_L that first met E
};

struct LacunaPartition {
    std::vector<Lacuna> lacunae;
    std::vector<std::size_t> of_cube;  // cube id -> lacuna index
};

// Net ids in (alpha Q) cap E, ascending.
std::vector<std::size_t> net_in(const WhitneyCover& cover, const Cube& q, double alpha);

// True lacunae: classes of cubes with (10Q) cap E = (90Q) cap E, grouped by
// that set. Every other cube is an elementary lacuna on its own.
LacunaPartition partition_lacunae(const WhitneyCover& cover);

// Net point of (gamma Q_L) cap E nearest to the centre of Q_L (ties by id),
// gamma doubling from 1.
std::size_t project_lacuna(const Lacuna& l, const WhitneyCover& cover, double* gamma_used = nullptr);

// Adjacency between lacunae whose member cubes meet (closed sense).
std::vector<std::vector<std::size_t>> contact_graph(const LacunaPartition& part,
                                                    const WhitneyCover& cover);

struct LacunaStats {
    std::size_t true_count = 0;
    std::size_t elementary_count = 0;
    std::size_t true_true_contacts = 0;  // finding, not a failure
    std::size_t max_contacts = 0;
    std::size_t max_multiplicity = 0;    // max_a card{L : Pr(L) = a}
    double max_gamma = 1.0;
    // diam Q^L / dist(V_L, E \ V_L) over bounded lacunae with E \ V_L non-empty
    double cld_min = 0.0, cld_max = 0.0;
};

LacunaStats lacuna_stats(const LacunaPartition& part, const WhitneyCover& cover);

// Exhaustive/exclusive partition, V_L identity across true lacunae, the
// elementary bound diam V_L >= diam Q / 2, projection in gamma Q_L.
Report verify_lacunae(const LacunaPartition& part, const WhitneyCover& cover);

}  // namespace sumspace
