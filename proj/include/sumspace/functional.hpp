#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sumspace/decompose.hpp"
#include "sumspace/geometry.hpp"
#include "sumspace/lacunae.hpp"
#include "sumspace/measure.hpp"
#include "sumspace/params.hpp"

namespace sumspace {

enum class Variant { CR, V1, V4, VTH3, N11 };

const char* variant_name(Variant v);
Variant parse_variant(const std::string& s);  // throws InputError
inline constexpr Variant kAllVariants[] = {Variant::CR, Variant::V1, Variant::V4, Variant::VTH3, Variant::N11};

// Mass condition imposed on Q' and Q''.
//   m_dm_v1: (diam Q')^(p-n) mu(Q') + (diam Q'')^(p-n) mu(Q'') <= 1
//   g_md:    mu(Q') <= 2^(32p) (diam Q')^(n-p), same for Q''
enum class MassMode { m_dm_v1, g_md };

// A disjoint family with Q -> Q', Q -> Q''. Q' and Q'' index `pool`; an
// empty pool means the family itself plays that role.
struct FamilyAssignment {
    std::vector<Cube> family;
    std::vector<Cube> pool;
    std::vector<std::size_t> prime, dprime;

    const std::vector<Cube>& targets() const { return pool.empty() ? family : pool; }
    const Cube& q1(std::size_t i) const { return targets()[prime[i]]; }
    const Cube& q2(std::size_t i) const { return targets()[dprime[i]]; }
    std::size_t size() const { return family.size(); }
    void add(const Cube& q, std::size_t a, std::size_t b);
};

struct FamilyRules {
    double gamma = 256.0 * 81.0;
    MassMode mass = MassMode::m_dm_v1;  // used by V1 and V4
    std::size_t max_multiplicity = 4;   // N for the N11 variant
};

struct Admissibility {
    bool ok = true;
    std::string reason;   // names the offending cube and constraint
    double gamma_needed = 0.0;  // max over Q of the smallest gamma with Q' u Q'' in gamma Q
    std::size_t multiplicity = 0;  // of the family (and of the pool, if separate)
};

// Interiors must not meet, so touching faces
// are allowed. N11 replaces disjointness by multiplicity <= max_multiplicity.
Admissibility check_family(const FamilyAssignment& fa, Variant v, const AtomicMeasure& mu, double p,
                           const FamilyRules& rules);

// Covering multiplicity of a set of cubes (max number containing a point).
std::size_t covering_multiplicity(const std::vector<Cube>& cubes);

// One summand of the functional; 0 whenever the pair sum vanishes, in
// particular for a null Q' or Q''.
double family_term(Variant v, const Cube& q, const Cube& a, const Cube& b, const AtomicMeasure& mu,
                   const SampledFunction& f, double p);

// Sum of family_term over the family; throws InputError when the family is
// not admissible under `rules`.
double eval_family_functional(const FamilyAssignment& fa, Variant v, const AtomicMeasure& mu,
                              const SampledFunction& f, double p, const FamilyRules& rules);

// Same without the admissibility check.
double family_sum(const FamilyAssignment& fa, Variant v, const AtomicMeasure& mu, const SampledFunction& f,
                  double p);

// lambda * sum over x in G, y in H of w_x w_y |f(x) - f(y)|^p, G and H given
// as atom index sets.
struct WeightedPair {
    std::vector<std::size_t> G, H;
    double lambda = 0.0;
    int kind = 0;  // 1: contact cubes, 2: K_E cubes, 3: lacuna terms
};

struct ProofFamily {
    FamilyAssignment fa;  // pool = K_E cubes followed by the cubes of A
    std::size_t n_ke = 0, n_a = 0;
    std::size_t q1_count = 0, q2_count = 0;
    std::size_t dropped = 0;       // sub-cubes meeting a K_E cube
    double gamma_needed = 0.0;
    std::size_t pool_multiplicity = 0;
    std::vector<WeightedPair> ref2;
};

// The disjoint family Q1 u Q2 of the refined criterion and the weighted
// pairs of the lacunary refinement.
ProofFamily construct_proof_family(const Construction& con, const LacunaPartition& lac);

double eval_weighted_pairs(const std::vector<WeightedPair>& terms, const AtomicMeasure& mu,
                           const SampledFunction& f, double p);

struct SearchResult {
    double value = 0.0;
    FamilyAssignment best;
    std::vector<double> history;  // best-so-far after each round, non-decreasing
};

// Randomized greedy + local improvement over families built from midpoint
// cubes between pairs of pool cubes at dyadic scales, plus the optional
// seed families. Deterministic for a fixed seed.
SearchResult search_lower_bound(const AtomicMeasure& mu, const SampledFunction& f, double p, Variant v,
                                std::size_t budget, std::uint64_t seed, const FamilyRules& rules,
                                const std::vector<FamilyAssignment>& seeds = {});

// Recorded slack for lower <= slack * upper on k-curve points. The lower
// column carries the constant of the family functional, so it may exceed
// the upper column by up to that constant.
inline constexpr double kKCurveSlack = 64.0;

struct KCurvePoint {
    double t = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    std::optional<double> oracle;
};

// Log-spaced grid from a to b with k points.
std::vector<double> log_grid(double a, double b, std::size_t k);

// Default grid: 32 log-spaced points over [knee/100, 100 knee] with knee the
// ratio of min_c ||f - c||_{L_p(mu)} to the seminorm of the piecewise-linear
// interpolant (1D), or 1 when either vanishes.
std::vector<double> default_t_grid(const AtomicMeasure& mu, const SampledFunction& f, double p);

std::vector<KCurvePoint> k_curve(const AtomicMeasure& mu, const SampledFunction& f, const Params& prm,
                                 const std::vector<double>& t_grid, std::size_t search_budget = 0);

}  // namespace sumspace
