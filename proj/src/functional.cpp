#include "sumspace/functional.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "sumspace/error.hpp"
#include "sumspace/kernels.hpp"
#include "sumspace/log.hpp"
#include "sumspace/oracle1d.hpp"

namespace sumspace {

namespace {

constexpr double kTouch = 1e-12;

std::string cube_str(const Cube& q) {
    if (q.dim() == 1) return fmt::format("Q({:.9g}, {:.9g})", q.center[0], q.half_side);
    return fmt::format("Q(({:.9g},{:.9g}), {:.9g})", q.center[0], q.center[1], q.half_side);
}

bool overlap(const Cube& a, const Cube& b) { return interiors_intersect(a, b); }

// sum over x in A, y in B of w_x w_y |f(x) - f(y)|^p
double pair_sum(const AtomicMeasure& mu, const SampledFunction& f, double p, const std::vector<std::size_t>& A,
                const std::vector<std::size_t>& B) {
    if (A.empty() || B.empty()) return 0.0;
    std::vector<double> fa, wa, fb, wb;
    for (std::size_t i : A) {
        fa.push_back(f[i]);
        wa.push_back(mu.weight(i));
    }
    for (std::size_t i : B) {
        fb.push_back(f[i]);
        wb.push_back(mu.weight(i));
    }
    return kernels::pair_power_sum(fa.data(), wa.data(), fa.size(), fb.data(), wb.data(), fb.size(), p);
}

std::vector<std::size_t> atoms_in_union(const AtomicMeasure& mu, const std::vector<Cube>& cubes) {
    std::vector<std::size_t> out;
    for (const auto& q : cubes) {
        auto a = mu.atoms_in(q);
        out.insert(out.end(), a.begin(), a.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

double mass_of(const AtomicMeasure& mu, const std::vector<std::size_t>& atoms) {
    double s = 0.0;
    for (std::size_t i : atoms) s += mu.weight(i);
    return s;
}

double cr_weight(double dq, double da, double ma, double db, double mb, double p, int n) {
    return std::pow(dq, n - p) / ((std::pow(da, n - p) + ma) * (std::pow(db, n - p) + mb));
}

}  // namespace

const char* variant_name(Variant v) {
    switch (v) {
        case Variant::CR: return "CR";
        case Variant::V1: return "V1";
        case Variant::V4: return "V4";
        case Variant::VTH3: return "VTH3";
        case Variant::N11: return "N11";
    }
    return "?";
}

Variant parse_variant(const std::string& s) {
    for (Variant v : kAllVariants)
        if (s == variant_name(v)) return v;
    throw InputError(fmt::format("unknown variant '{}'", s));
}

void FamilyAssignment::add(const Cube& q, std::size_t a, std::size_t b) {
    family.push_back(q);
    prime.push_back(a);
    dprime.push_back(b);
}

std::size_t covering_multiplicity(const std::vector<Cube>& cubes) {
    if (cubes.empty()) return 0;
    const int n = cubes.front().dim();
    // Open cubes: the maximum is attained just above some pair of lower
    // corner coordinates. Ends sort before starts so touching cubes do not
    // count together.
    auto sweep = [](std::vector<std::pair<double, int>>& ev) {
        std::sort(ev.begin(), ev.end());
        std::size_t cur = 0, best = 0;
        for (const auto& e : ev) {
            if (e.second > 0) best = std::max(best, ++cur);
            else --cur;
        }
        return best;
    };
    if (n == 1) {
        std::vector<std::pair<double, int>> ev;
        for (const auto& q : cubes) {
            ev.push_back({q.lo(0), 1});
            ev.push_back({q.hi(0), -1});
        }
        return sweep(ev);
    }
    std::size_t best = 0;
    for (const auto& a : cubes) {
        const double x = a.lo(0);
        std::vector<std::pair<double, int>> ev;
        for (const auto& q : cubes)
            if (q.lo(0) <= x && x < q.hi(0)) {
                ev.push_back({q.lo(1), 1});
                ev.push_back({q.hi(1), -1});
            }
        best = std::max(best, sweep(ev));
    }
    return best;
}

Admissibility check_family(const FamilyAssignment& fa, Variant v, const AtomicMeasure& mu, double p,
                           const FamilyRules& rules) {
    Admissibility ad;
    auto fail = [&](std::string why) {
        if (ad.ok) {
            ad.ok = false;
            ad.reason = std::move(why);
        }
    };
    const int n = mu.dim();
    const auto& tg = fa.targets();
    if (fa.prime.size() != fa.size() || fa.dprime.size() != fa.size()) {
        fail("prime/dprime size differs from the family size");
        return ad;
    }
    for (const auto& q : fa.family)
        if (q.dim() != n) fail(fmt::format("cube {} has the wrong dimension", cube_str(q)));
    for (const auto& q : fa.pool)
        if (q.dim() != n) fail(fmt::format("pool cube {} has the wrong dimension", cube_str(q)));
    if (!ad.ok) return ad;

    ad.multiplicity = covering_multiplicity(fa.family);
    if (!fa.pool.empty()) ad.multiplicity = std::max(ad.multiplicity, covering_multiplicity(fa.pool));
    if (v == Variant::N11) {
        if (ad.multiplicity > rules.max_multiplicity)
            fail(fmt::format("covering multiplicity {} exceeds N = {}", ad.multiplicity, rules.max_multiplicity));
    } else {
        for (std::size_t i = 0; i < fa.size() && ad.ok; ++i)
            for (std::size_t j = i + 1; j < fa.size(); ++j)
                if (overlap(fa.family[i], fa.family[j])) {
                    fail(fmt::format("cubes {} and {} are not disjoint", i, j));
                    break;
                }
        if (!fa.pool.empty() && ad.multiplicity > rules.max_multiplicity)
            fail(fmt::format("pool multiplicity {} exceeds N = {}", ad.multiplicity, rules.max_multiplicity));
    }

    for (std::size_t i = 0; i < fa.size(); ++i) {
        if (fa.prime[i] >= tg.size() || fa.dprime[i] >= tg.size()) {
            fail(fmt::format("cube {}: assignment index out of range", i));
            continue;
        }
        const Cube& q = fa.family[i];
        const Cube& a = fa.q1(i);
        const Cube& b = fa.q2(i);
        const double g = std::max(containment_ratio(a, q), containment_ratio(b, q));
        ad.gamma_needed = std::max(ad.gamma_needed, g);
        if (g > rules.gamma * (1.0 + kTouch))
            fail(fmt::format("cube {} {}: Q' u Q'' needs gamma {:.9g} > {:.9g}", i, cube_str(q), g, rules.gamma));
        const double ma = mu.mass(a), mb = mu.mass(b);
        if (v == Variant::V1 || v == Variant::V4) {
            if (rules.mass == MassMode::m_dm_v1) {
                const double lhs = std::pow(a.diam(), p - n) * ma + std::pow(b.diam(), p - n) * mb;
                if (lhs > 1.0 + kTouch) fail(fmt::format("cube {} {}: mass condition M-DM-V1 gives {:.9g} > 1", i, cube_str(q), lhs));
            } else {
                const double cap = std::pow(2.0, 32.0 * p);
                if (ma > cap * std::pow(a.diam(), n - p) * (1.0 + kTouch) || mb > cap * std::pow(b.diam(), n - p) * (1.0 + kTouch))
                    fail(fmt::format("cube {} {}: mass condition G-MD violated", i, cube_str(q)));
            }
        }
        if ((v == Variant::VTH3 || v == Variant::N11) && (ma <= 0.0 || mb <= 0.0))
            fail(fmt::format("cube {} {}: Q' or Q'' has zero mass", i, cube_str(q)));
    }
    return ad;
}

double family_term(Variant v, const Cube& q, const Cube& a, const Cube& b, const AtomicMeasure& mu,
                   const SampledFunction& f, double p) {
    const int n = mu.dim();
    const auto A = mu.atoms_in(a), B = mu.atoms_in(b);
    const double S = pair_sum(mu, f, p, A, B);
    const double ma = mass_of(mu, A), mb = mass_of(mu, B);
    const double dq = q.diam(), da = a.diam(), db = b.diam();
    switch (v) {
        case Variant::CR: return S == 0.0 ? 0.0 : S * cr_weight(dq, da, ma, db, mb, p, n);
        case Variant::V1: return S == 0.0 ? 0.0 : std::pow(da * db / dq, p - n) * S;
        case Variant::V4: {
            if (S == 0.0) return 0.0;
            const double den = std::pow(da, p - n) * ma + std::pow(db, p - n) * mb;
            return std::pow(da * db / dq, p - n) * S / den;
        }
        case Variant::VTH3:
        case Variant::N11: {
            if (S == 0.0) return 0.0;  // includes a null Q' or Q''
            const double den = std::pow(dq, p - n) * (1.0 + std::pow(da, n - p) / ma + std::pow(db, n - p) / mb);
            return S / (ma * mb) / den;
        }
    }
    return 0.0;
}

double family_sum(const FamilyAssignment& fa, Variant v, const AtomicMeasure& mu, const SampledFunction& f,
                  double p) {
    double s = 0.0;
    for (std::size_t i = 0; i < fa.size(); ++i) s += family_term(v, fa.family[i], fa.q1(i), fa.q2(i), mu, f, p);
    return s;
}

double eval_family_functional(const FamilyAssignment& fa, Variant v, const AtomicMeasure& mu,
                              const SampledFunction& f, double p, const FamilyRules& rules) {
    if (f.size() != mu.size()) throw InputError("function size differs from the number of atoms");
    const auto ad = check_family(fa, v, mu, p, rules);
    if (!ad.ok) throw InputError(fmt::format("{} family not admissible: {}", variant_name(v), ad.reason));
    return family_sum(fa, v, mu, f, p);
}

ProofFamily construct_proof_family(const Construction& con, const LacunaPartition& lac) {
    const WhitneyCover& cover = con.cover;
    const AtomicMeasure& mu = con.mu;
    const int n = mu.dim();
    const double p = con.prm.p;
    const double eta = con.prm.eta();
    ProofFamily pf;

    std::vector<Cube> ke, eta_cubes;
    for (const auto& np : con.net.points) {
        ke.emplace_back(np.e, np.R);
        eta_cubes.emplace_back(np.e, eta * np.R);
    }
    pf.n_ke = ke.size();

    // A: Whitney cubes missing every eta K(e).
    std::vector<std::size_t> A;
    std::vector<std::int64_t> in_a(cover.size(), -1);
    for (std::size_t id = 0; id < cover.size(); ++id) {
        if (cover.cubes[id].core) continue;
        bool hit = false;
        for (const auto& c : eta_cubes) hit = hit || cubes_intersect(cover.cubes[id].q, c);
        if (hit) continue;
        in_a[id] = static_cast<std::int64_t>(A.size());
        A.push_back(id);
    }
    pf.n_a = A.size();
    pf.fa.pool = ke;
    for (std::size_t id : A) pf.fa.pool.push_back(cover.cubes[id].q);

    for (std::size_t e = 0; e < ke.size(); ++e) pf.fa.add(ke[e], e, e);

    auto offer = [&](const Cube& q, std::size_t a, std::size_t b, bool first) {
        for (const auto& k : ke)
            if (overlap(q, k)) {
                ++pf.dropped;
                return;
            }
        pf.fa.add(q, a, b);
        ++(first ? pf.q1_count : pf.q2_count);
    };
    // Equal disjoint cubes inside T_K = (1/2) of the lower-corner quarter of K.
    auto y_cubes = [&](const Cube& k, std::size_t m) {
        const double r = k.half_side;
        Point lo = k.center;
        for (int i = 0; i < n; ++i) lo[i] -= 3.0 * r / 4.0;
        const auto per = static_cast<std::size_t>(std::ceil(std::pow(static_cast<double>(m), 1.0 / n) - 1e-9));
        const double cell = (r / 4.0) / static_cast<double>(per);  // cell half side
        std::vector<Cube> out;
        for (std::size_t j = 0; j < m; ++j) {
            Point c = lo;
            c[0] += (2.0 * static_cast<double>(j % per) + 1.0) * cell;
            if (n == 2) c[1] += (2.0 * static_cast<double>(j / per) + 1.0) * cell;
            out.emplace_back(c, cell / 2.0);
        }
        return out;
    };

    for (std::size_t ai = 0; ai < A.size(); ++ai) {
        const auto& K = cover.cubes[A[ai]];
        const auto& nb = K.neighbors;
        const auto ys = y_cubes(K.q, nb.size());
        for (std::size_t i = 0; i < nb.size(); ++i) offer(ys[i], cover.cubes[nb[i]].anchor, K.anchor, true);
        Point hc = K.q.center;
        for (int i = 0; i < n; ++i) hc[i] += K.q.half_side / 2.0;
        offer(Cube(hc, K.q.half_side / 4.0), pf.n_ke + ai, K.anchor, false);
    }
    for (std::size_t i = 0; i < pf.fa.size(); ++i)
        pf.gamma_needed = std::max(
            {pf.gamma_needed, containment_ratio(pf.fa.q1(i), pf.fa.family[i]), containment_ratio(pf.fa.q2(i), pf.fa.family[i])});
    pf.pool_multiplicity = covering_multiplicity(pf.fa.pool);

    // Weighted pairs of the lacunary refinement.
    std::vector<std::vector<std::size_t>> ke_atoms;
    for (const auto& k : ke) ke_atoms.push_back(mu.atoms_in(k));
    for (std::size_t e = 0; e < ke.size(); ++e) {
        const double d = ke[e].diam(), m = mass_of(mu, ke_atoms[e]);
        pf.ref2.push_back({ke_atoms[e], ke_atoms[e], std::pow(d, n - p) / std::pow(std::pow(d, n - p) + m, 2.0), 2});
    }
    for (std::size_t li = 0; li < lac.lacunae.size(); ++li) {
        const Lacuna& L = lac.lacunae[li];
        const std::size_t AL = L.projection;
        std::vector<Cube> u;
        for (std::size_t kid : L.members) {
            if (in_a[kid] < 0) continue;
            u.push_back(cover.cubes[kid].q);
            std::vector<std::size_t> outside;
            for (std::size_t q : cover.cubes[kid].neighbors)
                if (lac.of_cube[q] != li) outside.push_back(q);
            if (outside.empty()) continue;
            const auto ys = y_cubes(cover.cubes[kid].q, outside.size());
            for (std::size_t i = 0; i < outside.size(); ++i) {
                const std::size_t Aq = lac.lacunae[lac.of_cube[outside[i]]].projection;
                const auto& G = ke_atoms[Aq];
                const auto& H = ke_atoms[AL];
                const double lam = cr_weight(ys[i].diam(), ke[Aq].diam(), mass_of(mu, G), ke[AL].diam(),
                                             mass_of(mu, H), p, n);
                pf.ref2.push_back({G, H, lam, 1});
            }
        }
        if (u.empty()) continue;
        auto G = atoms_in_union(mu, u);
        if (G.empty() || ke_atoms[AL].empty()) continue;
        pf.ref2.push_back({std::move(G), ke_atoms[AL], 1.0 / mass_of(mu, ke_atoms[AL]), 3});
    }
    log::info("proof family: {} cubes ({} K_E, {} Q1, {} Q2), {} dropped, gamma {:.4g}", pf.fa.size(), pf.n_ke,
              pf.q1_count, pf.q2_count, pf.dropped, pf.gamma_needed);
    return pf;
}

double eval_weighted_pairs(const std::vector<WeightedPair>& terms, const AtomicMeasure& mu,
                           const SampledFunction& f, double p) {
    double s = 0.0;
    for (const auto& t : terms) s += t.lambda * pair_sum(mu, f, p, t.G, t.H);
    return s;
}

namespace {

struct Candidate {
    Cube q;
    std::size_t a, b;
    double value;
};

// Pool of disjoint single-atom cubes Q(x_i, rho d_i), d_i the distance to the
// nearest other atom; for V1/V4 each cube is shrunk until it carries at most
// half of the mass budget of M-DM-V1.
std::vector<Cube> atom_pool(const AtomicMeasure& mu, double rho, double p, Variant v) {
    const int n = mu.dim();
    std::vector<Cube> pool;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        double d = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < mu.size(); ++j)
            if (j != i) d = std::min(d, linf_dist(mu.point(i), mu.point(j)));
        if (!std::isfinite(d)) d = 1.0;
        double r = rho * d;
        if (v == Variant::V1 || v == Variant::V4) r = std::min(r, 0.5 * std::pow(0.5 / mu.weight(i), 1.0 / (p - n)));
        pool.emplace_back(mu.point(i), r);
    }
    return pool;
}

// Smallest cube centred between pool cubes a and b with a u b in gamma Q.
Cube midpoint_cube(const Cube& a, const Cube& b, double gamma) {
    Point c = a.center;
    double r = 0.0;
    for (int i = 0; i < a.dim(); ++i) {
        const double lo = std::min(a.lo(i), b.lo(i)), hi = std::max(a.hi(i), b.hi(i));
        c[i] = 0.5 * (lo + hi);
        r = std::max(r, 0.5 * (hi - lo));
    }
    return Cube(c, r / gamma);
}

}  // namespace

SearchResult search_lower_bound(const AtomicMeasure& mu, const SampledFunction& f, double p, Variant v,
                                std::size_t budget, std::uint64_t seed, const FamilyRules& rules,
                                const std::vector<FamilyAssignment>& seeds) {
    if (budget < 1) throw InputError("search budget must be at least 1");
    SearchResult res;
    res.value = 0.0;
    auto consider = [&](const FamilyAssignment& fa) {
        if (!check_family(fa, v, mu, p, rules).ok) return;
        const double val = family_sum(fa, v, mu, f, p);
        if (val > res.value || res.best.family.empty()) {
            res.value = std::max(res.value, val);
            res.best = fa;
        }
    };
    for (const auto& s : seeds) consider(s);

    // Candidate terms per pool scale; gamma shrunk slightly so rounding never
    // breaks containment.
    const double g = rules.gamma * (1.0 - 1e-9);
    std::vector<std::vector<Cube>> pools;
    std::vector<std::vector<Candidate>> cands;
    for (double rho : {0.25, 0.125, 0.0625, 0.015625}) {
        auto pool = atom_pool(mu, rho, p, v);
        std::vector<Candidate> cs;
        for (std::size_t i = 0; i < pool.size(); ++i)
            for (std::size_t j = i + 1; j < pool.size(); ++j) {
                if (f[i] == f[j]) continue;
                const Cube base = midpoint_cube(pool[i], pool[j], g);
                for (int s = 0; s < 6; ++s) {
                    const Cube q = base.scaled(std::ldexp(1.0, s));
                    double val = family_term(v, q, pool[i], pool[j], mu, f, p);
                    if (val > 0.0) cs.push_back({q, i, j, val});
                }
            }
        pools.push_back(std::move(pool));
        cands.push_back(std::move(cs));
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t round = 0; round < budget; ++round) {
        const std::size_t k = round % pools.size();
        std::vector<std::pair<double, std::size_t>> order;
        for (std::size_t c = 0; c < cands[k].size(); ++c) {
            const double noise = round < pools.size() ? 1.0 : 0.25 + 0.75 * u(rng);
            order.push_back({cands[k][c].value * noise, c});
        }
        std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
            return a.first > b.first || (a.first == b.first && a.second < b.second);
        });
        FamilyAssignment fa;
        fa.pool = pools[k];
        for (const auto& [score, c] : order) {
            const auto& cd = cands[k][c];
            bool free = true;
            for (const auto& q : fa.family)
                if (overlap(q, cd.q)) {
                    free = false;
                    break;
                }
            if (free) fa.add(cd.q, cd.a, cd.b);
        }
        // Local improvement: halve a cube while containment allows and the
        // term grows.
        for (std::size_t i = 0; i < fa.size(); ++i) {
            for (int it = 0; it < 4; ++it) {
                const Cube smaller = fa.family[i].scaled(0.5);
                if (std::max(containment_ratio(fa.q1(i), smaller), containment_ratio(fa.q2(i), smaller)) > g) break;
                if (family_term(v, smaller, fa.q1(i), fa.q2(i), mu, f, p) <=
                    family_term(v, fa.family[i], fa.q1(i), fa.q2(i), mu, f, p))
                    break;
                fa.family[i] = smaller;
            }
        }
        consider(fa);
        res.history.push_back(res.value);
    }
    return res;
}

std::vector<double> log_grid(double a, double b, std::size_t k) {
    if (!(a > 0.0) || !(b >= a) || k == 0) throw InputError("t grid needs 0 < a <= b and k >= 1");
    std::vector<double> out;
    for (std::size_t i = 0; i < k; ++i) {
        const double s = k == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(k - 1);
        out.push_back(a * std::pow(b / a, s));
    }
    return out;
}

std::vector<double> default_t_grid(const AtomicMeasure& mu, const SampledFunction& f, double p) {
    double knee = 1.0;
    if (mu.dim() == 1 && mu.size() > 1) {
        const auto prob = OracleProblem::from(mu, f, p);
        const double s = oracle_seminorm(prob, prob.f);
        const double m = min_constant_residual(prob);
        if (s > 0.0 && m > 0.0) knee = m / s;
    }
    return log_grid(knee / 100.0, knee * 100.0, 32);
}

std::vector<KCurvePoint> k_curve(const AtomicMeasure& mu, const SampledFunction& f, const Params& prm,
                                 const std::vector<double>& t_grid, std::size_t search_budget) {
    for (std::size_t i = 0; i < t_grid.size(); ++i)
        if (!(t_grid[i] > 0.0) || (i > 0 && !(t_grid[i] > t_grid[i - 1])))
            throw InputError("t grid must be positive and ascending");
    std::vector<KCurvePoint> out;
    for (double t : t_grid) {
        const Construction con = Construction::build(mu.scaled(std::pow(t, -prm.p)), prm);
        const Decomposition d = build_extension(con, f);
        KCurvePoint pt;
        pt.t = t;
        pt.upper = t * (quadrature_seminorm(d).value + mu_norm_f2(d));
        const auto lac = partition_lacunae(con.cover);
        const auto pf = construct_proof_family(con, lac);
        double best = family_sum(pf.fa, Variant::CR, con.mu, f, prm.p);
        if (search_budget > 0) {
            FamilyRules rules;
            rules.gamma = prm.gamma;
            best = std::max(best, search_lower_bound(con.mu, f, prm.p, Variant::CR, search_budget, prm.seed, rules).value);
        }
        pt.lower = t * std::pow(best, 1.0 / prm.p);
        if (mu.dim() == 1) pt.oracle = k_exact(OracleProblem::from(mu, f, prm.p, t)).value;
        out.push_back(pt);
    }
    return out;
}

}  // namespace sumspace
