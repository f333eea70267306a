#include "sumspace/selftest.hpp"

#include <cmath>
#include <random>

#include <fmt/format.h>

#include "sumspace/decompose.hpp"
#include "sumspace/error.hpp"
#include "sumspace/functional.hpp"
#include "sumspace/instances.hpp"
#include "sumspace/lacunae.hpp"
#include "sumspace/log.hpp"
#include "sumspace/oracle1d.hpp"

namespace sumspace {

namespace {

void instance_suite(const Instance& inst, std::uint64_t seed, std::size_t samples, Report& rep) {
    const int n = inst.mu.dim();
    Params prm;
    prm.p = inst.p;
    prm.seed = seed;
    const Construction con = Construction::build(inst.mu, prm);
    rep.merge(verify_concentration(con.net, con.mu, inst.p, seed, samples));
    rep.merge(verify_whitney(con.cover, con.mu, prm));
    rep.merge(verify_partition(con.cover, seed, samples));
    const LacunaPartition lac = partition_lacunae(con.cover);
    rep.merge(verify_lacunae(lac, con.cover));

    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> g(inst.f.size());
    for (double& v : g) v = u(rng);
    rep.merge(verify_decomposition(con, inst.f, SampledFunction(g), 1.7, -0.3, seed, samples));

    const ProofFamily pf = construct_proof_family(con, lac);
    const Admissibility ad = check_family(pf.fa, Variant::CR, con.mu, inst.p, FamilyRules{});
    rep["functional.proof_family"].require(ad.ok, inst.label + ": " + ad.reason);
    const double L = std::pow(family_sum(pf.fa, Variant::CR, con.mu, inst.f, inst.p), 1.0 / inst.p);
    rep["functional.finite"].require(std::isfinite(L), inst.label);
    if (n != 1) return;

    const Decomposition d = build_extension(con, inst.f);
    const double U = quadrature_seminorm(d).value + mu_norm_f2(d);
    const OracleProblem prob = OracleProblem::from(con.mu, inst.f, inst.p);
    const double O = sigma_norm_exact(prob).value;
    rep["oracle.below_upper"].le(O, U, 1e-9, inst.label);
    for (double t : {1e-3, 1.0, 1e3}) {
        OracleProblem kp = prob;
        kp.t = t;
        const double k = k_exact(kp).value;
        const double r = t * sigma_norm_exact(OracleProblem::from(con.mu.scaled(std::pow(t, -inst.p)), inst.f, inst.p)).value;
        rep["oracle.route_equivalence"].le(std::abs(k - r), 1e-7 * std::max(std::abs(k), 1e-300), 0.0,
                                           fmt::format("{} t={}", inst.label, t));
    }
}

}  // namespace

Report run_selftest(const SelftestOptions& opt) {
    Report rep;
    std::mt19937_64 rng(opt.seed);
    for (std::size_t i = 0; i < opt.families; ++i) {
        const CubeFamily fam = random_family(1 + static_cast<int>(i % 2), 10 + rng() % 40, rng);
        rep.merge(verify_select(fam));
        rep.merge(verify_coloring(fam));
    }
    const double p1[] = {1.5, 2.0, 3.0};
    const double p2[] = {2.5, 3.0};
    std::vector<Instance> suite = random_suite(1, opt.instances_1d, 12, p1, opt.seed);
    for (Instance& inst : random_suite(2, opt.instances_2d, 8, p2, opt.seed + 1)) suite.push_back(std::move(inst));

    for (std::size_t i = 0; i < suite.size(); ++i) {
        const std::uint64_t seed = opt.seed * 1000003ULL + i;
        try {
            instance_suite(suite[i], seed, opt.samples, rep);
        } catch (const VerificationError& e) {
            rep["selftest.errors"].require(false, suite[i].label + ": " + e.what());
        }
        rep["selftest.instances"].require(true, suite[i].label);
        log::debug("selftest: {} done", suite[i].label);
    }
    return rep;
}

std::string selftest_text(const SelftestOptions& opt, const Report& rep) {
    return fmt::format("selftest seed={} instances_1d={} instances_2d={} families={} samples={} result={}\n",
                       opt.seed, opt.instances_1d, opt.instances_2d, opt.families, opt.samples,
                       rep.ok() ? "PASS" : "FAIL") +
           rep.to_text();
}

}  // namespace sumspace
