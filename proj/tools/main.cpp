// sumspace command-line front end.

#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "sumspace/decompose.hpp"
#include "sumspace/error.hpp"
#include "sumspace/functional.hpp"
#include "sumspace/io.hpp"
#include "sumspace/lacunae.hpp"
#include "sumspace/log.hpp"
#include "sumspace/oracle1d.hpp"
#include "sumspace/selftest.hpp"

using namespace sumspace;

namespace {

struct RunConfig {
    std::string measure, function, family, out = "-", format, t_grid;
    double p = 0.0;
    std::optional<double> tau, gamma;
    std::uint64_t seed = 0;
    bool lacunae = false;
};

Params params_for(const RunConfig& rc, int n) {
    if (!(rc.p > n)) throw InputError(fmt::format("--p must exceed the dimension n = {}", n));
    Params prm;
    prm.p = rc.p;
    prm.seed = rc.seed;
    if (rc.tau) {
        prm.tau = *rc.tau;
        prm.gamma = 256.0 * prm.tau * prm.tau;
    }
    if (rc.gamma) prm.gamma = *rc.gamma;
    prm.validate(n);
    return prm;
}

std::string format_or(const RunConfig& rc, const char* fallback) { return rc.format.empty() ? fallback : rc.format; }

// "a:b:k" -> k log-spaced points from a to b.
std::vector<double> parse_t_grid(const std::string& s) {
    double a = 0, b = 0;
    long long k = 0;
    char tail = 0;
    if (std::sscanf(s.c_str(), "%lf:%lf:%lld%c", &a, &b, &k, &tail) != 3 || !(a > 0.0) || !(b >= a) || k < 1 ||
        (k == 1 && b != a))
        throw InputError(fmt::format("--t-grid expects a:b:k with 0 < a <= b and k >= 1, got \"{}\"", s));
    return log_grid(a, b, static_cast<std::size_t>(k));
}

int finish(const RunConfig& rc, const Json& j, bool ok) {
    write_output(rc.out, dump_json(j));
    return ok ? 0 : 2;
}

int cmd_net(const RunConfig& rc) {
    const AtomicMeasure mu = read_measure(rc.measure);
    const Construction con = Construction::build(mu, params_for(rc, mu.dim()));
    const Report rep = verify_concentration(con.net, con.mu, rc.p, rc.seed);
    Json j = net_json(con.net);
    j["report"] = report_json(rep);
    return finish(rc, j, rep.ok());
}

int cmd_whitney(const RunConfig& rc) {
    const AtomicMeasure mu = read_measure(rc.measure);
    const Params prm = params_for(rc, mu.dim());
    const Construction con = Construction::build(mu, prm);
    Report rep = verify_whitney(con.cover, con.mu, prm);
    Json j;
    if (rc.lacunae) {
        const LacunaPartition lac = partition_lacunae(con.cover);
        rep.merge(verify_lacunae(lac, con.cover));
        j = lacunae_json(lac, con.cover);
    } else {
        rep.merge(verify_partition(con.cover, rc.seed));
        j = cover_json(con.cover);
    }
    j["report"] = report_json(rep);
    return finish(rc, j, rep.ok());
}

int cmd_decompose(const RunConfig& rc) {
    const AtomicMeasure mu = read_measure(rc.measure);
    const Construction con = Construction::build(mu, params_for(rc, mu.dim()));
    const SampledFunction f = read_function(rc.function, con.mu);
    const Decomposition d = build_extension(con, f);
    const QuadratureResult q = quadrature_seminorm(d);
    const double m = mu_norm_f2(d);
    Json atoms = Json::array();
    for (std::size_t i = 0; i < con.mu.size(); ++i)
        atoms.push_back({{"x", json_point(con.mu.point(i))},
                         {"f", json_number(f[i])},
                         {"f1", json_number(d.f1_atoms[i])},
                         {"f2", json_number(d.f2_values[i])}});
    Json net = Json::array();
    for (std::size_t e = 0; e < d.tilde_f1.size(); ++e)
        net.push_back({{"e", json_point(con.net.points[e].e)}, {"f1", json_number(d.tilde_f1[e])}});
    Json j{{"seminorm_f1", json_number(q.value)},
           {"quadrature", {{"interior", json_number(q.interior)},
                           {"exterior", json_number(q.exterior)},
                           {"levels", q.levels},
                           {"rel_change", json_number(q.rel_change)}}},
           {"seminorm_f1_discrete", json_number(discrete_seminorm(d))},
           {"mu_norm_f2", json_number(m)},
           {"upper", json_number(q.value + m)},
           {"net", net},
           {"atoms", atoms}};
    return finish(rc, j, true);
}

int cmd_estimate(const RunConfig& rc) {
    const AtomicMeasure mu = read_measure(rc.measure);
    const Params prm = params_for(rc, mu.dim());
    const Construction con = Construction::build(mu, prm);
    const SampledFunction f = read_function(rc.function, con.mu);
    const LacunaPartition lac = partition_lacunae(con.cover);
    const ProofFamily pf = construct_proof_family(con, lac);
    FamilyRules rules;
    rules.gamma = prm.gamma;
    const double ref2 = eval_weighted_pairs(pf.ref2, con.mu, f, prm.p);

    const std::string fmt_ = format_or(rc, "json");
    if (fmt_ == "csv") {
        std::string out = "variant,value,admissible\n";
        for (Variant v : kAllVariants)
            out += fmt::format("{},{},{}\n", variant_name(v), fmt9(family_sum(pf.fa, v, con.mu, f, prm.p)),
                               check_family(pf.fa, v, con.mu, prm.p, rules).ok ? 1 : 0);
        out += fmt::format("REF2,{},1\n", fmt9(ref2));
        write_output(rc.out, out);
        return 0;
    }
    Json vs = Json::object();
    for (Variant v : kAllVariants) {
        const double s = family_sum(pf.fa, v, con.mu, f, prm.p);
        const Admissibility ad = check_family(pf.fa, v, con.mu, prm.p, rules);
        vs[variant_name(v)] = {{"value", json_number(s)},
                               {"root", json_number(std::pow(s, 1.0 / prm.p))},
                               {"admissible", ad.ok},
                               {"reason", ad.reason}};
    }
    Json j{{"variants", vs},
           {"ref2", {{"value", json_number(ref2)}, {"root", json_number(std::pow(ref2, 1.0 / prm.p))}}},
           {"family", {{"size", pf.fa.size()},
                       {"q1", pf.q1_count},
                       {"q2", pf.q2_count},
                       {"pool_ke", pf.n_ke},
                       {"pool_a", pf.n_a},
                       {"dropped", pf.dropped},
                       {"gamma_needed", json_number(pf.gamma_needed)},
                       {"pool_multiplicity", pf.pool_multiplicity}}}};
    return finish(rc, j, true);
}

int cmd_kcurve(const RunConfig& rc) {
    const AtomicMeasure mu = read_measure(rc.measure);
    const Params prm = params_for(rc, mu.dim());
    const SampledFunction f = read_function(rc.function, mu);
    const std::vector<double> grid = rc.t_grid.empty() ? default_t_grid(mu, f, prm.p) : parse_t_grid(rc.t_grid);
    const std::vector<KCurvePoint> pts = k_curve(mu, f, prm, grid);
    const std::string fmt_ = format_or(rc, "csv");
    write_output(rc.out, fmt_ == "csv" ? kcurve_csv(pts) : dump_json(kcurve_json(pts)));
    return 0;
}

int cmd_oracle(const RunConfig& rc) {
    const AtomicMeasure mu = read_measure(rc.measure);
    if (mu.dim() != 1) throw InputError("oracle is one-dimensional");
    if (!(rc.p > 1.0)) throw InputError("--p must exceed the dimension n = 1");
    const SampledFunction f = read_function(rc.function, mu);
    const OracleResult r = sigma_norm_exact(OracleProblem::from(mu, f, rc.p));
    const std::string fmt_ = format_or(rc, "text");
    if (fmt_ == "json") {
        Json v = Json::array();
        for (double x : r.v) v.push_back(json_number(x));
        return finish(rc, Json{{"value", json_number(r.value)}, {"lower", json_number(r.lower)},
                               {"gap", json_number(r.gap)}, {"v", v}},
                      true);
    }
    write_output(rc.out, fmt9(r.value) + "\n");
    return 0;
}

int cmd_validate_family(const RunConfig& rc) {
    const AtomicMeasure mu = read_measure(rc.measure);
    const Params prm = params_for(rc, mu.dim());
    const SampledFunction f = read_function(rc.function, mu);
    const FamilyAssignment fa = read_family(rc.family, mu.dim());
    FamilyRules rules;
    rules.gamma = prm.gamma;
    Json vs = Json::object();
    bool cr_ok = false;
    for (Variant v : kAllVariants) {
        const Admissibility ad = check_family(fa, v, mu, prm.p, rules);
        if (v == Variant::CR) cr_ok = ad.ok;
        vs[variant_name(v)] = {{"admissible", ad.ok},
                               {"reason", ad.reason},
                               {"value", ad.ok ? json_number(family_sum(fa, v, mu, f, prm.p)) : Json(nullptr)}};
    }
    const Admissibility cr = check_family(fa, Variant::CR, mu, prm.p, rules);
    Json j{{"size", fa.size()},
           {"gamma", json_number(rules.gamma)},
           {"gamma_needed", json_number(cr.gamma_needed)},
           {"multiplicity", cr.multiplicity},
           {"variants", vs}};
    return finish(rc, j, cr_ok);
}

int cmd_selftest(const RunConfig& rc) {
    SelftestOptions opt;
    opt.seed = rc.seed;
    const Report rep = run_selftest(opt);
    if (format_or(rc, "text") == "json") {
        Json j = report_json(rep);
        j["seed"] = rc.seed;
        return finish(rc, j, rep.ok());
    }
    write_output(rc.out, selftest_text(opt, rep));
    return rep.ok() ? 0 : 2;
}

}  // namespace

int run(int argc, char** argv) {
    CLI::App app{"Sum-space decompositions for atomic measures"};
    app.require_subcommand(1);
    RunConfig rc;

    auto add_common = [&](CLI::App* sc, bool need_function) {
        sc->add_option("--measure", rc.measure, "measure JSON")->required();
        auto* fn = sc->add_option("--function", rc.function, "function JSON");
        if (need_function) fn->required();
        sc->add_option("--p", rc.p, "exponent p > n")->required();
        sc->add_option("--tau", rc.tau, "dilation constant tau >= 9");
        sc->add_option("--gamma", rc.gamma, "containment constant override");
        sc->add_option("--seed", rc.seed, "random seed");
        sc->add_option("--t-grid", rc.t_grid, "a:b:k, log-spaced");
        sc->add_option("--out", rc.out, "output path, - for stdout");
        sc->add_option("--format", rc.format, "json|csv")->check(CLI::IsMember({"json", "csv", "text"}));
    };

    auto* net = app.add_subcommand("net", "build and verify the concentration net");
    add_common(net, false);
    auto* wh = app.add_subcommand("whitney", "Whitney cover, partition and lacunae");
    wh->alias("inspect");
    add_common(wh, false);
    wh->add_flag("--lacunae", rc.lacunae, "report lacunae instead of the cover");
    auto* dec = app.add_subcommand("decompose", "f = f1 + f2 with both norms");
    add_common(dec, true);
    auto* est = app.add_subcommand("estimate", "constructed-family functionals, all variants");
    add_common(est, true);
    auto* kc = app.add_subcommand("kcurve", "K-functional bounds on a t grid");
    add_common(kc, true);
    auto* orc = app.add_subcommand("oracle", "exact one-dimensional sum-space norm");
    add_common(orc, true);
    auto* vf = app.add_subcommand("validate-family", "admissibility and value of a family");
    add_common(vf, true);
    vf->add_option("--family", rc.family, "family JSON")->required();
    auto* st = app.add_subcommand("selftest", "all invariant suites on a seeded corpus");
    st->add_option("--seed", rc.seed, "random seed");
    st->add_option("--out", rc.out, "output path, - for stdout");
    st->add_option("--format", rc.format, "text|json")->check(CLI::IsMember({"json", "text"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (net->parsed()) return cmd_net(rc);
        if (wh->parsed()) return cmd_whitney(rc);
        if (dec->parsed()) return cmd_decompose(rc);
        if (est->parsed()) return cmd_estimate(rc);
        if (kc->parsed()) return cmd_kcurve(rc);
        if (orc->parsed()) return cmd_oracle(rc);
        if (vf->parsed()) return cmd_validate_family(rc);
        if (st->parsed()) return cmd_selftest(rc);
    } catch (const InputError& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 1;
    } catch (const VerificationError& e) {
        fmt::print(stderr, "verification failed: {}\n", e.what());
        return 2;
    }
    return 1;
}

int main(int argc, char** argv) { return run(argc, argv); }
