#include "sumspace/io.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <fmt/format.h>

#include "json.hpp"
#include "sumspace/error.hpp"

namespace sumspace {

namespace {

using json = Json;

json parse(std::string_view text, const char* what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(fmt::format("{}: {}", what, e.what()));
    }
}

const json& field(const json& j, const char* key, const char* what) {
    if (!j.is_object() || !j.contains(key)) throw InputError(fmt::format("{}: missing \"{}\"", what, key));
    return j.at(key);
}

double number(const json& j, const char* what) {
    if (!j.is_number()) throw InputError(fmt::format("{}: expected a number", what));
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw InputError(fmt::format("{}: non-finite number", what));
    return v;
}

std::vector<double> numbers(const json& j, const char* what) {
    if (!j.is_array()) throw InputError(fmt::format("{}: expected an array", what));
    std::vector<double> out;
    for (const json& e : j) out.push_back(number(e, what));
    return out;
}

Point point_of(const json& j, int n, const char* what) {
    const std::vector<double> c = numbers(j, what);
    if (static_cast<int>(c.size()) != n) throw InputError(fmt::format("{}: expected {} coordinates", what, n));
    return Point::from(c);
}

std::vector<Cube> cubes_of(const json& j, int n, const char* what) {
    if (!j.is_array()) throw InputError(fmt::format("{}: expected an array of cubes", what));
    std::vector<Cube> out;
    for (const json& e : j) {
        const double r = number(field(e, "r", what), what);
        if (!(r > 0.0)) throw InputError(fmt::format("{}: cube radius must be positive", what));
        out.emplace_back(point_of(field(e, "c", what), n, what), r);
    }
    return out;
}

std::vector<std::size_t> indices(const json& j, std::size_t bound, const char* what) {
    if (!j.is_array()) throw InputError(fmt::format("{}: expected an array of indices", what));
    std::vector<std::size_t> out;
    for (const json& e : j) {
        if (!e.is_number_integer() || e.get<long long>() < 0 || static_cast<std::size_t>(e.get<long long>()) >= bound)
            throw InputError(fmt::format("{}: index out of range", what));
        out.push_back(static_cast<std::size_t>(e.get<long long>()));
    }
    return out;
}

json num(double x) { return std::isfinite(x) ? json(round9(x)) : json(nullptr); }

json coords(const Point& x) {
    json a = json::array();
    for (int i = 0; i < x.n; ++i) a.push_back(num(x[i]));
    return a;
}

json cube(const Cube& q) { return json{{"c", coords(q.center)}, {"r", num(q.half_side)}}; }


}  // namespace

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError(fmt::format("cannot read {}", path));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) throw InputError(fmt::format("cannot write {}", path));
}

AtomicMeasure parse_measure(std::string_view text) {
    const char* what = "measure";
    const json j = parse(text, what);
    const json& jn = field(j, "n", what);
    if (!jn.is_number_integer() || (jn.get<int>() != 1 && jn.get<int>() != 2))
        throw InputError("measure: n must be 1 or 2");
    const int n = jn.get<int>();
    const json& ja = field(j, "atoms", what);
    if (!ja.is_array() || ja.empty()) throw InputError("measure: atoms must be a non-empty array");
    std::vector<Atom> atoms;
    for (const json& a : ja) {
        const double w = number(field(a, "w", what), what);
        if (!(w > 0.0)) throw InputError("measure: weights must be positive");
        atoms.push_back({point_of(field(a, "x", what), n, what), w});
    }
    return AtomicMeasure(n, std::move(atoms));
}

std::vector<double> parse_function(std::string_view text) {
    const json j = parse(text, "function");
    return numbers(field(j, "values", "function"), "function");
}

FamilyAssignment parse_family(std::string_view text, int n) {
    const char* what = "family";
    const json j = parse(text, what);
    FamilyAssignment fa;
    fa.family = cubes_of(field(j, "cubes", what), n, what);
    if (j.contains("pool")) fa.pool = cubes_of(j.at("pool"), n, what);
    const std::size_t bound = fa.targets().size();
    fa.prime = indices(field(j, "prime", what), bound, what);
    fa.dprime = indices(field(j, "dprime", what), bound, what);
    if (fa.prime.size() != fa.family.size() || fa.dprime.size() != fa.family.size())
        throw InputError("family: prime and dprime must have one entry per cube");
    return fa;
}

AtomicMeasure read_measure(const std::string& path) { return parse_measure(read_file(path)); }

SampledFunction read_function(const std::string& path, const AtomicMeasure& mu) {
    const std::vector<double> raw = parse_function(read_file(path));
    if (raw.size() != mu.input_size())
        throw InputError(fmt::format("function has {} values for {} atoms", raw.size(), mu.input_size()));
    return align_values(mu, raw);
}

FamilyAssignment read_family(const std::string& path, int n) { return parse_family(read_file(path), n); }

double round9(double x) {
    if (!std::isfinite(x) || x == 0.0) return x;
    return std::stod(fmt::format("{:.9g}", x));
}

std::string fmt9(double x) { return fmt::format("{:.9g}", x); }

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }
Json json_number(double x) { return num(x); }
Json json_point(const Point& x) { return coords(x); }
Json json_cube(const Cube& q) { return cube(q); }

Json measure_json(const AtomicMeasure& mu) {
    json atoms = json::array();
    for (std::size_t i = 0; i < mu.size(); ++i) atoms.push_back({{"x", coords(mu.point(i))}, {"w", num(mu.weight(i))}});
    return json{{"n", mu.dim()}, {"atoms", atoms}};
}

Json family_json(const FamilyAssignment& fa) {
    json j;
    j["cubes"] = json::array();
    for (const Cube& q : fa.family) j["cubes"].push_back(cube(q));
    if (!fa.pool.empty()) {
        j["pool"] = json::array();
        for (const Cube& q : fa.pool) j["pool"].push_back(cube(q));
    }
    j["prime"] = fa.prime;
    j["dprime"] = fa.dprime;
    return j;
}

Json net_json(const ConcentrationNet& net) {
    json pts = json::array();
    for (const NetPoint& e : net.points) pts.push_back({{"e", coords(e.e)}, {"R", num(e.R)}, {"layer", e.layer}});
    return json{{"points", pts},
                     {"working_box", cube(net.box)},
                     {"delta_grid", num(net.delta_grid)},
                     {"refinement_rounds", net.refinement_rounds},
                     {"separation_drops", net.separation_drops}};
}

Json cover_json(const WhitneyCover& cover) {
    json cubes = json::array();
    for (std::size_t i = 0; i < cover.size(); ++i) {
        const WhitneyCube& w = cover.cubes[i];
        cubes.push_back({{"id", i},
                         {"c", coords(w.q.center)},
                         {"r", num(w.q.half_side)},
                         {"depth", w.depth},
                         {"core", w.core},
                         {"boundary", w.boundary},
                         {"anchor", w.anchor},
                         {"neighbors", w.neighbors}});
    }
    return json{{"working_box", cube(cover.box)},
                     {"tau", num(cover.tau)},
                     {"eta", num(cover.eta)},
                     {"max_degree", cover.max_degree()},
                     {"cubes", cubes}};
}

Json lacunae_json(const LacunaPartition& part, const WhitneyCover& cover) {
    const LacunaStats st = lacuna_stats(part, cover);
    json ls = json::array();
    for (std::size_t i = 0; i < part.lacunae.size(); ++i) {
        const Lacuna& l = part.lacunae[i];
        ls.push_back({{"id", i},
                      {"kind", l.kind == LacunaKind::true_lacuna ? "true" : "elementary"},
                      {"members", l.members},
                      {"V", l.V},
                      {"q_min", l.q_min},
                      {"q_max", l.q_max},
                      {"unbounded", l.unbounded},
                      {"projection", l.projection},
                      {"projection_gamma", num(l.projection_gamma)}});
    }
    json stats{{"true_count", st.true_count},
               {"elementary_count", st.elementary_count},
               {"true_true_contacts", st.true_true_contacts},
               {"max_contacts", st.max_contacts},
               {"max_multiplicity", st.max_multiplicity},
               {"max_gamma", num(st.max_gamma)},
               {"cld_min", num(st.cld_min)},
               {"cld_max", num(st.cld_max)}};
    return json{{"stats", stats}, {"lacunae", ls}};
}

Json report_json(const Report& rep) {
    json checks = json::array();
    for (const CheckResult& c : rep.checks)
        checks.push_back({{"name", c.name},
                          {"checked", c.checked},
                          {"violations", c.violations},
                          {"worst", num(c.worst)},
                          {"first_violation", c.first_violation}});
    return json{{"ok", rep.ok()}, {"checks", checks}};
}

std::string kcurve_csv(const std::vector<KCurvePoint>& pts) {
    std::string out = "t,lower,upper,oracle\n";
    for (const KCurvePoint& k : pts)
        out += fmt::format("{},{},{},{}\n", fmt9(k.t), fmt9(k.lower), fmt9(k.upper), k.oracle ? fmt9(*k.oracle) : "");
    return out;
}

Json kcurve_json(const std::vector<KCurvePoint>& pts) {
    json a = json::array();
    for (const KCurvePoint& k : pts)
        a.push_back({{"t", num(k.t)}, {"lower", num(k.lower)}, {"upper", num(k.upper)},
                     {"oracle", k.oracle ? num(*k.oracle) : json(nullptr)}});
    return json{{"points", a}};
}

}  // namespace sumspace
