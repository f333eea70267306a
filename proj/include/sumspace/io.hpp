#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "sumspace/concentration.hpp"
#include "sumspace/decompose.hpp"
#include "sumspace/functional.hpp"
#include "sumspace/lacunae.hpp"
#include "sumspace/measure.hpp"
#include "sumspace/report.hpp"
#include "sumspace/whitney.hpp"

namespace sumspace {

using Json = nlohmann::ordered_json;

// Every reader throws InputError on unreadable files or schema violations.
std::string read_file(const std::string& path);
// "-" or "" writes to stdout.
void write_output(const std::string& path, const std::string& text);

// {"n": 1, "atoms": [{"x": [0.0], "w": 1.0}, ...]}
AtomicMeasure parse_measure(std::string_view text);
// {"values": [...]} in input atom order.
std::vector<double> parse_function(std::string_view text);
// {"cubes": [{"c": [..], "r": ..}], "prime": [..], "dprime": [..]} with an
// optional "pool" of cubes in the same format that prime/dprime then index.
FamilyAssignment parse_family(std::string_view text, int n);

AtomicMeasure read_measure(const std::string& path);
SampledFunction read_function(const std::string& path, const AtomicMeasure& mu);
FamilyAssignment read_family(const std::string& path, int n);

// x rounded to 9 significant digits; the JSON writers print it in shortest
// round-trip form, so no more than 9 digits appear.
double round9(double x);
std::string fmt9(double x);
// Two-space indented dump with a trailing newline.
std::string dump_json(const Json& j);
Json json_number(double x);  // round9, null when not finite
Json json_point(const Point& x);
Json json_cube(const Cube& q);

Json measure_json(const AtomicMeasure& mu);
Json family_json(const FamilyAssignment& fa);
Json net_json(const ConcentrationNet& net);
Json cover_json(const WhitneyCover& cover);
Json lacunae_json(const LacunaPartition& part, const WhitneyCover& cover);
Json report_json(const Report& rep);

std::string kcurve_csv(const std::vector<KCurvePoint>& pts);
Json kcurve_json(const std::vector<KCurvePoint>& pts);

}  // namespace sumspace
