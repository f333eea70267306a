#include <cmath>
#include <string>

#include <fmt/format.h>

#include "sumspace/error.hpp"
#include "sumspace/params.hpp"
#include "sumspace/report.hpp"

namespace sumspace {

void Params::validate(int n) const {
    if (!std::isfinite(p) || !(p > n) || p > 64.0)
        throw InputError(fmt::format("p must satisfy {} < p <= 64, got {:.9g}", n, p));
    if (!std::isfinite(tau) || tau < 9.0) throw InputError("tau must be >= 9");
    if (!std::isfinite(gamma) || gamma < 1.0) throw InputError("gamma must be >= 1");
    if (!std::isfinite(box_inflation) || box_inflation < 1.0)
        throw InputError("box_inflation must be >= 1");
}

bool CheckResult::le(double lhs, double rhs, double slack, const std::string& where) {
    ++checked;
    double ratio = rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? INFINITY : 0.0);
    if (ratio > worst) worst = ratio;
    bool ok = lhs <= rhs * (1.0 + slack);
    if (!ok) {
        if (violations == 0)
            first_violation = fmt::format("{}: {:.9g} > {:.9g}", where, lhs, rhs);
        ++violations;
    }
    return ok;
}

bool CheckResult::require(bool ok, const std::string& where) {
    ++checked;
    if (!ok) {
        if (violations == 0) first_violation = where;
        ++violations;
    }
    return ok;
}

CheckResult& Report::operator[](const std::string& name) {
    for (auto& c : checks)
        if (c.name == name) return c;
    CheckResult c;
    c.name = name;
    checks.push_back(c);
    return checks.back();
}

const CheckResult* Report::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

bool Report::ok() const { return violations() == 0; }

std::size_t Report::violations() const {
    std::size_t v = 0;
    for (const auto& c : checks) v += c.violations;
    return v;
}

void Report::merge(const Report& other) {
    for (const auto& c : other.checks) {
        CheckResult& mine = (*this)[c.name];
        mine.checked += c.checked;
        if (mine.violations == 0 && c.violations > 0) mine.first_violation = c.first_violation;
        mine.violations += c.violations;
        if (c.worst > mine.worst) mine.worst = c.worst;
    }
}

std::string Report::to_text() const {
    std::string out;
    for (const auto& c : checks) {
        out += fmt::format("{:<28} checked={:<8} violations={:<4} worst_ratio={:.9g}\n", c.name,
                           c.checked, c.violations, c.worst);
        if (c.violations) out += "    first: " + c.first_violation + "\n";
    }
    return out;
}

}  // namespace sumspace
