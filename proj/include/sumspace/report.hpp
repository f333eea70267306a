#pragma once

#include <cstddef>
#include <deque>
#include <string>
#include <vector>

namespace sumspace {

// Tally for one named invariant. `worst` is the largest lhs/rhs seen.
struct CheckResult {
    std::string name;
    std::size_t checked = 0;
    std::size_t violations = 0;
    double worst = 0.0;
    std::string first_violation;

    // Records lhs <= rhs * (1 + slack). Returns whether it held.
    bool le(double lhs, double rhs, double slack, const std::string& where);
    // Records a yes/no condition.
    bool require(bool ok, const std::string& where);
};

struct Report {
    std::deque<CheckResult> checks;  // deque: references stay valid on insert

    CheckResult& operator[](const std::string& name);
    const CheckResult* find(const std::string& name) const;
    bool ok() const;
    std::size_t violations() const;
    void merge(const Report& other);
    std::string to_text() const;
};

}  // namespace sumspace
