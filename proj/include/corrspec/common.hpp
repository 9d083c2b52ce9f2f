#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace corrspec {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// A parameter rejected by a precondition of the theory (wrong prime class,
/// even m, e not dividing m, ...). The message names the violated constraint.
struct ParamError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Requested field exceeds the in-memory table cap.
struct CapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A cyclotomic integer that is not of the form u + v*sqrt(p).
struct NotInQuadraticField : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A correlation value outside the six expected classes. Seeing this means a
/// theorem violation (or a bug) and is always surfaced loudly.
struct ClassifyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One named verification check with both sides kept for reporting.
/// Audits accumulate; they never abort a run.
struct AuditCheck {
    std::string name;
    bool pass = false;
    std::string observed;
    std::string expected;

    bool operator==(const AuditCheck&) const = default;
};

inline bool all_pass(const std::vector<AuditCheck>& checks) {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

std::string rational_to_string(const Rational& r);
Rational rational_from_string(const std::string& s);

} // namespace corrspec
