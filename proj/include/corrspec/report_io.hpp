#pragma once

#include <string>

#include "corrspec/spectrum.hpp"

namespace corrspec {

/// JSON document {params, method, counts (tag -> {u, v, count}), audits}.
std::string report_to_json(const SpectrumReport& report);
SpectrumReport report_from_json(const std::string& text);

/// CSV with one row per class; params, method, and audits ride along in
/// structured comment lines so the two formats round-trip to the same report.
std::string report_to_csv(const SpectrumReport& report);
SpectrumReport report_from_csv(const std::string& text);

/// Human-readable table.
std::string report_to_text(const SpectrumReport& report);

} // namespace corrspec
