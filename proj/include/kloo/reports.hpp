#pragma once

#include <optional>
#include <string>

#include "kloo/identities.hpp"

namespace kloo {

/// Fixed float formatting for every emitted report: 10 significant digits,
/// shortest form ("%.10g").
std::string format_sig10(double v);

/// v rounded to the 10-significant-digit grid used by format_sig10; applied
/// before numbers enter JSON documents.
double round_sig10(double v);

const char* to_string(ParameterPolicy::Kind kind);
std::optional<ParameterPolicy::Kind> policy_kind_from_string(const std::string& token);

/// Check-name token used by the CLI (--checks sq,y,suml,moment,bounds).
std::optional<CheckName> check_from_token(const std::string& token);

/// JSON documents (single top-level object, fixed key order, LF newline at
/// the end). The scan-report schema ships in docs/.
std::string to_json(const IdentityReport& report);
std::string to_json(const BoundReport& report);
std::string to_json(const ScanReport& report);

/// CSV log of a scan: header plus one row per executed check, columns
/// p,a,b,check,exact_pass,float_residual,weil_ratio,kloos_ratio,corollary_ratio.
/// Requires the scan to have collected rows. UTF-8, LF line endings.
std::string to_csv(const ScanReport& report);

/// Human-readable summary table.
std::string to_human(const ScanReport& report);

}  // namespace kloo
