#include "kloo/reports.hpp"

#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "json.hpp"

namespace kloo {

using ordered_json = nlohmann::ordered_json;

std::string format_sig10(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

double round_sig10(double v) { return std::strtod(format_sig10(v).c_str(), nullptr); }

const char* to_string(ParameterPolicy::Kind kind) {
  switch (kind) {
    case ParameterPolicy::Kind::AllPairs: return "all_pairs";
    case ParameterPolicy::Kind::FixedAAllB: return "fixed_a_all_b";
    case ParameterPolicy::Kind::Sampled: return "sampled";
  }
  return "?";
}

std::optional<ParameterPolicy::Kind> policy_kind_from_string(const std::string& token) {
  if (token == "fixed" || token == "fixed_a_all_b") return ParameterPolicy::Kind::FixedAAllB;
  if (token == "all" || token == "all_pairs") return ParameterPolicy::Kind::AllPairs;
  if (token == "sampled") return ParameterPolicy::Kind::Sampled;
  return std::nullopt;
}

std::optional<CheckName> check_from_token(const std::string& token) {
  if (token == "sq") return CheckName::SqIdentity;
  if (token == "y") return CheckName::YDecomposition;
  if (token == "suml") return CheckName::SumOverL;
  if (token == "moment") return CheckName::SecondMoment;
  if (token == "bounds") return CheckName::Bounds;
  return std::nullopt;
}

namespace {

ordered_json policy_json(const ParameterPolicy& policy) {
  ordered_json j;
  j["kind"] = to_string(policy.kind);
  if (policy.kind == ParameterPolicy::Kind::Sampled) {
    j["samples"] = policy.samples;
    j["seed"] = policy.seed;
  }
  return j;
}

ordered_json extreme_json(const ExtremeEntry& e) {
  ordered_json j;
  j["value"] = round_sig10(e.value);
  j["p"] = e.p;
  j["a"] = e.a;
  j["b"] = e.b;
  return j;
}

ordered_json counterexample_json(const Counterexample& cx) {
  ordered_json j;
  j["p"] = cx.p;
  j["a"] = cx.a;
  j["b"] = cx.b;
  j["check"] = to_string(cx.check);
  j["detail"] = cx.detail;
  return j;
}

}  // namespace

std::string to_json(const IdentityReport& report) {
  ordered_json j;
  j["report"] = "identity_check";
  j["p"] = report.p;
  j["a"] = report.a;
  j["b"] = report.b;
  j["check"] = to_string(report.check);
  if (report.exact_pass) j["exact_pass"] = *report.exact_pass;
  j["float_residual"] = round_sig10(report.float_residual);
  j["tolerance"] = round_sig10(float_tolerance(report.p));
  j["passed"] = report.passed();
  j["elapsed_seconds"] = round_sig10(report.elapsed.count());
  return j.dump(2) + "\n";
}

std::string to_json(const BoundReport& report) {
  ordered_json j;
  j["report"] = "bounds_check";
  j["p"] = report.p;
  j["a"] = report.a;
  j["b"] = report.b;
  j["abs_value"] = round_sig10(report.abs_value);
  j["weil_ratio"] = round_sig10(report.weil_ratio);
  j["kloos_ratio"] = round_sig10(report.kloos_ratio);
  j["corollary_ratio"] = round_sig10(report.corollary_ratio);
  j["passed"] = report.within_bounds();
  return j.dump(2) + "\n";
}

std::string to_json(const ScanReport& report) {
  ordered_json j;
  j["report"] = "scan";
  j["range"] = ordered_json{{"lo", report.lo}, {"hi", report.hi}};
  j["policy"] = policy_json(report.policy);
  if (report.r) {
    j["r"] = *report.r;
  } else {
    j["mode"] = to_string(report.mode);
    ordered_json checks = ordered_json::array();
    for (const auto check : report.checks) checks.push_back(to_string(check));
    j["checks"] = checks;
  }
  j["totals"] =
      ordered_json{{"run", report.totals.run}, {"passed", report.totals.passed}};

  ordered_json worst;
  if (report.worst_weil) worst["weil_ratio"] = extreme_json(*report.worst_weil);
  if (report.worst_kloos) worst["kloos_ratio"] = extreme_json(*report.worst_kloos);
  if (report.worst_corollary) {
    worst["corollary_ratio"] = extreme_json(*report.worst_corollary);
  }
  if (report.worst_kr_ratio) worst["kr_ratio"] = extreme_json(*report.worst_kr_ratio);
  if (report.worst_residual) {
    ordered_json e = extreme_json(ExtremeEntry{report.worst_residual->value,
                                               report.worst_residual->p,
                                               report.worst_residual->a,
                                               report.worst_residual->b});
    e["check"] = to_string(report.worst_residual->check);
    worst["float_residual"] = e;
  }
  j["worst"] = worst;

  if (report.weil_sentinel) {
    j["weil_sentinel"] = ordered_json{{"threshold", round_sig10(report.weil_sentinel->threshold)},
                                      {"passed", report.weil_sentinel->passed}};
  }

  ordered_json cxs = ordered_json::array();
  for (const auto& cx : report.counterexamples) cxs.push_back(counterexample_json(cx));
  j["counterexamples"] = cxs;
  return j.dump(2) + "\n";
}

std::string to_csv(const ScanReport& report) {
  std::string out =
      "p,a,b,check,exact_pass,float_residual,weil_ratio,kloos_ratio,corollary_ratio\n";
  for (const auto& row : report.rows) {
    out += std::to_string(row.p);
    out += ',';
    out += std::to_string(row.a);
    out += ',';
    out += std::to_string(row.b);
    out += ',';
    out += to_string(row.check);
    out += ',';
    if (row.exact_pass) out += *row.exact_pass ? "true" : "false";
    out += ',';
    if (row.float_residual) out += format_sig10(*row.float_residual);
    out += ',';
    if (row.weil_ratio) out += format_sig10(*row.weil_ratio);
    out += ',';
    if (row.kloos_ratio) out += format_sig10(*row.kloos_ratio);
    out += ',';
    if (row.corollary_ratio) out += format_sig10(*row.corollary_ratio);
    out += '\n';
  }
  return out;
}

std::string to_human(const ScanReport& report) {
  std::ostringstream out;
  out << "scan: primes " << report.lo << ".." << report.hi << ", policy "
      << to_string(report.policy.kind);
  if (report.policy.kind == ParameterPolicy::Kind::Sampled) {
    out << " (samples=" << report.policy.samples << " seed=" << report.policy.seed << ")";
  }
  if (report.r) {
    out << ", r=" << *report.r;
  } else {
    out << ", mode " << to_string(report.mode) << ", checks";
    for (const auto check : report.checks) out << ' ' << to_string(check);
  }
  out << "\n";
  out << "checks run:    " << report.totals.run << "\n";
  out << "checks passed: " << report.totals.passed << "\n";

  auto print_extreme = [&](const char* label, const std::optional<ExtremeEntry>& e) {
    if (!e) return;
    out << label << format_sig10(e->value) << " at p=" << e->p << " a=" << e->a
        << " b=" << e->b << "\n";
  };
  print_extreme("worst weil_ratio:      ", report.worst_weil);
  print_extreme("worst kloos_ratio:     ", report.worst_kloos);
  print_extreme("worst corollary_ratio: ", report.worst_corollary);
  print_extreme("max |K_r|/p^(3/4):     ", report.worst_kr_ratio);
  if (report.worst_residual) {
    out << "worst float residual:  " << format_sig10(report.worst_residual->value)
        << " at p=" << report.worst_residual->p << " a=" << report.worst_residual->a
        << " b=" << report.worst_residual->b << " ("
        << to_string(report.worst_residual->check) << ")\n";
  }
  if (report.weil_sentinel) {
    out << "weil sentinel " << format_sig10(report.weil_sentinel->threshold) << ": "
        << (report.weil_sentinel->passed ? "reached" : "NOT reached") << "\n";
  }
  if (report.counterexamples.empty()) {
    out << "counterexamples: none\n";
  } else {
    out << "counterexamples: " << report.counterexamples.size() << "\n";
    for (const auto& cx : report.counterexamples) {
      out << "  p=" << cx.p << " a=" << cx.a << " b=" << cx.b << " "
          << to_string(cx.check) << ": " << cx.detail << "\n";
    }
  }
  return out.str();
}

}  // namespace kloo
