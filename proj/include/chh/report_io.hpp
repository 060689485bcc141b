#pragma once

// Report and metrics serialization.
//
// JSON lines: one object per correlated heavy hitter,
//   {"primary":P,"secondary":S,"est_freq":F[,"exact_freq":E]}
// CSV: header "primary,secondary,est_freq[,exact_freq]" then one row per
// correlated heavy hitter. Rows are in canonical (primary, secondary) order.

#include <nlohmann/json.hpp>

#include <ostream>
#include <string>
#include <string_view>

#include "chh/evaluation.hpp"
#include "chh/exact_oracle.hpp"
#include "chh/report.hpp"

namespace chh {

enum class ReportFormat { json, csv };

inline ReportFormat parse_report_format(std::string_view name) {
  if (name == "json" || name == "jsonl") return ReportFormat::json;
  if (name == "csv") return ReportFormat::csv;
  throw std::invalid_argument("unknown report format: " + std::string(name));
}

/// `exact`, when given, adds the exact tuple frequency to each record.
inline void write_report(std::ostream& out, ChhReport report,
                         ReportFormat format,
                         const ExactCounts* exact = nullptr) {
  report.sort();
  if (format == ReportFormat::csv) {
    out << "primary,secondary,est_freq";
    if (exact) out << ",exact_freq";
    out << '\n';
    for (const auto& e : report.chhs) {
      out << e.primary << ',' << e.secondary << ',' << e.freq;
      if (exact) out << ',' << exact->fxy(e.primary, e.secondary);
      out << '\n';
    }
    return;
  }
  for (const auto& e : report.chhs) {
    nlohmann::ordered_json j;
    j["primary"] = e.primary;
    j["secondary"] = e.secondary;
    j["est_freq"] = e.freq;
    if (exact) j["exact_freq"] = exact->fxy(e.primary, e.secondary);
    out << j.dump() << '\n';
  }
}

inline nlohmann::ordered_json to_json(const EvalResult& r) {
  nlohmann::ordered_json j;
  j["recall"] = r.recall;
  j["precision"] = r.precision;
  j["abs_err_max"] = r.abs_err_max;
  j["abs_err_mean"] = r.abs_err_mean;
  j["rel_err_max"] = r.rel_err_max;
  j["rel_err_mean"] = r.rel_err_mean;
  j["updates_per_ms"] = r.updates_per_ms;
  j["space_bytes_model"] = r.space_bytes_model;
  j["reported"] = r.reported;
  j["true_positives"] = r.true_positives;
  j["truth_size"] = r.truth_size;
  return j;
}

inline EvalResult eval_result_from_json(const nlohmann::json& j) {
  EvalResult r;
  r.recall = j.at("recall").get<double>();
  r.precision = j.at("precision").get<double>();
  r.abs_err_max = j.at("abs_err_max").get<double>();
  r.abs_err_mean = j.at("abs_err_mean").get<double>();
  r.rel_err_max = j.at("rel_err_max").get<double>();
  r.rel_err_mean = j.at("rel_err_mean").get<double>();
  r.updates_per_ms = j.at("updates_per_ms").get<double>();
  r.space_bytes_model = j.at("space_bytes_model").get<std::uint64_t>();
  r.reported = j.value("reported", std::uint64_t{0});
  r.true_positives = j.value("true_positives", std::uint64_t{0});
  r.truth_size = j.value("truth_size", std::uint64_t{0});
  return r;
}

inline constexpr std::string_view kEvalCsvHeader =
    "recall,precision,abs_err_max,abs_err_mean,rel_err_max,rel_err_mean,"
    "updates_per_ms,space_bytes_model";

inline void write_eval_csv_fields(std::ostream& out, const EvalResult& r) {
  out << r.recall << ',' << r.precision << ',' << r.abs_err_max << ','
      << r.abs_err_mean << ',' << r.rel_err_max << ',' << r.rel_err_mean << ','
      << r.updates_per_ms << ',' << r.space_bytes_model;
}

}  // namespace chh
