#include "zomd/report.hpp"

#include <cstdio>
#include <sstream>

namespace zomd {

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

namespace {

template <typename T>
std::string opt(const std::optional<T>& v) {
  if (!v) return {};
  if constexpr (std::is_same_v<T, bool>) {
    return *v ? "1" : "0";
  } else {
    return format_double(*v);
  }
}

}  // namespace

std::string trajectory_csv(const TrajectoryRecord& record) {
  std::ostringstream out;
  out << kTrajectoryCsvHeader << '\n';
  for (const TrajectoryRow& row : record.rows) {
    out << row.iter << ',' << format_double(row.f) << ',' << opt(row.eta) << ','
        << opt(row.cert_lhs) << ',' << opt(row.cert_rhs) << ',' << opt(row.cert_pass) << ',';
    if (row.diag) {
      out << format_double(row.diag->M) << ',' << format_double(row.diag->R) << ','
          << format_double(row.diag->alpha) << ',' << (row.diag->in_V ? 1 : 0) << ',';
    } else {
      out << ",,,,";
    }
    out << row.evals_cum << '\n';
  }
  return out.str();
}

std::string gap_series(const TrajectoryRecord& record, double f_star) {
  std::ostringstream out;
  out << "# iter gap\n";
  for (const TrajectoryRow& row : record.rows) {
    out << row.iter << ' ' << format_double(row.f - f_star) << '\n';
  }
  return out.str();
}

nlohmann::json to_json(const CertificateReport& report) {
  nlohmann::json j;
  j["all_certified"] = report.all_certified;
  j["total_steps"] = report.total_steps;
  j["certified_steps"] = report.certified_steps;
  j["sum_eta"] = report.sum_eta;
  j["bregman_to_start"] = report.bregman_to_start;
  j["rate_term"] = report.rate_term;
  j["floor_term"] = report.floor_term;
  j["bound"] = report.bound;
  j["f_star"] = report.f_star ? nlohmann::json(*report.f_star) : nlohmann::json(nullptr);
  j["achieved_gap"] =
      report.achieved_gap ? nlohmann::json(*report.achieved_gap) : nlohmann::json(nullptr);
  j["final_gap"] = report.final_gap ? nlohmann::json(*report.final_gap) : nlohmann::json(nullptr);
  return j;
}

}  // namespace zomd
