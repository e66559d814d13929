#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "zomd/descent.hpp"

namespace zomd {

inline constexpr const char* kTrajectoryCsvHeader =
    "iter,f,eta,cert_lhs,cert_rhs,cert_pass,M,R,alpha,in_V,evals_cum";

/// Shortest round-trip decimal form ("%.17g"), so identical doubles give identical bytes.
std::string format_double(double value);

/// One line per recorded iterate under kTrajectoryCsvHeader. Step columns are empty on the
/// final row, diagnostic columns are empty for fields without diagnostics.
std::string trajectory_csv(const TrajectoryRecord& record);

/// "iter gap" lines for plotting f(x_j) - f_star against j.
std::string gap_series(const TrajectoryRecord& record, double f_star);

nlohmann::json to_json(const CertificateReport& report);

}  // namespace zomd
