#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "homocp/measure_lp.h"
#include "homocp/ocp_model.h"
#include "homocp/sdp.h"

namespace homocp {

enum class ReportFormat { kTable, kJson };

/// "table" or "json"; ConfigError otherwise.
ReportFormat ReportFormatFromName(std::string_view name);

struct OracleSettings {
  int N = 64;
  int levels = 128;
};

struct RunConfig {
  ProblemSource problem;
  std::vector<int> orders;
  SolverSettings solver;
  ReportFormat format = ReportFormat::kTable;
  /// When set, every assembled relaxation is written there as SDPA.
  std::optional<std::string> export_dir;
  std::optional<OracleSettings> oracle;
};

struct OrderResult {
  int order = 0;
  int degree = 0;
  double lower_bound = 0.0;
  SolveStatus status = SolveStatus::kNumericalError;
  bool flat = false;
  double row_residual_inf = 0.0;
  double psd_min_eig = 0.0;
  /// Total mass of each measure, ⟨1, ν_i⟩.
  std::vector<double> mass;
  int iterations = 0;
  double seconds = 0.0;

  bool operator==(const OrderResult&) const = default;
};

struct OracleResult {
  int N = 0;
  int levels = 0;
  double upper_bound = 0.0;
  double seconds = 0.0;

  bool operator==(const OracleResult&) const = default;
};

struct RunReport {
  std::string problem;
  std::vector<OrderResult> orders;
  std::optional<OracleResult> oracle;

  bool operator==(const RunReport&) const = default;
  /// True iff every order reached optimal or near_optimal.
  bool AllSolved() const;
};

/// "1,2,3", "4" or "min..max". Throws ConfigError.
std::vector<int> ParseOrders(std::string_view text);

/// "lavrentiev" or "brachistochrone"; UnknownLabel otherwise.
ProblemSource BuiltinProblem(std::string_view name);

std::string_view ProblemLabel(const ProblemSource& source);

/// The measure LP used at relaxation order d. Generic problems use test
/// degree DefaultTestDegree(d, r); the Brachistochrone uses 2d - 1.
/// Throws OrderTooSmall for d < 1.
MeasureLP BuildLpForOrder(const ProblemSource& source, int order);

/// Builds, assembles and solves every order (ascending, as listed), with the
/// optional SDPA export and oracle run. Library errors are rethrown with the
/// failing stage prefixed to the message, keeping their type.
RunReport Run(const RunConfig& config);

std::string FormatReport(const RunReport& report, ReportFormat format);
/// Inverse of the json format. Throws ConfigError.
RunReport ParseJsonReport(std::string_view text);

}  // namespace homocp
