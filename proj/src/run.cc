#include "homocp/run.h"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "homocp/errors.h"
#include "homocp/homogenize.h"
#include "homocp/oracle.h"
#include "homocp/relaxation.h"

namespace homocp {

namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

template <typename E>
bool RethrowAs(const Error& e, const std::string& message) {
  if (dynamic_cast<const E*>(&e) == nullptr) return false;
  throw E(message);
}

// Re-raise `e` with the stage prepended, preserving its concrete type.
[[noreturn]] void RethrowInStage(const Error& e, const std::string& stage) {
  const std::string msg = stage + ": " + e.what();
  RethrowAs<ParseError>(e, msg) || RethrowAs<ClearTooSmall>(e, msg) ||
      RethrowAs<MissingAssignment>(e, msg) || RethrowAs<DomainError>(e, msg) ||
      RethrowAs<NotOnSlice>(e, msg) || RethrowAs<OddFreeControl>(e, msg) ||
      RethrowAs<InvalidProblem>(e, msg) || RethrowAs<UnknownLabel>(e, msg) ||
      RethrowAs<OrderTooSmall>(e, msg) || RethrowAs<NoBackend>(e, msg) ||
      RethrowAs<SolverFailure>(e, msg) || RethrowAs<IoError>(e, msg) ||
      RethrowAs<SingularIntegrand>(e, msg) || RethrowAs<BudgetExceeded>(e, msg) ||
      RethrowAs<ConfigError>(e, msg);
  throw Error(msg);
}

template <typename F>
auto InStage(const std::string& stage, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    RethrowInStage(e, stage);
  }
}

std::string FormatFixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

}  // namespace

ReportFormat ReportFormatFromName(std::string_view name) {
  if (name == "table") return ReportFormat::kTable;
  if (name == "json") return ReportFormat::kJson;
  throw ConfigError("unknown report format '" + std::string(name) + "'");
}

bool RunReport::AllSolved() const {
  return std::all_of(orders.begin(), orders.end(),
                     [](const OrderResult& o) { return IsSolved(o.status); });
}

std::vector<int> ParseOrders(std::string_view text) {
  const auto to_int = [&](std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    int v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
      throw ConfigError("bad order '" + std::string(s) + "' in '" + std::string(text) + "'");
    }
    return v;
  };
  std::vector<int> out;
  if (const auto dots = text.find(".."); dots != std::string_view::npos) {
    const int lo = to_int(text.substr(0, dots));
    const int hi = to_int(text.substr(dots + 2));
    if (hi < lo) throw ConfigError("empty order range '" + std::string(text) + "'");
    for (int d = lo; d <= hi; ++d) out.push_back(d);
    return out;
  }
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto end = comma == std::string_view::npos ? text.size() : comma;
    out.push_back(to_int(text.substr(start, end - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

ProblemSource BuiltinProblem(std::string_view name) {
  if (name == "lavrentiev") return LavrentievModified();
  if (name == "brachistochrone") return BrachistochroneMeasureLp(1);
  throw UnknownLabel("unknown builtin '" + std::string(name) + "'");
}

std::string_view ProblemLabel(const ProblemSource& source) {
  return std::visit([](const auto& p) -> std::string_view { return p.label; }, source);
}

MeasureLP BuildLpForOrder(const ProblemSource& source, int order) {
  if (order < 1) throw OrderTooSmall("order " + std::to_string(order) + " is below 1");
  if (const auto* ocp = std::get_if<OcpProblem>(&source)) {
    return BuildPolynomialLp(*ocp, std::max(1, DefaultTestDegree(order, ocp->r)));
  }
  const auto& raw = std::get<RawMeasureLpProblem>(source);
  if (raw.label == "brachistochrone") return BrachistochroneMeasureLp(2 * order - 1).lp;
  return raw.lp;
}

RunReport Run(const RunConfig& config) {
  if (config.orders.empty()) throw ConfigError("no orders requested");
  RunReport report;
  report.problem = std::string(ProblemLabel(config.problem));
  if (config.export_dir) {
    InStage("export", [&] {
      std::error_code ec;
      std::filesystem::create_directories(*config.export_dir, ec);
      if (ec) throw IoError("cannot create '" + *config.export_dir + "': " + ec.message());
      return 0;
    });
  }
  for (int d : config.orders) {
    const std::string tag = " (order " + std::to_string(d) + ")";
    const auto start = Clock::now();
    const MeasureLP lp = InStage("build" + tag, [&] { return BuildLpForOrder(config.problem, d); });
    const MomentRelaxation rel = InStage("assemble" + tag, [&] { return AssembleSdp(lp, d); });
    if (config.export_dir) {
      InStage("export" + tag, [&] {
        const auto path = std::filesystem::path(*config.export_dir) /
                          (report.problem + "_order" + std::to_string(d) + ".dat-s");
        WriteSdpaFile(ToStandardForm(rel), path.string());
        return 0;
      });
    }
    const SolveReport sr = InStage("solve" + tag, [&] { return SolveRelaxation(rel, config.solver); });
    OrderResult o;
    o.order = d;
    o.degree = 2 * d;
    o.lower_bound = sr.lower_bound;
    o.status = sr.status;
    o.flat = sr.flat;
    o.row_residual_inf = sr.row_residual_inf;
    o.psd_min_eig = sr.psd_min_eig;
    for (const auto& m : sr.moments) o.mass.push_back(m.size() ? m(0) : 0.0);
    o.iterations = sr.iterations;
    o.seconds = Seconds(start);
    report.orders.push_back(std::move(o));
  }
  if (config.oracle) {
    report.oracle = InStage("oracle", [&] {
      const auto start = Clock::now();
      const TrajectoryProblem tp = ToTrajectoryProblem(config.problem);
      OracleResult res;
      res.N = config.oracle->N;
      res.levels = config.oracle->levels;
      res.upper_bound = GridSearchUpperBound(tp, res.N, res.levels).first;
      res.seconds = Seconds(start);
      return res;
    });
  }
  return report;
}

std::string FormatReport(const RunReport& report, ReportFormat format) {
  if (format == ReportFormat::kJson) {
    nlohmann::ordered_json j;
    j["problem"] = report.problem;
    j["orders"] = nlohmann::ordered_json::array();
    for (const auto& o : report.orders) {
      nlohmann::ordered_json row;
      row["order"] = o.order;
      row["degree"] = o.degree;
      row["lower_bound"] = o.lower_bound;
      row["status"] = StatusName(o.status);
      row["flat"] = o.flat;
      row["row_residual_inf"] = o.row_residual_inf;
      row["psd_min_eig"] = o.psd_min_eig;
      row["mass"] = o.mass;
      row["iterations"] = o.iterations;
      row["seconds"] = o.seconds;
      if (report.oracle) row["gap"] = report.oracle->upper_bound - o.lower_bound;
      j["orders"].push_back(std::move(row));
    }
    if (report.oracle) {
      j["oracle"] = {{"N", report.oracle->N},
                     {"levels", report.oracle->levels},
                     {"upper_bound", report.oracle->upper_bound},
                     {"seconds", report.oracle->seconds}};
    } else {
      j["oracle"] = nullptr;
    }
    return j.dump(2) + "\n";
  }

  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof(line), "%5s %6s %14s %14s %5s %9s\n", "order", "degree",
                "lower_bound", "status", "flat", "time[s]");
  out << line;
  for (const auto& o : report.orders) {
    std::snprintf(line, sizeof(line), "%5d %6d %14s %14s %5s %9.3f\n", o.order, o.degree,
                  FormatFixed(o.lower_bound, 6).c_str(), std::string(StatusName(o.status)).c_str(),
                  o.flat ? "yes" : "no", o.seconds);
    out << line;
  }
  if (report.oracle) {
    out << "oracle upper bound " << FormatFixed(report.oracle->upper_bound, 6) << " (N="
        << report.oracle->N << ", levels=" << report.oracle->levels << ")";
    if (!report.orders.empty()) {
      out << ", gap " << FormatFixed(report.oracle->upper_bound - report.orders.back().lower_bound, 6);
    }
    out << "\n";
  }
  return out.str();
}

RunReport ParseJsonReport(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    RunReport report;
    report.problem = j.at("problem").get<std::string>();
    for (const auto& row : j.at("orders")) {
      OrderResult o;
      o.order = row.at("order").get<int>();
      o.degree = row.at("degree").get<int>();
      o.lower_bound = row.at("lower_bound").get<double>();
      o.status = StatusFromName(row.at("status").get<std::string>());
      o.flat = row.at("flat").get<bool>();
      o.row_residual_inf = row.at("row_residual_inf").get<double>();
      o.psd_min_eig = row.at("psd_min_eig").get<double>();
      o.mass = row.at("mass").get<std::vector<double>>();
      o.iterations = row.at("iterations").get<int>();
      o.seconds = row.at("seconds").get<double>();
      report.orders.push_back(std::move(o));
    }
    if (j.contains("oracle") && !j.at("oracle").is_null()) {
      const auto& o = j.at("oracle");
      report.oracle = OracleResult{o.at("N").get<int>(), o.at("levels").get<int>(),
                                   o.at("upper_bound").get<double>(), o.at("seconds").get<double>()};
    }
    return report;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad json report: ") + e.what());
  } catch (const Error& e) {
    throw ConfigError(std::string("bad json report: ") + e.what());
  }
}

}  // namespace homocp
