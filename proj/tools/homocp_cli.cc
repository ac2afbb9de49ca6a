// Sweeps relaxation orders for a built-in or configured problem and prints
// the lower bounds.
#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "homocp/errors.h"
#include "homocp/ocp_model.h"
#include "homocp/relaxation.h"
#include "homocp/run.h"

int main(int argc, char** argv) {
  CLI::App app{"Moment-SOS lower bounds for calculus-of-variations problems with unbounded controls"};
  std::string builtin;
  std::string config_path;
  std::string orders;
  std::string report = "table";
  std::string export_dir;
  std::string oracle;
  double tol = 1e-8;
  int max_iterations = 100;
  bool verbose = false;

  auto* b = app.add_option("--builtin", builtin, "lavrentiev | brachistochrone");
  auto* c = app.add_option("--config", config_path, "problem file (key = value lines)");
  b->excludes(c);
  c->excludes(b);
  app.add_option("--orders", orders, "relaxation orders d: '1,2,3' or 'min..max' (default: minimum order)");
  app.add_option("--report", report, "table | json")->check(CLI::IsMember({"table", "json"}));
  app.add_option("--export-sdpa", export_dir, "write every relaxation as SDPA into this directory");
  app.add_option("--oracle", oracle, "grid-search upper bound 'N,LEVELS'");
  app.add_option("--tol", tol, "relative duality gap tolerance");
  app.add_option("--max-iterations", max_iterations, "interior-point iteration limit");
  app.add_flag("--verbose", verbose, "print solver iterations to stderr");
  CLI11_PARSE(app, argc, argv);

  try {
    if (builtin.empty() && config_path.empty()) {
      throw homocp::ConfigError("one of --builtin or --config is required");
    }
    homocp::RunConfig cfg;
    cfg.problem = builtin.empty() ? homocp::LoadProblemConfig(config_path)
                                  : homocp::BuiltinProblem(builtin);
    if (orders.empty()) {
      // Smallest order whose relaxation contains every LP row.
      int d = 1;
      while (homocp::MinOrder(homocp::BuildLpForOrder(cfg.problem, d)) > d) {
        if (++d > 50) throw homocp::ConfigError("could not determine a minimum order");
      }
      cfg.orders = {d};
    } else {
      cfg.orders = homocp::ParseOrders(orders);
    }
    cfg.format = homocp::ReportFormatFromName(report);
    cfg.solver.gap_tolerance = tol;
    cfg.solver.max_iterations = max_iterations;
    cfg.solver.verbose = verbose;
    if (!export_dir.empty()) cfg.export_dir = export_dir;
    if (!oracle.empty()) {
      const auto comma = oracle.find(',');
      if (comma == std::string::npos) throw homocp::ConfigError("--oracle expects N,LEVELS");
      homocp::OracleSettings os;
      try {
        os.N = std::stoi(oracle.substr(0, comma));
        os.levels = std::stoi(oracle.substr(comma + 1));
      } catch (const std::exception&) {
        throw homocp::ConfigError("--oracle expects N,LEVELS");
      }
      cfg.oracle = os;
    }
    const homocp::RunReport rep = homocp::Run(cfg);
    std::cout << homocp::FormatReport(rep, cfg.format);
    return rep.AllSolved() ? 0 : 1;
  } catch (const homocp::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
