// Command-line front end: solve registry or JSON problems, write run records
// and traces, and turn run records into performance-profile CSV.

#include <exactpen/penalty.hpp>
#include <exactpen/registry.hpp>
#include <exactpen/report.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

namespace {

using namespace exactpen;

enum class LogLevel { Quiet, Info, Debug };

LogLevel log_level_from_env() {
  const char* v = std::getenv("SOLVER_LOG");
  if (v == nullptr) return LogLevel::Quiet;
  const std::string s(v);
  if (s == "debug") return LogLevel::Debug;
  if (s == "info") return LogLevel::Info;
  return LogLevel::Quiet;
}

int exit_code(SolveStatus st) {
  switch (st) {
    case SolveStatus::FirstOrder:
      return 0;
    case SolveStatus::InfeasibleStationary:
      return 2;
    case SolveStatus::MaxIter:
    case SolveStatus::TimeLimit:
      return 3;
  }
  return 1;
}

InnerConfig inner_config_for(const std::string& solver) {
  InnerConfig cfg;
  if (solver == "r2") {
    cfg.qn_kind = QnKind::None;
  } else if (solver == "r2n-lbfgs") {
    cfg.qn_kind = QnKind::LBFGS;
  } else if (solver == "r2n-lsr1") {
    cfg.qn_kind = QnKind::LSR1;
  } else {
    throw InputError("unknown solver '" + solver + "' (expected r2, r2n-lbfgs or r2n-lsr1)");
  }
  return cfg;
}

struct SolveArgs {
  std::string problem;
  bool all = false;
  std::string qp_path;
  std::string solver = "r2";
  double tol = 1e-3;
  std::optional<double> tau0;
  double max_time = 300.0;
  std::string json_path;
  std::string trace_path;
};

int run_solve(const SolveArgs& a) {
  std::vector<Problem> problems;
  if (a.all) {
    for (const auto& name : registry_names()) problems.push_back(registry_get(name));
  } else if (!a.qp_path.empty()) {
    problems.push_back(make_qp_problem(a.qp_path, load_qp_json(a.qp_path)));
  } else if (!a.problem.empty()) {
    problems.push_back(registry_get(a.problem));
  } else {
    throw InputError("one of --problem, --all or --qp is required");
  }

  const InnerConfig inner = inner_config_for(a.solver);
  OuterConfig outer;
  outer.eps_final = a.tol;
  outer.eps0 = std::max(outer.eps0, a.tol);
  if (a.tau0) {
    outer.tau0 = *a.tau0;
  }
  outer.max_time_s = a.max_time;
  validate(outer);

  std::ofstream trace;
  if (!a.trace_path.empty()) {
    trace.open(a.trace_path);
    if (!trace) throw InputError("cannot write trace file '" + a.trace_path + "'");
    trace.precision(17);
    trace << "problem,k,j,tau,f,c_norm,xi,sigma,rho,accepted,prox_iters,decrease,model_error\n";
  }
  const LogLevel level = log_level_from_env();

  nlohmann::json out = nlohmann::json::array();
  int code = 0;
  for (const Problem& p : problems) {
    SolveObserver obs;
    if (trace.is_open() || level == LogLevel::Debug) {
      obs.on_inner = [&](int k, const InnerTrace& t) {
        if (trace.is_open()) {
          trace << p.name << ',' << k << ',' << t.j << ',' << t.tau << ',' << t.f << ','
                << t.c_norm << ',' << t.xi << ',' << t.sigma << ',' << t.rho << ','
                << (t.accepted ? 1 : 0) << ',' << t.prox_iters << ',' << t.decrease << ','
                << t.model_error << '\n';
        }
        if (level == LogLevel::Debug) {
          std::cerr << "  k=" << k << " j=" << t.j << " f=" << t.f << " |c|=" << t.c_norm
                    << " xi=" << t.xi << " sigma=" << t.sigma << " rho=" << t.rho
                    << (t.accepted ? " accepted" : " rejected") << '\n';
        }
      };
    }
    if (level != LogLevel::Quiet) {
      obs.on_outer = [&](const OuterTrace& t) {
        std::cerr << p.name << " k=" << t.k << " tau=" << t.tau << " eps=" << t.eps
                  << " theta^1/2=" << t.theta_sqrt << " kkt=" << t.kkt_residual
                  << " |c|=" << t.c_norm << " inner=" << t.inner_iters << " ("
                  << to_string(t.inner_status) << ")\n";
      };
    }

    RunRecord rec{p.name, a.solver, solve(p, outer, inner, obs)};
    std::cout << p.name << ' ' << a.solver << ' ' << to_string(rec.report.status)
              << " n_f=" << rec.report.counters.n_f << " kkt=" << rec.report.kkt_residual
              << " |c|=" << rec.report.feasibility << '\n';
    out.push_back(nlohmann::json::parse(record_to_json(rec)));
    code = std::max(code, exit_code(rec.report.status));
  }

  if (!a.json_path.empty()) {
    std::ofstream js(a.json_path);
    if (!js) throw InputError("cannot write JSON file '" + a.json_path + "'");
    js << (out.size() == 1 ? out[0] : out).dump(2) << '\n';
  }
  return code;
}

int run_profile(const std::string& metric_name, const std::vector<std::string>& paths,
                const std::string& out_path) {
  const ProfileMetric metric = metric_from_string(metric_name);
  std::vector<RunRecord> records;
  for (const auto& path : paths) {
    auto recs = load_records(path);
    records.insert(records.end(), recs.begin(), recs.end());
  }
  const std::string csv = profile_to_csv(performance_profile(records, metric));
  if (out_path.empty()) {
    std::cout << csv;
  } else {
    std::ofstream out(out_path);
    if (!out) throw InputError("cannot write '" + out_path + "'");
    out << csv;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact l2-penalty solver for equality-constrained problems"};
  app.require_subcommand(0, 1);

  std::vector<std::string> profile_flag;
  app.add_option("--profile", profile_flag, "METRIC PATHS...: profile CSV from run records")
      ->expected(3, -1);

  SolveArgs sa;
  auto* solve_cmd = app.add_subcommand("solve", "Run the penalty method");
  auto* src = solve_cmd->add_option_group("source");
  src->add_option("--problem", sa.problem, "Registry problem name");
  src->add_flag("--all", sa.all, "Every registry problem");
  src->add_option("--qp", sa.qp_path, "Quadratic program in JSON form");
  src->require_option(1);
  solve_cmd->add_option("--solver", sa.solver, "r2 | r2n-lbfgs | r2n-lsr1")
      ->check(CLI::IsMember({"r2", "r2n-lbfgs", "r2n-lsr1"}));
  solve_cmd->add_option("--tol", sa.tol, "Final tolerance")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--tau0", sa.tau0, "Initial penalty parameter")
      ->check(CLI::PositiveNumber);
  solve_cmd->add_option("--max-time", sa.max_time, "Time limit per problem in seconds")
      ->check(CLI::PositiveNumber);
  solve_cmd->add_option("--json", sa.json_path, "Write the run record(s) here");
  solve_cmd->add_option("--trace", sa.trace_path, "Write the inner iteration trace as CSV");

  std::string metric = "nf";
  std::vector<std::string> paths;
  std::string out_path;
  auto* prof_cmd = app.add_subcommand("profile", "Performance-profile CSV from run records");
  prof_cmd->add_option("--metric", metric, "nf | ngrad | nc");
  prof_cmd->add_option("paths", paths, "Run record JSON files")->required();
  prof_cmd->add_option("-o,--output", out_path, "CSV destination (default stdout)");

  auto* list_cmd = app.add_subcommand("list", "List registry problems");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*solve_cmd) {
      return run_solve(sa);
    }
    if (*prof_cmd) {
      return run_profile(metric, paths, out_path);
    }
    if (!profile_flag.empty()) {
      return run_profile(profile_flag.front(), {profile_flag.begin() + 1, profile_flag.end()}, "");
    }
    if (*list_cmd) {
      for (const auto& name : registry_names()) std::cout << name << '\n';
      return 0;
    }
    std::cerr << app.help();
    return 1;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const NotFoundError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return 4;
  }
}
