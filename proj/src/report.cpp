#include <exactpen/report.hpp>

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace exactpen {
namespace {

using nlohmann::json;

json vector_json(const Vector& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    arr.push_back(v[i]);
  }
  return arr;
}

Vector vector_from(const json& j, const char* key) {
  const json& arr = j.at(key);
  if (!arr.is_array()) {
    throw InputError(std::string("record: '") + key + "' must be an array");
  }
  Vector v(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
  }
  return v;
}

json record_json(const RunRecord& rec) {
  const SolveReport& r = rec.report;
  json j;
  j["problem"] = rec.problem;
  j["solver"] = rec.solver;
  j["status"] = to_string(r.status);
  j["x"] = vector_json(r.x);
  j["y_ls"] = vector_json(r.y_ls);
  j["kkt_residual"] = r.kkt_residual;
  j["feasibility"] = r.feasibility;
  j["tau_final"] = r.tau_final;
  j["outer_iters"] = r.outer_iters;
  j["inner_iters"] = r.total_inner_iters;
  j["n_f"] = r.counters.n_f;
  j["n_grad"] = r.counters.n_grad;
  j["n_c"] = r.counters.n_c;
  j["n_jac"] = r.counters.n_jac;
  j["wall_time_s"] = r.wall_time_s;
  return j;
}

RunRecord record_from(const json& j) {
  if (!j.is_object()) {
    throw InputError("record: expected a JSON object");
  }
  try {
    RunRecord rec;
    rec.problem = j.at("problem").get<std::string>();
    rec.solver = j.at("solver").get<std::string>();
    SolveReport& r = rec.report;
    r.status = status_from_string(j.at("status").get<std::string>());
    r.x = vector_from(j, "x");
    r.y_ls = vector_from(j, "y_ls");
    r.kkt_residual = j.at("kkt_residual").get<double>();
    r.feasibility = j.at("feasibility").get<double>();
    r.tau_final = j.at("tau_final").get<double>();
    r.outer_iters = j.at("outer_iters").get<int>();
    r.total_inner_iters = j.at("inner_iters").get<long>();
    r.counters.n_f = j.at("n_f").get<long>();
    r.counters.n_grad = j.at("n_grad").get<long>();
    r.counters.n_c = j.at("n_c").get<long>();
    r.counters.n_jac = j.at("n_jac").get<long>();
    r.wall_time_s = j.at("wall_time_s").get<double>();
    return rec;
  } catch (const json::exception& e) {
    throw InputError(std::string("record: ") + e.what());
  }
}

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("record: invalid JSON: ") + e.what());
  }
}

}  // namespace

std::string record_to_json(const RunRecord& rec, int indent) {
  return record_json(rec).dump(indent);
}

RunRecord record_from_json(const std::string& text) { return record_from(parse(text)); }

std::vector<RunRecord> records_from_json(const std::string& text) {
  const json j = parse(text);
  std::vector<RunRecord> out;
  if (j.is_array()) {
    for (const auto& item : j) {
      out.push_back(record_from(item));
    }
  } else {
    out.push_back(record_from(j));
  }
  return out;
}

std::vector<RunRecord> load_records(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw InputError("cannot open result file '" + path + "'");
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return records_from_json(ss.str());
}

SolveStatus status_from_string(const std::string& s) {
  for (SolveStatus st : {SolveStatus::FirstOrder, SolveStatus::InfeasibleStationary,
                         SolveStatus::MaxIter, SolveStatus::TimeLimit}) {
    if (s == to_string(st)) {
      return st;
    }
  }
  throw InputError("unknown status '" + s + "'");
}

ProfileMetric metric_from_string(const std::string& s) {
  if (s == "nf") return ProfileMetric::Objective;
  if (s == "ngrad") return ProfileMetric::Gradient;
  if (s == "nc") return ProfileMetric::Constraint;
  throw InputError("unknown metric '" + s + "' (expected nf, ngrad or nc)");
}

long metric_value(const RunRecord& rec, ProfileMetric metric) {
  switch (metric) {
    case ProfileMetric::Objective:
      return rec.report.counters.n_f;
    case ProfileMetric::Gradient:
      return rec.report.counters.n_grad;
    case ProfileMetric::Constraint:
      return rec.report.counters.n_c;
  }
  return 0;
}

std::map<std::string, std::vector<ProfilePoint>> performance_profile(
    const std::vector<RunRecord>& records, ProfileMetric metric) {
  // solver -> problem -> metric (∞ on failure)
  std::map<std::string, std::map<std::string, double>> table;
  constexpr double inf = std::numeric_limits<double>::infinity();
  for (const RunRecord& rec : records) {
    auto& row = table[rec.solver];
    if (row.count(rec.problem) != 0) {
      throw InputError("profile: duplicate run of '" + rec.problem + "' by '" + rec.solver + "'");
    }
    row[rec.problem] = rec.report.status == SolveStatus::FirstOrder
                           ? static_cast<double>(metric_value(rec, metric))
                           : inf;
  }
  if (table.size() < 2) {
    throw InputError("profile: need results from at least two solvers");
  }
  std::set<std::string> problems;
  for (const auto& [name, value] : table.begin()->second) {
    problems.insert(name);
  }
  for (const auto& [solver, row] : table) {
    std::set<std::string> mine;
    for (const auto& [name, value] : row) {
      mine.insert(name);
    }
    if (mine != problems) {
      throw InputError("profile: solver '" + solver + "' was run on a different problem set");
    }
  }

  std::map<std::string, double> best;
  for (const std::string& prob : problems) {
    double b = inf;
    for (const auto& [solver, row] : table) {
      b = std::min(b, row.at(prob));
    }
    best[prob] = b;
  }

  std::map<std::string, std::vector<ProfilePoint>> curves;
  const double np = static_cast<double>(problems.size());
  for (const auto& [solver, row] : table) {
    std::vector<double> ratios;
    for (const std::string& prob : problems) {
      const double v = row.at(prob);
      if (v == inf) {
        continue;
      }
      // A zero count that ties the best has ratio 1.
      ratios.push_back(best[prob] > 0.0 ? v / best[prob] : (v > 0.0 ? inf : 1.0));
    }
    std::sort(ratios.begin(), ratios.end());
    std::set<double> ts{1.0};
    for (double r : ratios) {
      if (r != inf) ts.insert(r);
    }
    auto& curve = curves[solver];
    for (double t : ts) {
      const auto count = std::upper_bound(ratios.begin(), ratios.end(), t) - ratios.begin();
      curve.push_back({t, static_cast<double>(count) / np});
    }
  }
  return curves;
}

std::string profile_to_csv(const std::map<std::string, std::vector<ProfilePoint>>& curves) {
  std::ostringstream out;
  out.precision(17);
  out << "solver,t,fraction\n";
  for (const auto& [solver, points] : curves) {
    for (const ProfilePoint& pt : points) {
      out << solver << ',' << pt.t << ',' << pt.fraction << '\n';
    }
  }
  return out.str();
}

}  // namespace exactpen
