#pragma once

#include <exactpen/penalty.hpp>

#include <limits>
#include <map>
#include <string>
#include <vector>

namespace exactpen {

/// One solver run on one problem, as written by the command-line tool.
struct RunRecord {
  std::string problem;
  std::string solver;  // r2 | r2n-lbfgs | r2n-lsr1
  SolveReport report;
};

std::string record_to_json(const RunRecord& rec, int indent = 2);
RunRecord record_from_json(const std::string& text);

/// Several records in one file: either a single object or an array.
std::vector<RunRecord> records_from_json(const std::string& text);
std::vector<RunRecord> load_records(const std::string& path);

SolveStatus status_from_string(const std::string& s);

enum class ProfileMetric { Objective, Gradient, Constraint };
ProfileMetric metric_from_string(const std::string& s);
long metric_value(const RunRecord& rec, ProfileMetric metric);

struct ProfilePoint {
  double t = 1.0;
  double fraction = 0.0;
};

/// Dolan–Moré profiles: per problem, ratio = metric / best metric over
/// solvers (failed runs have ratio ∞); curve(t) = fraction with ratio ≤ t.
/// Each curve is sampled at t = 1 and at every distinct finite ratio.
/// Throws InputError when fewer than two solvers are given or the solvers do
/// not cover the same problems.
std::map<std::string, std::vector<ProfilePoint>> performance_profile(
    const std::vector<RunRecord>& records, ProfileMetric metric);

/// CSV with columns solver,t,fraction.
std::string profile_to_csv(const std::map<std::string, std::vector<ProfilePoint>>& curves);

}  // namespace exactpen
