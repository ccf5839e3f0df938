#pragma once

#include <exactpen/problem.hpp>

#include <string>
#include <vector>

namespace exactpen {

/// Names of every built-in test problem, in a fixed order.
std::vector<std::string> registry_names();

/// Returns the named problem; throws NotFoundError listing valid names otherwise.
Problem registry_get(const std::string& name);

}  // namespace exactpen
