#pragma once

#include <string>
#include <vector>

namespace sgspec::cli {

struct Check {
  std::string name;
  double value = 0.0;      // measured quantity
  double tolerance = 0.0;  // pass when value <= tolerance
  bool passed = false;
  std::string detail;
};

/// Suites: all, periods, invariants, limits, certificates, fixtures.
/// Throws Domain for an unknown suite name.
std::vector<Check> run_suite(const std::string& suite, const std::string& fixture_dir);

}  // namespace sgspec::cli
