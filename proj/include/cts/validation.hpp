#pragma once

// Acceptance suites. Each criterion measures its quantities, compares them
// with fixed thresholds and reports its wall time against a budget.

#include <string>
#include <utility>
#include <vector>

namespace cts
{

struct CriterionResult
{
  int id = 0;
  std::string name;
  bool pass = false;
  double seconds = 0;
  double budget_seconds = 0;
  std::string detail;
  std::vector<std::pair<std::string, double>> metrics;
};

CriterionResult criterion_jacobian();
CriterionResult criterion_pencil();
CriterionResult criterion_deflation();
CriterionResult criterion_constants();
CriterionResult criterion_transversality();
CriterionResult criterion_regions(int threads = 0);
CriterionResult criterion_branches();
CriterionResult criterion_existence();
CriterionResult criterion_dynamics();
CriterionResult criterion_sectors();

/// Suite names: one per criterion, plus limits (constants, transversality and
/// branches together) and all. Throws DomainError on an unknown name.
std::vector<CriterionResult> run_suite(const std::string &name, int threads = 0);

std::vector<std::string> suite_names();

std::string results_json(const std::vector<CriterionResult> &results);

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double> &x, const std::vector<double> &y);

} // namespace cts
