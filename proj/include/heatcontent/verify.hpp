#pragma once

// Acceptance checks, shared by the CLI `verify` command and the acceptance
// test binary. Each criterion reports pass/fail plus human-readable detail
// lines; the text contains no timings, so reports are reproducible.

#include <string>
#include <vector>

#include "heatcontent/special_fns.hpp"

namespace heatcontent::verify {

enum class Suite { All, Kernels, Coeffs, Ball, LogCase };

// "all", "kernels", "coeffs", "ball", "logcase"; DomainError otherwise.
Suite parse_suite(const std::string& name);

// kernels: 6, 7. coeffs: 1, 2, 4, 9. ball: 3, 8. logcase: 5.
std::vector<int> suite_criteria(Suite suite);

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::vector<std::string> details;
  // Wall-clock budget; checked by the caller, not part of `pass`.
  double budget_seconds = 0.0;
};

// Criteria 1..9. `threads` is forwarded to q_grid.
CriterionResult run_criterion(int id, int threads = -1);

// Deterministic text: a header line per criterion, then indented details.
std::string format_report(const std::vector<CriterionResult>& results);

// F_n = int_0^a u^-alpha (a - u) sin(n pi u / a) du. The first half-period
// is summed as a power series, the rest by 20-point Gauss-Legendre per
// half-period.
double ball_sine_moment(double alpha, double a, int n);

// (8 pi / a) sum_{n <= modes} exp(-(n pi / a)^2 t) F_n(alpha1) F_n(alpha2):
// the ball heat content from the radial Dirichlet eigenfunctions.
double ball_eigen_series(const AlphaPair& ap, double a, double t, int modes = 200);

}  // namespace heatcontent::verify
