#pragma once

// Exponent templates for the small-t expansion of Q(t) and linear least
// squares extraction of their coefficients from sampled values.

#include <span>
#include <string>
#include <vector>

#include "heatcontent/heat_content.hpp"
#include "heatcontent/invariants.hpp"
#include "heatcontent/special_fns.hpp"

namespace heatcontent {

// Minimum spacing between template exponents.
inline constexpr double kExponentGap = 1e-6;
// Condition estimate above which a fit is flagged.
inline constexpr double kIllConditioned = 1e12;

// One basis column: t^exponent, times log(1/t) when `log` is set.
struct BasisTerm {
  enum class Origin { Boundary, Interior, Log, Manual };

  double exponent = 0.0;
  bool log = false;
  Origin origin = Origin::Manual;
  // j for boundary terms, n for interior terms, the half-power index for the
  // log template.
  int index = 0;

  double operator()(double t) const;
  std::string label() const;
};

struct SeriesTemplate {
  // Sorted by exponent; a log column precedes the plain one of equal exponent.
  std::vector<BasisTerm> terms;
  bool has_log = false;

  std::vector<double> exponents() const;
  std::size_t size() const { return terms.size(); }
};

// {n : 0 <= n <= N} u {(1 + j - s)/2 : 0 <= j <= J}. DomainError for integer s
// (use build_log_template at s = 1), J or N outside [0, 6], or two exponents
// closer than kExponentGap.
SeriesTemplate build_template(const AlphaPair& ap, int J, int N);

// {log(1/t), 1, t^1/2 log(1/t), t^1/2, ...} through half-power N, N in [0, 2].
SeriesTemplate build_log_template(int N);

// Plain powers, sorted; same spacing rule.
SeriesTemplate manual_template(std::vector<double> exponents);

struct FitResult {
  std::vector<BasisTerm> terms;
  std::vector<double> coefficients;
  // sqrt of the covariance diagonal, scaled by max(1, chi^2 / dof).
  std::vector<double> std_errors;
  // Weighted residual norm ||W (A x - v)||.
  double residual_norm = 0.0;
  // Unweighted residual norm relative to ||v||.
  double relative_residual = 0.0;
  // sigma_max / sigma_min of the weighted, column-normalized design matrix.
  double condition_estimate = 0.0;
  bool ill_conditioned = false;
  std::size_t samples = 0;

  // Coefficient of the column with this exponent (within kExponentGap) and
  // log flag; DomainError when absent.
  double coefficient(double exponent, bool log = false) const;
  double std_error(double exponent, bool log = false) const;
  std::size_t column(double exponent, bool log) const;
};

// Weighted least squares of value against the template columns, weights
// 1/max(err, 1e-13 |value|). Samples are sorted by t first, so input order
// does not matter. DomainError when fewer than size() + 2 samples, or when
// t values are non-positive or repeated.
FitResult fit_series(std::span<const QSample> samples, const SeriesTemplate& tmpl);

struct Prediction {
  double exponent = 0.0;
  bool log = false;
  double value = 0.0;
  // Allowed error, relative unless `absolute` is set or value is 0.
  double tolerance = 0.0;
  std::string name;
  bool absolute = false;
};

struct ComparisonRow {
  Prediction predicted;
  double fitted = 0.0;
  double std_error = 0.0;
  // Relative, or absolute when the prediction says so.
  double rel_error = 0.0;
  bool pass = false;
};

struct Comparison {
  std::vector<ComparisonRow> rows;
  bool pass = true;
};

// DomainError when a prediction has no matching column.
Comparison compare(const FitResult& fit, std::span<const Prediction> predicted);

// beta_j at t^((1 + j - s)/2) for j = 0, 1, 2 with the given tolerances.
std::vector<Prediction> beta_predictions(const BetaTriple& beta, const std::array<double, 3>& tolerances);

// The ball expansion: beta_0..beta_2 of the sphere plus b_0 and b_2 (at t^0
// and t^1), b_j scaled by a^(3 - j - s).
std::vector<Prediction> ball_predictions(const AlphaPair& ap, double a, const std::array<double, 3>& beta_tol,
                                         double b_tol);

// The log-case expansion: log(1/t) coefficient 1 and the constant
// log(eps^2) + log_case_constant(alpha1, chi_integral, measure).
std::vector<Prediction> log_case_predictions(double alpha1, double eps, double chi_integral, double log_tol,
                                             double const_tol, QMeasure measure = QMeasure::Stated);

}  // namespace heatcontent
