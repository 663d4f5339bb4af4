#include "heatcontent/asymptotics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>

#include "heatcontent/errors.hpp"

namespace heatcontent {

namespace {

std::string num(double v, const char* f = "%.17g") {
  char buf[40];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

void sort_terms(std::vector<BasisTerm>& terms) {
  std::stable_sort(terms.begin(), terms.end(), [](const BasisTerm& a, const BasisTerm& b) {
    if (a.exponent != b.exponent) return a.exponent < b.exponent;
    return a.log && !b.log;
  });
}

void require_spacing(const std::vector<BasisTerm>& terms) {
  for (std::size_t i = 1; i < terms.size(); ++i) {
    const auto& p = terms[i - 1];
    const auto& q = terms[i];
    if (p.log == q.log && std::abs(q.exponent - p.exponent) < kExponentGap)
      throw DomainError("template: exponents " + num(p.exponent) + " and " + num(q.exponent) +
                        " are not distinct (gap below " + num(kExponentGap, "%g") + ")");
  }
}

double weight_floor(const QSample& q) {
  return std::max({q.err, 1e-13 * std::abs(q.value), std::numeric_limits<double>::min()});
}

}  // namespace

double BasisTerm::operator()(double t) const {
  const double p = exponent == 0.0 ? 1.0 : std::pow(t, exponent);
  return log ? -std::log(t) * p : p;
}

std::string BasisTerm::label() const {
  std::string s = exponent == 0.0 ? "1" : "t^" + num(exponent, "%.10g");
  if (log) s = exponent == 0.0 ? "log(1/t)" : s + " log(1/t)";
  return s;
}

std::vector<double> SeriesTemplate::exponents() const {
  std::vector<double> e;
  for (const auto& t : terms) e.push_back(t.exponent);
  return e;
}

SeriesTemplate build_template(const AlphaPair& ap, int J, int N) {
  require_admissible(ap);
  if (J < 0 || J > 6 || N < 0 || N > 6) throw DomainError("build_template: J and N must lie in [0, 6]");
  const double s = ap.sum();
  if (ap.integer_sum(kExponentGap)) {
    if (ap.log_case(kExponentGap))
      throw DomainError("build_template: s = 1 produces a log(1/t) term; use the log template");
    throw DomainError("build_template: integer s = " + num(s) + " makes boundary and interior powers collide");
  }
  SeriesTemplate tmpl;
  for (int n = 0; n <= N; ++n) tmpl.terms.push_back({static_cast<double>(n), false, BasisTerm::Origin::Interior, n});
  for (int j = 0; j <= J; ++j) tmpl.terms.push_back({0.5 * (1.0 + j - s), false, BasisTerm::Origin::Boundary, j});
  sort_terms(tmpl.terms);
  require_spacing(tmpl.terms);
  return tmpl;
}

SeriesTemplate build_log_template(int N) {
  if (N < 0 || N > 2) throw DomainError("build_log_template: N must lie in [0, 2]");
  SeriesTemplate tmpl;
  tmpl.has_log = true;
  for (int k = 0; k <= N; ++k) {
    tmpl.terms.push_back({0.5 * k, true, BasisTerm::Origin::Log, k});
    tmpl.terms.push_back({0.5 * k, false, BasisTerm::Origin::Log, k});
  }
  return tmpl;
}

SeriesTemplate manual_template(std::vector<double> exponents) {
  SeriesTemplate tmpl;
  for (double e : exponents) {
    if (!std::isfinite(e)) throw DomainError("manual_template: non-finite exponent");
    tmpl.terms.push_back({e, false, BasisTerm::Origin::Manual, 0});
  }
  sort_terms(tmpl.terms);
  require_spacing(tmpl.terms);
  for (std::size_t i = 0; i < tmpl.terms.size(); ++i) tmpl.terms[i].index = static_cast<int>(i);
  return tmpl;
}

std::size_t FitResult::column(double exponent, bool log) const {
  for (std::size_t i = 0; i < terms.size(); ++i)
    if (terms[i].log == log && std::abs(terms[i].exponent - exponent) < kExponentGap) return i;
  throw DomainError("fit has no column t^" + num(exponent, "%.10g") + (log ? " log(1/t)" : ""));
}

double FitResult::coefficient(double exponent, bool log) const { return coefficients[column(exponent, log)]; }

double FitResult::std_error(double exponent, bool log) const { return std_errors[column(exponent, log)]; }

FitResult fit_series(std::span<const QSample> samples_in, const SeriesTemplate& tmpl) {
  const std::size_t m = samples_in.size(), n = tmpl.size();
  if (n == 0) throw DomainError("fit_series: empty template");
  if (m < n + 2)
    throw DomainError("fit_series: under-determined, " + std::to_string(m) + " samples for " + std::to_string(n) +
                      " columns (need at least columns + 2)");
  std::vector<QSample> samples(samples_in.begin(), samples_in.end());
  std::sort(samples.begin(), samples.end(), [](const QSample& a, const QSample& b) { return a.t < b.t; });
  for (std::size_t i = 0; i < m; ++i) {
    const auto& q = samples[i];
    if (!(q.t > 0.0 && std::isfinite(q.t))) throw DomainError("fit_series: t must be positive, got " + num(q.t));
    if (!std::isfinite(q.value) || !(q.err >= 0.0)) throw DomainError("fit_series: non-finite sample at t = " + num(q.t));
    if (i > 0 && q.t == samples[i - 1].t) throw DomainError("fit_series: repeated t = " + num(q.t));
  }

  const auto rows = static_cast<Eigen::Index>(m), cols = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd A(rows, cols);
  Eigen::VectorXd b(rows), w(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& q = samples[static_cast<std::size_t>(i)];
    w(i) = 1.0 / weight_floor(q);
    b(i) = q.value;
    for (Eigen::Index j = 0; j < cols; ++j) A(i, j) = tmpl.terms[static_cast<std::size_t>(j)](q.t);
  }
  Eigen::MatrixXd Aw = w.asDiagonal() * A;
  const Eigen::VectorXd bw = w.cwiseProduct(b);
  Eigen::VectorXd scale(cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    scale(j) = Aw.col(j).norm();
    if (!(scale(j) > 0.0) || !std::isfinite(scale(j)))
      throw DomainError("fit_series: column " + tmpl.terms[static_cast<std::size_t>(j)].label() + " degenerate on the grid");
    Aw.col(j) /= scale(j);
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Aw, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd sv = svd.singularValues();
  const Eigen::VectorXd y = svd.solve(bw);
  const Eigen::VectorXd x = y.cwiseQuotient(scale);

  FitResult fit;
  fit.terms = tmpl.terms;
  fit.samples = m;
  fit.condition_estimate = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : std::numeric_limits<double>::infinity();
  fit.ill_conditioned = !(fit.condition_estimate <= kIllConditioned);
  const Eigen::VectorXd rw = Aw * y - bw;
  fit.residual_norm = rw.norm();
  fit.relative_residual = (A * x - b).norm() / std::max(b.norm(), std::numeric_limits<double>::min());

  // Covariance of the scaled solution is V diag(sigma^-2) V^T.
  const double dof = static_cast<double>(m - n);
  const double var = std::max(1.0, rw.squaredNorm() / dof);
  const Eigen::MatrixXd V = svd.matrixV();
  for (Eigen::Index j = 0; j < cols; ++j) {
    fit.coefficients.push_back(x(j));
    double c = 0.0;
    for (Eigen::Index k = 0; k < cols; ++k) c += V(j, k) * V(j, k) / (sv(k) * sv(k));
    fit.std_errors.push_back(std::sqrt(var * c) / scale(j));
  }
  return fit;
}

Comparison compare(const FitResult& fit, std::span<const Prediction> predicted) {
  Comparison out;
  for (const auto& p : predicted) {
    ComparisonRow row;
    row.predicted = p;
    const std::size_t col = fit.column(p.exponent, p.log);
    row.fitted = fit.coefficients[col];
    row.std_error = fit.std_errors[col];
    const double diff = std::abs(row.fitted - p.value);
    row.rel_error = (p.absolute || p.value == 0.0) ? diff : diff / std::abs(p.value);
    row.pass = row.rel_error <= p.tolerance;
    out.pass = out.pass && row.pass;
    out.rows.push_back(row);
  }
  return out;
}

std::vector<Prediction> beta_predictions(const BetaTriple& beta, const std::array<double, 3>& tolerances) {
  std::vector<Prediction> out;
  for (int j = 0; j < 3; ++j)
    out.push_back({beta.exponent(j), false, beta[j], tolerances[static_cast<std::size_t>(j)], "beta" + std::to_string(j)});
  return out;
}

std::vector<Prediction> ball_predictions(const AlphaPair& ap, double a, const std::array<double, 3>& beta_tol,
                                         double b_tol) {
  auto out = beta_predictions(beta_boundary(ball_geometry(a), epsilon_table(ap)), beta_tol);
  const auto b = ball_b_coeffs(ap);
  out.push_back({0.0, false, b.b0 * std::pow(a, b.radius_power(0)), b_tol, "b0"});
  out.push_back({1.0, false, b.b2 * std::pow(a, b.radius_power(2)), b_tol, "b2"});
  return out;
}

std::vector<Prediction> log_case_predictions(double alpha1, double eps, double chi_integral, double log_tol,
                                             double const_tol, QMeasure measure) {
  if (!(eps > 0.0)) throw DomainError("log_case_predictions: eps must be positive");
  return {{0.0, true, 1.0, log_tol, "log(1/t)"},
          {0.0, false, 2.0 * std::log(eps) + log_case_constant(alpha1, chi_integral, measure), const_tol, "constant", true}};
}

}  // namespace heatcontent
