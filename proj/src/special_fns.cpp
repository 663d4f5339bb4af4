#include "heatcontent/special_fns.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "heatcontent/errors.hpp"
#include "heatcontent/quadrature.hpp"

namespace heatcontent {

namespace {

constexpr double kCoefRelTol = 1e-13;
constexpr double kCoefAbsTol = 1e-15;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void require(const quad::Estimate& e, const char* what) {
  if (!e.converged)
    throw ConvergenceError(std::string(what) + ": quadrature did not converge (value " + fmt(e.value) + ", err " +
                           fmt(e.err) + ")");
}

// sum_i r^-a_i * ((1-r)^(s-2) - (1+r)^(s-2)), evaluated in log form so that
// r^-a overflow near r = 0 is absorbed by the linear vanishing of the
// bracket.
double weighted_bracket(const AlphaPair& ap, double r, double one_minus_r) {
  const double s = ap.sum();
  const double p = (s - 2.0) * (r < 0.5 ? std::log1p(-r) : std::log(one_minus_r));
  const double q = (s - 2.0) * std::log1p(r);
  const double half_diff = 0.5 * (p - q);
  if (half_diff == 0.0) return 0.0;
  const double log_abs = 0.5 * (p + q) + std::log(2.0 * std::abs(std::sinh(half_diff)));
  const double sign = half_diff > 0.0 ? 1.0 : -1.0;
  const double log_r = std::log(r);
  return sign * (std::exp(log_abs - ap.alpha1 * log_r) + std::exp(log_abs - ap.alpha2 * log_r));
}

// Coefficients of the rising factorial (x)_k = x (x+1) ... (x+k-1) in powers of x.
std::vector<double> rising_factorial_poly(int k) {
  std::vector<double> c{1.0};
  for (int j = 0; j < k; ++j) {
    std::vector<double> next(c.size() + 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i];
      next[i] += c[i] * j;
    }
    c = std::move(next);
  }
  return c;
}

double factorial(int k) {
  double f = 1.0;
  for (int j = 2; j <= k; ++j) f *= j;
  return f;
}

// ((x)_k - (y)_k) / (x - y) from the expanded polynomial, stable as x -> y.
double rising_divided_difference(double x, double y, int k) {
  const auto c = rising_factorial_poly(k);
  double total = 0.0;
  for (std::size_t j = 1; j < c.size(); ++j) {
    double h = 0.0;
    double xp = 1.0;
    for (std::size_t i = 0; i < j; ++i) {
      h += xp * std::pow(y, static_cast<double>(j - 1 - i));
      xp *= x;
    }
    total += c[j] * h;
  }
  return total;
}

// Sums terms produced by next(k) for k = first, first + step, ... until they
// fall below 1e-18 of the largest seen.
template <class Term>
double sum_series(int first, int step, Term next, const char* what) {
  double total = 0.0, biggest = 0.0;
  for (int k = first; k < first + 4000; k += step) {
    const double term = next(k);
    total += term;
    biggest = std::max(biggest, std::abs(term));
    if (k >= first + 8 * step && std::abs(term) <= 1e-18 * biggest) return total;
  }
  throw ConvergenceError(std::string(what) + ": series did not converge");
}

// int_0^1 (r^-a1 + r^-a2)((1-r)^(s-2) - (1+r)^(s-2)) dr, continued in s.
//
// [0, 1/4]: (1-r)^p - (1+r)^p = -2 sum_{k odd} C(p, k) r^k, integrated term
// by term against r^-a (k + 1 - a > 0 for a < 2).
// [1/4, 1/2]: plain quadrature, the integrand is smooth there.
// [1/2, 1]: with u = 1 - r, r^-a = sum_k (a)_k/k! u^k, and each term against
// u^(s-2) on [0, 1/2] gives (1/2)^(s-1+k)/(s-1+k); this is the continuation.
// The (1+r)^(s-2) part is regular there.
double rho_integral_continued(const AlphaPair& ap) {
  const double s = ap.sum();
  const double p = s - 2.0;

  double binom = p;  // C(p, k) for the current odd k
  const double near_zero = sum_series(
      1, 2,
      [&](int k) {
        const double e1 = k + 1 - ap.alpha1, e2 = k + 1 - ap.alpha2;
        const double term = -2.0 * binom * (std::pow(0.25, e1) / e1 + std::pow(0.25, e2) / e2);
        binom *= (p - k) * (p - k - 1) / ((k + 1.0) * (k + 2.0));
        return term;
      },
      "c_coef [0, 1/4]");

  const auto mid = quad::integrate_1d([&](double r) { return weighted_bracket(ap, r, 1.0 - r); }, 0.25, 0.5,
                                      kCoefAbsTol, {kCoefRelTol, 3, quad::kMaxLevel});
  require(mid, "c_coef [1/4, 1/2]");

  double t1 = 1.0, t2 = 1.0;  // (a_i)_k / k!
  const double minus_branch = sum_series(
      0, 1,
      [&](int k) {
        const double denom = s - 1.0 + k;
        double ratio;
        if (k % 2 == 1 && std::abs(denom) < 0.25) {
          // (a1)_k + (a2)_k vanishes on s = 1 - k for odd k; divide it out.
          const double beta = 1.0 - k - ap.alpha1;
          ratio = rising_divided_difference(ap.alpha2, beta, k) / factorial(k);
        } else {
          ratio = (t1 + t2) / denom;
        }
        t1 *= (ap.alpha1 + k) / (k + 1.0);
        t2 *= (ap.alpha2 + k) / (k + 1.0);
        return ratio * std::pow(0.5, denom);
      },
      "c_coef [1/2, 1]");

  const auto plus = quad::integrate_1d(
      [&](double r) {
        return (std::pow(r, -ap.alpha1) + std::pow(r, -ap.alpha2)) * std::pow(1.0 + r, s - 2.0);
      },
      0.5, 1.0, kCoefAbsTol, {kCoefRelTol, 3, quad::kMaxLevel});
  require(plus, "c_coef (1+r) branch");

  return near_zero + mid.value + minus_branch - plus.value;
}

double prefactor(double s) {
  return std::pow(2.0, -s) / std::sqrt(std::numbers::pi) * gamma_fn(0.5 * (2.0 - s));
}

void refuse_poles(double s) {
  if (std::abs(s - 2.0) < kPoleRadius)
    throw PoleError("c_coef: pole of Gamma((2-s)/2) at s = 2 (s = " + fmt(s) + ")");
  // Poles of the continuation at s = 1, -1, -3, ...
  const double odd = std::round((s - 1.0) / 2.0) * 2.0 + 1.0;
  if (odd <= 1.0 && std::abs(s - odd) < kPoleRadius)
    throw PoleError("c_coef: continuation pole at s = " + fmt(odd) + " (s = " + fmt(s) + ")");
}

}  // namespace

bool AlphaPair::admissible() const {
  return std::isfinite(alpha1) && std::isfinite(alpha2) && alpha1 < 2.0 && alpha2 < 2.0;
}

bool AlphaPair::integer_sum(double radius) const {
  const double s = sum();
  return std::abs(s - std::round(s)) < radius;
}

bool AlphaPair::log_case(double radius) const { return std::abs(sum() - 1.0) < radius; }

void require_admissible(const AlphaPair& ap) {
  if (!ap.admissible())
    throw DomainError("alpha pair (" + fmt(ap.alpha1) + ", " + fmt(ap.alpha2) +
                      ") outside alpha1 < 2, alpha2 < 2");
}

double gamma_fn(double x) {
  if (std::isnan(x)) throw DomainError("gamma_fn: NaN argument");
  if (x <= 0.0 && x == std::floor(x)) throw PoleError("gamma_fn: pole at " + fmt(x));
  return std::tgamma(x);
}

double c_coef(const AlphaPair& ap_in) {
  require_admissible(ap_in);
  // Symmetric in the pair; a fixed order makes swapped calls bit-identical.
  const AlphaPair ap = ap_in.alpha2 < ap_in.alpha1 ? ap_in.swapped() : ap_in;
  const double s = ap.sum();
  refuse_poles(s);
  return prefactor(s) * rho_integral_continued(ap);
}

double c_coef_direct(const AlphaPair& ap) {
  require_admissible(ap);
  const double s = ap.sum();
  if (!(s > 1.0 && s < 4.0)) throw DomainError("c_coef_direct: requires 1 < s < 4 (s = " + fmt(s) + ")");
  refuse_poles(s);
  const auto e = quad::integrate_1d(
      [&](double r, double, double omr) { return weighted_bracket(ap, r, omr); }, 0.0, 1.0, kCoefAbsTol,
      {kCoefRelTol, 3, quad::kMaxLevel});
  require(e, "c_coef_direct");
  return prefactor(s) * e.value;
}

BallCoeffs ball_b_coeffs(const AlphaPair& ap) {
  require_admissible(ap);
  const double s = ap.sum();
  for (double z : {-1.0, 0.0, 1.0, 2.0, 3.0})
    if (std::abs(s - z) < kPoleRadius)
      throw PoleError("ball_b_coeffs: denominator zero at s = " + fmt(z));
  BallCoeffs b;
  b.s = s;
  b.b0 = -8.0 * std::numbers::pi / ((s - 1.0) * (s - 2.0) * (s - 3.0));
  b.b2 = 8.0 * std::numbers::pi * ap.alpha1 * ap.alpha2 / ((s + 1.0) * s * (s - 1.0));
  return b;
}

namespace {

double measure_density(QMeasure measure, double q) {
  return measure == QMeasure::Stated ? (1.0 + q * q) / q : 1.0 / q;
}

}  // namespace

double q_integrand(double alpha, double q, double one_minus_q, QMeasure measure) {
  if (q == 0.0) return 0.0;
  const double log_omq = q < 0.5 ? std::log1p(-q) : std::log(one_minus_q);
  const double log_ratio = std::log1p(q) - log_omq;  // log((1+q)/(1-q))
  const double cut = std::expm1(log_omq - 0.5 * std::log1p(q * q));
  const double braces = std::expm1((alpha - 1.0) * log_ratio) + std::expm1(-alpha * log_ratio) - 2.0 * cut;
  return measure_density(measure, q) * braces;
}

double q_integral(double alpha1, QMeasure measure) {
  if (!(alpha1 > -1.0 && alpha1 < 2.0))
    throw DomainError("q_integral: alpha1 = " + fmt(alpha1) + " outside (-1, 2)");
  const quad::Options opt{1e-13, 3, quad::kMaxLevel};
  const auto lower =
      quad::integrate_1d([&](double q) { return q_integrand(alpha1, q, 1.0 - q, measure); }, 0.0, 0.5, 1e-15, opt);
  // q = 1 - u^m on [1/2, 1], dq = m u^(m-1) du, with m large enough that the
  // (1-q)^(1-alpha) endpoint becomes u^(m(2-alpha)-1), exponent >= 1. Powers
  // of u are taken in log form since u^m underflows before the integrand does.
  const double m = std::max(2.0, std::ceil(2.0 / (2.0 - alpha1)));
  const auto upper = quad::integrate_1d(
      [&](double u) {
        if (u == 0.0) return 0.0;
        const double log_u = std::log(u);
        const double omq = std::exp(m * log_u);
        const double q = 1.0 - omq;
        const double log_ratio = std::log(2.0 - omq) - m * log_u;  // log((1+q)/(1-q))
        const double braces_du = std::exp((alpha1 - 1.0) * log_ratio + (m - 1.0) * log_u) +
                                 std::exp(-alpha1 * log_ratio + (m - 1.0) * log_u) -
                                 2.0 * std::exp((2.0 * m - 1.0) * log_u) / std::sqrt(1.0 + q * q);
        return measure_density(measure, q) * braces_du * m;
      },
      0.0, std::pow(0.5, 1.0 / m), 1e-15, opt);
  if (!lower.converged || !upper.converged) throw ConvergenceError("q_integral: quadrature did not converge");
  return lower.value + upper.value;
}

double log_case_constant(double alpha1, double chi_integral, QMeasure measure) {
  return std::numbers::egamma + 4.0 * std::log(std::numbers::sqrt2 - 1.0) + 4.0 * std::log(2.0) + chi_integral +
         q_integral(alpha1, measure);
}

}  // namespace heatcontent
