#pragma once

// Closed-form coefficient engine: Gamma, the boundary coefficient
// c(alpha1, alpha2) and its analytic continuation, the ball constants
// b_0..b_3, and the log-case q-integral.

namespace heatcontent {

// Refusal radius around poles and denominator zeros.
inline constexpr double kPoleRadius = 1e-8;

// Singularity exponents of the initial temperature (alpha1) and the specific
// heat (alpha2). Admissible when both are finite and strictly below 2.
struct AlphaPair {
  double alpha1 = 0.0;
  double alpha2 = 0.0;

  double sum() const { return alpha1 + alpha2; }
  bool admissible() const;
  // True when the sum lies within `radius` of an integer.
  bool integer_sum(double radius = kPoleRadius) const;
  // Sum equal to 1 within `radius`: the logarithmic threshold.
  bool log_case(double radius = kPoleRadius) const;
  AlphaPair swapped() const { return {alpha2, alpha1}; }
  AlphaPair shifted(int k1, int k2) const { return {alpha1 - k1, alpha2 - k2}; }
};

// Throws DomainError unless ap.admissible().
void require_admissible(const AlphaPair& ap);

// Gamma function; PoleError at zero and the negative integers.
double gamma_fn(double x);

// c(alpha1, alpha2) =
//   2^-s pi^-1/2 Gamma((2-s)/2) int_0^1 (r^-a1 + r^-a2)((1-r)^(s-2) - (1+r)^(s-2)) dr
// with s = a1 + a2. The integral converges only for s > 1; below that the
// value is the analytic continuation. Poles: s = 2 (Gamma) and s = 1, -1,
// -3, ... (continuation). PoleError within kPoleRadius of any of them.
// Below s = 1 the continuation is a sum of pieces of size about 2^|s|, so
// relative accuracy degrades to roughly 1e-16 * 2^|s| / |c| (near 1e-10 at
// s = -8).
double c_coef(const AlphaPair& ap);

// The same coefficient by plain quadrature of the rho-integral, no
// continuation. Requires 1 < s < 4, s != 2.
double c_coef_direct(const AlphaPair& ap);

struct BallCoeffs {
  double b0 = 0.0, b1 = 0.0, b2 = 0.0, b3 = 0.0;
  double s = 0.0;
  // Power of the radius multiplying b_j t^(j/2): 3 - j - s.
  double radius_power(int j) const { return 3.0 - j - s; }
};

// Constants of the constant/t^(j/2) part of the ball expansion.
// Denominator zeros at s in {-1, 0, 1, 2, 3} raise PoleError.
BallCoeffs ball_b_coeffs(const AlphaPair& ap);

// Measure of the log-case q-integral. Stated: q^-1 (1+q^2) dq. Angular: q^-1 dq,
// the form reached from the angular integral over phi with q = tan(phi)
// including dphi = dq/(1+q^2). Only the angular form matches the measured
// constant of Q(t); at alpha1 = 1 it makes the whole constant gamma_E.
enum class QMeasure { Stated, Angular };

// I(alpha) = int_0^1 m(q) { ((1+q)/(1-q))^(alpha-1) + ((1-q)/(1+q))^alpha
//                          - 2 (1-q)(1+q^2)^-1/2 } dq,  -1 < alpha < 2,
// with m the chosen measure density.
double q_integral(double alpha1, QMeasure measure = QMeasure::Stated);

// Integrand of q_integral at q (with 1 - q passed exactly).
double q_integrand(double alpha1, double q, double one_minus_q, QMeasure measure = QMeasure::Stated);

// Constant term of the log-case expansion:
//   gamma_E + 4 log(sqrt2 - 1) + 4 log 2 + chi_integral + I(alpha1),
// where chi_integral is 2 int_[eps, a/2] chi1 chi2 x^-1 dx.
double log_case_constant(double alpha1, double chi_integral, QMeasure measure = QMeasure::Stated);

}  // namespace heatcontent
