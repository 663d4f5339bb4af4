#pragma once

// Heat content Q(t) = int int p(x1, x2; t) psi1(x1) psi2(x2) dx1 dx2 for the
// interval [0, a] and the half-line with cut-off singular data, and for the
// ball of radius a in R^3 with radial data (a - r)^-alpha.

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "heatcontent/errors.hpp"
#include "heatcontent/special_fns.hpp"

namespace heatcontent {

// chi(x) = h(eps_out - x) / (h(eps_out - x) + h(x - eps_in)), h(u) = exp(-1/u)
// for u > 0 and 0 otherwise: 1 on [0, eps_in], 0 on [eps_out, inf).
struct CutoffFunction {
  double eps_in = 0.0;
  double eps_out = 0.0;
  double operator()(double x) const;
};

CutoffFunction bump_cutoff(double eps_in, double eps_out);

struct QSample {
  double t = 0.0;
  double value = 0.0;
  double err = 0.0;
};

// Default relative accuracy target; the absolute tolerance `tol` of each
// evaluator is relaxed to rel_tol * |Q| when that is larger.
inline constexpr double kDefaultRelTol = 1e-12;

// Integral over [0, a]^2 with weights chi_i(delta) delta^-alpha_i,
// delta(x) = min(x, a - x). Each cutoff must vanish before a/2, or have
// eps_in >= a/2 so that chi(delta) is identically 1 on the interval.
QSample q_interval(const AlphaPair& ap, const CutoffFunction& chi1, const CutoffFunction& chi2, double a, double t,
                   double tol, double rel_tol = kDefaultRelTol);

// Integral over [0, inf)^2 of the half-line kernel with weights chi_i(x) x^-alpha_i.
QSample q_halfline(const AlphaPair& ap, const CutoffFunction& chi1, const CutoffFunction& chi2, double t, double tol,
                   double rel_tol = kDefaultRelTol);

// q_interval - 2 q_halfline, integrated directly as
//   2 int int [p_I - p_halfline](x1, x2) w1 w2 + 2 int int p_I(x1, a - x2) w1 w2
// so that exponentially small values keep their relative accuracy.
QSample interval_halfline_gap(const AlphaPair& ap, const CutoffFunction& chi1, const CutoffFunction& chi2, double a,
                              double t, double rel_tol = 1e-8);

// Ball B_a in R^3 with psi_i = (a - |x|)^-alpha_i, via
//   Q = 4 pi int int p_[0,a](r1, r2) (a - r1)^-alpha1 (a - r2)^-alpha2 r1 r2 dr1 dr2.
QSample q_ball(const AlphaPair& ap, double a, double t, double tol, double rel_tol = kDefaultRelTol);

// 2 int_[eps, a/2] chi1 chi2 x^-1 dx with eps = min(chi1.eps_in, chi2.eps_in).
double chi_integral(const CutoffFunction& chi1, const CutoffFunction& chi2, double a);

struct QSpec {
  enum class Kind { Interval, HalfLine, Ball };
  Kind kind = Kind::Ball;
  AlphaPair alpha;
  double a = 1.0;
  CutoffFunction chi1{}, chi2{};
  double tol = 0.0;
  double rel_tol = kDefaultRelTol;
};

QSample evaluate(const QSpec& spec, double t);

// Raised by q_grid when some grid points fail; lists (index, message).
class GridError : public Error {
 public:
  GridError(std::string what, std::vector<std::pair<std::size_t, std::string>> failures)
      : Error(std::move(what)), failures_(std::move(failures)) {}
  const std::vector<std::pair<std::size_t, std::string>>& failures() const { return failures_; }

 private:
  std::vector<std::pair<std::size_t, std::string>> failures_;
};

// Worker count for q_grid: threads > 0 is used as given; 0 means hardware
// concurrency; a negative value reads HC_THREADS (0 or unset = hardware).
int resolve_threads(int threads);

// One sample per t, in input order, evaluated on up to `threads` workers.
std::vector<QSample> q_grid(const QSpec& spec, std::span<const double> t_grid, int threads = -1);

// n points log-spaced on [t_min, t_max], endpoints included.
std::vector<double> log_grid(double t_min, double t_max, int n);

}  // namespace heatcontent
