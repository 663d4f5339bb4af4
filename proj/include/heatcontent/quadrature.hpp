#pragma once

// Double-exponential (tanh-sinh) quadrature on finite intervals.
//
// Abscissae are generated on (0,1) by x = (1 + tanh(pi/2 sinh tau)) / 2 on
// the grid tau = k h with h = 2^(1-level). Every level contains the nodes of
// the previous one, so refinement only evaluates the new odd-indexed nodes.
// Nodes are kept as distances from the nearer endpoint ("gaps") so that an
// integrand with an algebraic endpoint singularity can be evaluated at
// points that are far closer to the endpoint than machine epsilon.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <type_traits>
#include <vector>

#include "heatcontent/errors.hpp"

namespace heatcontent::quad {

inline constexpr int kMinLevel = 1;
inline constexpr int kMaxLevel = 12;

struct QuadratureRule {
  // Abscissae in (0,1), strictly increasing. Nodes in the upper half are
  // carried exactly by their gap; `nodes` holds the rounded value 1 - gap.
  // Upper nodes that would round to a duplicate are omitted.
  std::vector<double> nodes;
  std::vector<double> gaps;
  std::vector<double> weights;
  int level = 0;
};

// Rule for level in [1, 12].
QuadratureRule de_rule(int level);

struct Estimate {
  double value = 0.0;
  double err = 0.0;  // |S(level) - S(level-1)|
  long evaluations = 0;
  int level = 0;
  bool converged = true;
};

struct Options {
  // Converged when err <= max(tol, rel_tol * |value|).
  double rel_tol = 0.0;
  int min_level = 3;
  int max_level = kMaxLevel;
  // Nodes closer to an endpoint than min_gap * (b - a) are skipped.
  double min_gap = 0.0;
};

namespace detail {

// Node table at the finest level. Entry k sits at tau = k * h_finest.
struct Table {
  double h_finest = 0.0;
  std::vector<double> gap;     // 1 / (1 + exp(2 z)), z = pi/2 sinh tau
  std::vector<double> weight;  // dx/dtau = pi cosh(tau) gap (1 - gap)
};

const Table& table();

inline int stride_for(int level) { return 1 << (kMaxLevel - level); }

void check_level(int level);

template <class F>
double call(F& f, double x, double lo_gap, double hi_gap) {
  if constexpr (std::is_invocable_v<F&, double, double, double>) {
    return static_cast<double>(f(x, lo_gap, hi_gap));
  } else {
    return static_cast<double>(f(x));
  }
}

}  // namespace detail

// Integrates f over [a, b]. f may take (x) or (x, x - a, b - x); the second
// form receives the endpoint distances exactly.
template <class F>
Estimate integrate_1d(F&& f, double a, double b, double tol, const Options& opt = {}) {
  if (!(tol >= 0.0)) throw DomainError("integrate_1d: negative tolerance");
  if (opt.min_level < kMinLevel || opt.max_level > kMaxLevel || opt.min_level > opt.max_level)
    throw DomainError("integrate_1d: level range outside [1, 12]");
  Estimate est;
  if (a == b) return est;
  if (!(std::isfinite(a) && std::isfinite(b))) throw DomainError("integrate_1d: infinite limits");
  double sign = 1.0;
  if (b < a) {
    std::swap(a, b);
    sign = -1.0;
  }
  const double len = b - a;
  const auto& tab = detail::table();
  std::size_t kmax = tab.gap.size() - 1;
  if (opt.min_gap > 0.0) {
    // gap is decreasing in k
    const auto it = std::partition_point(tab.gap.begin(), tab.gap.end(), [&](double g) { return g >= opt.min_gap; });
    kmax = std::max<std::size_t>(1, static_cast<std::size_t>(it - tab.gap.begin()) - 1);
  }

  // Symmetric pair of nodes at table index k > 0, restricted to the live tails.
  auto pair_value = [&](std::size_t k, std::size_t lo_cut, std::size_t hi_cut) {
    double contrib = 0.0;
    const double d = len * tab.gap[k];
    if (k <= lo_cut) {
      const double v = tab.weight[k] * detail::call(f, a + d, d, len - d);
      ++est.evaluations;
      if (!std::isfinite(v)) throw ConvergenceError("integrate_1d: non-finite integrand value");
      contrib += v;
    }
    if (k <= hi_cut) {
      const double v = tab.weight[k] * detail::call(f, b - d, len - d, d);
      ++est.evaluations;
      if (!std::isfinite(v)) throw ConvergenceError("integrate_1d: non-finite integrand value");
      contrib += v;
    }
    return contrib;
  };

  // First level: sweep the full table to find where each tail stops
  // contributing, then restrict refinement to that range.
  const int first = opt.min_level;
  int stride = detail::stride_for(first);
  std::size_t lo_cut = kmax, hi_cut = kmax;
  double sum = 0.0;
  {
    const double mid = detail::call(f, a + 0.5 * len, 0.5 * len, 0.5 * len);
    ++est.evaluations;
    if (!std::isfinite(mid)) throw ConvergenceError("integrate_1d: non-finite integrand value");
    sum = tab.weight[0] * mid;
    double peak = std::abs(sum);
    std::vector<double> lo_terms, hi_terms;
    std::vector<std::size_t> idx;
    for (std::size_t k = stride; k <= kmax; k += stride) {
      const double d = len * tab.gap[k];
      const double vl = tab.weight[k] * detail::call(f, a + d, d, len - d);
      const double vh = tab.weight[k] * detail::call(f, b - d, len - d, d);
      est.evaluations += 2;
      if (!std::isfinite(vl) || !std::isfinite(vh))
        throw ConvergenceError("integrate_1d: non-finite integrand value");
      lo_terms.push_back(vl);
      hi_terms.push_back(vh);
      idx.push_back(k);
      peak = std::max({peak, std::abs(vl), std::abs(vh)});
    }
    const double negligible = 1e-20 * peak;
    auto last_significant = [&](const std::vector<double>& terms) {
      std::size_t cut = 0;
      for (std::size_t i = 0; i < terms.size(); ++i)
        if (std::abs(terms[i]) > negligible) cut = idx[i];
      return std::min(kmax, cut + static_cast<std::size_t>(stride));
    };
    lo_cut = last_significant(lo_terms);
    hi_cut = last_significant(hi_terms);
    for (std::size_t i = 0; i < idx.size(); ++i) sum += lo_terms[i] + hi_terms[i];
  }

  double h = std::ldexp(1.0, 1 - first);
  double prev = h * sum * len;
  est.value = prev;
  est.level = first;
  est.err = std::numeric_limits<double>::infinity();
  est.converged = false;

  for (int level = first + 1; level <= opt.max_level; ++level) {
    stride = detail::stride_for(level);
    const std::size_t top = std::max(lo_cut, hi_cut);
    for (std::size_t k = stride; k <= top; k += 2 * static_cast<std::size_t>(stride))
      sum += pair_value(k, lo_cut, hi_cut);
    h *= 0.5;
    const double cur = h * sum * len;
    est.err = std::abs(cur - prev);
    est.value = cur;
    est.level = level;
    prev = cur;
    if (est.err <= std::max(tol, opt.rel_tol * std::abs(cur))) {
      est.converged = true;
      break;
    }
  }
  est.value *= sign;
  return est;
}

// Sums integrate_1d over consecutive pieces of a sorted breakpoint list
// (first and last entries are the limits).
template <class F>
Estimate integrate_1d(F&& f, std::span<const double> breaks, double tol, const Options& opt = {}) {
  if (breaks.size() < 2) throw DomainError("integrate_1d: need at least two breakpoints");
  Estimate total;
  const double piece_tol = tol / static_cast<double>(breaks.size() - 1);
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (breaks[i + 1] < breaks[i]) throw DomainError("integrate_1d: breakpoints not sorted");
    if (breaks[i + 1] == breaks[i]) continue;
    const auto part = integrate_1d(f, breaks[i], breaks[i + 1], piece_tol, opt);
    total.value += part.value;
    total.err += part.err;
    total.evaluations += part.evaluations;
    total.level = std::max(total.level, part.level);
    total.converged = total.converged && part.converged;
  }
  if (!total.converged && total.err <= std::max(tol, opt.rel_tol * std::abs(total.value)))
    total.converged = true;
  return total;
}

struct Rect {
  double x0, x1, y0, y1;
};

// Concentration of the integrand along y = x with Gaussian width `width`.
// The inner integral is split at the diagonal and clipped to
// |y - x| <= span * width; the integrand must be negligible beyond that.
struct DiagonalHint {
  double width;
  double span = 6.5;
};

struct Options2d {
  double rel_tol = 0.0;
  int min_level = 3;
  int max_level = kMaxLevel;
  double min_gap = 0.0;
  std::optional<DiagonalHint> diagonal;
  // Interior breakpoints for the outer (x) and inner (y) axes.
  std::vector<double> x_breaks;
  std::vector<double> y_breaks;
};

// Iterated tensor-product rule: every outer node runs its own inner level
// escalation. err = outer level difference + the inner tolerance integrated
// over x (0.1 tol + 0.1 rel_tol |value|) + the largest relative error of any
// inner integral that missed its tolerance, times |value|.
template <class F>
Estimate integrate_2d(F&& f, const Rect& r, double tol, const Options2d& opt = {}) {
  if (!(r.x1 >= r.x0 && r.y1 >= r.y0)) throw DomainError("integrate_2d: malformed rectangle");
  long inner_evals = 0;
  double inner_err = 0.0;
  bool inner_ok = true;
  const double inner_rel = opt.rel_tol > 0.0 ? 0.1 * opt.rel_tol : 0.0;
  const double inner_abs = 0.1 * tol / std::max(r.x1 - r.x0, 1e-300);
  Options in_opt{inner_rel, opt.min_level, opt.max_level, opt.min_gap};

  std::vector<double> ybr;
  auto inner = [&](double x) {
    auto g = [&](double y) { return f(x, y); };
    double lo = r.y0, hi = r.y1;
    if (opt.diagonal) {
      const double reach = opt.diagonal->span * opt.diagonal->width;
      lo = std::max(r.y0, x - reach);
      hi = std::min(r.y1, x + reach);
      if (lo >= hi) return 0.0;
    }
    ybr.clear();
    ybr.push_back(lo);
    for (double b : opt.y_breaks)
      if (b > lo && b < hi) ybr.push_back(b);
    if (opt.diagonal && x > lo && x < hi) ybr.push_back(x);
    ybr.push_back(hi);
    std::sort(ybr.begin(), ybr.end());
    const Estimate e = integrate_1d(g, std::span<const double>(ybr), inner_abs, in_opt);
    inner_evals += e.evaluations;
    // A converged inner integral is within its tolerance, which is accounted
    // for below. Misses are charged relative to their value, since the outer
    // weights multiply both alike.
    if (!e.converged) {
      inner_err = std::max(inner_err, e.value != 0.0 ? e.err / std::abs(e.value) : e.err);
      inner_ok = false;
    }
    return e.value;
  };

  std::vector<double> br;
  br.push_back(r.x0);
  for (double b : opt.x_breaks)
    if (b > r.x0 && b < r.x1) br.push_back(b);
  br.push_back(r.x1);
  std::sort(br.begin(), br.end());

  Options out_opt{opt.rel_tol, opt.min_level, opt.max_level, opt.min_gap};
  Estimate est = integrate_1d(inner, std::span<const double>(br), tol, out_opt);
  est.err += inner_abs * (r.x1 - r.x0) + (inner_rel + inner_err) * std::abs(est.value);
  est.evaluations += inner_evals;
  est.converged = est.converged && inner_ok;
  if (!est.converged && est.err <= std::max(tol, opt.rel_tol * std::abs(est.value))) est.converged = true;
  return est;
}

}  // namespace heatcontent::quad
