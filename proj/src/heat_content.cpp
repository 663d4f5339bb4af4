#include "heatcontent/heat_content.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <numbers>
#include <thread>
#include <tuple>

#include "heatcontent/kernels1d.hpp"
#include "heatcontent/quadrature.hpp"

namespace heatcontent {

namespace {

// Nodes are kept at least this far (relative) from the singular corner, so
// that x^(1 - alpha) products stay finite. The skipped mass is of order
// kCornerGap^(2 - alpha).
constexpr double kCornerGap = 1e-120;
// Kernel truncation relative to its peak (4 pi t)^-1/2.
constexpr double kKernelRelTol = 1e-18;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double kernel_tol(double t) { return kKernelRelTol / std::sqrt(4.0 * std::numbers::pi * t); }

void require_time(double t, const char* what) {
  if (!(t > 0.0 && std::isfinite(t))) throw DomainError(std::string(what) + ": t must be positive, got " + num(t));
}

void require_tol(double tol, double rel_tol, const char* what) {
  if (!(tol >= 0.0) || !(rel_tol >= 0.0) || (tol == 0.0 && rel_tol == 0.0))
    throw DomainError(std::string(what) + ": need tol >= 0, rel_tol >= 0, not both zero");
}

// Each cutoff either vanishes before a/2 or is identically 1 on [0, a/2].
void require_interval_cutoffs(const CutoffFunction& chi1, const CutoffFunction& chi2, double a, const char* what) {
  if (!(a > 0.0 && std::isfinite(a))) throw DomainError(std::string(what) + ": a must be positive");
  for (const auto* c : {&chi1, &chi2})
    if (!(c->eps_out < 0.5 * a) && c->eps_in < 0.5 * a)
      throw DomainError(std::string(what) + ": cutoff must vanish before a/2 or equal 1 up to a/2, a = " + num(a));
}

void require_support(const CutoffFunction& chi1, const CutoffFunction& chi2, double a, const char* what) {
  if (!(a > 0.0 && std::isfinite(a))) throw DomainError(std::string(what) + ": a must be positive");
  if (!(chi1.eps_out < 0.5 * a) || !(chi2.eps_out < 0.5 * a))
    throw DomainError(std::string(what) + ": cutoff support must lie inside [0, a/2), a = " + num(a));
}

// chi(x) x^(1 - alpha); the remaining x^-1 is absorbed by the reduced kernel.
double weight(const CutoffFunction& chi, double alpha, double x) {
  const double c = chi(x);
  return c == 0.0 ? 0.0 : c * std::pow(x, 1.0 - alpha);
}

// w, 3w, 9w, ... below `upper`, plus the extra points.
std::vector<double> geometric_breaks(double w, double upper, std::initializer_list<double> extra) {
  std::vector<double> br;
  for (double b = w; b < upper; b *= 3.0) br.push_back(b);
  for (double e : extra)
    if (e > 0.0 && e < upper) br.push_back(e);
  std::sort(br.begin(), br.end());
  return br;
}

QSample finish(const quad::Estimate& e, double t, double scale, double tol, double rel_tol, const char* what) {
  QSample q{t, scale * e.value, std::abs(scale) * e.err};
  if (!e.converged && q.err > std::max(tol, rel_tol * std::abs(q.value)))
    throw ConvergenceError(std::string(what) + ": quadrature did not converge at t = " + num(t) + " (value " +
                           num(q.value) + ", err " + num(q.err) + ")");
  if (!std::isfinite(q.value)) throw ConvergenceError(std::string(what) + ": non-finite value at t = " + num(t));
  return q;
}

quad::Options2d corner_options(double rel_tol, double t, std::vector<double> breaks, bool diagonal) {
  quad::Options2d opt;
  opt.rel_tol = rel_tol;
  opt.min_gap = kCornerGap;
  if (diagonal) opt.diagonal = quad::DiagonalHint{2.0 * std::sqrt(t)};
  opt.x_breaks = breaks;
  opt.y_breaks = std::move(breaks);
  return opt;
}

// Exchanging (alpha1, chi1) and (alpha2, chi2) leaves Q unchanged; putting the
// pair in a fixed order makes the computed values identical as well.
struct Ordered {
  AlphaPair ap;
  CutoffFunction chi1, chi2;
};

Ordered ordered(const AlphaPair& ap, const CutoffFunction& chi1, const CutoffFunction& chi2) {
  const auto k1 = std::tuple(ap.alpha1, chi1.eps_in, chi1.eps_out);
  const auto k2 = std::tuple(ap.alpha2, chi2.eps_in, chi2.eps_out);
  if (k2 < k1) return {ap.swapped(), chi2, chi1};
  return {ap, chi1, chi2};
}

}  // namespace

double CutoffFunction::operator()(double x) const {
  if (x <= eps_in) return 1.0;
  if (x >= eps_out) return 0.0;
  // h(eps_out - x) / (h(eps_out - x) + h(x - eps_in)) with h(u) = exp(-1/u)
  const double z = 1.0 / (eps_out - x) - 1.0 / (x - eps_in);
  return 1.0 / (1.0 + std::exp(z));
}

CutoffFunction bump_cutoff(double eps_in, double eps_out) {
  if (!(eps_in > 0.0 && eps_in < eps_out && std::isfinite(eps_out)))
    throw DomainError("bump_cutoff: need 0 < eps_in < eps_out, got " + num(eps_in) + ", " + num(eps_out));
  return {eps_in, eps_out};
}

QSample q_halfline(const AlphaPair& ap_in, const CutoffFunction& chi1_in, const CutoffFunction& chi2_in, double t,
                   double tol, double rel_tol) {
  const auto [ap, chi1, chi2] = ordered(ap_in, chi1_in, chi2_in);
  require_admissible(ap);
  require_time(t, "q_halfline");
  require_tol(tol, rel_tol, "q_halfline");
  bump_cutoff(chi1.eps_in, chi1.eps_out);
  bump_cutoff(chi2.eps_in, chi2.eps_out);
  const double e1 = chi1.eps_out, e2 = chi2.eps_out;
  auto f = [&](double x, double y) {
    const double r = gauss(x - y, t) * -std::expm1(-x * y / t) / (x * y);
    return r * weight(chi1, ap.alpha1, x) * weight(chi2, ap.alpha2, y);
  };
  const auto breaks =
      geometric_breaks(2.0 * std::sqrt(t), std::max(e1, e2), {chi1.eps_in, chi2.eps_in, e1, e2});
  const auto e = quad::integrate_2d(f, {0.0, e1, 0.0, e2}, tol, corner_options(rel_tol, t, breaks, true));
  return finish(e, t, 1.0, tol, rel_tol, "q_halfline");
}

QSample q_interval(const AlphaPair& ap_in, const CutoffFunction& chi1_in, const CutoffFunction& chi2_in, double a,
                   double t, double tol, double rel_tol) {
  const auto [ap, chi1, chi2] = ordered(ap_in, chi1_in, chi2_in);
  require_admissible(ap);
  require_time(t, "q_interval");
  require_tol(tol, rel_tol, "q_interval");
  bump_cutoff(chi1.eps_in, chi1.eps_out);
  bump_cutoff(chi2.eps_in, chi2.eps_out);
  require_interval_cutoffs(chi1, chi2, a, "q_interval");
  const IntervalKernel k(a, t, kernel_tol(t));
  const double e1 = std::min(chi1.eps_out, 0.5 * a), e2 = std::min(chi2.eps_out, 0.5 * a);
  const auto breaks =
      geometric_breaks(2.0 * std::sqrt(t), std::max(e1, e2), {chi1.eps_in, chi2.eps_in, e1, e2});

  // The four boundary corners pair up under p(x1, x2) = p(a - x1, a - x2):
  //   Q = 2 int int [p(x1, x2) + p(x1, a - x2)] w1(x1) w2(x2),  x_i in [0, min(eps_out_i, a/2)].
  auto near = [&](double x, double y) {
    return k.reduced(x, y) * weight(chi1, ap.alpha1, x) * weight(chi2, ap.alpha2, y);
  };
  auto far = [&](double x, double y) {
    return k.cross_reduced(x, y) * weight(chi1, ap.alpha1, x) * weight(chi2, ap.alpha2, y);
  };
  const quad::Rect rect{0.0, e1, 0.0, e2};
  const auto en = quad::integrate_2d(near, rect, 0.25 * tol, corner_options(rel_tol, t, breaks, true));
  // The reflected term is exponentially small for t << a^2; it only needs
  // accuracy relative to the whole.
  const double far_tol = std::max(0.25 * tol, 0.5 * rel_tol * std::abs(en.value));
  const auto ef = quad::integrate_2d(far, rect, far_tol, corner_options(0.0, t, breaks, false));
  quad::Estimate sum;
  sum.value = en.value + ef.value;
  sum.err = en.err + ef.err;
  sum.evaluations = en.evaluations + ef.evaluations;
  sum.converged = en.converged && ef.converged;
  return finish(sum, t, 2.0, tol, rel_tol, "q_interval");
}

QSample interval_halfline_gap(const AlphaPair& ap_in, const CutoffFunction& chi1_in, const CutoffFunction& chi2_in,
                              double a, double t, double rel_tol) {
  const auto [ap, chi1, chi2] = ordered(ap_in, chi1_in, chi2_in);
  require_admissible(ap);
  require_time(t, "interval_halfline_gap");
  require_tol(0.0, rel_tol, "interval_halfline_gap");
  require_support(chi1, chi2, a, "interval_halfline_gap");
  const IntervalKernel k(a, t, kernel_tol(t));
  const double e1 = chi1.eps_out, e2 = chi2.eps_out;
  const auto breaks = geometric_breaks(2.0 * std::sqrt(t), std::max(e1, e2), {chi1.eps_in, chi2.eps_in, e1, e2});
  auto images = [&](double x, double y) {
    return k.halfline_correction(x, y, true) * weight(chi1, ap.alpha1, x) * weight(chi2, ap.alpha2, y);
  };
  auto far = [&](double x, double y) {
    return k.cross_reduced(x, y) * weight(chi1, ap.alpha1, x) * weight(chi2, ap.alpha2, y);
  };
  const quad::Rect rect{0.0, e1, 0.0, e2};
  // Both pieces are exponentially small; only relative accuracy is asked for.
  const auto ef = quad::integrate_2d(far, rect, 0.0, corner_options(rel_tol, t, breaks, false));
  const auto ei = quad::integrate_2d(images, rect, 0.5 * rel_tol * std::abs(ef.value),
                                     corner_options(rel_tol, t, breaks, false));
  quad::Estimate sum;
  sum.value = ei.value + ef.value;
  sum.err = ei.err + ef.err;
  sum.converged = ei.converged && ef.converged;
  return finish(sum, t, 2.0, 0.0, rel_tol, "interval_halfline_gap");
}

QSample q_ball(const AlphaPair& ap_in, double a, double t, double tol, double rel_tol) {
  const AlphaPair ap = ap_in.alpha2 < ap_in.alpha1 ? ap_in.swapped() : ap_in;
  require_admissible(ap);
  require_time(t, "q_ball");
  require_tol(tol, rel_tol, "q_ball");
  if (!(a > 0.0 && std::isfinite(a))) throw DomainError("q_ball: radius must be positive");
  const IntervalKernel k(a, t, kernel_tol(t));
  // With u = a - r and p(a - u1, a - u2) = p(u1, u2):
  //   Q = 4 pi int int p(u1, u2) (a - u1) u1^-alpha1 (a - u2) u2^-alpha2 du1 du2.
  // Each axis is split at a/2. On the far half the distance g = a - u to the
  // centre is the variable, so the kernel keeps relative accuracy at both
  // Dirichlet ends:
  //   near(u) = (a - u) u^(1 - alpha)      (times u in the reduced kernel)
  //   far(g)  = g^2 (a - g)^-alpha         (times g in the reduced kernel)
  const double h = 0.5 * a;
  auto wn = [&](double u, double al) { return (a - u) * std::pow(u, 1.0 - al); };
  auto wf = [&](double g, double al) { return g * g * std::pow(a - g, -al); };
  auto nn = [&](double u1, double u2) { return k.reduced(u1, u2) * wn(u1, ap.alpha1) * wn(u2, ap.alpha2); };
  auto ff = [&](double g1, double g2) { return k.reduced(g1, g2) * wf(g1, ap.alpha1) * wf(g2, ap.alpha2); };
  // p(u1, a - g2) and, by symmetry of p, p(a - g1, u2) = p(u2, a - g1).
  auto nf = [&](double u1, double g2) { return k.cross_reduced(u1, g2) * wn(u1, ap.alpha1) * wf(g2, ap.alpha2); };
  auto fn = [&](double g1, double u2) { return k.cross_reduced(u2, g1) * wf(g1, ap.alpha1) * wn(u2, ap.alpha2); };
  const quad::Rect rect{0.0, h, 0.0, h};
  const auto breaks = geometric_breaks(2.0 * std::sqrt(t), h, {});
  const double part_tol = 0.25 * tol / (4.0 * std::numbers::pi);
  const auto e_nn = quad::integrate_2d(nn, rect, part_tol, corner_options(rel_tol, t, breaks, true));
  const auto e_ff = quad::integrate_2d(ff, rect, part_tol, corner_options(rel_tol, t, breaks, true));
  // The mixed blocks carry the diagonal only where it leaves through the
  // corner (a/2, a/2): a small share of the whole, resolved with breaks
  // mirrored about a/2.
  auto mixed_breaks = breaks;
  for (double b : breaks) mixed_breaks.push_back(h - b);
  std::sort(mixed_breaks.begin(), mixed_breaks.end());
  const double mixed_tol = std::max(part_tol, 0.25 * rel_tol * std::abs(e_nn.value + e_ff.value));
  const auto e_nf = quad::integrate_2d(nf, rect, mixed_tol, corner_options(0.0, t, mixed_breaks, false));
  const auto e_fn = quad::integrate_2d(fn, rect, mixed_tol, corner_options(0.0, t, mixed_breaks, false));
  quad::Estimate sum;
  for (const auto* e : {&e_nn, &e_ff, &e_nf, &e_fn}) {
    sum.value += e->value;
    sum.err += e->err;
    sum.evaluations += e->evaluations;
    sum.converged = sum.converged && e->converged;
  }
  return finish(sum, t, 4.0 * std::numbers::pi, tol, rel_tol, "q_ball");
}

double chi_integral(const CutoffFunction& chi1, const CutoffFunction& chi2, double a) {
  require_support(chi1, chi2, a, "chi_integral");
  const double lo = std::min(chi1.eps_in, chi2.eps_in);
  const double hi = std::min(chi1.eps_out, chi2.eps_out);
  std::vector<double> br{lo};
  for (const auto* c : {&chi1, &chi2})
    for (double b : {c->eps_in, 0.5 * (c->eps_in + c->eps_out)})
      if (b > lo && b < hi) br.push_back(b);
  br.push_back(hi);
  std::sort(br.begin(), br.end());
  const auto e = quad::integrate_1d([&](double x) { return chi1(x) * chi2(x) / x; }, std::span<const double>(br),
                                    1e-16, {1e-14, 3, quad::kMaxLevel});
  if (!e.converged) throw ConvergenceError("chi_integral: quadrature did not converge");
  return 2.0 * e.value;
}

QSample evaluate(const QSpec& spec, double t) {
  switch (spec.kind) {
    case QSpec::Kind::Interval:
      return q_interval(spec.alpha, spec.chi1, spec.chi2, spec.a, t, spec.tol, spec.rel_tol);
    case QSpec::Kind::HalfLine:
      return q_halfline(spec.alpha, spec.chi1, spec.chi2, t, spec.tol, spec.rel_tol);
    case QSpec::Kind::Ball:
      return q_ball(spec.alpha, spec.a, t, spec.tol, spec.rel_tol);
  }
  throw DomainError("evaluate: unknown domain kind");
}

int resolve_threads(int threads) {
  if (threads > 0) return threads;
  if (threads < 0) {
    if (const char* env = std::getenv("HC_THREADS")) {
      char* end = nullptr;
      const long v = std::strtol(env, &end, 10);
      if (end == env || *end != '\0' || v < 0) throw DomainError(std::string("HC_THREADS: not a count: ") + env);
      if (v > 0) return static_cast<int>(v);
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<QSample> q_grid(const QSpec& spec, std::span<const double> t_grid, int threads) {
  for (std::size_t i = 0; i < t_grid.size(); ++i)
    if (!(t_grid[i] > 0.0 && std::isfinite(t_grid[i])))
      throw DomainError("q_grid: t[" + std::to_string(i) + "] = " + num(t_grid[i]) + " is not positive");
  std::vector<QSample> out(t_grid.size());
  if (t_grid.empty()) return out;

  std::vector<std::pair<std::size_t, std::string>> failures;
  std::mutex mu;
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < t_grid.size(); i = next++) {
      try {
        out[i] = evaluate(spec, t_grid[i]);
      } catch (const std::exception& ex) {
        std::lock_guard lock(mu);
        failures.emplace_back(i, ex.what());
      }
    }
  };
  const int n = std::min<int>(resolve_threads(threads), static_cast<int>(t_grid.size()));
  if (n <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n; ++i) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (!failures.empty()) {
    std::sort(failures.begin(), failures.end());
    std::string msg = "q_grid: " + std::to_string(failures.size()) + " of " + std::to_string(t_grid.size()) +
                      " points failed; first at index " + std::to_string(failures.front().first) + ": " +
                      failures.front().second;
    throw GridError(msg, std::move(failures));
  }
  return out;
}

std::vector<double> log_grid(double t_min, double t_max, int n) {
  if (!(t_min > 0.0 && t_max >= t_min) || n < 1) throw DomainError("log_grid: need 0 < t_min <= t_max and n >= 1");
  std::vector<double> g(static_cast<std::size_t>(n));
  if (n == 1) {
    g[0] = t_min;
    return g;
  }
  const double l0 = std::log(t_min), l1 = std::log(t_max);
  for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = std::exp(l0 + (l1 - l0) * i / (n - 1));
  g.front() = t_min;
  g.back() = t_max;
  return g;
}

}  // namespace heatcontent
