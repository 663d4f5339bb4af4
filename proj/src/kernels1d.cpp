#include "heatcontent/kernels1d.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "heatcontent/errors.hpp"

namespace heatcontent {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void require_length(double a, const char* what) {
  if (!(a > 0.0 && std::isfinite(a))) throw DomainError(std::string(what) + ": length must be positive, got " + num(a));
}

// (1 - exp(-z)) / z, continuous at 0.
double m_over(double z) {
  if (std::abs(z) < 1e-5) return 1.0 - z * (0.5 - z / 6.0);
  return -std::expm1(-z) / z;
}

double sinc(double z) {
  if (std::abs(z) < 1e-4) return 1.0 - z * z / 6.0;
  return std::sin(z) / z;
}

// Neumaier compensated accumulator.
struct Accumulator {
  double sum = 0.0, comp = 0.0;
  void add(double v) {
    const double s = sum + v;
    if (std::abs(sum) >= std::abs(v))
      comp += (sum - s) + v;
    else
      comp += (v - s) + sum;
    sum = s;
  }
  double value() const { return sum + comp; }
};

double eigen_bound(double a, double t, int n) {
  const double c = std::numbers::pi * std::numbers::pi * t / (a * a);
  const double m = n + 1.0;
  return 2.0 / a * std::exp(-m * m * c) / -std::expm1(-(2.0 * m + 1.0) * c);
}

}  // namespace

Domain1D Domain1D::left_ray(double a) {
  if (!std::isfinite(a)) throw DomainError("left_ray: endpoint must be finite");
  return {DomainKind::LeftRay, a};
}

Domain1D Domain1D::interval(double a) {
  require_length(a, "interval");
  return {DomainKind::Interval, a};
}

bool Domain1D::contains(double x) const {
  if (!std::isfinite(x)) return false;
  switch (kind) {
    case DomainKind::FullLine:
      return true;
    case DomainKind::HalfLine:
      return x >= 0.0;
    case DomainKind::LeftRay:
      return x <= a;
    case DomainKind::Interval:
      return x >= 0.0 && x <= a;
  }
  return false;
}

double gauss(double d, double t) { return std::exp(-d * d / (4.0 * t)) / std::sqrt(4.0 * std::numbers::pi * t); }

double half_line_kernel(double x1, double x2, double t) { return gauss(x1 - x2, t) * -std::expm1(-x1 * x2 / t); }

double left_ray_kernel_from_gaps(double g1, double g2, double t) { return half_line_kernel(g1, g2, t); }

ImageCount image_count(double a, double t, double tol, int cap) {
  require_length(a, "image_count");
  if (!(t > 0.0) || !(tol > 0.0)) throw DomainError("image_count: t and tol must be positive");
  const double lead = 4.0 / std::sqrt(4.0 * std::numbers::pi * t);
  const double r = a * a / t;
  auto bound = [&](int n) {
    const double dn = n;
    return lead * std::exp(-dn * dn * r) / -std::expm1(-(2.0 * dn + 1.0) * r);
  };
  for (int n = 1; n <= cap; ++n) {
    const double b = bound(n);
    if (b <= tol) return {n, false, b};
  }
  return {cap, true, bound(cap)};
}

IntervalKernel::IntervalKernel(double a, double t, double tol, int cap) : a_(a), t_(t) {
  require_length(a, "IntervalKernel");
  if (!(t > 0.0 && std::isfinite(t))) throw DomainError("IntervalKernel: t must be positive, got " + num(t));
  if (!(tol > 0.0)) throw DomainError("IntervalKernel: tol must be positive");
  eigen_ = t / (a * a) > 1.0;
  if (eigen_) {
    // At most 1 + ceil(a sqrt(|log tol| / t) / pi) modes are ever needed.
    const int limit = 1 + static_cast<int>(std::ceil(a * std::sqrt(std::abs(std::log(tol)) / t) / std::numbers::pi));
    int n = 1;
    while (n < limit && eigen_bound(a, t, n) > tol) ++n;
    terms_ = n;
    bound_ = eigen_bound(a, t, n);
    norm_ = 2.0 / a;
  } else {
    const auto ic = image_count(a, t, tol, cap);
    if (ic.capped)
      throw ToleranceError("IntervalKernel: tolerance " + num(tol) + " needs more than " + std::to_string(cap) +
                           " images at a = " + num(a) + ", t = " + num(t));
    terms_ = ic.n;
    bound_ = ic.bound;
  }
}

// The images at +-c combine into
//   G(u - c) + G(u + c) - G(v - c) - G(v + c),  u = x - y, v = x + y,
// which equals (4 pi t)^-1/2 times
//   E- [m(xy/t) - m(2kx) m(2ky)] + E+ m(xy/t),
//   E-+ = exp(-((c -+ v)^2 - 4xy) / 4t),  k = c / 2t,  m(z) = 1 - exp(-z).
// Every term carries the factor xy explicitly, so the pair keeps its relative
// accuracy at the corner; with `reduced` the factor xy is divided out.
// Requires v <= c / 2 for the exponentials to stay bounded.
double IntervalKernel::image_pair_group(double x, double y, double c, bool reduced) const {
  const double xy = x * y;
  const double k = c / (2.0 * t_);
  const double em = reduced ? m_over(xy / t_) / t_ : -std::expm1(-xy / t_);
  const double em2 = reduced ? 4.0 * k * k * m_over(2.0 * k * x) * m_over(2.0 * k * y)
                             : std::expm1(-2.0 * k * x) * std::expm1(-2.0 * k * y);
  const double v = x + y;
  const double e_minus = std::exp(-((c - v) * (c - v) - 4.0 * xy) / (4.0 * t_));
  const double e_plus = std::exp(-((c + v) * (c + v) - 4.0 * xy) / (4.0 * t_));
  return (e_minus * (em - em2) + e_plus * em) / std::sqrt(4.0 * std::numbers::pi * t_);
}

double IntervalKernel::image_sum(double x, double y, bool skip_direct, bool reduced) const {
  Accumulator acc;
  if (!skip_direct) {
    const double em = reduced ? m_over(x * y / t_) / t_ : -std::expm1(-x * y / t_);
    acc.add(gauss(x - y, t_) * em);
  }
  for (int n = 1; n <= terms_; ++n) acc.add(image_pair_group(x, y, 2.0 * n * a_, reduced));
  return acc.value();
}

// p(x1, a - g2) = -sum_{m >= 0} (group at c = (2m + 1) a), x1 + g2 <= a/2.
double IntervalKernel::cross_sum(double x1, double g2, bool reduced) const {
  Accumulator acc;
  for (int m = 0; m <= terms_; ++m) acc.add(-image_pair_group(x1, g2, (2.0 * m + 1.0) * a_, reduced));
  return acc.value();
}

double IntervalKernel::eigen_sum(double x1, double x2, bool reduced, bool cross) const {
  Accumulator acc;
  const double k = std::numbers::pi / a_;
  for (int n = 1; n <= terms_; ++n) {
    const double kn = k * n;
    double v = std::exp(-kn * kn * t_);
    v *= reduced ? kn * kn * sinc(kn * x1) * sinc(kn * x2) : std::sin(kn * x1) * std::sin(kn * x2);
    acc.add(cross && n % 2 == 0 ? -v : v);
  }
  return norm_ * acc.value();
}

double IntervalKernel::evaluate(double x, double y, bool reduced) const {
  if (eigen_) return eigen_sum(x, y, reduced, false);
  if (x + y <= a_) return image_sum(x, y, false, reduced);
  const double s = std::min(x, y), l = std::max(x, y);
  if (s < 0.25 * a_) {
    // Near the opposite corner: keep the small coordinate exact.
    const double g = a_ - l;
    return reduced ? cross_sum(s, g, true) * (g / l) : cross_sum(s, g, false);
  }
  const double p = image_sum(a_ - x, a_ - y, false, false);
  return reduced ? p / (x * y) : p;
}

double IntervalKernel::operator()(double x1, double x2) const { return evaluate(x1, x2, false); }

double IntervalKernel::reduced(double x1, double x2) const { return evaluate(x1, x2, true); }

double IntervalKernel::cross_eval(double x1, double g2, bool reduced) const {
  if (eigen_) return eigen_sum(x1, g2, reduced, true);
  if (x1 + g2 <= 0.5 * a_) return cross_sum(x1, g2, reduced);
  const double p = evaluate(x1, a_ - g2, false);
  return reduced ? p / (x1 * g2) : p;
}

double IntervalKernel::cross(double x1, double g2) const { return cross_eval(x1, g2, false); }

double IntervalKernel::cross_reduced(double x1, double g2) const { return cross_eval(x1, g2, true); }

double IntervalKernel::halfline_correction(double x1, double x2, bool reduced) const {
  if (eigen_) {
    const double em = reduced ? m_over(x1 * x2 / t_) / t_ : -std::expm1(-x1 * x2 / t_);
    return eigen_sum(x1, x2, reduced, false) - gauss(x1 - x2, t_) * em;
  }
  if (x1 + x2 > a_) throw DomainError("halfline_correction: requires x1 + x2 <= a");
  return image_sum(x1, x2, true, reduced);
}

KernelEval kernel(const Domain1D& dom, double x1, double x2, double t, double tol) {
  if (!(t > 0.0 && std::isfinite(t))) throw DomainError("kernel: t must be positive, got " + num(t));
  if (!(tol > 0.0)) throw DomainError("kernel: tol must be positive");
  if (!dom.contains(x1) || !dom.contains(x2))
    throw DomainError("kernel: point (" + num(x1) + ", " + num(x2) + ") outside the domain");
  KernelEval ev;
  switch (dom.kind) {
    case DomainKind::FullLine:
      ev.value = gauss(x1 - x2, t);
      break;
    case DomainKind::HalfLine:
      ev.value = half_line_kernel(x1, x2, t);
      break;
    case DomainKind::LeftRay:
      ev.value = left_ray_kernel_from_gaps(dom.a - x1, dom.a - x2, t);
      break;
    case DomainKind::Interval: {
      const IntervalKernel k(dom.a, t, tol);
      ev.value = k(x1, x2);
      ev.images_used = k.terms();
      ev.truncation_bound = k.truncation_bound();
      break;
    }
  }
  return ev;
}

}  // namespace heatcontent
