#pragma once

// Dirichlet heat kernels on the real line, the half-line [0, inf), the left
// ray (-inf, a] and the interval [0, a].

#include <vector>

namespace heatcontent {

enum class DomainKind { FullLine, HalfLine, LeftRay, Interval };

struct Domain1D {
  DomainKind kind = DomainKind::FullLine;
  double a = 0.0;  // right end for LeftRay and Interval

  static Domain1D full_line() { return {DomainKind::FullLine, 0.0}; }
  static Domain1D half_line() { return {DomainKind::HalfLine, 0.0}; }
  static Domain1D left_ray(double a);
  static Domain1D interval(double a);

  bool contains(double x) const;
};

struct KernelEval {
  double value = 0.0;
  int images_used = 0;  // image pairs (or eigenmodes) summed; 0 for closed forms
  double truncation_bound = 0.0;
};

inline constexpr int kDefaultImageCap = 64;

struct ImageCount {
  int n = 1;
  bool capped = false;
  double bound = 0.0;  // tail majorant at n
};

// (4 pi t)^-1/2 exp(-d^2 / 4t)
double gauss(double d, double t);

// exp(-x1 x2 / t) < 1 carried as -expm1, so the kernel stays accurate when a
// point is much closer to the boundary than machine epsilon times its scale.
double half_line_kernel(double x1, double x2, double t);

// Kernel of (-inf, a] from the distances to the boundary point.
double left_ray_kernel_from_gaps(double g1, double g2, double t);

// Smallest N >= 1 with
//   B(N) = 4 (4 pi t)^-1/2 exp(-N^2 a^2 / t) / (1 - exp(-(2N+1) a^2 / t)) <= tol.
// B(N) majorises the images |n| > N of the interval sum: for x1, x2 in [0, a]
// both |x1 -+ x2 - 2na| >= 2(|n| - 1)a, and the Gaussian tail over m >= N is
// bounded by its first term over one minus the ratio of consecutive terms.
// Returns {cap, true, B(cap)} when no N <= cap suffices.
ImageCount image_count(double a, double t, double tol, int cap = kDefaultImageCap);

// Interval kernel for a fixed (a, t, tol), reusable across many points.
// Uses the image sum for t <= a^2 and the sine eigenfunction series above.
class IntervalKernel {
 public:
  IntervalKernel(double a, double t, double tol, int cap = kDefaultImageCap);

  double operator()(double x1, double x2) const;

  // p(x1, x2) / (x1 x2) for x1, x2 in (0, a]; stays accurate (and finite)
  // when either point is far closer to 0 than machine epsilon.
  double reduced(double x1, double x2) const;

  double a() const { return a_; }
  double t() const { return t_; }
  bool eigen_series() const { return eigen_; }
  int terms() const { return terms_; }
  double truncation_bound() const { return bound_; }

  // p(x1, a - g2) with g2 passed exactly, and the same divided by x1 g2.
  double cross(double x1, double g2) const;
  double cross_reduced(double x1, double g2) const;

  // p_interval(x1, x2) - p_halfline(x1, x2) for x1 + x2 <= a, from the images
  // n != 0 (optionally divided by x1 x2).
  double halfline_correction(double x1, double x2, bool reduced = false) const;

 private:
  double evaluate(double x, double y, bool reduced) const;
  double image_pair_group(double x, double y, double c, bool reduced) const;
  double image_sum(double x, double y, bool skip_direct, bool reduced) const;
  double cross_sum(double x1, double g2, bool reduced) const;
  double cross_eval(double x1, double g2, bool reduced) const;
  double eigen_sum(double x1, double x2, bool reduced, bool cross) const;

  double a_, t_;
  bool eigen_ = false;
  int terms_ = 0;
  double bound_ = 0.0;
  double norm_ = 0.0;
};

// Kernel at (x1, x2, t) with truncation error <= tol.
// DomainError for points outside the closed domain or t <= 0 / tol <= 0;
// ToleranceError if the interval image count would exceed the cap.
KernelEval kernel(const Domain1D& dom, double x1, double x2, double t, double tol);

}  // namespace heatcontent
