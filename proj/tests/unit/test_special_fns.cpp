#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "heatcontent/errors.hpp"
#include "heatcontent/special_fns.hpp"

using namespace heatcontent;

namespace {
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
}  // namespace

TEST_CASE("gamma_fn") {
  CHECK(gamma_fn(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(rel(gamma_fn(0.5), std::sqrt(std::numbers::pi)) < 1e-14);
  CHECK(rel(gamma_fn(2.5), 0.75 * std::sqrt(std::numbers::pi)) < 1e-14);
  CHECK(rel(gamma_fn(-0.5), -2.0 * std::sqrt(std::numbers::pi)) < 1e-14);
  CHECK_THROWS_AS(gamma_fn(0.0), PoleError);
  CHECK_THROWS_AS(gamma_fn(-3.0), PoleError);
}

TEST_CASE("c_coef against high-precision values") {
  // 50-digit values from tests/oracles/c_oracle.py.
  struct Row {
    double a1, a2, c;
  };
  const Row rows[] = {
      {0.7, 0.8, 2.22357540609106011759531232626},
      {0.4, 0.9, 3.550104125657247088323151},
      {1.8, 1.4, 3.616671875964986600013316},
      {0.8, 1.4, 1.471584577337200120042162},
      {1.8, 0.4, 3.116866152120338745047411},
      {0.8, 0.4, 5.175759466860412434927009},
      {-0.2, 1.4, 5.786675001543980298637086},
      {1.8, -0.6, 8.680012502315966064387654},
      {0.3, 0.4, -3.289539006643669652282205},
      {-0.5, 0.2, -0.8651575221933749852705236},
      {1.3, -1.9, 6.476110291133102746597099},
      {0.25, -2.6, -1.915566644450492497041073},
      {1.5, 0.3, 2.046948571189292759501447},
  };
  for (const auto& r : rows) {
    INFO("pair " << r.a1 << ", " << r.a2);
    CHECK(rel(c_coef({r.a1, r.a2}), r.c) < 1e-11);
  }
}

TEST_CASE("c_coef smooth case") {
  CHECK(std::abs(c_coef({0.0, 0.0}) + 2.0 / std::sqrt(std::numbers::pi)) < 1e-12);
}

TEST_CASE("c_coef is continuous across removable points") {
  const double at = c_coef({0.0, 0.0});
  CHECK(std::abs(c_coef({0.1, -0.1 + 1e-7}) - c_coef({0.1, -0.1})) < 1e-5);
  CHECK(std::abs(c_coef({1e-9, 0.0}) - at) < 1e-7);
  const double lo = c_coef({0.6, -2.6 - 1e-6});
  const double hi = c_coef({0.6, -2.6 + 1e-6});
  CHECK(std::abs(lo - hi) < 1e-4 * std::abs(lo));
}

TEST_CASE("c_coef poles and domain") {
  CHECK_THROWS_AS(c_coef({1.0, 1.0}), PoleError);
  CHECK_THROWS_AS(c_coef({0.5, 0.5}), PoleError);
  CHECK_THROWS_AS(c_coef({-0.5, -0.5}), PoleError);
  CHECK_THROWS_AS(c_coef({2.0, 0.1}), DomainError);
  CHECK_THROWS_AS(c_coef({0.1, 2.5}), DomainError);
}

TEST_CASE("c_coef symmetric in its arguments") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.5, 1.95);
  int done = 0;
  while (done < 50) {
    const AlphaPair ap{u(rng), u(rng)};
    if (ap.integer_sum(1e-3)) continue;
    CHECK(rel(c_coef(ap), c_coef(ap.swapped())) < 1e-12);
    ++done;
  }
}

TEST_CASE("continuation agrees with direct quadrature") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> us(1.05, 1.9), ua(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const double s = us(rng);
    const double lo = std::max(s - 1.99, -1.0), hi = std::min(1.99, s + 1.0);
    const double a1 = lo + (hi - lo) * ua(rng);
    const AlphaPair ap{a1, s - a1};
    CHECK(rel(c_coef(ap), c_coef_direct(ap)) < 1e-9);
  }
  CHECK_THROWS_AS(c_coef_direct({0.2, 0.3}), DomainError);
}

TEST_CASE("ball_b_coeffs") {
  const auto b = ball_b_coeffs({1.8, 1.4});
  CHECK(b.b1 == 0.0);
  CHECK(b.b3 == 0.0);
  CHECK(rel(b.b0, -8.0 * std::numbers::pi / (2.2 * 1.2 * 0.2)) < 1e-13);
  CHECK(b.b0 == doctest::Approx(-47.59989).epsilon(1e-6));
  CHECK(b.b2 == doctest::Approx(2.14199).epsilon(1e-5));
  CHECK(b.radius_power(0) == doctest::Approx(-0.2));
  const double s = 3.2;
  CHECK(rel(b.b0 * (s - 1) * (s - 2) * (s - 3), -8.0 * std::numbers::pi) < 1e-13);
  for (double sp : {-1.0, 0.0, 1.0, 2.0, 3.0}) CHECK_THROWS_AS(ball_b_coeffs({1.5, sp - 1.5}), PoleError);
}

TEST_CASE("q_integral") {
  CHECK(q_integrand(0.5, 0.0, 1.0) == 0.0);
  CHECK(std::abs(q_integrand(0.5, 1e-12, 1.0 - 1e-12)) < 1e-9);
  CHECK(std::abs(q_integral(0.5) - 0.5175182183008441692021742) < 1e-12);
  CHECK(std::abs(q_integral(1.3) - 2.315333854624699196024068) < 1e-10);
  CHECK(std::abs(q_integral(0.3) - 0.5969127626942011465131924) < 1e-10);
  CHECK(std::abs(q_integral(1.9) - 35.07171322037765672468388) < 1e-11);
  for (double a : {0.3, 0.8, 1.3}) CHECK(std::abs(q_integral(a) - q_integral(1.0 - a)) < 1e-10);
  CHECK_THROWS_AS(q_integral(2.0), DomainError);
  CHECK_THROWS_AS(q_integral(-1.0), DomainError);
  for (double a : {-0.9, 0.0, 0.5, 1.5, 1.95})
    for (double q : {1e-8, 0.1, 0.5, 0.9, 1 - 1e-9}) CHECK(std::isfinite(q_integrand(a, q, 1.0 - q)));
}

TEST_CASE("q_integral angular measure") {
  // mpmath tanh-sinh, 40 digits
  CHECK(std::abs(q_integral(0.5, QMeasure::Angular) - 0.3839016944883788624678) < 1e-12);
  CHECK(std::abs(q_integral(1.0, QMeasure::Angular) - 0.7529056258383908632615) < 1e-12);
  CHECK(std::abs(q_integral(1.3, QMeasure::Angular) - 1.537577482717659409091) < 1e-10);
  CHECK(std::abs(q_integral(1.9, QMeasure::Angular) - 18.72134134880173295031657) < 1e-11);
  CHECK(std::abs(q_integral(1.99, QMeasure::Angular) - 198.7493952726886683469505) < 1e-10);
  CHECK(std::abs(q_integral(-0.3, QMeasure::Angular) - q_integral(1.3, QMeasure::Angular)) < 1e-10);
  // At alpha1 = 1 every closed-form piece cancels except Euler's constant.
  CHECK(std::abs(log_case_constant(1.0, 0.0, QMeasure::Angular) - std::numbers::egamma) < 1e-12);
  CHECK(q_integrand(0.5, 0.25, 0.75, QMeasure::Angular) * (1.0 + 0.0625) ==
        doctest::Approx(q_integrand(0.5, 0.25, 0.75)).epsilon(1e-15));
}

TEST_CASE("log_case_constant") {
  const double base = std::numbers::egamma + 4.0 * std::log(std::numbers::sqrt2 - 1.0) + 4.0 * std::log(2.0);
  CHECK(std::abs(log_case_constant(0.5, 0.0) - (base + 0.5175182183008441692021742)) < 1e-12);
  CHECK(log_case_constant(0.3, 0.25) == doctest::Approx(log_case_constant(0.7, 0.25)).epsilon(1e-12));
  // Moving the cutoff start from eps to eps' changes log(eps^2) by 2 log(eps'/eps) and the chi
  // integral 2 int_eps^eps' dx/x by the opposite amount.
  const double e1 = 0.05, e2 = 0.08;
  const double chi1 = 0.3, chi2 = chi1 - 2.0 * std::log(e2 / e1);
  CHECK(std::abs((std::log(e1 * e1) + log_case_constant(0.5, chi1)) - (std::log(e2 * e2) + log_case_constant(0.5, chi2))) <
        1e-12);
}

TEST_CASE("c_coef near alpha = 2 and far below the threshold") {
  std::mt19937 gen(17);
  std::uniform_real_distribution<double> u(-6.0, 1.999);
  for (int i = 0; i < 2000; ++i) {
    const AlphaPair ap{u(gen), u(gen)};
    if (std::abs(ap.sum() - std::round(ap.sum())) < 1e-6) continue;
    const double v = c_coef(ap);
    CHECK(std::isfinite(v));
    CHECK(c_coef(ap.swapped()) == v);
  }
  // mpmath closed form through Beta and 2F1 (tests/oracles/c_oracle.py).
  struct Case {
    AlphaPair ap;
    double value, rel;
  };
  for (const Case& c : {Case{{1.98, 1.45}, 34.23066781880680979848434, 1e-11},
                        Case{{1.999, 0.5}, 489.3430701957024469332925, 1e-11},
                        Case{{1.98, -5.5}, 5467.828897519480414592761, 1e-10},
                        Case{{-4.3, -3.1}, -1.888239808565393522850671, 1e-8}}) {
    INFO(c.ap.alpha1, " ", c.ap.alpha2);
    CHECK(std::abs(c_coef(c.ap) / c.value - 1.0) < c.rel);
  }
}
