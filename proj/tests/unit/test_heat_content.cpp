#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <numbers>

#include "heatcontent/errors.hpp"
#include "heatcontent/heat_content.hpp"

using namespace heatcontent;

TEST_CASE("bump cutoff") {
  const auto chi = bump_cutoff(0.1, 0.15);
  CHECK(chi(0.0) == 1.0);
  CHECK(chi(0.1) == 1.0);
  CHECK(chi(1.15) == 0.0);
  CHECK(chi(0.15) == 0.0);
  CHECK(chi(0.125) == doctest::Approx(0.5).epsilon(1e-15));
  double prev = 1.0;
  for (int i = 0; i <= 100; ++i) {
    const double v = chi(0.1 + 0.05 * i / 100.0);
    CHECK(v >= 0.0);
    CHECK(v <= prev);
    prev = v;
  }
  CHECK_THROWS_AS(bump_cutoff(0.2, 0.1), DomainError);
  CHECK_THROWS_AS(bump_cutoff(0.0, 0.1), DomainError);
}

TEST_CASE("interval and half-line heat content") {
  const auto chi = bump_cutoff(0.1, 0.15);
  const auto chi_b = bump_cutoff(0.08, 0.2);
  const AlphaPair ap{0.5, 0.3};
  const double t = 0.005;
  const auto qi = q_interval(ap, chi, chi_b, 1.0, t, 0.0);
  const auto qh = q_halfline(ap, chi, chi_b, t, 0.0);
  CHECK(qi.value > 0.0);
  CHECK(qh.value > 0.0);
  CHECK(qi.err >= 0.0);
  CHECK(qi.value <= 2.0 * qh.value + qi.err + qh.err);
  CHECK(std::abs(qi.value - 2.0 * qh.value) <= 1e-8 * qi.value);

  SUBCASE("exchange symmetry is exact") {
    CHECK(q_interval(ap.swapped(), chi_b, chi, 1.0, t, 0.0).value == qi.value);
    CHECK(q_halfline(ap.swapped(), chi_b, chi, t, 0.0).value == qh.value);
  }
  SUBCASE("tighter tolerance agrees") {
    const auto fine = q_interval(ap, chi, chi_b, 1.0, t, 0.0, 1e-14);
    CHECK(std::abs(fine.value - qi.value) <= 1e-10 * fine.value);
  }
  SUBCASE("continuity in t") {
    const auto q2 = q_halfline(ap, chi, chi_b, t * 1.001, 0.0);
    CHECK(std::abs(q2.value - qh.value) < 1e-2 * qh.value);
    CHECK(q2.value < qh.value);
  }
}

TEST_CASE("gap between interval and twice the half-line") {
  const auto chi = bump_cutoff(0.1, 0.15);
  const AlphaPair ap{0.5, 0.5};
  const double t = 0.01;
  const auto direct = q_interval(ap, chi, chi, 1.0, t, 0.0, 1e-14).value - 2.0 * q_halfline(ap, chi, chi, t, 0.0, 1e-14).value;
  const auto gap = interval_halfline_gap(ap, chi, chi, 1.0, t, 1e-10);
  CHECK(gap.value > 0.0);
  CHECK(std::abs(gap.value - direct) < 1e-12);
  double prev = gap.value;
  for (double a : {2.0, 4.0}) {
    const double g = interval_halfline_gap(ap, chi, chi, a, 0.005, 1e-8).value;
    CHECK(g < prev);
    prev = g;
  }
}

TEST_CASE("ball heat content") {
  const AlphaPair ap{1.8, 1.4};
  const auto q = q_ball(ap, 1.0, 1e-3, 0.0);
  CHECK(q.value > 0.0);
  CHECK(q_ball(ap.swapped(), 1.0, 1e-3, 0.0).value == q.value);
  // Leading behaviour 4 pi c a^2 t^((1-s)/2).
  const double t = 1e-5;
  const double lead = 4.0 * 3.14159265358979 * c_coef(ap) * std::pow(t, -1.1);
  CHECK(std::abs(q_ball(ap, 1.0, t, 0.0).value / lead - 1.0) < 0.01);
  CHECK_THROWS_AS(q_ball(ap, -1.0, t, 0.0), DomainError);
}

TEST_CASE("interval with cutoffs identically one") {
  // psi = 1: Q = sum over odd n of 8/(n pi)^2 e^{-(n pi)^2 t} = 1 - 4 sqrt(t/pi) + O(e^{-1/(4t)}).
  const auto one = bump_cutoff(0.5, 0.6);
  const AlphaPair smooth{0.0, 0.0};
  for (double t : {1e-4, 1e-3}) {
    const double q = q_interval(smooth, one, one, 1.0, t, 0.0).value;
    CHECK(std::abs(q - (1.0 - 4.0 * std::sqrt(t / std::numbers::pi))) < 1e-11);
  }
  double series = 0.0;
  for (int n = 1; n < 200; n += 2) {
    const double k = n * std::numbers::pi;
    series += 8.0 / (k * k) * std::exp(-k * k * 0.2);
  }
  CHECK(std::abs(q_interval(smooth, one, one, 1.0, 0.2, 0.0).value - series) < 1e-12);
  const auto straddles = bump_cutoff(0.3, 0.6);
  CHECK_THROWS_AS(q_interval(smooth, straddles, one, 1.0, 1e-3, 0.0), DomainError);
}

TEST_CASE("log-case constant against small-t heat content") {
  const auto chi = bump_cutoff(0.05, 0.45);
  const double t = 1e-10;
  for (double a1 : {0.5, 1.3}) {
    const AlphaPair ap{a1, 1.0 - a1};
    const double q = q_interval(ap, chi, chi, 1.0, t, 0.0).value;
    const double measured = q - std::log(1.0 / t);
    const double ci = chi_integral(chi, chi, 1.0);
    const double angular = 2.0 * std::log(0.05) + log_case_constant(a1, ci, QMeasure::Angular);
    const double stated = 2.0 * std::log(0.05) + log_case_constant(a1, ci);
    CHECK(std::abs(measured - angular) < 1e-3);
    CHECK(std::abs(measured - stated) > 0.1);
  }
}

TEST_CASE("chi integral") {
  const auto narrow = bump_cutoff(0.1, 0.1 * (1 + 1e-4));
  const double vn = chi_integral(narrow, narrow, 1.0);
  CHECK(vn > 0.0);
  CHECK(vn < 2.0 * std::log1p(1e-4));
  const auto chi = bump_cutoff(0.1, 0.15);
  const double v = chi_integral(chi, chi, 1.0);
  CHECK(v > 0.0);
  CHECK(v < 2.0 * std::log(1.5));
  CHECK_THROWS_AS(chi_integral(chi, chi, 0.2), DomainError);
}

TEST_CASE("q_grid") {
  QSpec spec;
  spec.kind = QSpec::Kind::Ball;
  spec.alpha = {1.8, 1.4};
  CHECK(q_grid(spec, {}, 2).empty());
  const double one[] = {1e-3};
  const auto single = q_grid(spec, one, 1);
  REQUIRE(single.size() == 1);
  CHECK(single[0].value == q_ball(spec.alpha, 1.0, 1e-3, 0.0).value);
  const auto ts = log_grid(1e-4, 1e-2, 20);
  CHECK(ts.front() == 1e-4);
  CHECK(ts.back() == 1e-2);
  const auto serial = q_grid(spec, ts, 1);
  const auto parallel = q_grid(spec, ts, 3);
  REQUIRE(serial.size() == 20);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    CHECK(serial[i].t == ts[i]);
    CHECK(parallel[i].value == serial[i].value);
    if (i > 0) CHECK(serial[i].value < serial[i - 1].value);
  }
  const double bad[] = {1e-3, -1.0};
  CHECK_THROWS_AS(q_grid(spec, bad, 1), DomainError);
  spec.alpha = {2.5, 0.0};
  try {
    q_grid(spec, ts, 2);
    FAIL("expected GridError");
  } catch (const GridError& e) {
    CHECK(e.failures().size() == ts.size());
    CHECK(e.failures().front().first == 0);
  }
}

TEST_CASE("thread resolution") {
  CHECK(resolve_threads(3) == 3);
  CHECK(resolve_threads(0) >= 1);
  ::setenv("HC_THREADS", "2", 1);
  CHECK(resolve_threads(-1) == 2);
  ::setenv("HC_THREADS", "x", 1);
  CHECK_THROWS_AS(resolve_threads(-1), DomainError);
  ::unsetenv("HC_THREADS");
  CHECK(resolve_threads(-1) >= 1);
}
