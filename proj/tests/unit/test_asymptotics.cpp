#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "heatcontent/asymptotics.hpp"
#include "heatcontent/errors.hpp"

using namespace heatcontent;

namespace {

std::vector<QSample> synth(const std::vector<double>& ts, const SeriesTemplate& tmpl, const std::vector<double>& coef) {
  std::vector<QSample> out;
  for (double t : ts) {
    double v = 0.0;
    for (std::size_t j = 0; j < tmpl.size(); ++j) v += coef[j] * tmpl.terms[j](t);
    out.push_back({t, v, 0.0});
  }
  return out;
}

}  // namespace

TEST_CASE("build_template") {
  auto e = build_template({1.8, 1.4}, 2, 1).exponents();
  const std::vector<double> want{-1.1, -0.6, -0.1, 0.0, 1.0};
  REQUIRE(e.size() == want.size());
  for (std::size_t i = 0; i < e.size(); ++i) CHECK(e[i] == doctest::Approx(want[i]).epsilon(1e-14));
  e = build_template({0.3, 0.4}, 0, 0).exponents();
  REQUIRE(e.size() == 2);
  CHECK(e[0] == 0.0);
  CHECK(e[1] == doctest::Approx(0.15).epsilon(1e-14));
  const auto t = build_template({1.8, 1.4}, 2, 1);
  CHECK_FALSE(t.has_log);
  CHECK(t.terms[0].origin == BasisTerm::Origin::Boundary);
  CHECK(t.terms[0].index == 0);
  CHECK(t.terms[3].origin == BasisTerm::Origin::Interior);

  try {
    build_template({0.5, 0.5}, 1, 1);
    FAIL("expected DomainError");
  } catch (const DomainError& err) {
    CHECK(std::string(err.what()).find("log template") != std::string::npos);
  }
  CHECK_THROWS_AS(build_template({1.0, 1.0}, 1, 1), DomainError);
  CHECK_NOTHROW(build_template({0.25, 0.25 + 2e-7}, 2, 2));
  // With non-integer s the two families never meet; collisions come from explicit lists.
  CHECK_THROWS_AS(manual_template({0.0, 0.5, 0.5 + 1e-7}), DomainError);
  CHECK_THROWS_AS(build_template({1.8, 1.4}, 7, 1), DomainError);
}

TEST_CASE("build_log_template") {
  auto t = build_log_template(0);
  REQUIRE(t.size() == 2);
  CHECK(t.has_log);
  CHECK(t.terms[0].log);
  CHECK(t.terms[0].exponent == 0.0);
  CHECK_FALSE(t.terms[1].log);
  CHECK(t.terms[0](1.0) == 0.0);
  CHECK(t.terms[1](0.3) == 1.0);
  t = build_log_template(1);
  REQUIRE(t.size() == 4);
  CHECK(t.terms[2].log);
  CHECK(t.terms[2].exponent == 0.5);
  CHECK(t.terms[2](0.25) == doctest::Approx(0.5 * std::log(4.0)));
  CHECK(t.terms[3](0.25) == 0.5);
  CHECK_THROWS_AS(build_log_template(3), DomainError);
  CHECK(t.terms[2].label() == "t^0.5 log(1/t)");
  CHECK(t.terms[0].label() == "log(1/t)");
}

TEST_CASE("fit recovers coefficients in the template span") {
  const auto ts = log_grid(1e-4, 1e-1, 10);
  SUBCASE("3 + 5 t^0.15") {
    const auto tmpl = build_template({0.3, 0.4}, 0, 0);
    const auto fit = fit_series(synth(ts, tmpl, {3.0, 5.0}), tmpl);
    CHECK(std::abs(fit.coefficient(0.0) - 3.0) <= 1e-10);
    CHECK(std::abs(fit.coefficient(0.15) - 5.0) <= 1e-10);
    CHECK(fit.relative_residual <= 1e-12);
    CHECK_FALSE(fit.ill_conditioned);
  }
  SUBCASE("2 log(1/t) + 7") {
    const auto tmpl = build_log_template(0);
    const auto fit = fit_series(synth(ts, tmpl, {2.0, 7.0}), tmpl);
    CHECK(std::abs(fit.coefficient(0.0, true) - 2.0) <= 1e-10);
    CHECK(std::abs(fit.coefficient(0.0) - 7.0) <= 1e-10);
  }
  SUBCASE("log template with half powers") {
    const auto tmpl = build_log_template(1);
    const std::vector<double> c{1.0, -4.2, 0.3, 2.5};
    const auto fit = fit_series(synth(log_grid(1e-5, 1e-2, 16), tmpl, c), tmpl);
    for (std::size_t j = 0; j < c.size(); ++j) CHECK(std::abs(fit.coefficients[j] - c[j]) <= 1e-10 * std::max(1.0, std::abs(c[j])));
  }
  SUBCASE("ball-shaped template") {
    const auto tmpl = build_template({1.8, 1.4}, 2, 2);
    const std::vector<double> c{45.45, -120.0, 30.0, -47.6, 2.1, 0.7};
    // Every column must contribute well above rounding somewhere on the grid.
    const auto fit = fit_series(synth(log_grid(1e-3, 1.0, 20), tmpl, c), tmpl);
    for (std::size_t j = 0; j < c.size(); ++j) {
      INFO(j);
      CHECK(std::abs(fit.coefficients[j] - c[j]) <= 1e-10 * std::max(1.0, std::abs(c[j])));
    }
  }
}

TEST_CASE("fit is independent of sample order") {
  const auto tmpl = build_template({1.8, 1.4}, 2, 1);
  auto samples = synth(log_grid(1e-4, 1e-2, 12), tmpl, {1.0, 2.0, 3.0, 4.0, 5.0});
  std::mt19937 gen(4);
  for (auto& q : samples) q.value *= 1.0 + 1e-6 * std::uniform_real_distribution<double>(-1, 1)(gen);
  const auto a = fit_series(samples, tmpl);
  std::shuffle(samples.begin(), samples.end(), gen);
  const auto b = fit_series(samples, tmpl);
  CHECK(a.coefficients == b.coefficients);
  CHECK(a.std_errors == b.std_errors);
}

TEST_CASE("dropping the largest t stays within the reported uncertainty") {
  const auto tmpl = build_template({0.3, 0.4}, 1, 1);
  const std::vector<double> c{2.0, -1.0, 0.5, 3.0};
  auto samples = synth(log_grid(1e-4, 1e-1, 30), tmpl, c);
  std::mt19937 gen(9);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (auto& q : samples) {
    q.err = 1e-6 * std::abs(q.value);
    q.value += q.err * noise(gen);
  }
  const auto full = fit_series(samples, tmpl);
  std::vector<QSample> fewer(samples.begin(), samples.end() - 1);
  const auto cut = fit_series(fewer, tmpl);
  const double lead = tmpl.terms[0].exponent;
  CHECK(std::abs(full.coefficient(lead) - cut.coefficient(lead)) < full.std_error(lead));
  CHECK(std::abs(full.coefficient(lead) - c[0]) < 4 * full.std_error(lead));
}

TEST_CASE("fit errors and diagnostics") {
  const auto tmpl = build_template({1.8, 1.4}, 2, 1);
  const auto ts = log_grid(1e-4, 1e-2, 6);
  CHECK_THROWS_AS(fit_series(synth(ts, tmpl, {1, 1, 1, 1, 1}), tmpl), DomainError);
  auto samples = synth(log_grid(1e-4, 1e-2, 8), tmpl, {1, 1, 1, 1, 1});
  samples[3].t = samples[2].t;
  CHECK_THROWS_AS(fit_series(samples, tmpl), DomainError);
  samples[3].t = -1;
  CHECK_THROWS_AS(fit_series(samples, tmpl), DomainError);
  // Columns nearly parallel over a narrow window of t.
  const auto narrow = build_log_template(1);
  const auto fit = fit_series(synth(log_grid(0.1, 0.1001, 10), narrow, {1.0, 1.0, 1.0, 1.0}), narrow);
  CHECK(fit.ill_conditioned);
  CHECK(fit.condition_estimate > kIllConditioned);
  CHECK_THROWS_AS(fit.coefficient(1.5), DomainError);
}

TEST_CASE("compare") {
  const auto tmpl = build_template({1.8, 1.4}, 2, 1);
  const std::vector<double> c{45.0, -120.0, 30.0, -47.6, 2.1};
  const auto fit = fit_series(synth(log_grid(1e-4, 1e-2, 12), tmpl, c), tmpl);
  BetaTriple beta{45.0, -120.0, 30.0, 3.2};
  auto rep = compare(fit, beta_predictions(beta, {1e-3, 1e-2, 5e-2}));
  CHECK(rep.pass);
  REQUIRE(rep.rows.size() == 3);
  for (const auto& r : rep.rows) CHECK(r.rel_error <= 1e-10);
  beta.beta0 *= 1.01;
  rep = compare(fit, beta_predictions(beta, {1e-3, 1e-2, 5e-2}));
  CHECK_FALSE(rep.pass);
  CHECK(rep.rows[0].rel_error == doctest::Approx(0.01 / 1.01).epsilon(1e-8));
  const Prediction wrong{0.4, false, 1.0, 1.0, "x"};
  CHECK_THROWS_AS(compare(fit, std::span(&wrong, 1)), DomainError);
}

TEST_CASE("ball predictions") {
  const AlphaPair ap{1.8, 1.4};
  const auto p = ball_predictions(ap, 1.0, {1e-3, 1e-2, 5e-2}, 1e-2);
  REQUIRE(p.size() == 5);
  const double pi = std::numbers::pi;
  CHECK(p[0].value == doctest::Approx(4 * pi * c_coef(ap)).epsilon(1e-12));
  CHECK(p[0].exponent == doctest::Approx(-1.1).epsilon(1e-14));
  CHECK(p[3].value == doctest::Approx(ball_b_coeffs(ap).b0).epsilon(1e-14));
  const auto p2 = ball_predictions(ap, 2.0, {1e-3, 1e-2, 5e-2}, 1e-2);
  CHECK(p2[0].value == doctest::Approx(4 * p[0].value).epsilon(1e-12));
  CHECK(p2[3].value == doctest::Approx(std::pow(2.0, -0.2) * p[3].value).epsilon(1e-12));
  const auto lc = log_case_predictions(0.5, 0.1, 0.3, 1e-3, 5e-3);
  CHECK(lc[0].log);
  CHECK(lc[1].absolute);
  CHECK(lc[1].value == doctest::Approx(2 * std::log(0.1) + log_case_constant(0.5, 0.3)).epsilon(1e-14));
}
