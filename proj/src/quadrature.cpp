#include "heatcontent/quadrature.hpp"

#include <numbers>
#include <string>

namespace heatcontent::quad {
namespace detail {

namespace {

Table build_table() {
  Table t;
  t.h_finest = std::ldexp(1.0, 1 - kMaxLevel);
  // Stop once the gap falls below the smallest normal number; the weights
  // there are ~1e-300 and no admissible integrand recovers from that.
  constexpr double kSmallestGap = 1e-300;
  for (std::size_t k = 0;; ++k) {
    const double tau = static_cast<double>(k) * t.h_finest;
    const double z = 0.5 * std::numbers::pi * std::sinh(tau);
    const double gap = 1.0 / (1.0 + std::exp(2.0 * z));
    if (gap < kSmallestGap) break;
    t.gap.push_back(gap);
    t.weight.push_back(std::numbers::pi * std::cosh(tau) * gap * (1.0 - gap));
  }
  return t;
}

}  // namespace

const Table& table() {
  static const Table tab = build_table();
  return tab;
}

void check_level(int level) {
  if (level < kMinLevel || level > kMaxLevel)
    throw DomainError("de_rule: level " + std::to_string(level) + " outside [1, 12]");
}

}  // namespace detail

QuadratureRule de_rule(int level) {
  detail::check_level(level);
  const auto& tab = detail::table();
  const std::size_t stride = static_cast<std::size_t>(detail::stride_for(level));
  const double h = std::ldexp(1.0, 1 - level);

  std::vector<std::size_t> ks;
  for (std::size_t k = stride; k < tab.gap.size(); k += stride) ks.push_back(k);

  QuadratureRule rule;
  rule.level = level;
  const std::size_t n = 2 * ks.size() + 1;
  rule.nodes.reserve(n);
  rule.gaps.reserve(n);
  rule.weights.reserve(n);
  for (auto it = ks.rbegin(); it != ks.rend(); ++it) {
    rule.nodes.push_back(tab.gap[*it]);
    rule.gaps.push_back(tab.gap[*it]);
    rule.weights.push_back(h * tab.weight[*it]);
  }
  rule.nodes.push_back(0.5);
  rule.gaps.push_back(0.5);
  rule.weights.push_back(h * tab.weight[0]);
  // Upper-half nodes closer to 1 than the spacing of doubles near 1 would
  // repeat; they are left out of the published rule (integrate_1d works from
  // the gap table and keeps them).
  for (std::size_t k : ks) {
    if (1.0 - tab.gap[k] <= rule.nodes.back()) break;
    rule.nodes.push_back(1.0 - tab.gap[k]);
    rule.gaps.push_back(tab.gap[k]);
    rule.weights.push_back(h * tab.weight[k]);
  }
  return rule;
}

}  // namespace heatcontent::quad
