#include "heatcontent/invariants.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "heatcontent/errors.hpp"

namespace heatcontent {

namespace {

// Unknowns of the solve, in column order.
constexpr std::array<int, 9> kUnknowns{2, 5, 6, 8, 9, 10, 11, 12, 13};

struct LinearRelation {
  const char* name;
  std::array<double, 15> coef;
};

LinearRelation make(const char* name, std::initializer_list<std::pair<int, double>> terms) {
  LinearRelation r{name, {}};
  for (auto [i, v] : terms) r.coef[static_cast<std::size_t>(i)] = v;
  return r;
}

// sum_i coef_i eps^i = 0 for each entry.
const std::vector<LinearRelation>& linear_relations() {
  static const std::vector<LinearRelation> rels{
      make("eps6 - eps0 = 0", {{6, 1.0}, {0, -1.0}}),
      make("eps13 = 0", {{13, 1.0}}),
      make("eps12 + eps0 = 0", {{12, 1.0}, {0, 1.0}}),
      make("-eps1/2 - eps2 - eps3/2 = 0", {{1, -0.5}, {2, -1.0}, {3, -0.5}}),
      make("-eps4/2 - eps5 - eps14/2 = 0 (shift a1-1)", {{4, -0.5}, {5, -1.0}, {14, -0.5}}),
      make("-eps14/2 - eps8 - eps7/2 = 0 (shift a2-1)", {{14, -0.5}, {8, -1.0}, {7, -0.5}}),
      make("-(eps6 + eps12)/4 = 0", {{6, -0.25}, {12, -0.25}}),
      make("-eps4/4 + eps6/2 - eps7/4 - eps9 = 0", {{4, -0.25}, {6, 0.5}, {7, -0.25}, {9, -1.0}}),
      make("eps4/8 + eps5/2 + eps6/4 + eps7/8 + eps8/2 + eps10 + eps14/4 = 0",
           {{4, 0.125}, {5, 0.5}, {6, 0.25}, {7, 0.125}, {8, 0.5}, {10, 1.0}, {14, 0.25}}),
      make("-eps9 + eps11 = 0", {{9, -1.0}, {11, 1.0}}),
  };
  return rels;
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

int epsilon_swap_index(int i) {
  switch (i) {
    case 1: return 3;
    case 3: return 1;
    case 4: return 7;
    case 7: return 4;
    case 5: return 8;
    case 8: return 5;
    default: return i;
  }
}

EpsilonTable EpsilonTable::swapped() const {
  EpsilonTable out;
  out.ap = ap.swapped();
  for (int i = 0; i < 15; ++i) out.eps[static_cast<std::size_t>(epsilon_swap_index(i))] = eps[static_cast<std::size_t>(i)];
  return out;
}

EpsilonTable epsilon_table(const AlphaPair& ap, const CoefficientProvider& c) {
  require_admissible(ap);
  const double c00 = c(ap);
  const double c10 = c(ap.shifted(1, 0));
  const double c01 = c(ap.shifted(0, 1));
  const double c20 = c(ap.shifted(2, 0));
  const double c02 = c(ap.shifted(0, 2));
  const double c11 = c(ap.shifted(1, 1));
  EpsilonTable t;
  t.ap = ap;
  auto& e = t.eps;
  e[0] = c00;
  e[1] = c10;
  e[3] = c01;
  e[2] = -(c10 + c01) / 2.0;
  e[4] = c20;
  e[7] = c02;
  e[6] = c00;
  e[14] = c11;
  e[12] = -c00;
  e[5] = -(c20 + c11) / 2.0;
  e[8] = -(c11 + c02) / 2.0;
  e[9] = -c20 / 4.0 - c02 / 4.0 + c00 / 2.0;
  e[11] = e[9];
  e[10] = c20 / 8.0 + c02 / 8.0 + c11 / 4.0 - c00 / 4.0;
  e[13] = 0.0;
  return t;
}

std::vector<Relation> epsilon_relations(const EpsilonTable& tab) {
  std::vector<Relation> out;
  for (const auto& r : linear_relations()) {
    double v = 0.0;
    for (std::size_t i = 0; i < 15; ++i) v += r.coef[i] * tab.eps[i];
    out.push_back({r.name, v});
  }
  return out;
}

EpsilonSolve solve_epsilon(const AlphaPair& ap, const CoefficientProvider& c) {
  require_admissible(ap);
  EpsilonTable known;
  known.ap = ap;
  known.eps[0] = c(ap);
  known.eps[1] = c(ap.shifted(1, 0));
  known.eps[3] = c(ap.shifted(0, 1));
  known.eps[4] = c(ap.shifted(2, 0));
  known.eps[7] = c(ap.shifted(0, 2));
  known.eps[14] = c(ap.shifted(1, 1));

  const auto& rels = linear_relations();
  const auto rows = static_cast<Eigen::Index>(rels.size());
  const auto cols = static_cast<Eigen::Index>(kUnknowns.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(rows, cols);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& coef = rels[static_cast<std::size_t>(r)].coef;
    for (Eigen::Index j = 0; j < cols; ++j) A(r, j) = coef[static_cast<std::size_t>(kUnknowns[static_cast<std::size_t>(j)])];
    double rhs = 0.0;
    for (int i : {0, 1, 3, 4, 7, 14}) rhs -= coef[static_cast<std::size_t>(i)] * known.eps[static_cast<std::size_t>(i)];
    b(r) = rhs;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(1e-12);
  const Eigen::VectorXd x = svd.solve(b);

  EpsilonSolve out;
  out.unknowns = static_cast<int>(cols);
  out.rank = static_cast<int>(svd.rank());
  out.rank_deficient = out.rank < out.unknowns;
  out.table = known;
  for (Eigen::Index j = 0; j < cols; ++j) out.table.eps[static_cast<std::size_t>(kUnknowns[static_cast<std::size_t>(j)])] = x(j);
  out.residuals = epsilon_relations(out.table);
  for (const auto& r : out.residuals) out.max_residual = std::max(out.max_residual, std::abs(r.residual));
  out.residual_flagged = !(out.max_residual <= kEpsilonResidualFlag);
  return out;
}

void BoundaryGeometry::validate() const {
  const double fields[] = {area,  L_trace, L_trace_sq, L_sq,         ric_mm,      E_val,       tau,
                           grad_pairing, psi1_jet[0], psi1_jet[1], psi1_jet[2], psi2_jet[0], psi2_jet[1], psi2_jet[2]};
  for (double v : fields)
    if (!finite(v)) throw DomainError("BoundaryGeometry: non-finite field");
  if (!(area > 0.0)) throw DomainError("BoundaryGeometry: area must be positive");
  if (dimension < 0 || dimension == 1) throw DomainError("BoundaryGeometry: dimension must be 0 (undeclared) or >= 2");
  if (dimension >= 2) {
    const double slack = 1e-12 * std::max({1.0, std::abs(L_trace_sq), L_trace * L_trace});
    if (L_trace_sq < L_sq - slack) throw DomainError("BoundaryGeometry: L_trace_sq < L_sq");
    if (L_sq < L_trace * L_trace / (dimension - 1) - slack)
      throw DomainError("BoundaryGeometry: L_sq < L_trace^2/(m-1)");
  }
}

BetaTriple beta_boundary(const BoundaryGeometry& g, const EpsilonTable& tab) {
  g.validate();
  const auto& e = tab.eps;
  const auto& p = g.psi1_jet;
  const auto& q = g.psi2_jet;
  BetaTriple b;
  b.s = tab.ap.sum();
  b.beta0 = g.area * e[0] * p[0] * q[0];
  b.beta1 = g.area * (e[1] * p[1] * q[0] + e[2] * g.L_trace * p[0] * q[0] + e[3] * p[0] * q[1]);
  b.beta2 = g.area * (e[4] * p[2] * q[0] + e[5] * g.L_trace * p[1] * q[0] + e[6] * g.E_val * p[0] * q[0] +
                      e[7] * p[0] * q[2] + e[8] * g.L_trace * p[0] * q[1] + e[9] * g.ric_mm * p[0] * q[0] +
                      e[10] * g.L_trace_sq * p[0] * q[0] + e[11] * g.L_sq * p[0] * q[0] + e[12] * g.grad_pairing +
                      e[13] * g.tau * p[0] * q[0] + e[14] * p[1] * q[1]);
  return b;
}

BoundaryGeometry ball_geometry(double a) {
  if (!(a > 0.0 && std::isfinite(a))) throw DomainError("ball_geometry: radius must be positive");
  BoundaryGeometry g;
  g.area = 4.0 * std::numbers::pi * a * a;
  g.L_trace = 2.0 / a;
  g.L_trace_sq = 4.0 / (a * a);
  g.L_sq = 2.0 / (a * a);
  g.dimension = 3;
  return g;
}

BoundaryGeometry interval_geometry() {
  BoundaryGeometry g;
  g.area = 2.0;
  g.dimension = 0;
  return g;
}

}  // namespace heatcontent
