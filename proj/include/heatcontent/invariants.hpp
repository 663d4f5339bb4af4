#pragma once

// The fifteen universal constants eps^0..eps^14 of the t^((1+j-s)/2)
// boundary coefficients, the linear relations between them, and the boundary
// invariants beta_0..beta_2 for homogeneous boundary data.

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "heatcontent/special_fns.hpp"

namespace heatcontent {

using CoefficientProvider = std::function<double(const AlphaPair&)>;

struct EpsilonTable {
  AlphaPair ap;
  std::array<double, 15> eps{};

  double operator[](int i) const { return eps.at(static_cast<std::size_t>(i)); }
  // The table at the swapped pair, via 1<->3, 4<->7, 5<->8.
  EpsilonTable swapped() const;
};

// Index permutation under alpha1 <-> alpha2.
int epsilon_swap_index(int i);

// Closed form in terms of c at the shifted pairs (a1-k1, a2-k2), k1+k2 <= 2.
EpsilonTable epsilon_table(const AlphaPair& ap, const CoefficientProvider& c = c_coef);

struct Relation {
  std::string name;
  double residual = 0.0;
};

// Residuals of every linear relation the table must satisfy, written in
// terms of the table entries (shifted relations use the index shift
// eps^1 -> eps^4, eps^3 -> eps^14 etc.).
std::vector<Relation> epsilon_relations(const EpsilonTable& tab);

struct EpsilonSolve {
  EpsilonTable table;
  std::vector<Relation> residuals;
  double max_residual = 0.0;
  int rank = 0;
  int unknowns = 0;
  bool rank_deficient = false;
  // max_residual above kEpsilonResidualFlag.
  bool residual_flagged = false;
};

inline constexpr double kEpsilonResidualFlag = 1e-10;

// Re-derives the table from the six index-shifted values eps^0, eps^1,
// eps^3, eps^4, eps^7, eps^14 by least squares over the remaining nine
// unknowns.
EpsilonSolve solve_epsilon(const AlphaPair& ap, const CoefficientProvider& c = c_coef);

// Constant boundary data. Jets are (psi^0, psi^1, psi^2).
struct BoundaryGeometry {
  double area = 0.0;
  std::array<double, 3> psi1_jet{1.0, 0.0, 0.0};
  std::array<double, 3> psi2_jet{1.0, 0.0, 0.0};
  double L_trace = 0.0;     // L_aa
  double L_trace_sq = 0.0;  // L_aa L_bb
  double L_sq = 0.0;        // L_ab L_ab
  double ric_mm = 0.0;
  double E_val = 0.0;
  double tau = 0.0;
  double grad_pairing = 0.0;
  // Manifold dimension m, or 0 when not declared.
  int dimension = 0;

  // Throws DomainError on a non-positive area, non-finite fields, or (with
  // a dimension) L_trace_sq < L_sq or L_sq < L_trace^2/(m-1).
  void validate() const;
};

struct BetaTriple {
  double beta0 = 0.0, beta1 = 0.0, beta2 = 0.0;
  double s = 0.0;
  // Power of t multiplying beta_j: (1 + j - s)/2.
  double exponent(int j) const { return 0.5 * (1.0 + j - s); }
  double operator[](int j) const { return j == 0 ? beta0 : j == 1 ? beta1 : beta2; }
};

BetaTriple beta_boundary(const BoundaryGeometry& geom, const EpsilonTable& tab);

// Sphere of radius a in R^3 with data delta^-alpha.
BoundaryGeometry ball_geometry(double a);

// Two boundary points of a flat interval.
BoundaryGeometry interval_geometry();

}  // namespace heatcontent
