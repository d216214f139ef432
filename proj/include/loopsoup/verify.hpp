#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "loopsoup/report.hpp"
#include "loopsoup/weights.hpp"

namespace loopsoup::verify {

/// Closed-form nu_c against the bubble-soup enumeration for every current of
/// total mass <= max_mass. Relative error per current must stay <= rel_tol.
VerificationReport proposition(const WeightMatrix& q, int max_mass = 4, double rel_tol = 1e-9);

/// Bubble-soup against loop-soup enumeration (absolute tolerance scaled by
/// max(1, |value|)), plus invariance of the bubble oracle under every vertex
/// order when n <= max_order_n.
VerificationReport lemma(const WeightMatrix& q, int max_mass = 4, double tol = 1e-12,
                         int max_order_n = 3);

struct IdentityScale {
  int max_n = 3;
  int comb_max_mass = 5;
  int cycle_max_n0 = 10;
  int bijection_max_mass = 4;
};

/// Multinomial decomposition identity for every current and every split
/// vertex, the composition identity for n0 = 1..cycle_max_n0, and the
/// exhaustive encode/decode round trip.
VerificationReport identities(const IdentityScale& scale = {});

/// det G against prod_j G_{V_j}(v_j, v_j), and exp of the truncated loop
/// measure sum against G_U(v, v) for every root and each suffix set. max_length 0
/// keeps only the determinant check.
VerificationReport green_identities(const WeightMatrix& q, int max_length = 12,
                                    double det_rel_tol = 1e-10);

struct IsomorphismScale {
  std::vector<std::vector<double>> grid;  // per-coordinate values; tensor grid
  int max_total = 20;
  int quad_points = 64;
  double tol = 1e-6;
};

/// Occupation density series against the |Z|^2 torus density at every grid
/// point. A point passes when the discrepancy is within tail bound +
/// quadrature estimate + rounding slack and below `tol`.
VerificationReport isomorphism(const WeightMatrix& q, const IsomorphismScale& scale);

/// moment_from_currents(S) against perm(G_S) for every subset S.
/// Without an explicit tol only the certified tail bound is enforced.
VerificationReport moments(const WeightMatrix& q, int max_total = 20,
                           double tol = std::numeric_limits<double>::infinity());

/// Trapezoid quadrature of the torus indicator against the 0/1 current test
/// for every n x n matrix with entries <= max_entry, n = 1..max_n.
VerificationReport torus_indicator(int max_n = 3, int max_entry = 3, double tol = 1e-12);

struct MonteCarloScale {
  std::size_t samples = 100'000;
  std::uint64_t seed = 20240611;
  int threads = 1;
  int loop_max_length = 3;
  int histogram_max_mass = 3;
  bool all_orderings = true;
};

/// Growing-loop law, bubble-soup current histogram (chi-square at 1%) for
/// every vertex order, and mean occupation against G_uu.
VerificationReport monte_carlo(const WeightMatrix& q, const MonteCarloScale& scale = {});

/// 0.99 quantile of chi-square with `dof` degrees of freedom.
double chi_square_critical(int dof, double level = 0.01);

}  // namespace loopsoup::verify
