#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "loopsoup/current_field.hpp"
#include "loopsoup/torus.hpp"
#include "loopsoup/weights.hpp"

namespace loopsoup {

/// Covariance G (Hermitian positive definite) of a centred complex Gaussian
/// field, with a factor A satisfying A A* = G.
class GffSpec {
 public:
  /// Throws kNotHermitianPD.
  explicit GffSpec(ComplexMatrix g);
  static GffSpec from_weights(const WeightMatrix& q);

  int size() const noexcept { return static_cast<int>(g_.rows()); }
  const ComplexMatrix& covariance() const noexcept { return g_; }
  const ComplexMatrix& factor() const noexcept { return a_; }
  const ComplexMatrix& precision() const noexcept { return g_inv_; }
  double det() const noexcept { return det_; }
  /// True when the Cholesky factorisation failed and A came from the
  /// eigendecomposition instead.
  bool used_eigen_fallback() const noexcept { return eigen_fallback_; }

 private:
  ComplexMatrix g_;
  ComplexMatrix a_;
  ComplexMatrix g_inv_;
  double det_ = 1.0;
  bool eigen_fallback_ = false;
};

/// f_Z(z) = exp(-<z, G^{-1} z>) / (pi^N det G), with <z, w> = sum conj(z_u) w_u.
double density_f_z(const GffSpec& gff, std::span<const Complex> z);

/// Z = A xi with xi i.i.d. standard complex normals, so that
/// E[Z_u conj(Z_v)] = G(u, v) and E[Z_u Z_v] = 0. Sample i draws from stream i
/// of the counter-based generator, so output does not depend on `threads`.
std::vector<std::vector<Complex>> sample_gff(const GffSpec& gff, std::size_t count,
                                             std::uint64_t seed, int threads = 1);

/// [[G^R, -G^I], [G^I, G^R]].
RealMatrix real_embedding(const GffSpec& gff);

/// (Z' + i Z'') / sqrt(2) for samples (Z', Z'') of the real embedding.
std::vector<std::vector<Complex>> sample_via_real_embedding(const GffSpec& gff,
                                                            std::size_t count,
                                                            std::uint64_t seed);

struct DensityEstimate {
  double value = 0.0;
  double error = 0.0;           // |I_K - I_{2K}| scaled like value
  double imag_residual = 0.0;   // |Im| of the quadrature before taking Re
  int points = 0;
};

/// Density of |Z|^2 at t for G = (I - Q)^{-1}:
///   e^{-sum t} det(I - Q) (2pi)^{-N} int_T exp{ sum sqrt(t_j t_k) q_jk e^{i(theta_k - theta_j)} }
/// via the gauge-fixed periodic trapezoid rule with K = points.
DensityEstimate density_f_abs_z2(const WeightMatrix& q, std::span<const double> t,
                                 int points = 64,
                                 std::uint64_t budget = kDefaultQuadratureBudget);

/// Ryser's formula with Gray-code updates. Throws kTooLarge above 12 x 12.
Complex permanent(const ComplexMatrix& m);

/// sum_C nu_c{C} prod_{u in S} (n_u(C) + 1), truncated at total mass
/// max_total. The tail bound comes from the same series for |Q|, whose sum is
/// perm((I - |Q|)^{-1}_S) / det(I - |Q|).
TruncatedSum moment_from_currents(const WeightMatrix& q, std::span<const int> subset,
                                  int max_total);

/// (2pi)^{-N} int_T prod_jk e^{i C_jk (theta_k - theta_j)} d theta by the
/// trapezoid rule; equals 1 if C is a current and 0 otherwise once `points`
/// exceeds every vertex imbalance.
Complex torus_indicator(const CountMatrix& c, int points, bool gauge_fixed = true);

}  // namespace loopsoup
