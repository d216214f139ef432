#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace loopsoup {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;

/// Complex edge weights q_uv on the complete digraph with vertices 0..n-1
/// (self-edges allowed). Vertex order is the row order of the matrix.
class WeightMatrix {
 public:
  explicit WeightMatrix(ComplexMatrix entries);

  /// Row-major n*n entries.
  static WeightMatrix from_row_major(int n, std::span<const Complex> entries);
  static WeightMatrix zero(int n);

  int size() const noexcept { return static_cast<int>(q_.rows()); }
  const ComplexMatrix& matrix() const noexcept { return q_; }
  Complex operator()(int u, int v) const { return q_(u, v); }

  /// Entrywise |q_uv|.
  RealMatrix abs() const;
  /// The weight with every entry replaced by its modulus.
  WeightMatrix abs_weight() const;

 private:
  ComplexMatrix q_;
};

/// rho(|Q|), the spectral radius of the entrywise modulus.
double spectral_radius_abs(const WeightMatrix& q);

/// rho(|Q|) < 1 - margin, with 1e-12 held back for eigenvalue rounding.
bool is_integrable(const WeightMatrix& q, double margin = 0.0);

bool is_hermitian(const WeightMatrix& q, double tol = 1e-14);

/// Real, entrywise nonnegative, row sums at most 1 + tol and integrable.
/// These are the weights for which growing loops are genuine random walks.
bool is_samplable(const WeightMatrix& q, double tol = 1e-12);

struct GreenFunction {
  ComplexMatrix g;           // (I - Q)^{-1}
  Complex det_i_minus_q;     // det(I - Q)

  int size() const noexcept { return static_cast<int>(g.rows()); }
  Complex operator()(int u, int v) const { return g(u, v); }
  Complex det() const { return 1.0 / det_i_minus_q; }
};

/// G = (I - Q)^{-1} and det(I - Q) from one partial-pivoting LU.
/// Throws kNotIntegrable if rho(|Q|) >= 1.
GreenFunction green(const WeightMatrix& q);

/// Q_U for an ordered vertex subset. Indices must be in range and distinct;
/// they are taken in increasing order so the order of V is preserved.
WeightMatrix restrict(const WeightMatrix& q, std::span<const int> subset);

/// P Q P^T for the vertex order `order` (new vertex i is old vertex order[i]).
WeightMatrix reorder(const WeightMatrix& q, std::span<const int> order);

/// G_{V_j}(v_j, v_j) for j = 0..n-1 where V_j = (v_j, ..., v_{n-1}).
std::vector<Complex> suffix_green_diagonals(const WeightMatrix& q);

/// Parses the JSON weight file `{"n": N, "q": [[entry, ...], ...]}` where an
/// entry is `[re, im]`, `[re]` or a bare number. Throws kParse with position.
WeightMatrix parse_weight_json(const std::string& text);
WeightMatrix load_weight_file(const std::string& path);
std::string to_weight_json(const WeightMatrix& q);

}  // namespace loopsoup
