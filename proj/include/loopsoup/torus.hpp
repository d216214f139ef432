#pragma once

#include <cstdint>
#include <functional>
#include <span>

#include "loopsoup/weights.hpp"

namespace loopsoup {

inline constexpr std::uint64_t kDefaultQuadratureBudget = 50'000'000;

/// Tensor-product trapezoidal rule on [0, 2pi)^N with K equispaced nodes per
/// angle. Exact for trigonometric polynomials of degree < K in each angle and
/// spectrally accurate for entire periodic integrands.
struct TorusQuadrature {
  int points = 64;  // K
  int dims = 1;     // N
  std::uint64_t budget = kDefaultQuadratureBudget;

  /// Nodes actually visited when one angle is gauge-fixed: K^{N-1}.
  std::uint64_t reduced_nodes() const;
};

/// Mean of f over the torus, (2pi)^{-N} int_T f(theta) d theta, where f depends
/// on angle differences only. theta_0 is pinned to 0, so the rule visits
/// K^{N-1} nodes. Throws kTooLarge past the node budget.
Complex torus_mean_gauge_fixed(const TorusQuadrature& quad,
                               const std::function<Complex(std::span<const double>)>& f);

/// Same without gauge fixing: K^N nodes.
Complex torus_mean_full(const TorusQuadrature& quad,
                        const std::function<Complex(std::span<const double>)>& f);

struct TorusEstimate {
  Complex value;      // K-node result
  double error = 0.0; // |I_K - I_{2K}|
  int points = 0;
};

/// (2pi)^{-N} int_T exp( sum_jk a_jk e^{i(theta_k - theta_j)} - log_shift ) d theta.
TorusEstimate torus_exponential_mean(const ComplexMatrix& a, int points,
                                     std::uint64_t budget = kDefaultQuadratureBudget,
                                     double log_shift = 0.0);

/// Doubles K from `start_points` until successive results agree to relative
/// `rel_tol` (or the budget stops it). The returned error is the last
/// difference.
TorusEstimate torus_exponential_mean_converged(const ComplexMatrix& a, int start_points = 16,
                                               double rel_tol = 1e-15,
                                               std::uint64_t budget = kDefaultQuadratureBudget);

}  // namespace loopsoup
