#include "loopsoup/torus.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "loopsoup/error.hpp"

namespace loopsoup {

namespace {

std::uint64_t checked_power(int k, int e, std::uint64_t budget) {
  std::uint64_t nodes = 1;
  for (int i = 0; i < e; ++i) {
    nodes *= static_cast<std::uint64_t>(k);
    if (nodes > budget) {
      throw Error(ErrorCode::kTooLarge, "torus quadrature needs more than " +
                                            std::to_string(budget) + " nodes");
    }
  }
  return nodes;
}

Complex odometer_mean(int points, int free_dims, int dims,
                      const std::function<Complex(std::span<const double>)>& f,
                      std::uint64_t budget) {
  if (points < 1 || dims < 1) throw Error(ErrorCode::kBadArgument, "bad quadrature shape");
  const std::uint64_t nodes = checked_power(points, free_dims, budget);
  const double h = 2.0 * std::numbers::pi / points;
  std::vector<int> idx(free_dims, 0);
  std::vector<double> theta(dims, 0.0);
  const int offset = dims - free_dims;
  Complex sum = 0.0;
  for (std::uint64_t node = 0; node < nodes; ++node) {
    for (int d = 0; d < free_dims; ++d) theta[offset + d] = h * idx[d];
    sum += f(theta);
    for (int d = free_dims - 1; d >= 0; --d) {
      if (++idx[d] < points) break;
      idx[d] = 0;
    }
  }
  return sum / static_cast<double>(nodes);
}

}  // namespace

std::uint64_t TorusQuadrature::reduced_nodes() const {
  return checked_power(points, dims - 1, budget);
}

Complex torus_mean_gauge_fixed(const TorusQuadrature& quad,
                               const std::function<Complex(std::span<const double>)>& f) {
  return odometer_mean(quad.points, quad.dims - 1, quad.dims, f, quad.budget);
}

Complex torus_mean_full(const TorusQuadrature& quad,
                        const std::function<Complex(std::span<const double>)>& f) {
  return odometer_mean(quad.points, quad.dims, quad.dims, f, quad.budget);
}

namespace {

Complex exponential_mean(const ComplexMatrix& a, int points, std::uint64_t budget,
                         double log_shift = 0.0) {
  const int n = static_cast<int>(a.rows());
  std::vector<Complex> phase(n);
  auto integrand = [&](std::span<const double> theta) {
    for (int j = 0; j < n; ++j) phase[j] = std::polar(1.0, theta[j]);
    Complex s = -log_shift;
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        if (a(j, k) != Complex(0.0)) s += a(j, k) * phase[k] * std::conj(phase[j]);
      }
    }
    return std::exp(s);
  };
  return torus_mean_gauge_fixed(TorusQuadrature{points, n, budget}, integrand);
}

}  // namespace

TorusEstimate torus_exponential_mean(const ComplexMatrix& a, int points,
                                     std::uint64_t budget, double log_shift) {
  TorusEstimate out;
  out.points = points;
  out.value = exponential_mean(a, points, budget, log_shift);
  out.error = std::abs(out.value - exponential_mean(a, 2 * points, budget, log_shift));
  return out;
}

TorusEstimate torus_exponential_mean_converged(const ComplexMatrix& a, int start_points,
                                               double rel_tol, std::uint64_t budget) {
  int k = start_points;
  Complex prev = exponential_mean(a, k, budget);
  double last_diff = -1.0;
  while (true) {
    Complex next;
    try {
      next = exponential_mean(a, 2 * k, budget);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kTooLarge || last_diff < 0.0) throw;
      return {prev, last_diff, k};
    }
    last_diff = std::abs(next - prev);
    if (last_diff <= rel_tol * std::abs(next) || 2 * k >= 1024) return {next, last_diff, 2 * k};
    prev = next;
    k *= 2;
  }
}

}  // namespace loopsoup
