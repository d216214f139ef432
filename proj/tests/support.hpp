#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <random>
#include <vector>

#include "loopsoup/error.hpp"
#include "loopsoup/weights.hpp"

namespace testing {

using loopsoup::Complex;
using loopsoup::ComplexMatrix;
using loopsoup::WeightMatrix;
using Rng = std::mt19937_64;

inline WeightMatrix hermitian2() {
  ComplexMatrix m(2, 2);
  m << 0.0, Complex(0.3, 0.4), Complex(0.3, -0.4), 0.0;
  return WeightMatrix(m);
}

inline WeightMatrix scalar(double q) {
  ComplexMatrix m(1, 1);
  m(0, 0) = q;
  return WeightMatrix(m);
}

inline WeightMatrix uniform(int n, double q) {
  return WeightMatrix(ComplexMatrix::Constant(n, n, q));
}

// rho(|Q|) = lim ||A^(2^m)||^(1/2^m), squaring with renormalization
inline double perron_root(const ComplexMatrix& q) {
  Eigen::MatrixXd a = q.cwiseAbs();
  double log_norm = 0.0, scale = 1.0;
  for (int m = 0; m < 50; ++m) {
    a = a * a;
    const double s = a.cwiseAbs().rowwise().sum().maxCoeff();
    if (s == 0.0) return 0.0;
    a /= s;
    log_norm = 2.0 * log_norm + std::log(s);
    scale *= 2.0;
  }
  return std::exp(log_norm / scale);
}

inline ComplexMatrix scaled(ComplexMatrix m, double rho) {
  const double r = perron_root(m);
  if (r > 0.0) m *= rho / r;
  return m;
}

inline WeightMatrix random_complex(int n, double rho, Rng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = Complex(u(rng), u(rng));
  }
  return WeightMatrix(scaled(m, rho));
}

inline WeightMatrix random_hermitian(int n, double rho, Rng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = u(rng);
    for (int j = i + 1; j < n; ++j) {
      m(i, j) = Complex(u(rng), u(rng));
      m(j, i) = std::conj(m(i, j));
    }
  }
  return WeightMatrix(scaled(m, rho));
}

inline WeightMatrix random_substochastic(int n, double row_sum, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += (m(i, j) = u(rng)).real();
    for (int j = 0; j < n; ++j) m(i, j) *= row_sum / s;
  }
  return WeightMatrix(m);
}

// sum_{k <= terms} Q^k
inline ComplexMatrix neumann_green(const WeightMatrix& q, int terms) {
  const int n = q.size();
  ComplexMatrix sum = ComplexMatrix::Identity(n, n), power = sum;
  for (int k = 1; k <= terms; ++k) {
    power = power * q.matrix();
    sum += power;
  }
  return sum;
}

inline Complex brute_permanent(const ComplexMatrix& m) {
  const int n = static_cast<int>(m.rows());
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  Complex total = 0.0;
  do {
    Complex term = 1.0;
    for (int i = 0; i < n; ++i) term *= m(i, p[i]);
    total += term;
  } while (std::next_permutation(p.begin(), p.end()));
  return total;
}

inline double rel_err(Complex a, Complex b) { return std::abs(a - b) / std::max(1e-300, std::abs(b)); }

// code of the loopsoup::Error thrown by f, kInternal if nothing was thrown
template <class F>
loopsoup::ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const loopsoup::Error& e) {
    return e.code();
  }
  return loopsoup::ErrorCode::kInternal;
}

}  // namespace testing
