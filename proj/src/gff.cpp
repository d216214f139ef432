#include "loopsoup/gff.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "loopsoup/error.hpp"
#include "loopsoup/parallel.hpp"
#include "loopsoup/rng.hpp"

namespace loopsoup {

GffSpec::GffSpec(ComplexMatrix g) {
  const int n = static_cast<int>(g.rows());
  if (n == 0 || g.cols() != n) throw Error(ErrorCode::kNotHermitianPD, "covariance must be square");
  const double scale = std::max(1.0, g.norm());
  if ((g - g.adjoint()).norm() > 1e-10 * scale) {
    throw Error(ErrorCode::kNotHermitianPD, "covariance is not Hermitian");
  }
  g_ = (g + g.adjoint()) / 2.0;

  Eigen::LLT<ComplexMatrix> llt(g_);
  if (llt.info() == Eigen::Success) {
    a_ = llt.matrixL();
    double d = 1.0;
    for (int i = 0; i < n; ++i) d *= std::norm(a_(i, i));
    det_ = d;
  } else {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(g_);
    const auto& lambda = eig.eigenvalues();
    if (eig.info() != Eigen::Success || lambda.minCoeff() <= 0.0) {
      throw Error(ErrorCode::kNotHermitianPD, "covariance is not positive definite");
    }
    a_ = eig.eigenvectors() * lambda.cwiseSqrt().cast<Complex>().asDiagonal();
    det_ = lambda.prod();
    eigen_fallback_ = true;
  }
  g_inv_ = g_.inverse();
}

GffSpec GffSpec::from_weights(const WeightMatrix& q) {
  if (!is_hermitian(q, 1e-12)) throw Error(ErrorCode::kNotHermitianPD, "weight is not Hermitian");
  return GffSpec(green(q).g);
}

double density_f_z(const GffSpec& gff, std::span<const Complex> z) {
  const int n = gff.size();
  if (static_cast<int>(z.size()) != n) throw Error(ErrorCode::kBadArgument, "vector size mismatch");
  Eigen::Map<const Eigen::VectorXcd> zv(z.data(), n);
  const Complex form = zv.dot(gff.precision() * zv);  // conjugates the left argument
  if (std::abs(form.imag()) > 1e-10 * std::max(1.0, std::abs(form.real()))) {
    throw Error(ErrorCode::kInternal, "Hermitian form has a non-negligible imaginary part");
  }
  return std::exp(-form.real()) / (std::pow(std::numbers::pi, n) * gff.det());
}

std::vector<std::vector<Complex>> sample_gff(const GffSpec& gff, std::size_t count,
                                             std::uint64_t seed, int threads) {
  const int n = gff.size();
  std::vector<std::vector<Complex>> out(count);
  parallel_for(count, threads, [&](std::size_t i) {
    CounterRng rng(seed, i);
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    Eigen::VectorXcd xi(n);
    for (int u = 0; u < n; ++u) {
      const double re = normal(rng);
      const double im = normal(rng);
      xi(u) = Complex(re, im);
    }
    const Eigen::VectorXcd z = gff.factor() * xi;
    out[i].assign(z.data(), z.data() + n);
  });
  return out;
}

RealMatrix real_embedding(const GffSpec& gff) {
  const int n = gff.size();
  const RealMatrix gr = gff.covariance().real();
  const RealMatrix gi = gff.covariance().imag();
  RealMatrix out(2 * n, 2 * n);
  out << gr, -gi, gi, gr;
  return out;
}

std::vector<std::vector<Complex>> sample_via_real_embedding(const GffSpec& gff,
                                                            std::size_t count,
                                                            std::uint64_t seed) {
  const int n = gff.size();
  const RealMatrix cov = real_embedding(gff);
  Eigen::LLT<RealMatrix> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::kNotHermitianPD, "real embedding is not positive definite");
  }
  const RealMatrix l = llt.matrixL();
  std::vector<std::vector<Complex>> out(count, std::vector<Complex>(n));
  for (std::size_t i = 0; i < count; ++i) {
    CounterRng rng(seed, i);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd xi(2 * n);
    for (int k = 0; k < 2 * n; ++k) xi(k) = normal(rng);
    const Eigen::VectorXd x = l * xi;
    for (int u = 0; u < n; ++u) out[i][u] = Complex(x(u), x(n + u)) / std::sqrt(2.0);
  }
  return out;
}

DensityEstimate density_f_abs_z2(const WeightMatrix& q, std::span<const double> t, int points,
                                 std::uint64_t budget) {
  const int n = q.size();
  if (!is_hermitian(q, 1e-12)) throw Error(ErrorCode::kNotHermitianPD, "weight is not Hermitian");
  if (!is_integrable(q)) throw Error(ErrorCode::kNotIntegrable, "weight is not integrable");
  if (static_cast<int>(t.size()) != n) throw Error(ErrorCode::kBadArgument, "point size mismatch");
  double sum_t = 0.0;
  for (double x : t) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
      throw Error(ErrorCode::kNegativePoint, "occupation point must be finite and >= 0");
    }
    sum_t += x;
  }
  ComplexMatrix a(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) a(j, k) = q(j, k) * std::sqrt(t[j] * t[k]);
  }
  // the exponent has modulus at most sum |a_jk| <= rho(|Q|) sum t, so shifting
  // by it keeps both the integrand and the prefactor below one
  const double shift = a.cwiseAbs().sum();
  const TorusEstimate mean = torus_exponential_mean(a, points, budget, shift);
  const double prefactor = green(q).det_i_minus_q.real() * std::exp(shift - sum_t);

  DensityEstimate out;
  out.points = points;
  out.value = prefactor * mean.value.real();
  out.imag_residual = std::abs(prefactor * mean.value.imag());
  out.error = std::abs(prefactor) * mean.error;
  if (out.imag_residual > 1e-8) {
    throw Error(ErrorCode::kInternal, "torus integral has a non-negligible imaginary part");
  }
  return out;
}

Complex permanent(const ComplexMatrix& m) {
  const int n = static_cast<int>(m.rows());
  if (m.cols() != n) throw Error(ErrorCode::kBadArgument, "permanent needs a square matrix");
  if (n > 12) throw Error(ErrorCode::kTooLarge, "permanent limited to 12 x 12");
  if (n == 0) return 1.0;
  // perm(A) = (-1)^n sum_{S} (-1)^{|S|} prod_i sum_{j in S} a_ij, S walked in Gray order
  std::vector<Complex> row_sum(n, 0.0);
  Complex total = 0.0;
  std::uint32_t gray = 0;
  for (std::uint32_t k = 1; k < (1u << n); ++k) {
    const int j = std::countr_zero(k);
    const std::uint32_t next = gray ^ (1u << j);
    const double sign_col = (next >> j & 1) ? 1.0 : -1.0;
    for (int i = 0; i < n; ++i) row_sum[i] += sign_col * m(i, j);
    gray = next;
    Complex prod = 1.0;
    for (int i = 0; i < n; ++i) prod *= row_sum[i];
    total += (std::popcount(gray) % 2 == 0) ? prod : -prod;
  }
  return (n % 2 == 0) ? total : -total;
}

TruncatedSum moment_from_currents(const WeightMatrix& q, std::span<const int> subset,
                                  int max_total) {
  if (!is_integrable(q)) throw Error(ErrorCode::kNotIntegrable, "weight is not integrable");
  if (max_total < 0) throw Error(ErrorCode::kBadArgument, "max_total must be >= 0");
  const int n = q.size();
  std::vector<int> s(subset.begin(), subset.end());
  for (int u : s) {
    if (u < 0 || u >= n) throw Error(ErrorCode::kBadSubset, "vertex index out of range");
  }
  const WeightMatrix qa = q.abs_weight();
  const Complex det = green(q).det_i_minus_q;

  TruncatedSum out;
  out.max_total = max_total;
  double partial_abs = 0.0;
  for (int m = 0; m <= max_total; ++m) {
    for_each_current(n, m, [&](const Current& c) {
      const auto local = c.local_time();
      double factor = 1.0;
      for (int u : s) factor *= static_cast<double>(local[u] + 1);
      const double mult = current_multiplicity(c) * factor;
      out.value += det * current_weight(q, c) * mult;
      partial_abs += current_weight(qa, c).real() * mult;
    });
  }

  const GreenFunction ga = green(qa);
  ComplexMatrix gs(s.size(), s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = 0; j < s.size(); ++j) gs(i, j) = ga(s[i], s[j]);
  }
  const double full_abs = permanent(gs).real() / ga.det_i_minus_q.real();
  const double slack = 1e-14 * full_abs;
  out.tail_bound = std::abs(det) * (std::max(full_abs - partial_abs, 0.0) + slack);
  return out;
}

Complex torus_indicator(const CountMatrix& c, int points, bool gauge_fixed) {
  const int n = c.size();
  std::vector<Complex> phase(n);
  auto integrand = [&](std::span<const double> theta) {
    for (int j = 0; j < n; ++j) phase[j] = std::polar(1.0, theta[j]);
    Complex prod = 1.0;
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        // e^{i C_jk (theta_k - theta_j)}
        const Complex step = phase[k] * std::conj(phase[j]);
        for (int r = 0; r < c(j, k); ++r) prod *= step;
      }
    }
    return prod;
  };
  const TorusQuadrature quad{points, n};
  return gauge_fixed ? torus_mean_gauge_fixed(quad, integrand) : torus_mean_full(quad, integrand);
}

}  // namespace loopsoup
