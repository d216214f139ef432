#include "loopsoup/weights.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <json.hpp>

#include "loopsoup/error.hpp"

namespace loopsoup {

WeightMatrix::WeightMatrix(ComplexMatrix entries) : q_(std::move(entries)) {
  if (q_.rows() != q_.cols() || q_.rows() == 0) {
    throw Error(ErrorCode::kBadArgument, "weight matrix must be square and nonempty");
  }
}

WeightMatrix WeightMatrix::from_row_major(int n, std::span<const Complex> entries) {
  if (n <= 0 || entries.size() != static_cast<std::size_t>(n) * n) {
    throw Error(ErrorCode::kBadArgument, "expected n*n entries");
  }
  ComplexMatrix m(n, n);
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) m(u, v) = entries[u * n + v];
  }
  return WeightMatrix(std::move(m));
}

WeightMatrix WeightMatrix::zero(int n) {
  if (n <= 0) throw Error(ErrorCode::kBadArgument, "n must be positive");
  return WeightMatrix(ComplexMatrix::Zero(n, n));
}

RealMatrix WeightMatrix::abs() const { return q_.cwiseAbs(); }

WeightMatrix WeightMatrix::abs_weight() const {
  return WeightMatrix(q_.cwiseAbs().cast<Complex>());
}

double spectral_radius_abs(const WeightMatrix& q) {
  const RealMatrix a = q.abs();
  if (a.rows() == 1) return a(0, 0);
  Eigen::EigenSolver<RealMatrix> solver(a, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kInternal, "eigenvalue iteration did not converge");
  }
  double rho = 0.0;
  for (const auto& lambda : solver.eigenvalues()) rho = std::max(rho, std::abs(lambda));
  return rho;
}

bool is_integrable(const WeightMatrix& q, double margin) {
  // eigenvalue rounding must not turn rho = 1 into an integrable weight
  return spectral_radius_abs(q) < 1.0 - margin - 1e-12;
}

bool is_hermitian(const WeightMatrix& q, double tol) {
  const int n = q.size();
  for (int u = 0; u < n; ++u) {
    for (int v = u; v < n; ++v) {
      if (std::abs(q(u, v) - std::conj(q(v, u))) > tol) return false;
    }
  }
  return true;
}

bool is_samplable(const WeightMatrix& q, double tol) {
  const int n = q.size();
  for (int u = 0; u < n; ++u) {
    double row = 0.0;
    for (int v = 0; v < n; ++v) {
      const Complex w = q(u, v);
      if (w.imag() != 0.0 || w.real() < 0.0) return false;
      row += w.real();
    }
    if (row > 1.0 + tol) return false;
  }
  return is_integrable(q);
}

GreenFunction green(const WeightMatrix& q) {
  if (!is_integrable(q)) {
    throw Error(ErrorCode::kNotIntegrable, "rho(|Q|) >= 1: weight is not integrable");
  }
  const int n = q.size();
  const ComplexMatrix a = ComplexMatrix::Identity(n, n) - q.matrix();
  Eigen::PartialPivLU<ComplexMatrix> lu(a);
  GreenFunction out;
  out.det_i_minus_q = lu.determinant();
  if (out.det_i_minus_q == Complex(0.0)) {
    throw Error(ErrorCode::kSingularMatrix, "I - Q is singular");
  }
  out.g = lu.inverse();
  const double residual = (a * out.g - ComplexMatrix::Identity(n, n)).norm();
  if (!(residual <= 1e-10)) {
    throw Error(ErrorCode::kSingularMatrix,
                "green function residual " + std::to_string(residual) + " exceeds 1e-10");
  }
  return out;
}

WeightMatrix restrict(const WeightMatrix& q, std::span<const int> subset) {
  std::vector<int> idx(subset.begin(), subset.end());
  std::sort(idx.begin(), idx.end());
  if (idx.empty()) throw Error(ErrorCode::kBadSubset, "empty vertex subset");
  if (std::adjacent_find(idx.begin(), idx.end()) != idx.end()) {
    throw Error(ErrorCode::kBadSubset, "duplicate vertex in subset");
  }
  if (idx.front() < 0 || idx.back() >= q.size()) {
    throw Error(ErrorCode::kBadSubset, "vertex index out of range");
  }
  const int k = static_cast<int>(idx.size());
  ComplexMatrix m(k, k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) m(i, j) = q(idx[i], idx[j]);
  }
  return WeightMatrix(std::move(m));
}

WeightMatrix reorder(const WeightMatrix& q, std::span<const int> order) {
  const int n = q.size();
  std::vector<int> check(order.begin(), order.end());
  std::sort(check.begin(), check.end());
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(check.size()) != n || check[i] != i) {
      throw Error(ErrorCode::kBadArgument, "order must be a permutation of 0..n-1");
    }
  }
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = q(order[i], order[j]);
  }
  return WeightMatrix(std::move(m));
}

std::vector<Complex> suffix_green_diagonals(const WeightMatrix& q) {
  const int n = q.size();
  std::vector<Complex> out;
  out.reserve(n);
  for (int j = 0; j < n; ++j) {
    std::vector<int> suffix;
    for (int k = j; k < n; ++k) suffix.push_back(k);
    out.push_back(green(restrict(q, suffix))(0, 0));
  }
  return out;
}

namespace {

std::string line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

Complex parse_entry(const nlohmann::json& e, int u, int v) {
  auto where = [&] {
    return "entry q[" + std::to_string(u + 1) + "][" + std::to_string(v + 1) + "]";
  };
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (e.is_array() && (e.size() == 1 || e.size() == 2)) {
    for (const auto& x : e) {
      if (!x.is_number()) throw Error(ErrorCode::kParse, where() + ": expected numbers");
    }
    return {e[0].get<double>(), e.size() == 2 ? e[1].get<double>() : 0.0};
  }
  throw Error(ErrorCode::kParse, where() + ": expected number, [re] or [re, im]");
}

}  // namespace

WeightMatrix parse_weight_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParse, "invalid JSON at " + line_col(text, e.byte - 1) + ": " +
                                       e.what());
  }
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("q")) {
    throw Error(ErrorCode::kParse, "expected an object with keys \"n\" and \"q\"");
  }
  if (!doc["n"].is_number_integer() || doc["n"].get<long long>() <= 0) {
    throw Error(ErrorCode::kParse, "\"n\" must be a positive integer");
  }
  const int n = doc["n"].get<int>();
  const auto& rows = doc["q"];
  if (!rows.is_array() || static_cast<int>(rows.size()) != n) {
    throw Error(ErrorCode::kParse, "\"q\" must hold n rows");
  }
  ComplexMatrix m(n, n);
  for (int u = 0; u < n; ++u) {
    if (!rows[u].is_array() || static_cast<int>(rows[u].size()) != n) {
      throw Error(ErrorCode::kParse, "row " + std::to_string(u + 1) + " must hold n entries");
    }
    for (int v = 0; v < n; ++v) m(u, v) = parse_entry(rows[u][v], u, v);
  }
  return WeightMatrix(std::move(m));
}

WeightMatrix load_weight_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kParse, "cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_weight_json(buf.str());
}

std::string to_weight_json(const WeightMatrix& q) {
  nlohmann::json rows = nlohmann::json::array();
  for (int u = 0; u < q.size(); ++u) {
    nlohmann::json row = nlohmann::json::array();
    for (int v = 0; v < q.size(); ++v) row.push_back({q(u, v).real(), q(u, v).imag()});
    rows.push_back(std::move(row));
  }
  return nlohmann::json{{"n", q.size()}, {"q", rows}}.dump();
}

}  // namespace loopsoup
