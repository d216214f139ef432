#include "loopsoup/loops.hpp"

#include <algorithm>
#include <cstdlib>

#include "loopsoup/error.hpp"

namespace loopsoup {

std::int64_t CountMatrix::total() const {
  std::int64_t s = 0;
  for (int x : c_) s += x;
  return s;
}

std::int64_t CountMatrix::out_degree(int u) const {
  std::int64_t s = 0;
  for (int v = 0; v < n_; ++v) s += (*this)(u, v);
  return s;
}

std::int64_t CountMatrix::in_degree(int u) const {
  std::int64_t s = 0;
  for (int v = 0; v < n_; ++v) s += (*this)(v, u);
  return s;
}

bool CountMatrix::is_current() const {
  for (int x : c_) {
    if (x < 0) return false;
  }
  for (int u = 0; u < n_; ++u) {
    if (out_degree(u) != in_degree(u)) return false;
  }
  return true;
}

bool CountMatrix::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](int x) { return x == 0; });
}

CountMatrix& CountMatrix::operator+=(const CountMatrix& other) {
  if (other.n_ != n_) throw Error(ErrorCode::kBadArgument, "count matrix size mismatch");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += other.c_[i];
  return *this;
}

CountMatrix operator-(const CountMatrix& a, const CountMatrix& b) {
  if (a.n_ != b.n_) throw Error(ErrorCode::kBadArgument, "count matrix size mismatch");
  CountMatrix out = a;
  for (std::size_t i = 0; i < out.c_.size(); ++i) out.c_[i] -= b.c_[i];
  return out;
}

Current::Current(CountMatrix m) : m_(std::move(m)) {
  if (!m_.is_current()) {
    throw Error(ErrorCode::kNotACurrent, "matrix violates flow conservation");
  }
}

Current Current::from_triplets(int n, std::span<const std::array<int, 3>> triplets) {
  CountMatrix m(n);
  for (const auto& [u, v, count] : triplets) {
    if (u < 0 || u >= n || v < 0 || v >= n || count < 0) {
      throw Error(ErrorCode::kBadArgument, "current triplet out of range");
    }
    m(u, v) += count;
  }
  return Current(std::move(m));
}

std::vector<std::int64_t> Current::local_time() const {
  const int n = size();
  std::vector<std::int64_t> out(n);
  for (int u = 0; u < n; ++u) {
    // out == in, so the half-sum is exact.
    out[u] = (m_.out_degree(u) + m_.in_degree(u)) / 2;
  }
  return out;
}

Path::Path(std::vector<int> vertices) : v_(std::move(vertices)) {
  if (v_.empty()) throw Error(ErrorCode::kBadArgument, "path needs at least one vertex");
}

RootedLoop::RootedLoop(std::vector<int> vertices) : Path(std::move(vertices)) {
  if (v_.front() != v_.back()) {
    throw Error(ErrorCode::kBadArgument, "rooted loop must end at its root");
  }
}

RootedLoop RootedLoop::rotated(int shift) const {
  const int k = length();
  if (k == 0) return *this;
  std::vector<int> w(k + 1);
  for (int i = 0; i < k; ++i) w[i] = v_[(i + shift) % k];
  w[k] = w[0];
  return RootedLoop(std::move(w));
}

CountMatrix edge_local_time(const Path& path, int n) {
  CountMatrix c(n);
  for (int j = 1; j <= path.length(); ++j) ++c(path[j - 1], path[j]);
  return c;
}

std::vector<std::int64_t> vertex_local_time(const Path& path, int n) {
  std::vector<std::int64_t> out(n, 0);
  for (int j = 1; j <= path.length(); ++j) ++out[path[j]];
  return out;
}

Complex path_weight(const WeightMatrix& q, const Path& path) {
  Complex w = 1.0;
  for (int j = 1; j <= path.length(); ++j) w *= q(path[j - 1], path[j]);
  return w;
}

Complex current_weight(const WeightMatrix& q, const CountMatrix& c) {
  Complex w = 1.0;
  for (int u = 0; u < c.size(); ++u) {
    for (int v = 0; v < c.size(); ++v) {
      for (int k = 0; k < c(u, v); ++k) w *= q(u, v);
    }
  }
  return w;
}

UnrootedLoop canonicalize(const RootedLoop& loop) {
  const int k = loop.length();
  if (k == 0) throw Error(ErrorCode::kTrivialLoop, "trivial loops have no unrooted class");
  const auto& w = loop.vertices();
  auto at = [&](int start, int i) { return w[(start + i) % k]; };

  int best = 0;
  for (int s = 1; s < k; ++s) {
    for (int i = 0; i < k; ++i) {
      if (at(s, i) != at(best, i)) {
        if (at(s, i) < at(best, i)) best = s;
        break;
      }
    }
  }
  int period = k;
  for (int p = 1; p < k; ++p) {
    if (k % p != 0) continue;
    bool same = true;
    for (int i = 0; i < k && same; ++i) same = w[i] == w[(i + p) % k];
    if (same) {
      period = p;
      break;
    }
  }
  return UnrootedLoop{loop.rotated(best), k / period};
}

std::vector<RootedLoop> representatives(const UnrootedLoop& loop) {
  const int distinct = loop.length() / loop.multiplicity;
  std::vector<RootedLoop> out;
  out.reserve(distinct);
  for (int s = 0; s < distinct; ++s) out.push_back(loop.canonical.rotated(s));
  return out;
}

Complex loop_measure(const WeightMatrix& q, const UnrootedLoop& loop) {
  return path_weight(q, loop.canonical) / static_cast<double>(loop.multiplicity);
}

std::string format_loop(const Path& path) {
  std::string s = "[";
  for (std::size_t i = 0; i < path.vertices().size(); ++i) {
    if (i) s += ',';
    s += std::to_string(path.vertices()[i] + 1);
  }
  return s + "]";
}

}  // namespace loopsoup

namespace loopsoup {

Current reorder(const Current& c, std::span<const int> order) {
  const int n = c.size();
  if (static_cast<int>(order.size()) != n) {
    throw Error(ErrorCode::kBadArgument, "order must have one entry per vertex");
  }
  CountMatrix m(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = c(order[i], order[j]);
  }
  return Current(std::move(m));
}

}  // namespace loopsoup

namespace loopsoup {

std::string format_counts(const CountMatrix& c) {
  std::string s;
  for (int u = 0; u < c.size(); ++u) {
    for (int v = 0; v < c.size(); ++v) {
      if (c(u, v) == 0) continue;
      if (!s.empty()) s += ',';
      s += std::to_string(u + 1) + ':' + std::to_string(v + 1) + ':' + std::to_string(c(u, v));
    }
  }
  return s.empty() ? "0" : s;
}

}  // namespace loopsoup
