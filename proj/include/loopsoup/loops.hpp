#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "loopsoup/weights.hpp"

namespace loopsoup {

/// n x n matrix of nonnegative edge crossing counts.
class CountMatrix {
 public:
  CountMatrix() = default;
  explicit CountMatrix(int n) : n_(n), c_(static_cast<std::size_t>(n) * n, 0) {}

  int size() const noexcept { return n_; }
  int& operator()(int u, int v) { return c_[u * n_ + v]; }
  int operator()(int u, int v) const { return c_[u * n_ + v]; }
  std::span<const int> entries() const noexcept { return c_; }

  std::int64_t total() const;
  std::int64_t out_degree(int u) const;
  std::int64_t in_degree(int u) const;
  /// Flow conservation at every vertex.
  bool is_current() const;
  bool is_zero() const;

  CountMatrix& operator+=(const CountMatrix& other);
  friend CountMatrix operator+(CountMatrix a, const CountMatrix& b) { return a += b; }
  friend CountMatrix operator-(const CountMatrix& a, const CountMatrix& b);
  friend bool operator==(const CountMatrix&, const CountMatrix&) = default;
  friend auto operator<=>(const CountMatrix&, const CountMatrix&) = default;

 private:
  int n_ = 0;
  std::vector<int> c_;
};

/// A CountMatrix with equal in- and out-flow at every vertex.
class Current {
 public:
  explicit Current(int n) : m_(n) {}
  /// Throws kNotACurrent if `m` violates flow conservation.
  explicit Current(CountMatrix m);
  /// 0-based (u, v, count) triplets.
  static Current from_triplets(int n, std::span<const std::array<int, 3>> triplets);

  int size() const noexcept { return m_.size(); }
  int operator()(int u, int v) const { return m_(u, v); }
  const CountMatrix& counts() const noexcept { return m_; }
  std::int64_t total() const { return m_.total(); }

  /// n_u(C) = (1/2) sum_v (C_uv + C_vu), the vertex local time.
  std::vector<std::int64_t> local_time() const;

  friend bool operator==(const Current&, const Current&) = default;
  friend auto operator<=>(const Current&, const Current&) = default;

 private:
  CountMatrix m_;
};

/// Vertex sequence (w^0, ..., w^k); length k.
class Path {
 public:
  explicit Path(std::vector<int> vertices);

  int length() const noexcept { return static_cast<int>(v_.size()) - 1; }
  const std::vector<int>& vertices() const noexcept { return v_; }
  int front() const { return v_.front(); }
  int back() const { return v_.back(); }
  int operator[](int j) const { return v_[j]; }

  friend bool operator==(const Path&, const Path&) = default;
  friend auto operator<=>(const Path&, const Path&) = default;

 protected:
  std::vector<int> v_;
};

/// Path whose first and last vertex coincide. Length 0 is the trivial loop.
class RootedLoop : public Path {
 public:
  explicit RootedLoop(std::vector<int> vertices);
  static RootedLoop trivial(int root) { return RootedLoop({root}); }

  int root() const { return front(); }
  /// Rotation starting at position `shift` of the cyclic word.
  RootedLoop rotated(int shift) const;
};

/// Cyclic class of a nontrivial rooted loop, stored as its lexicographically
/// least rotation together with d, the number of primitive repetitions.
struct UnrootedLoop {
  RootedLoop canonical;
  int multiplicity = 1;

  int length() const { return canonical.length(); }

  friend bool operator==(const UnrootedLoop& a, const UnrootedLoop& b) {
    return a.canonical == b.canonical;
  }
  friend auto operator<=>(const UnrootedLoop& a, const UnrootedLoop& b) {
    return a.canonical <=> b.canonical;
  }
};

/// c(w): count of each directed edge (u, v) traversed by the path.
CountMatrix edge_local_time(const Path& path, int n);

/// n_u(w) = #{j >= 1 : w^j = u}; the visit at time 0 is not counted.
std::vector<std::int64_t> vertex_local_time(const Path& path, int n);

/// q(w) = prod_j q(w^{j-1}, w^j); 1 for the trivial loop.
Complex path_weight(const WeightMatrix& q, const Path& path);

/// q(C) = prod q_uv^{C_uv}, with 0^0 = 1.
Complex current_weight(const WeightMatrix& q, const CountMatrix& c);
inline Complex current_weight(const WeightMatrix& q, const Current& c) {
  return current_weight(q, c.counts());
}

/// Throws kTrivialLoop for a loop of length 0.
UnrootedLoop canonicalize(const RootedLoop& loop);

/// The |l| / d(l) distinct rooted representatives of l.
std::vector<RootedLoop> representatives(const UnrootedLoop& loop);

/// m(l) = q(l) / d(l).
Complex loop_measure(const WeightMatrix& q, const UnrootedLoop& loop);

/// 1-based vertex list, e.g. "[1,2,1]".
std::string format_loop(const Path& path);

}  // namespace loopsoup

namespace loopsoup {

/// The current seen through the vertex relabelling used by reorder():
/// new vertex i is old vertex order[i].
Current reorder(const Current& c, std::span<const int> order);

}  // namespace loopsoup

namespace loopsoup {

/// Sparse 1-based "u:v:count" triplets joined by commas; "0" for the zero matrix.
std::string format_counts(const CountMatrix& c);

}  // namespace loopsoup
