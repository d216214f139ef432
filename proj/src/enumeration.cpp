#include "loopsoup/enumeration.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "loopsoup/error.hpp"

namespace loopsoup {

BigInt factorial(std::int64_t n) {
  if (n < 0) throw Error(ErrorCode::kBadArgument, "factorial of a negative number");
  BigInt f = 1;
  for (std::int64_t k = 2; k <= n; ++k) f *= k;
  return f;
}

BigInt multinomial(std::int64_t n, std::span<const std::int64_t> parts) {
  std::int64_t sum = 0;
  BigInt denom = 1;
  for (auto k : parts) {
    if (k < 0) throw Error(ErrorCode::kBadArgument, "negative multinomial part");
    sum += k;
    denom *= factorial(k);
  }
  if (sum != n) throw Error(ErrorCode::kBadArgument, "multinomial parts must sum to n");
  return factorial(n) / denom;
}

namespace {

void check_in(std::span<const int> subset, int root, int n) {
  if (std::find(subset.begin(), subset.end(), root) == subset.end()) {
    throw Error(ErrorCode::kBadSubset, "root must belong to the vertex subset");
  }
  for (int u : subset) {
    if (u < 0 || u >= n) throw Error(ErrorCode::kBadSubset, "vertex index out of range");
  }
}

void budget_error(const char* what, std::uint64_t needed, std::uint64_t budget) {
  throw Error(ErrorCode::kBudgetExceeded, std::string(what) + " needs " +
                                              std::to_string(needed) + " > budget " +
                                              std::to_string(budget));
}

// Calls visit(loop, weight) for every loop at vertex `root` of length >= 1
// whose edge counts fit within `remaining` and use only vertices in `allowed`.
// The walk is depth-first over successor vertices in increasing order.
class BoundedLoopWalker {
 public:
  BoundedLoopWalker(CountMatrix& remaining, std::vector<char> allowed)
      : rem_(remaining), allowed_(std::move(allowed)) {}

  template <class Visit>
  void run(int root, Visit&& visit) {
    path_.assign(1, root);
    step(root, visit);
  }

 private:
  template <class Visit>
  void step(int root, Visit& visit) {
    const int u = path_.back();
    if (u == root && path_.size() > 1) visit(path_, rem_);
    for (int v = 0; v < rem_.size(); ++v) {
      if (!allowed_[v] || rem_(u, v) == 0) continue;
      --rem_(u, v);
      path_.push_back(v);
      step(root, visit);
      path_.pop_back();
      ++rem_(u, v);
    }
  }

  CountMatrix& rem_;
  std::vector<char> allowed_;
  std::vector<int> path_;
};

}  // namespace

LoopInventory enumerate_loops(std::span<const int> subset, int root, int max_length,
                              std::uint64_t budget) {
  if (max_length < 1) throw Error(ErrorCode::kBadArgument, "max length must be >= 1");
  if (subset.empty()) throw Error(ErrorCode::kBadSubset, "empty vertex subset");
  std::vector<int> verts(subset.begin(), subset.end());
  std::sort(verts.begin(), verts.end());
  if (std::adjacent_find(verts.begin(), verts.end()) != verts.end()) {
    throw Error(ErrorCode::kBadSubset, "duplicate vertex in subset");
  }
  if (std::find(verts.begin(), verts.end(), root) == verts.end()) {
    throw Error(ErrorCode::kBadSubset, "root must belong to the vertex subset");
  }

  // |U|^{k-1} loops of length exactly k.
  const auto width = static_cast<std::uint64_t>(verts.size());
  std::uint64_t needed = 0, per_length = 1;
  for (int k = 1; k <= max_length; ++k) {
    needed += per_length;
    if (needed > budget) budget_error("loop inventory", needed, budget);
    if (k < max_length && per_length > budget / std::max<std::uint64_t>(width, 1)) {
      // next length alone already exceeds the budget
      budget_error("loop inventory", needed + per_length * width, budget);
    }
    per_length *= width;
  }

  LoopInventory inv{verts, root, max_length, {}};
  inv.loops.reserve(needed);
  std::vector<int> word;
  for (int k = 1; k <= max_length; ++k) {
    // interior vertices w^1..w^{k-1} range over U in odometer order
    std::vector<std::size_t> digits(k - 1, 0);
    while (true) {
      word.assign(1, root);
      for (auto d : digits) word.push_back(verts[d]);
      word.push_back(root);
      inv.loops.emplace_back(word);
      int pos = k - 2;
      while (pos >= 0 && ++digits[pos] == verts.size()) digits[pos--] = 0;
      if (pos < 0) break;
    }
  }
  return inv;
}

LogGreenSeries truncated_log_green(const WeightMatrix& q, std::span<const int> subset,
                                   int root, int max_length, std::uint64_t budget) {
  check_in(subset, root, q.size());
  if (!is_integrable(q)) throw Error(ErrorCode::kNotIntegrable, "weight is not integrable");
  const LoopInventory inv = enumerate_loops(subset, root, max_length, budget);

  std::set<RootedLoop> seen;
  LogGreenSeries out;
  for (const auto& loop : inv.loops) {
    UnrootedLoop l = canonicalize(loop);
    if (seen.insert(l.canonical).second) out.log_sum += loop_measure(q, l);
  }
  out.unrooted_loops = seen.size();

  const WeightMatrix qu = restrict(q, inv.subset);
  const RealMatrix a = qu.abs();
  const int m = qu.size();
  const int v = static_cast<int>(std::find(inv.subset.begin(), inv.subset.end(), root) -
                                 inv.subset.begin());
  // sum_{k > L} A^k = A^{L+1} (I - A)^{-1}
  RealMatrix power = RealMatrix::Identity(m, m);
  for (int k = 0; k <= max_length; ++k) power = power * a;
  const RealMatrix resolvent = (RealMatrix::Identity(m, m) - a).inverse();
  out.tail_bound = (power * resolvent)(v, v);
  out.rho = spectral_radius_abs(qu);
  const double tau = out.tail_bound;
  out.green_error_bound = std::exp(out.log_sum.real() + tau) * std::expm1(tau);
  return out;
}

Complex nu_c_oracle_bubble(const WeightMatrix& q, const Current& c, std::uint64_t budget) {
  const int n = q.size();
  if (c.size() != n) throw Error(ErrorCode::kBadArgument, "current size mismatch");
  const std::vector<Complex> diag = suffix_green_diagonals(q);

  CountMatrix rem = c.counts();
  std::uint64_t nodes = 0;
  Complex total = 0.0;

  // Stage j grows a loop at v_j inside V_j = {j..n-1}. Once stage j is done the
  // remaining counts may no longer touch j.
  std::function<void(int, Complex)> stage = [&](int j, Complex weight) {
    if (j == n) {
      if (rem.is_zero()) total += weight;
      return;
    }
    auto finish = [&](Complex w) {
      if (rem.out_degree(j) == 0 && rem.in_degree(j) == 0) stage(j + 1, w);
    };
    // trivial loop at v_j
    finish(weight);
    std::vector<char> allowed(n, 0);
    for (int k = j; k < n; ++k) allowed[k] = 1;
    BoundedLoopWalker walker(rem, allowed);
    walker.run(j, [&](const std::vector<int>& path, CountMatrix&) {
      if (++nodes > budget) budget_error("bubble enumeration", nodes, budget);
      finish(weight * path_weight(q, Path(path)));
    });
  };
  stage(0, Complex(1.0));

  Complex norm = 1.0;
  for (const auto& g : diag) norm /= g;
  return total * norm;
}

std::vector<UnrootedLoop> unrooted_loops_within(const CountMatrix& bound, std::uint64_t budget) {
  const int n = bound.size();
  CountMatrix rem = bound;
  std::set<RootedLoop> seen;
  std::vector<UnrootedLoop> out;
  std::uint64_t nodes = 0;
  for (int s = 0; s < n; ++s) {
    // the least rotation starts at its smallest vertex, so vertices below s
    // are never needed for loops whose canonical root is s
    std::vector<char> allowed(n, 0);
    for (int k = s; k < n; ++k) allowed[k] = 1;
    BoundedLoopWalker walker(rem, allowed);
    walker.run(s, [&](const std::vector<int>& path, CountMatrix&) {
      if (++nodes > budget) budget_error("unrooted loop enumeration", nodes, budget);
      UnrootedLoop l = canonicalize(RootedLoop(path));
      if (seen.insert(l.canonical).second) out.push_back(std::move(l));
    });
  }
  std::sort(out.begin(), out.end(), [](const UnrootedLoop& a, const UnrootedLoop& b) {
    if (a.length() != b.length()) return a.length() < b.length();
    return a.canonical < b.canonical;
  });
  return out;
}

Complex nu_c_oracle_loopsoup(const WeightMatrix& q, const Current& c, std::uint64_t budget) {
  const int n = q.size();
  if (c.size() != n) throw Error(ErrorCode::kBadArgument, "current size mismatch");
  const GreenFunction g = green(q);
  const std::vector<UnrootedLoop> loops = unrooted_loops_within(c.counts(), budget);

  std::vector<CountMatrix> counts;
  std::vector<Complex> measure;
  for (const auto& l : loops) {
    counts.push_back(edge_local_time(l.canonical, n));
    measure.push_back(loop_measure(q, l));
  }

  CountMatrix rem = c.counts();
  std::uint64_t nodes = 0;
  Complex total = 0.0;
  std::function<void(std::size_t, Complex)> pick = [&](std::size_t i, Complex weight) {
    if (++nodes > budget) budget_error("multiset enumeration", nodes, budget);
    if (rem.is_zero()) {
      total += weight;
      return;
    }
    if (i == loops.size()) return;
    // s_i = 0
    pick(i + 1, weight);
    // s_i = 1, 2, ... while the loop's current still fits
    Complex w = weight;
    int s = 0;
    while (true) {
      bool fits = true;
      for (int u = 0; u < n && fits; ++u) {
        for (int v = 0; v < n && fits; ++v) fits = counts[i](u, v) <= rem(u, v);
      }
      if (!fits) break;
      rem = rem - counts[i];
      ++s;
      w *= measure[i] / static_cast<double>(s);
      pick(i + 1, w);
    }
    for (int k = 0; k < s; ++k) rem += counts[i];
  };
  pick(0, Complex(1.0));
  return total * g.det_i_minus_q;
}

CycleIdentity verify_cycle_identity(int n0) {
  if (n0 < 1) throw Error(ErrorCode::kBadArgument, "n0 must be >= 1");
  if (n0 > 24) throw Error(ErrorCode::kTooLarge, "n0 above 24 is not enumerated");
  CycleIdentity out;
  out.expected = factorial(n0);
  const std::uint64_t masks = std::uint64_t{1} << (n0 - 1);
  for (std::uint64_t mask = 0; mask < masks; ++mask) {
    // bit i set: cut between positions i and i+1
    BigInt prod_parts = 1;
    int k = 0, run = 1;
    for (int i = 0; i < n0 - 1; ++i) {
      if (mask >> i & 1) {
        prod_parts *= run;
        ++k;
        run = 1;
      } else {
        ++run;
      }
    }
    prod_parts *= run;
    ++k;
    out.sum += Rational(out.expected, factorial(k) * prod_parts);
    ++out.compositions;
  }
  out.holds = out.sum == Rational(out.expected);
  return out;
}

namespace {

template <class Visit>
void walk_loops_with_current(int x, const Current& c_plus, Visit&& visit) {
  const int n = c_plus.size();
  if (x < 0 || x >= n) throw Error(ErrorCode::kBadArgument, "root out of range");
  if (c_plus.total() == 0) {
    visit(std::vector<int>{x});
    return;
  }
  CountMatrix rem = c_plus.counts();
  BoundedLoopWalker walker(rem, std::vector<char>(n, 1));
  walker.run(x, [&](const std::vector<int>& path, CountMatrix& r) {
    if (r.is_zero()) visit(path);
  });
}

}  // namespace

std::uint64_t count_loops_with_current(int x, const Current& c_plus) {
  std::uint64_t count = 0;
  walk_loops_with_current(x, c_plus, [&](const std::vector<int>&) { ++count; });
  return count;
}

std::vector<RootedLoop> loops_with_current(int x, const Current& c_plus) {
  std::vector<RootedLoop> out;
  walk_loops_with_current(x, c_plus, [&](const std::vector<int>& p) { out.emplace_back(p); });
  return out;
}

std::vector<std::pair<Current, Current>> current_decompositions(const Current& c, int x) {
  const int n = c.size();
  if (x < 0 || x >= n) throw Error(ErrorCode::kBadArgument, "vertex out of range");
  std::vector<std::pair<int, int>> free_edges;
  CountMatrix plus(n);
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      if (u == x || v == x) {
        plus(u, v) = c(u, v);  // C0 vanishes on x's row and column
      } else if (c(u, v) > 0) {
        free_edges.emplace_back(u, v);
      }
    }
  }
  std::vector<std::pair<Current, Current>> out;
  std::function<void(std::size_t)> fill = [&](std::size_t i) {
    if (i == free_edges.size()) {
      if (plus.is_current()) out.emplace_back(Current(plus), Current(c.counts() - plus));
      return;
    }
    const auto [u, v] = free_edges[i];
    for (int k = 0; k <= c(u, v); ++k) {
      plus(u, v) = k;
      fill(i + 1);
    }
    plus(u, v) = 0;
  };
  fill(0);
  return out;
}

namespace {

BigInt multinomial_product(const Current& c, int skip) {
  BigInt prod = 1;
  const auto local = c.local_time();
  for (int u = 0; u < c.size(); ++u) {
    if (u == skip) continue;
    std::vector<std::int64_t> row;
    for (int v = 0; v < c.size(); ++v) {
      if (v != skip) row.push_back(c(u, v));
    }
    prod *= multinomial(local[u], row);
  }
  return prod;
}

}  // namespace

CombIdentity verify_comb_identity(const Current& c, int x) {
  CombIdentity out;
  out.lhs = multinomial_product(c, -1);
  const auto parts = current_decompositions(c, x);
  out.decompositions = parts.size();
  for (const auto& [plus, rest] : parts) {
    const std::uint64_t w = count_loops_with_current(x, plus);
    if (w == 0) continue;
    out.rhs += BigInt(w) * multinomial_product(rest, x);
  }
  out.equal = out.lhs == out.rhs;
  return out;
}

CountMatrix sequence_counts(const Sequences& seqs) {
  const int n = static_cast<int>(seqs.size());
  CountMatrix m(n);
  for (int u = 0; u < n; ++u) {
    for (int v : seqs[u]) {
      if (v < 0 || v >= n) throw Error(ErrorCode::kBadSequences, "sequence entry out of range");
      ++m(u, v);
    }
  }
  return m;
}

std::vector<Sequences> sequence_collections(const Current& c) {
  const int n = c.size();
  std::vector<std::vector<std::vector<int>>> per_vertex(n);
  for (int u = 0; u < n; ++u) {
    std::vector<int> word;
    for (int v = 0; v < n; ++v) word.insert(word.end(), c(u, v), v);
    do {
      per_vertex[u].push_back(word);
    } while (std::next_permutation(word.begin(), word.end()));
  }
  std::vector<Sequences> out;
  Sequences cur(n);
  std::function<void(int)> build = [&](int u) {
    if (u == n) {
      out.push_back(cur);
      return;
    }
    for (const auto& w : per_vertex[u]) {
      cur[u] = w;
      build(u + 1);
    }
  };
  build(0);
  return out;
}

Encoded bijection_encode(const Sequences& seqs, int x) {
  const int n = static_cast<int>(seqs.size());
  if (x < 0 || x >= n) throw Error(ErrorCode::kBadSequences, "root out of range");
  if (!sequence_counts(seqs).is_current()) {
    throw Error(ErrorCode::kBadSequences, "sequences do not encode a current");
  }
  std::vector<std::size_t> head(n, 0);
  std::vector<int> walk{x};
  int u = x;
  while (true) {
    if (u == x && head[x] == seqs[x].size()) break;
    if (head[u] == seqs[u].size()) {
      // excluded by flow conservation
      throw Error(ErrorCode::kInternal, "encoder stalled at a vertex with no remaining exits");
    }
    u = seqs[u][head[u]++];
    walk.push_back(u);
  }
  Encoded out{RootedLoop(std::move(walk)), Sequences(n)};
  for (int v = 0; v < n; ++v) {
    out.remainder[v].assign(seqs[v].begin() + static_cast<std::ptrdiff_t>(head[v]),
                            seqs[v].end());
  }
  return out;
}

Encoded bijection_encode(const Current& c, const Sequences& seqs, int x) {
  if (static_cast<int>(seqs.size()) != c.size() || sequence_counts(seqs) != c.counts()) {
    throw Error(ErrorCode::kBadSequences, "sequences are not in S(C)");
  }
  return bijection_encode(seqs, x);
}

Sequences bijection_decode(const RootedLoop& loop, const Sequences& remainder, int x) {
  const int n = static_cast<int>(remainder.size());
  if (x < 0 || x >= n || loop.root() != x) {
    throw Error(ErrorCode::kBadSequences, "loop must be rooted at x");
  }
  for (int v : loop.vertices()) {
    if (v < 0 || v >= n) throw Error(ErrorCode::kBadSequences, "loop vertex out of range");
  }
  const CountMatrix rest = sequence_counts(remainder);
  if (rest.out_degree(x) != 0 || rest.in_degree(x) != 0 || !rest.is_current()) {
    throw Error(ErrorCode::kBadSequences, "remainder must be a current avoiding x");
  }
  Sequences out(n);
  for (int j = 1; j <= loop.length(); ++j) out[loop[j - 1]].push_back(loop[j]);
  for (int u = 0; u < n; ++u) out[u].insert(out[u].end(), remainder[u].begin(), remainder[u].end());
  return out;
}

}  // namespace loopsoup
