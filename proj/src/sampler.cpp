#include "loopsoup/sampler.hpp"

#include <iomanip>
#include <numeric>
#include <random>

#include "loopsoup/error.hpp"
#include "loopsoup/parallel.hpp"

namespace loopsoup {

WalkSampler::WalkSampler(const WeightMatrix& q) : n_(q.size()) {
  if (!is_samplable(q)) {
    throw Error(ErrorCode::kNotSamplable,
                "sampling needs a real nonnegative integrable weight with row sums <= 1");
  }
  p_ = q.matrix().real();
}

RootedLoop WalkSampler::growing_loop(std::span<const int> subset, int root,
                                     CounterRng& rng) const {
  std::vector<char> inside(n_, 0);
  for (int u : subset) {
    if (u < 0 || u >= n_) throw Error(ErrorCode::kBadSubset, "vertex index out of range");
    inside[u] = 1;
  }
  if (root < 0 || root >= n_ || !inside[root]) {
    throw Error(ErrorCode::kBadSubset, "root must belong to the vertex subset");
  }
  std::vector<int> walk{root};
  std::size_t last_root = 0;
  int u = root;
  while (true) {
    const double r = rng.uniform();
    double acc = 0.0;
    int next = -1;
    for (int w = 0; w < n_; ++w) {
      acc += p_(u, w);
      if (r < acc) {
        next = w;
        break;
      }
    }
    if (next < 0 || !inside[next]) break;
    u = next;
    walk.push_back(u);
    if (u == root) last_root = walk.size() - 1;
  }
  walk.resize(last_root + 1);
  return RootedLoop(std::move(walk));
}

RootedLoop sample_growing_loop(const WeightMatrix& q, std::span<const int> subset, int root,
                               CounterRng& rng) {
  return WalkSampler(q).growing_loop(subset, root, rng);
}

namespace {

std::vector<int> resolve_order(int n, std::span<const int> order) {
  std::vector<int> out(order.begin(), order.end());
  if (out.empty()) {
    out.resize(n);
    std::iota(out.begin(), out.end(), 0);
  }
  std::vector<int> check = out;
  std::sort(check.begin(), check.end());
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(check.size()) != n || check[i] != i) {
      throw Error(ErrorCode::kBadArgument, "order must be a permutation of 0..n-1");
    }
  }
  return out;
}

}  // namespace

BubbleSample sample_bubble_soup(const WalkSampler& walk, CounterRng& rng,
                                std::span<const int> order) {
  const int n = walk.size();
  const std::vector<int> ord = resolve_order(n, order);
  BubbleSample out;
  out.current = CountMatrix(n);
  for (int j = 0; j < n; ++j) {
    std::span<const int> suffix(ord.data() + j, ord.size() - j);
    out.loops.push_back(walk.growing_loop(suffix, ord[j], rng));
    out.current += edge_local_time(out.loops.back(), n);
  }
  out.local_time = Current(out.current).local_time();
  return out;
}

BubbleSample sample_bubble_soup(const WeightMatrix& q, CounterRng& rng,
                                std::span<const int> order) {
  return sample_bubble_soup(WalkSampler(q), rng, order);
}

std::vector<BubbleSample> sample_bubble_soups(const WeightMatrix& q, std::size_t count,
                                              std::uint64_t seed, int threads,
                                              std::span<const int> order) {
  const WalkSampler walk(q);
  const std::vector<int> ord = resolve_order(q.size(), order);
  std::vector<BubbleSample> out(count);
  parallel_for(count, threads, [&](std::size_t i) {
    CounterRng rng(seed, i);
    out[i] = sample_bubble_soup(walk, rng, ord);
  });
  return out;
}

std::vector<OccupationSample> sample_occupation(const WeightMatrix& q, std::size_t count,
                                                std::uint64_t seed, int threads) {
  const WalkSampler walk(q);
  const int n = q.size();
  std::vector<OccupationSample> out(count);
  parallel_for(count, threads, [&](std::size_t i) {
    CounterRng rng(seed, i);
    OccupationSample& s = out[i];
    s.bubble = sample_bubble_soup(walk, rng);
    s.t.resize(n);
    for (int u = 0; u < n; ++u) {
      std::gamma_distribution<double> gamma(static_cast<double>(s.bubble.local_time[u] + 1), 1.0);
      s.t[u] = gamma(rng);
    }
  });
  return out;
}

std::vector<std::vector<double>> empirical_occupation(const WeightMatrix& q, std::size_t count,
                                                      std::uint64_t seed, int threads) {
  std::vector<std::vector<double>> out;
  out.reserve(count);
  for (auto& s : sample_occupation(q, count, seed, threads)) out.push_back(std::move(s.t));
  return out;
}

void write_sample_records(std::ostream& out, std::span<const OccupationSample> samples) {
  const auto flags = out.flags();
  const auto prec = out.precision();
  out << std::setprecision(17);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    out << i << " loops=";
    for (std::size_t j = 0; j < s.bubble.loops.size(); ++j) {
      if (j) out << '|';
      out << format_loop(s.bubble.loops[j]);
    }
    out << " current=";
    bool first = true;
    const int n = s.bubble.current.size();
    for (int u = 0; u < n; ++u) {
      for (int v = 0; v < n; ++v) {
        if (s.bubble.current(u, v) == 0) continue;
        if (!first) out << ',';
        out << u + 1 << ':' << v + 1 << ':' << s.bubble.current(u, v);
        first = false;
      }
    }
    out << " t=";
    for (std::size_t u = 0; u < s.t.size(); ++u) {
      if (u) out << ',';
      out << s.t[u];
    }
    out << '\n';
  }
  out.flags(flags);
  out.precision(prec);
}

}  // namespace loopsoup
