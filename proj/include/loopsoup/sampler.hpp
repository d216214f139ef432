#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "loopsoup/loops.hpp"
#include "loopsoup/rng.hpp"
#include "loopsoup/weights.hpp"

namespace loopsoup {

/// Killed random walk for a real, nonnegative, row-substochastic, integrable
/// weight: from u the walk moves to w with probability q_uw and dies with the
/// remaining probability.
class WalkSampler {
 public:
  /// Throws kNotSamplable.
  explicit WalkSampler(const WeightMatrix& q);

  int size() const noexcept { return n_; }

  /// A loop at `root` inside `subset` with law q(w) / G_U(root, root): the
  /// walk runs until it dies (leaving U counts as dying) and is cut at its last
  /// visit to the root.
  RootedLoop growing_loop(std::span<const int> subset, int root, CounterRng& rng) const;

 private:
  int n_;
  RealMatrix p_;
};

RootedLoop sample_growing_loop(const WeightMatrix& q, std::span<const int> subset, int root,
                               CounterRng& rng);

struct BubbleSample {
  std::vector<RootedLoop> loops;  // loops[j] is rooted at order[j]
  CountMatrix current;
  std::vector<std::int64_t> local_time;
};

/// Independent growing loops at v_j inside V_j = (v_j, ..., v_N) for the vertex
/// order `order` (identity when empty).
BubbleSample sample_bubble_soup(const WalkSampler& walk, CounterRng& rng,
                                std::span<const int> order = {});
BubbleSample sample_bubble_soup(const WeightMatrix& q, CounterRng& rng,
                                std::span<const int> order = {});

/// Sample i uses stream i of `seed`.
std::vector<BubbleSample> sample_bubble_soups(const WeightMatrix& q, std::size_t count,
                                              std::uint64_t seed, int threads = 1,
                                              std::span<const int> order = {});

struct OccupationSample {
  BubbleSample bubble;
  std::vector<double> t;  // t_u ~ Gamma(n_u + 1, 1)
};

std::vector<OccupationSample> sample_occupation(const WeightMatrix& q, std::size_t count,
                                                std::uint64_t seed, int threads = 1);

/// Just the occupation points of sample_occupation.
std::vector<std::vector<double>> empirical_occupation(const WeightMatrix& q, std::size_t count,
                                                      std::uint64_t seed, int threads = 1);

/// One line per sample:
///   <index> loops=[1,1]|[2] current=1:1:1 t=0.53,1.2
/// Vertices are 1-based; the current is written as u:v:count triplets.
void write_sample_records(std::ostream& out, std::span<const OccupationSample> samples);

}  // namespace loopsoup
