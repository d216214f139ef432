#pragma once

// Exhaustive, exact oracles. Everything here enumerates finite sets
// directly; nothing is derived from the closed forms in current_field.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "loopsoup/loops.hpp"
#include "loopsoup/weights.hpp"

namespace loopsoup {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline constexpr std::uint64_t kDefaultBudget = 10'000'000;

BigInt factorial(std::int64_t n);
/// n! / prod k_i!; requires sum k_i == n.
BigInt multinomial(std::int64_t n, std::span<const std::int64_t> parts);

struct LoopInventory {
  std::vector<int> subset;
  int root = 0;
  int max_length = 0;
  std::vector<RootedLoop> loops;  // by length, then lexicographic
};

/// Every rooted loop at `root` inside `subset` with 1 <= length <= max_length.
/// Throws kBudgetExceeded (message carries the count) when the inventory would
/// exceed `budget` loops.
LoopInventory enumerate_loops(std::span<const int> subset, int root, int max_length,
                              std::uint64_t budget = kDefaultBudget);

struct LogGreenSeries {
  Complex log_sum;           // sum of m(l) over l in L_U(v), |l| <= L
  double tail_bound = 0.0;   // bound on |omitted part of the log sum|
  double green_error_bound = 0.0;  // bound on |exp(log_sum) - G_U(v,v)|
  double rho = 0.0;          // rho(|Q_U|)
  std::size_t unrooted_loops = 0;
};

/// Truncated sum of the loop measure over unrooted loops in `subset` that
/// visit `root`. The tail bound is sum_{k>L} (|Q_U|^k)_{vv}, which dominates
/// the modulus of every omitted term.
LogGreenSeries truncated_log_green(const WeightMatrix& q, std::span<const int> subset, int root,
                                   int max_length, std::uint64_t budget = kDefaultBudget);

/// Bubble-soup mass of C: sum over tuples (w_1..w_N), w_j a loop at v_j in
/// V_j, whose currents add to C, of prod q(w_j) / G_{V_j}(v_j, v_j).
Complex nu_c_oracle_bubble(const WeightMatrix& q, const Current& c,
                           std::uint64_t budget = kDefaultBudget);

/// Loop-soup mass of C: det(I - Q) times the sum over finite multisets s of
/// unrooted loops with current C of prod m(l)^{s_l} / s_l!.
Complex nu_c_oracle_loopsoup(const WeightMatrix& q, const Current& c,
                             std::uint64_t budget = kDefaultBudget);

/// All unrooted loops whose edge counts fit inside `bound`.
std::vector<UnrootedLoop> unrooted_loops_within(const CountMatrix& bound,
                                                std::uint64_t budget = kDefaultBudget);

struct CycleIdentity {
  Rational sum;        // sum over compositions of n0!/(k! prod n_j)
  BigInt expected;     // n0!
  std::uint64_t compositions = 0;
  bool holds = false;
};

CycleIdentity verify_cycle_identity(int n0);

/// |L(C+)|: rooted loops at x whose edge local time is exactly C+.
std::uint64_t count_loops_with_current(int x, const Current& c_plus);
std::vector<RootedLoop> loops_with_current(int x, const Current& c_plus);

/// P_C: pairs (C+, C0), C+ a current on V, C0 a current avoiding x, C+ + C0 = C.
std::vector<std::pair<Current, Current>> current_decompositions(const Current& c, int x);

struct CombIdentity {
  BigInt lhs;
  BigInt rhs;
  std::size_t decompositions = 0;
  bool equal = false;
};

CombIdentity verify_comb_identity(const Current& c, int x);

/// One sequence a^u per vertex; a^u lists the successor choices out of u.
using Sequences = std::vector<std::vector<int>>;

/// The edge counts encoded by a sequence collection (C_uv = #v in a^u).
CountMatrix sequence_counts(const Sequences& seqs);

/// S(C): every collection (a^u)_u with exactly C_uv copies of v in a^u.
std::vector<Sequences> sequence_collections(const Current& c);

struct Encoded {
  RootedLoop loop;
  Sequences remainder;
};

/// Walk from x, at each vertex consuming the head of its sequence, until the
/// walk stands at x with a^x exhausted. Throws kBadSequences if the sequences
/// do not encode a current.
Encoded bijection_encode(const Sequences& seqs, int x);
/// Same, additionally checking the sequences lie in S(C).
Encoded bijection_encode(const Current& c, const Sequences& seqs, int x);

/// Inverse of bijection_encode. Throws kBadSequences when the
/// loop is not rooted at x or the remainder touches x or is not a current.
Sequences bijection_decode(const RootedLoop& loop, const Sequences& remainder, int x);

}  // namespace loopsoup
