#include <doctest.h>

#include <cmath>
#include <functional>
#include <map>
#include <set>

#include "loopsoup/current_field.hpp"
#include "loopsoup/enumeration.hpp"
#include "loopsoup/error.hpp"
#include "support.hpp"

using namespace loopsoup;

namespace {

Current cur(int n, std::initializer_list<std::array<int, 3>> entries) {
  CountMatrix c(n);
  for (auto [u, v, k] : entries) c(u, v) = k;
  return Current(c);
}

// independent count of rooted loops at x with exactly the given edge counts
std::uint64_t brute_loop_count(int x, const CountMatrix& target) {
  const int n = target.size();
  const auto total = target.total();
  std::uint64_t found = 0;
  std::vector<int> walk{x};
  std::function<void()> rec = [&] {
    if (static_cast<std::int64_t>(walk.size()) - 1 == total) {
      if (walk.back() == x && edge_local_time(Path(walk), n) == target) ++found;
      return;
    }
    for (int v = 0; v < n; ++v) {
      walk.push_back(v);
      rec();
      walk.pop_back();
    }
  };
  rec();
  return found;
}

}  // namespace

TEST_CASE("factorial and multinomial") {
  CHECK(factorial(0) == 1);
  CHECK(factorial(20) == BigInt("2432902008176640000"));
  const std::vector<std::int64_t> parts{2, 1, 1};
  CHECK(multinomial(4, parts) == 12);
}

TEST_CASE("loop enumeration") {
  const std::vector<int> one{0};
  auto inv = enumerate_loops(one, 0, 3);
  REQUIRE(inv.loops.size() == 3);
  CHECK(inv.loops[0] == RootedLoop({0, 0}));
  CHECK(inv.loops[1] == RootedLoop({0, 0, 0}));
  CHECK(inv.loops[2] == RootedLoop({0, 0, 0, 0}));

  const std::vector<int> two{0, 1};
  inv = enumerate_loops(two, 0, 2);
  REQUIRE(inv.loops.size() == 3);
  CHECK(inv.loops[0] == RootedLoop({0, 0}));
  CHECK(inv.loops[1] == RootedLoop({0, 0, 0}));
  CHECK(inv.loops[2] == RootedLoop({0, 1, 0}));

  const std::vector<int> three{0, 1, 2};
  inv = enumerate_loops(three, 1, 6);
  std::map<int, int> by_length;
  for (const auto& l : inv.loops) {
    ++by_length[l.length()];
    CHECK(l.root() == 1);
    CHECK(l.back() == 1);
  }
  for (int k = 1; k <= 6; ++k) CHECK(by_length[k] == static_cast<int>(std::pow(3, k - 1)));

  CHECK_THROWS_AS(enumerate_loops(three, 1, 30, 1000), Error);
  const std::vector<int> no_root{0, 2};
  CHECK_THROWS_AS(enumerate_loops(no_root, 1, 3), Error);
}

TEST_CASE("truncated log Green series") {
  const std::vector<int> one{0};
  const auto q = testing::scalar(0.5);
  const auto s = truncated_log_green(q, one, 0, 40);
  CHECK(std::abs(s.log_sum - std::log(2.0)) <= s.tail_bound + 1e-15);
  CHECK(std::abs(std::exp(s.log_sum) - 2.0) <= s.green_error_bound + 1e-14);
  CHECK(s.tail_bound < 1e-12);

  const auto z = truncated_log_green(WeightMatrix::zero(2), std::vector<int>{0, 1}, 0, 5);
  CHECK(z.log_sum == Complex(0.0));
  CHECK(z.tail_bound == 0.0);

  const auto h = testing::hermitian2();
  const auto hs = truncated_log_green(h, std::vector<int>{0, 1}, 0, 12);
  CHECK(std::abs(std::exp(hs.log_sum) - 1.0 / 0.75) <= hs.green_error_bound);
}

TEST_CASE("bubble oracle") {
  const auto h = testing::hermitian2();
  CHECK(std::abs(nu_c_oracle_bubble(h, Current(2)) - 0.75) < 1e-15);
  for (int k = 0; k <= 6; ++k) {
    const auto c = cur(1, {{0, 0, k}});
    CHECK(std::abs(nu_c_oracle_bubble(testing::scalar(0.5), c) - std::pow(0.5, k + 1)) < 1e-15);
  }
  CHECK(std::abs(nu_c_oracle_bubble(h, cur(2, {{0, 1, 1}, {1, 0, 1}})) - 0.75 * 0.25) < 1e-15);
}

TEST_CASE("loop-soup oracle") {
  const auto h = testing::hermitian2();
  CHECK(std::abs(nu_c_oracle_loopsoup(h, Current(2)) - 0.75) < 1e-15);
  // {(1,1) twice}: 0.5^2/2, {(1,1,1)}: 0.25/2, times det = 0.5
  CHECK(std::abs(nu_c_oracle_loopsoup(testing::scalar(0.5), cur(1, {{0, 0, 2}})) - 0.125) < 1e-15);
  const auto c = cur(2, {{0, 1, 2}, {1, 0, 2}});
  CHECK(testing::rel_err(nu_c_oracle_loopsoup(h, c), nu_c_oracle_bubble(h, c)) < 1e-13);
}

TEST_CASE("unrooted loops inside a bound") {
  const auto loops = unrooted_loops_within(cur(2, {{0, 1, 1}, {1, 0, 1}, {0, 0, 1}}).counts());
  std::set<std::string> names;
  for (const auto& l : loops) names.insert(format_loop(l.canonical));
  CHECK(names == std::set<std::string>{"[1,1]", "[1,2,1]", "[1,1,2,1]"});
}

TEST_CASE("cycle identity") {
  auto r = verify_cycle_identity(1);
  CHECK(r.holds);
  CHECK(r.expected == 1);
  r = verify_cycle_identity(3);
  CHECK(r.holds);
  CHECK(r.compositions == 4);
  CHECK(r.sum == Rational(6));
  r = verify_cycle_identity(8);
  CHECK(r.holds);
  CHECK(r.expected == 40320);

  // independent double-precision recursion over compositions
  for (int n0 = 1; n0 <= 10; ++n0) {
    std::function<double(int, int)> rec = [&](int left, int k) -> double {
      if (left == 0) return std::tgamma(n0 + 1) / std::tgamma(k + 1);
      double s = 0.0;
      for (int first = 1; first <= left; ++first) s += rec(left - first, k + 1) / first;
      return s;
    };
    CHECK(rec(n0, 0) == doctest::Approx(std::tgamma(n0 + 1)).epsilon(1e-12));
    CHECK(verify_cycle_identity(n0).holds);
  }
}

TEST_CASE("loops with a given current") {
  CHECK(count_loops_with_current(0, Current(2)) == 1);
  CHECK(loops_with_current(0, Current(2)).front() == RootedLoop::trivial(0));
  CHECK(count_loops_with_current(0, cur(2, {{0, 1, 1}, {1, 0, 1}})) == 1);
  const auto two = cur(2, {{0, 1, 2}, {1, 0, 2}});
  CHECK(count_loops_with_current(0, two) == 1);
  CHECK(loops_with_current(0, two).front() == RootedLoop({0, 1, 0, 1, 0}));

  for (const auto& c : currents_up_to(3, 5)) {
    for (int x = 0; x < 3; ++x) {
      if (c.counts().is_zero() || c.local_time()[x] == 0) continue;
      CHECK(count_loops_with_current(x, c) == brute_loop_count(x, c.counts()));
    }
  }
}

TEST_CASE("comb identity") {
  auto r = verify_comb_identity(Current(2), 0);
  CHECK(r.equal);
  CHECK(r.lhs == 1);
  r = verify_comb_identity(cur(2, {{0, 1, 1}, {1, 0, 1}}), 0);
  CHECK(r.equal);
  CHECK(r.lhs == 1);
  r = verify_comb_identity(cur(2, {{0, 0, 1}, {0, 1, 1}, {1, 0, 1}}), 0);
  CHECK(r.equal);
  CHECK(r.lhs == 2);
  CHECK(r.rhs == 2);

  for (const auto& c : currents_up_to(3, 4)) {
    for (int x = 0; x < 3; ++x) CHECK(verify_comb_identity(c, x).equal);
  }
}

TEST_CASE("sequence collections") {
  const auto c = cur(2, {{0, 0, 1}, {0, 1, 1}, {1, 0, 1}});
  const auto all = sequence_collections(c);
  CHECK(all.size() == 2);  // a^1 in {(1,2),(2,1)}, a^2 = (1)
  for (const auto& s : all) CHECK(sequence_counts(s) == c.counts());
}

TEST_CASE("bijection") {
  auto e = bijection_encode(Sequences{{}, {}}, 0);
  CHECK(e.loop == RootedLoop::trivial(0));

  e = bijection_encode(Sequences{{1}, {0}}, 0);
  CHECK(e.loop == RootedLoop({0, 1, 0}));
  CHECK(sequence_counts(e.remainder).is_zero());

  e = bijection_encode(Sequences{{1}, {1, 0}}, 0);
  CHECK(e.loop == RootedLoop({0, 1, 1, 0}));
  CHECK(sequence_counts(e.remainder).is_zero());

  CHECK(bijection_decode(RootedLoop::trivial(0), Sequences{{}, {}}, 0) == Sequences{{}, {}});

  // a^2 = (2,1) with the loop at 1 never returning to 2 leaves nothing behind
  e = bijection_encode(Sequences{{1}, {0, 1}}, 0);
  CHECK(e.loop == RootedLoop({0, 1, 0}));
  CHECK(e.remainder == Sequences{{}, {1}});
  CHECK(bijection_decode(e.loop, e.remainder, 0) == Sequences{{1}, {0, 1}});

  CHECK_THROWS_AS(bijection_encode(Sequences{{1}, {}}, 0), Error);
  CHECK_THROWS_AS(bijection_decode(RootedLoop({1, 0, 1}), Sequences{{}, {}}, 0), Error);

  for (int n = 1; n <= 3; ++n) {
    for (const auto& c : currents_up_to(n, 4)) {
      for (const auto& s : sequence_collections(c)) {
        for (int x = 0; x < n; ++x) {
          const auto enc = bijection_encode(c, s, x);
          CHECK(bijection_decode(enc.loop, enc.remainder, x) == s);
        }
      }
    }
  }
}
