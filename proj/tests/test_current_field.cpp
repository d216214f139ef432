#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "loopsoup/current_field.hpp"
#include "loopsoup/enumeration.hpp"
#include "support.hpp"

using namespace loopsoup;
using testing::code_of;

namespace {

Current cur(int n, std::initializer_list<std::array<int, 3>> entries) {
  CountMatrix c(n);
  for (auto [u, v, k] : entries) c(u, v) = k;
  return Current(c);
}

// every n x n matrix with the given total, filtered by in == out degree
std::set<CountMatrix> brute_currents(int n, int mass) {
  std::set<CountMatrix> out;
  const int cells = n * n;
  std::vector<int> digits(cells, 0);
  while (true) {
    int sum = 0;
    for (int d : digits) sum += d;
    if (sum == mass) {
      CountMatrix c(n);
      for (int i = 0; i < cells; ++i) c(i / n, i % n) = digits[i];
      bool balanced = true;
      for (int u = 0; u < n; ++u) {
        int in = 0, outd = 0;
        for (int v = 0; v < n; ++v) {
          in += c(v, u);
          outd += c(u, v);
        }
        balanced = balanced && in == outd;
      }
      if (balanced) out.insert(c);
    }
    int i = cells - 1;
    while (i >= 0 && ++digits[i] > mass) digits[i--] = 0;
    if (i < 0) break;
  }
  return out;
}

}  // namespace

TEST_CASE("current enumeration matches brute force") {
  for (int n = 1; n <= 3; ++n) {
    for (int m = 0; m <= 4; ++m) {
      std::set<CountMatrix> got;
      for (const auto& c : currents_of_mass(n, m)) {
        CHECK(c.total() == m);
        got.insert(c.counts());
      }
      CHECK(got.size() == currents_of_mass(n, m).size());
      CHECK(got == brute_currents(n, m));
    }
  }
  CHECK(currents_up_to(2, 3).size() ==
        currents_of_mass(2, 0).size() + currents_of_mass(2, 1).size() +
            currents_of_mass(2, 2).size() + currents_of_mass(2, 3).size());
}

TEST_CASE("current multiplicity") {
  CHECK(current_multiplicity(Current(2)) == 1.0);
  CHECK(current_multiplicity(cur(2, {{0, 0, 1}, {0, 1, 1}, {1, 0, 1}})) == 2.0);
  // n = (3, 3): 3!3!/(1!2!2!1!)
  CHECK(current_multiplicity(cur(2, {{0, 0, 1}, {0, 1, 2}, {1, 0, 2}, {1, 1, 1}})) == 9.0);
}

TEST_CASE("closed-form current distribution") {
  const auto h = testing::hermitian2();
  CHECK(std::abs(nu_c(h, Current(2)) - 0.75) < 1e-15);
  testing::Rng rng(1);
  const auto q = testing::random_complex(3, 0.7, rng);
  CHECK(std::abs(nu_c(q, Current(3)) - green(q).det_i_minus_q) < 1e-15);
  for (int k = 0; k <= 8; ++k) {
    CHECK(std::abs(nu_c(testing::scalar(0.5), cur(1, {{0, 0, k}})) - std::pow(0.5, k + 1)) < 1e-15);
  }
  CHECK(std::abs(nu_c(h, cur(2, {{0, 1, 1}, {1, 0, 1}})) - 0.1875) < 1e-15);
  CHECK(code_of([] { nu_c(testing::scalar(1.0), Current(1)); }) == ErrorCode::kNotIntegrable);
}

TEST_CASE("local time distribution") {
  const auto h = testing::hermitian2();
  const std::vector<std::int64_t> zero{0, 0}, ones{1, 1};
  CHECK(std::abs(nu_star(h, zero) - 0.75) < 1e-15);
  CHECK(std::abs(nu_star(h, ones) - 0.1875) < 1e-15);
  for (std::int64_t k = 0; k <= 5; ++k) {
    const std::vector<std::int64_t> n1{k};
    CHECK(std::abs(nu_star(testing::scalar(0.5), n1) - std::pow(0.5, k + 1)) < 1e-15);
  }

  testing::Rng rng(2);
  const auto q = testing::random_complex(3, 0.6, rng);
  std::map<std::vector<std::int64_t>, Complex> grouped;
  for (const auto& c : currents_up_to(3, 4)) grouped[c.local_time()] += nu_c(q, c);
  for (const auto& [n, value] : grouped) {
    std::int64_t s = 0;
    for (auto x : n) s += x;
    CHECK(s <= 4);  // total mass equals the summed local time
    CHECK(testing::rel_err(nu_star(q, n), value) < 1e-12);
  }
  const std::vector<std::int64_t> bad{-1, 0, 0};
  CHECK(code_of([&] { nu_star(q, bad); }) == ErrorCode::kBadArgument);
}

TEST_CASE("current field total mass") {
  testing::Rng rng(3);
  for (int trial = 0; trial < 4; ++trial) {
    const auto q = trial % 2 ? testing::random_complex(2, 0.4, rng)
                             : testing::random_substochastic(3, 0.4, rng);
    double last_tail = 1e300;
    for (int m : {2, 4, 8}) {
      const auto s = current_field_mass(q, m);
      CHECK(std::abs(s.value - 1.0) <= s.tail_bound + 1e-12);
      CHECK(s.tail_bound <= last_tail);
      last_tail = s.tail_bound;
    }
  }
}

TEST_CASE("occupation density series") {
  const std::vector<double> t3{0.3, 1.0, 2.5};
  const auto z = occupation_density_series(WeightMatrix::zero(3), t3, 0);
  CHECK(std::abs(z.value - std::exp(-3.8)) < 1e-15);
  CHECK(z.tail_bound == 0.0);

  for (double t : {0.5, 1.0, 2.0, 5.0}) {
    const std::vector<double> p{t};
    const auto s = occupation_density_series(testing::scalar(0.5), p, 40);
    const double exact = 0.5 * std::exp(-0.5 * t);
    CHECK(std::abs(s.value - exact) <= s.tail_bound + 1e-15);
    CHECK(std::abs(s.value - exact) < 1e-10);
  }

  // truncation at M: 0.5 e^-t sum_{k<=M} (t/2)^k / k!
  const std::vector<double> one{1.0};
  const auto s3 = occupation_density_series(testing::scalar(0.5), one, 3);
  const double partial = 0.5 * std::exp(-1.0) * (1 + 0.5 + 0.125 + 0.125 / 6);
  CHECK(std::abs(s3.value - partial) < 1e-15);
  CHECK(s3.tail_bound >= 0.5 * std::exp(-0.5) - partial - 1e-15);

  const std::vector<double> neg{-0.1, 1.0};
  CHECK(code_of([&] { occupation_density_series(testing::hermitian2(), neg, 4); }) ==
        ErrorCode::kNegativePoint);
  CHECK(code_of([&] { occupation_density_series(testing::hermitian2(), one, 4); }) ==
        ErrorCode::kBadArgument);
}
