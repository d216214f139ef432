// One line per acceptance criterion; exit status 0 only if all pass.
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "loopsoup/verify.hpp"
#include "support.hpp"

#ifndef LOOPSOUP_DATA
#error "LOOPSOUP_DATA must name the bundled data directory"
#endif

using namespace loopsoup;

namespace {

struct Tally {
  bool pass = true;
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::string first_failure;

  void add(const VerificationReport& rep) {
    checks += rep.size();
    failures += rep.failures();
    if (!rep.passed()) {
      pass = false;
      if (first_failure.empty()) {
        for (const auto& c : rep.to_json()["checks"]) {
          if (!c["pass"].get<bool>()) {
            first_failure = rep.suite() + ": " + c["name"].get<std::string>();
            break;
          }
        }
      }
    }
  }
};

WeightMatrix bundled(const char* name) {
  return load_weight_file(std::string(LOOPSOUP_DATA) + "/" + name);
}

bool criterion(int index, const char* title, double limit_s, const std::function<Tally()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Tally t;
  std::string error;
  try {
    t = body();
  } catch (const std::exception& e) {
    t.pass = false;
    error = e.what();
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = secs < limit_s;
  const bool ok = t.pass && in_time;
  std::printf("criterion %d %-22s %s  checks=%zu failed=%zu time=%.2fs limit=%.0fs", index, title,
              ok ? "PASS" : "FAIL", t.checks, t.failures, secs, limit_s);
  if (!error.empty()) std::printf("  error: %s", error.c_str());
  if (!t.first_failure.empty()) std::printf("  first failure: %s", t.first_failure.c_str());
  if (!in_time) std::printf("  (over time limit)");
  std::printf("\n");
  std::fflush(stdout);
  return ok;
}

std::vector<WeightMatrix> random_complex_set(std::uint64_t seed, int count, double rho) {
  testing::Rng rng(seed);
  std::vector<WeightMatrix> out;
  for (int i = 0; i < count; ++i) out.push_back(testing::random_complex(1 + i % 3, rho, rng));
  return out;
}

}  // namespace

int main() {
  bool all = true;
  const auto complex_set = random_complex_set(20240601, 10, 0.7);

  all &= criterion(1, "proposition", 60, [&] {
    Tally t;
    for (const auto& q : complex_set) t.add(verify::proposition(q, 4, 1e-9));
    return t;
  });

  all &= criterion(2, "lemma", 120, [&] {
    Tally t;
    for (const auto& q : complex_set) t.add(verify::lemma(q, 4, 1e-12, 3));
    return t;
  });

  all &= criterion(3, "identities", 60, [] {
    Tally t;
    t.add(verify::identities({3, 5, 10, 4}));
    return t;
  });

  all &= criterion(4, "green/determinant", 30, [] {
    Tally t;
    testing::Rng rng(20240602);
    for (int i = 0; i < 20; ++i) {
      const int n = 1 + i % 6;
      const auto q = testing::random_complex(n, 0.8, rng);
      t.add(verify::green_identities(q, n <= 3 ? 12 : 0, 1e-10));
    }
    return t;
  });

  all &= criterion(5, "isomorphism", 120, [] {
    Tally t;
    const verify::IsomorphismScale scale{{{0.5, 1.0, 2.0}}, 20, 64, 1e-6};
    t.add(verify::isomorphism(bundled("hermitian2.json"), scale));
    testing::Rng rng(20240603);
    for (int i = 0; i < 5; ++i) t.add(verify::isomorphism(testing::random_hermitian(2, 0.5, rng), scale));
    t.add(verify::isomorphism(WeightMatrix::zero(2), {{{0.5, 1.0, 2.0}}, 20, 64, 1e-12}));
    return t;
  });

  all &= criterion(6, "moments", 60, [] {
    Tally t;
    testing::Rng rng(20240604);
    for (int i = 0; i < 6; ++i) t.add(verify::moments(testing::random_hermitian(1 + i % 3, 0.3, rng), 20, 1e-6));
    t.add(verify::moments(WeightMatrix::zero(3), 20, 1e-12));
    return t;
  });

  all &= criterion(7, "torus indicator", 30, [] {
    Tally t;
    t.add(verify::torus_indicator(3, 3, 1e-12));
    return t;
  });

  all &= criterion(8, "monte carlo", 120, [] {
    Tally t;
    t.add(verify::monte_carlo(bundled("substochastic3.json")));
    t.add(verify::monte_carlo(testing::uniform(2, 0.25)));
    t.add(verify::monte_carlo(bundled("singleton.json")));
    return t;
  });

  std::printf("acceptance: %s\n", all ? "PASS" : "FAIL");
  return all ? 0 : 1;
}
