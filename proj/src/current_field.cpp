#include "loopsoup/current_field.hpp"

#include <cmath>

#include "loopsoup/enumeration.hpp"
#include "loopsoup/error.hpp"
#include "loopsoup/torus.hpp"

namespace loopsoup {

namespace {

// Entries grouped by their smaller endpoint: once every entry touching vertex
// s has been assigned, the balance at s is final and can be checked.
struct EntryPlan {
  std::vector<std::pair<int, int>> entries;
  std::vector<int> closes;  // closes[i] = vertex whose balance is final after entry i, or -1
};

EntryPlan plan_entries(int n) {
  EntryPlan plan;
  for (int s = 0; s < n; ++s) {
    plan.entries.emplace_back(s, s);
    for (int k = s + 1; k < n; ++k) {
      plan.entries.emplace_back(s, k);
      plan.entries.emplace_back(k, s);
    }
    plan.closes.resize(plan.entries.size(), -1);
    plan.closes.back() = s;
  }
  return plan;
}

void require_integrable(const WeightMatrix& q) {
  if (!is_integrable(q)) throw Error(ErrorCode::kNotIntegrable, "weight is not integrable");
}

void require_size(const WeightMatrix& q, const Current& c) {
  if (q.size() != c.size()) throw Error(ErrorCode::kBadArgument, "current size mismatch");
}

}  // namespace

void for_each_current(int n, int mass, const std::function<void(const Current&)>& visit) {
  if (n <= 0 || mass < 0) throw Error(ErrorCode::kBadArgument, "bad current enumeration range");
  const EntryPlan plan = plan_entries(n);
  CountMatrix m(n);
  std::vector<std::int64_t> balance(n, 0);  // out - in

  std::function<void(std::size_t, int)> assign = [&](std::size_t i, int left) {
    if (i == plan.entries.size()) {
      if (left == 0) visit(Current(m));
      return;
    }
    const auto [u, v] = plan.entries[i];
    for (int k = 0; k <= left; ++k) {
      m(u, v) = k;
      balance[u] += k;
      balance[v] -= k;
      const int s = plan.closes[i];
      if (s < 0 || balance[s] == 0) assign(i + 1, left - k);
      balance[u] -= k;
      balance[v] += k;
    }
    m(u, v) = 0;
  };
  assign(0, mass);
}

std::vector<Current> currents_of_mass(int n, int mass) {
  std::vector<Current> out;
  for_each_current(n, mass, [&](const Current& c) { out.push_back(c); });
  return out;
}

std::vector<Current> currents_up_to(int n, int max_mass) {
  std::vector<Current> out;
  for (int m = 0; m <= max_mass; ++m) {
    for_each_current(n, m, [&](const Current& c) { out.push_back(c); });
  }
  return out;
}

double current_multiplicity(const Current& c) {
  if (c.total() > 170) throw Error(ErrorCode::kTooLarge, "total mass above 170");
  const auto local = c.local_time();
  BigInt prod = 1;
  for (int u = 0; u < c.size(); ++u) {
    std::vector<std::int64_t> row;
    for (int v = 0; v < c.size(); ++v) row.push_back(c(u, v));
    prod *= multinomial(local[u], row);
  }
  return prod.convert_to<double>();
}

Complex nu_c(const WeightMatrix& q, const Current& c, Complex det_i_minus_q) {
  require_size(q, c);
  return det_i_minus_q * current_weight(q, c) * current_multiplicity(c);
}

Complex nu_c(const WeightMatrix& q, const Current& c) {
  require_size(q, c);
  return nu_c(q, c, green(q).det_i_minus_q);
}

Complex nu_star(const WeightMatrix& q, std::span<const std::int64_t> local_time) {
  const int n = q.size();
  if (static_cast<int>(local_time.size()) != n) {
    throw Error(ErrorCode::kBadArgument, "local time size mismatch");
  }
  for (auto x : local_time) {
    if (x < 0) throw Error(ErrorCode::kBadArgument, "negative local time");
  }
  const Complex det = green(q).det_i_minus_q;
  CountMatrix m(n);
  std::vector<std::int64_t> col(n, 0);
  Complex total = 0.0;
  // row u is a composition of n'_u; column sums must match n' at the end
  std::function<void(int, int, std::int64_t)> fill = [&](int u, int v, std::int64_t left) {
    if (u == n) {
      for (int k = 0; k < n; ++k) {
        if (col[k] != local_time[k]) return;
      }
      total += nu_c(q, Current(m), det);
      return;
    }
    if (v == n - 1) {
      m(u, v) = static_cast<int>(left);
      col[v] += left;
      if (col[v] <= local_time[v]) fill(u + 1, 0, u + 1 < n ? local_time[u + 1] : 0);
      col[v] -= left;
      m(u, v) = 0;
      return;
    }
    for (std::int64_t k = 0; k <= left; ++k) {
      m(u, v) = static_cast<int>(k);
      col[v] += k;
      if (col[v] <= local_time[v]) fill(u, v + 1, left - k);
      col[v] -= k;
    }
    m(u, v) = 0;
  };
  fill(0, 0, local_time[0]);
  return total;
}

TruncatedSum current_field_mass(const WeightMatrix& q, int max_total) {
  require_integrable(q);
  if (max_total < 0) throw Error(ErrorCode::kBadArgument, "max_total must be >= 0");
  const int n = q.size();
  const WeightMatrix qa = q.abs_weight();
  const Complex det = green(q).det_i_minus_q;
  TruncatedSum out;
  out.max_total = max_total;
  double partial_abs = 0.0;
  for (int m = 0; m <= max_total; ++m) {
    for_each_current(n, m, [&](const Current& c) {
      const double mult = current_multiplicity(c);
      out.value += det * current_weight(q, c) * mult;
      partial_abs += current_weight(qa, c).real() * mult;
    });
  }
  // sum over all currents of |q|(C) * multiplicity = 1 / det(I - |Q|)
  const double full_abs = 1.0 / green(qa).det_i_minus_q.real();
  const double slack = 1e-14 * full_abs;
  out.tail_bound = std::abs(det) * (std::max(full_abs - partial_abs, 0.0) + slack);
  return out;
}

TruncatedSum occupation_density_series(const WeightMatrix& q, std::span<const double> t,
                                       int max_total) {
  require_integrable(q);
  const int n = q.size();
  if (static_cast<int>(t.size()) != n) throw Error(ErrorCode::kBadArgument, "point size mismatch");
  for (double x : t) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
      throw Error(ErrorCode::kNegativePoint, "occupation point must be finite and >= 0");
    }
  }
  if (max_total < 0) throw Error(ErrorCode::kBadArgument, "max_total must be >= 0");
  const Complex det = green(q).det_i_minus_q;
  const RealMatrix qa = q.abs();

  double decay = 0.0;
  for (double x : t) decay += x;
  decay = std::exp(-decay);

  TruncatedSum out;
  out.max_total = max_total;
  Complex partial = 0.0;
  double partial_abs = 0.0;
  for (int m = 0; m <= max_total; ++m) {
    for_each_current(n, m, [&](const Current& c) {
      // prod_uv (sqrt(t_u t_v))^{C_uv} / C_uv! equals prod_u t_u^{n_u} / prod C_uv!
      Complex term = 1.0;
      double term_abs = 1.0;
      for (int u = 0; u < n; ++u) {
        for (int v = 0; v < n; ++v) {
          const int k = c(u, v);
          if (k == 0) continue;
          const double s = std::sqrt(t[u] * t[v]);
          for (int i = 1; i <= k; ++i) {
            term *= q(u, v) * s / static_cast<double>(i);
            term_abs *= qa(u, v) * s / static_cast<double>(i);
          }
        }
      }
      partial += term;
      partial_abs += term_abs;
    });
  }
  out.value = det * partial * decay;

  ComplexMatrix a(n, n);
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) a(u, v) = qa(u, v) * std::sqrt(t[u] * t[v]);
  }
  // only C = 0 has a nonzero term
  if (a.isZero(0.0)) return out;
  const TorusEstimate full = torus_exponential_mean_converged(a);
  const double full_abs = full.value.real() + full.error;
  const double slack = 1e-14 * full_abs;
  out.tail_bound = std::abs(det) * decay * (std::max(full_abs - partial_abs, 0.0) + slack);
  return out;
}

}  // namespace loopsoup
