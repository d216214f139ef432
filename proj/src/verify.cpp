#include "loopsoup/verify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>

#include "loopsoup/current_field.hpp"
#include "loopsoup/enumeration.hpp"
#include "loopsoup/error.hpp"
#include "loopsoup/gff.hpp"
#include "loopsoup/sampler.hpp"

namespace loopsoup::verify {

namespace {

using nlohmann::json;

json cjson(Complex z) { return complex_json(z.real(), z.imag()); }

double relative_error(Complex a, Complex b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

std::vector<std::vector<int>> all_orders(int n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

std::string order_name(const std::vector<int>& order) {
  std::string s;
  for (int v : order) s += std::to_string(v + 1);
  return s;
}

}  // namespace

double chi_square_critical(int dof, double level) {
  if (dof < 1) return 0.0;
  return boost::math::quantile(boost::math::chi_squared(dof), 1.0 - level);
}

VerificationReport proposition(const WeightMatrix& q, int max_mass, double rel_tol) {
  VerificationReport rep("proposition");
  rep.params() = {{"n", q.size()}, {"max_mass", max_mass}, {"rel_tol", rel_tol}};
  const Complex det = green(q).det_i_minus_q;
  double worst = 0.0;
  for (const Current& c : currents_up_to(q.size(), max_mass)) {
    const Complex closed = nu_c(q, c, det);
    const Complex bubble = nu_c_oracle_bubble(q, c);
    const double err = relative_error(closed, bubble);
    worst = std::max(worst, err);
    rep.add("C=" + format_counts(c.counts()), err <= rel_tol,
            {{"closed_form", cjson(closed)}, {"bubble", cjson(bubble)}, {"rel_error", err}});
  }
  rep.summary() = {{"max_rel_error", worst}};
  return rep;
}

VerificationReport lemma(const WeightMatrix& q, int max_mass, double tol, int max_order_n) {
  VerificationReport rep("lemma");
  const int n = q.size();
  rep.params() = {{"n", n}, {"max_mass", max_mass}, {"tol", tol}};
  const auto currents = currents_up_to(n, max_mass);
  double worst = 0.0, worst_order = 0.0;
  std::vector<Complex> bubble;
  for (const Current& c : currents) {
    const Complex b = nu_c_oracle_bubble(q, c);
    const Complex s = nu_c_oracle_loopsoup(q, c);
    bubble.push_back(b);
    const double err = std::abs(b - s) / std::max(1.0, std::abs(b));
    worst = std::max(worst, err);
    rep.add("C=" + format_counts(c.counts()), err <= tol,
            {{"bubble", cjson(b)}, {"loopsoup", cjson(s)}, {"scaled_error", err}});
  }
  if (n <= max_order_n) {
    for (const auto& order : all_orders(n)) {
      const WeightMatrix qo = reorder(q, order);
      double err = 0.0;
      for (std::size_t i = 0; i < currents.size(); ++i) {
        const Complex b = nu_c_oracle_bubble(qo, reorder(currents[i], order));
        err = std::max(err, std::abs(b - bubble[i]) / std::max(1.0, std::abs(bubble[i])));
      }
      worst_order = std::max(worst_order, err);
      rep.add("order=" + order_name(order), err <= tol,
              {{"currents", currents.size()}, {"max_scaled_error", err}});
    }
  }
  rep.summary() = {{"max_scaled_error", worst}, {"max_order_error", worst_order}};
  return rep;
}

VerificationReport identities(const IdentityScale& scale) {
  VerificationReport rep("identities");
  rep.params() = {{"max_n", scale.max_n},
                  {"comb_max_mass", scale.comb_max_mass},
                  {"cycle_max_n0", scale.cycle_max_n0},
                  {"bijection_max_mass", scale.bijection_max_mass}};

  for (int n = 1; n <= scale.max_n; ++n) {
    std::size_t cases = 0;
    json failures = json::array();
    for (const Current& c : currents_up_to(n, scale.comb_max_mass)) {
      for (int x = 0; x < n; ++x) {
        const CombIdentity id = verify_comb_identity(c, x);
        ++cases;
        if (!id.equal) {
          failures.push_back({{"C", format_counts(c.counts())}, {"x", x + 1},
                              {"lhs", id.lhs.str()}, {"rhs", id.rhs.str()}});
        }
      }
    }
    rep.add("comb n=" + std::to_string(n), failures.empty(),
            {{"cases", cases}, {"failures", failures}});
  }

  for (int n0 = 1; n0 <= scale.cycle_max_n0; ++n0) {
    const CycleIdentity id = verify_cycle_identity(n0);
    rep.add("cycle n0=" + std::to_string(n0), id.holds,
            {{"sum", id.sum.str()}, {"expected", id.expected.str()},
             {"compositions", id.compositions}});
  }

  for (int n = 1; n <= scale.max_n; ++n) {
    std::size_t forward = 0, backward = 0, cases = 0;
    json failures = json::array();
    for (const Current& c : currents_up_to(n, scale.bijection_max_mass)) {
      for (int x = 0; x < n; ++x) {
        ++cases;
        bool ok = true;
        const auto seqs = sequence_collections(c);
        for (const Sequences& s : seqs) {
          const Encoded e = bijection_encode(c, s, x);
          ok = ok && bijection_decode(e.loop, e.remainder, x) == s;
          ++forward;
        }
        std::size_t image = 0;
        for (const auto& [plus, rest] : current_decompositions(c, x)) {
          const auto rests = sequence_collections(rest);
          for (const RootedLoop& loop : loops_with_current(x, plus)) {
            for (const Sequences& r : rests) {
              const Encoded e = bijection_encode(bijection_decode(loop, r, x), x);
              ok = ok && e.loop == loop && e.remainder == r;
              ++image;
            }
          }
        }
        backward += image;
        ok = ok && image == seqs.size();
        if (!ok) failures.push_back({{"C", format_counts(c.counts())}, {"x", x + 1}});
      }
    }
    rep.add("bijection n=" + std::to_string(n), failures.empty(),
            {{"cases", cases}, {"encoded", forward}, {"decoded", backward},
             {"failures", failures}});
  }
  return rep;
}

VerificationReport green_identities(const WeightMatrix& q, int max_length, double det_rel_tol) {
  VerificationReport rep("green");
  const int n = q.size();
  rep.params() = {{"n", n}, {"max_length", max_length}, {"det_rel_tol", det_rel_tol}};
  const GreenFunction g = green(q);
  Complex prod = 1.0;
  for (const Complex& d : suffix_green_diagonals(q)) prod *= d;
  const double det_err = relative_error(g.det(), prod);
  rep.add("detG", det_err <= det_rel_tol,
          {{"det_G", cjson(g.det())}, {"suffix_product", cjson(prod)}, {"rel_error", det_err}});

  // every root in V, then v_j inside each proper suffix V_j
  std::vector<std::pair<std::vector<int>, int>> cases;
  std::vector<int> all(n);
  std::iota(all.begin(), all.end(), 0);
  if (max_length > 0) {
    for (int v = 0; v < n; ++v) cases.emplace_back(all, v);
  }
  for (int j = 1; j < n && max_length > 0; ++j) cases.emplace_back(std::vector<int>(all.begin() + j, all.end()), j);

  for (const auto& [subset, root] : cases) {
    const LogGreenSeries s = truncated_log_green(q, subset, root, max_length);
    const Complex target = green(restrict(q, subset))(root - subset.front(), root - subset.front());
    const double err = std::abs(std::exp(s.log_sum) - target);
    std::string name = "expm U={";
    for (std::size_t i = 0; i < subset.size(); ++i) {
      name += (i ? "," : "") + std::to_string(subset[i] + 1);
    }
    name += "} v=" + std::to_string(root + 1);
    rep.add(name, err <= s.green_error_bound,
            {{"exp_log_sum", cjson(std::exp(s.log_sum))}, {"green", cjson(target)},
             {"error", err}, {"error_bound", s.green_error_bound},
             {"log_tail_bound", s.tail_bound}, {"unrooted_loops", s.unrooted_loops}});
  }
  return rep;
}

VerificationReport isomorphism(const WeightMatrix& q, const IsomorphismScale& scale) {
  VerificationReport rep("isomorphism");
  const int n = q.size();
  rep.params() = {{"n", n}, {"max_total", scale.max_total}, {"quad_points", scale.quad_points},
                  {"tol", scale.tol}, {"grid", scale.grid}};
  std::vector<std::vector<double>> axes = scale.grid;
  if (axes.size() == 1 && n > 1) axes.assign(n, axes.front());
  if (static_cast<int>(axes.size()) != n) {
    throw Error(ErrorCode::kBadArgument, "grid needs one value list per vertex (or a single list)");
  }
  for (const auto& axis : axes) {
    if (axis.empty()) throw Error(ErrorCode::kBadArgument, "empty grid axis");
  }

  double worst = 0.0;
  std::vector<std::size_t> idx(n, 0);
  std::vector<double> t(n);
  while (true) {
    for (int u = 0; u < n; ++u) t[u] = axes[u][idx[u]];
    const TruncatedSum series = occupation_density_series(q, t, scale.max_total);
    const DensityEstimate dens = density_f_abs_z2(q, t, scale.quad_points);
    const double disc = std::abs(series.value - Complex(dens.value, 0.0));
    const double slack = 1e-13 * (std::abs(series.value) + std::abs(dens.value));
    const double bound = series.tail_bound + dens.error + slack;
    worst = std::max(worst, disc);
    std::string name = "t=(";
    for (int u = 0; u < n; ++u) name += (u ? "," : "") + json(t[u]).dump();
    name += ")";
    rep.add(name, disc <= bound && disc <= scale.tol,
            {{"occupation_series", cjson(series.value)},
             {"abs_z2_density", dens.value},
             {"discrepancy", disc},
             {"tail_bound", series.tail_bound},
             {"quadrature_error", dens.error},
             {"rounding_slack", slack}});
    int u = n - 1;
    while (u >= 0 && ++idx[u] == axes[u].size()) idx[u--] = 0;
    if (u < 0) break;
  }
  rep.summary() = {{"max_discrepancy", worst}};
  return rep;
}

VerificationReport moments(const WeightMatrix& q, int max_total, double tol) {
  VerificationReport rep("moments");
  const int n = q.size();
  rep.params() = {{"n", n}, {"max_total", max_total}};
  if (std::isfinite(tol)) rep.params()["tol"] = tol;
  const GreenFunction g = green(q);
  double worst = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::vector<int> s;
    for (int u = 0; u < n; ++u) {
      if (mask >> u & 1) s.push_back(u);
    }
    ComplexMatrix gs(s.size(), s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      for (std::size_t j = 0; j < s.size(); ++j) gs(i, j) = g(s[i], s[j]);
    }
    const Complex perm = permanent(gs);
    const TruncatedSum m = moment_from_currents(q, s, max_total);
    const double disc = std::abs(m.value - perm);
    const double slack = 1e-13 * std::abs(perm);
    worst = std::max(worst, disc);
    std::string name = "S={";
    for (std::size_t i = 0; i < s.size(); ++i) name += (i ? "," : "") + std::to_string(s[i] + 1);
    name += "}";
    rep.add(name, disc <= m.tail_bound + slack && disc <= tol,
            {{"moment_series", cjson(m.value)}, {"permanent", cjson(perm)},
             {"discrepancy", disc}, {"tail_bound", m.tail_bound}});
  }
  rep.summary() = {{"max_discrepancy", worst}};
  return rep;
}

VerificationReport torus_indicator(int max_n, int max_entry, double tol) {
  VerificationReport rep("torus");
  rep.params() = {{"max_n", max_n}, {"max_entry", max_entry}, {"tol", tol}};
  for (int n = 1; n <= max_n; ++n) {
    // every vertex imbalance is at most max_entry * (n - 1) in modulus
    const int points = std::max(2, 2 * max_entry * (n - 1) + 1);
    const int cells = n * n;
    std::vector<int> digits(cells, 0);
    std::size_t total = 0, currents = 0;
    double worst = 0.0;
    json failures = json::array();
    CountMatrix c(n);
    while (true) {
      for (int i = 0; i < cells; ++i) c(i / n, i % n) = digits[i];
      const double expected = c.is_current() ? 1.0 : 0.0;
      const double err = std::abs(loopsoup::torus_indicator(c, points) - expected);
      worst = std::max(worst, err);
      ++total;
      currents += c.is_current();
      if (err > tol && failures.size() < 10) {
        failures.push_back({{"C", format_counts(c)}, {"error", err}});
      }
      int i = cells - 1;
      while (i >= 0 && ++digits[i] > max_entry) digits[i--] = 0;
      if (i < 0) break;
    }
    rep.add("n=" + std::to_string(n), worst <= tol,
            {{"matrices", total}, {"currents", currents}, {"points", points},
             {"max_error", worst}, {"failures", failures}});
  }
  return rep;
}

VerificationReport monte_carlo(const WeightMatrix& q, const MonteCarloScale& scale) {
  VerificationReport rep("monte_carlo");
  const int n = q.size();
  rep.params() = {{"n", n},
                  {"samples", scale.samples},
                  {"seed", scale.seed},
                  {"loop_max_length", scale.loop_max_length},
                  {"histogram_max_mass", scale.histogram_max_mass}};
  const WalkSampler walk(q);
  const GreenFunction g = green(q);
  const double samples = static_cast<double>(scale.samples);
  std::vector<int> all(n);
  std::iota(all.begin(), all.end(), 0);

  // growing-loop law at every root, U = V
  for (int v = 0; v < n; ++v) {
    std::map<RootedLoop, std::size_t> counts;
    const std::uint64_t seed = scale.seed + 7919 * static_cast<std::uint64_t>(v + 1);
    for (std::size_t i = 0; i < scale.samples; ++i) {
      CounterRng rng(seed, i);
      RootedLoop loop = walk.growing_loop(all, v, rng);
      if (loop.length() <= scale.loop_max_length) ++counts[loop];
    }
    std::vector<RootedLoop> targets{RootedLoop::trivial(v)};
    for (auto& l : enumerate_loops(all, v, scale.loop_max_length).loops) targets.push_back(l);
    std::size_t bad = 0;
    double worst_z = 0.0;
    for (const RootedLoop& l : targets) {
      const double p = (path_weight(q, l) / g(v, v)).real();
      const double observed = static_cast<double>(counts[l]) / samples;
      const double sigma = std::sqrt(p * (1.0 - p) / samples);
      const double dev = std::abs(observed - p);
      const bool ok = sigma > 0.0 ? dev <= 3.0 * sigma : dev == 0.0;
      if (sigma > 0.0) worst_z = std::max(worst_z, dev / sigma);
      bad += !ok;
    }
    rep.add("growing_loop v=" + std::to_string(v + 1), bad == 0,
            {{"loops_checked", targets.size()}, {"outside_3_sigma", bad},
             {"max_abs_z", worst_z}});
  }

  // current histogram against nu_c, every vertex order
  std::vector<std::vector<int>> orders{all};
  if (scale.all_orderings && n <= 3) orders = all_orders(n);
  std::vector<std::pair<CountMatrix, double>> bins;
  double kept = 0.0;
  for (const Current& c : currents_up_to(n, scale.histogram_max_mass)) {
    const double p = nu_c(q, c, g.det_i_minus_q).real();
    if (p * samples >= 5.0) {
      bins.emplace_back(c.counts(), p);
      kept += p;
    }
  }
  const double other_p = std::max(0.0, 1.0 - kept);
  const bool use_other = other_p * samples >= 1e-9;
  const int dof = static_cast<int>(bins.size()) + (use_other ? 1 : 0) - 1;
  const double critical = chi_square_critical(dof);
  for (std::size_t k = 0; k < orders.size(); ++k) {
    const auto& order = orders[k];
    const auto soups = sample_bubble_soups(q, scale.samples, scale.seed + 104729 + 1000003 * k,
                                           scale.threads, order);
    std::map<CountMatrix, std::size_t> observed;
    for (const auto& s : soups) ++observed[s.current];
    double chi2 = 0.0, in_bins = 0.0;
    for (const auto& [c, p] : bins) {
      const double o = static_cast<double>(observed[c]);
      in_bins += o;
      chi2 += (o - p * samples) * (o - p * samples) / (p * samples);
    }
    if (use_other) {
      const double o = samples - in_bins;
      chi2 += (o - other_p * samples) * (o - other_p * samples) / (other_p * samples);
    }
    const bool ok = dof >= 1 ? chi2 <= critical : chi2 == 0.0;
    rep.add("current_histogram order=" + order_name(order), ok,
            {{"chi2", chi2}, {"dof", dof}, {"critical_1pct", critical}, {"bins", bins.size()}});
  }

  // mean occupation against G_uu
  const auto occ = sample_occupation(q, scale.samples, scale.seed + 15485863, scale.threads);
  for (int u = 0; u < n; ++u) {
    double mean = 0.0, sq = 0.0;
    for (const auto& s : occ) mean += s.t[u];
    mean /= samples;
    for (const auto& s : occ) sq += (s.t[u] - mean) * (s.t[u] - mean);
    const double se = std::sqrt(sq / (samples - 1.0) / samples);
    const double target = g(u, u).real();
    rep.add("mean_occupation u=" + std::to_string(u + 1), std::abs(mean - target) <= 3.0 * se,
            {{"mean", mean}, {"G_uu", target}, {"std_error", se}});
  }
  return rep;
}

}  // namespace loopsoup::verify
