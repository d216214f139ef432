#include "loopsoup/loopsoup.h"

#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "loopsoup/current_field.hpp"
#include "loopsoup/enumeration.hpp"
#include "loopsoup/error.hpp"
#include "loopsoup/gff.hpp"
#include "loopsoup/report.hpp"
#include "loopsoup/sampler.hpp"
#include "loopsoup/verify.hpp"

struct ls_weights {
  loopsoup::WeightMatrix q;
};

struct ls_report {
  bool passed = true;
  std::string json;
  std::string text;
};

namespace {

using loopsoup::Complex;
using loopsoup::ErrorCode;
using nlohmann::json;

thread_local std::string g_last_error;

ls_status to_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kBadArgument: return LS_ERR_BAD_ARGUMENT;
    case ErrorCode::kParse: return LS_ERR_PARSE;
    case ErrorCode::kNotIntegrable: return LS_ERR_NOT_INTEGRABLE;
    case ErrorCode::kSingularMatrix: return LS_ERR_SINGULAR;
    case ErrorCode::kBadSubset: return LS_ERR_BAD_SUBSET;
    case ErrorCode::kTrivialLoop: return LS_ERR_TRIVIAL_LOOP;
    case ErrorCode::kNotACurrent: return LS_ERR_NOT_A_CURRENT;
    case ErrorCode::kBudgetExceeded: return LS_ERR_BUDGET;
    case ErrorCode::kBadSequences: return LS_ERR_BAD_SEQUENCES;
    case ErrorCode::kNotHermitianPD: return LS_ERR_NOT_HERMITIAN_PD;
    case ErrorCode::kNotSamplable: return LS_ERR_NOT_SAMPLABLE;
    case ErrorCode::kTooLarge: return LS_ERR_TOO_LARGE;
    case ErrorCode::kNegativePoint: return LS_ERR_NEGATIVE_POINT;
    case ErrorCode::kInternal: return LS_ERR_INTERNAL;
  }
  return LS_ERR_INTERNAL;
}

template <class F>
ls_status guarded(F&& body) {
  try {
    body();
    return LS_OK;
  } catch (const loopsoup::Error& e) {
    g_last_error = std::string(loopsoup::error_code_name(e.code())) + ": " + e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return LS_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return LS_ERR_INTERNAL;
  }
}

void require(bool cond, const char* what) {
  if (!cond) throw loopsoup::Error(ErrorCode::kBadArgument, what);
}

loopsoup::Current current_from(const ls_weights* w, const int* counts) {
  require(w && counts, "null argument");
  const int n = w->q.size();
  loopsoup::CountMatrix m(n);
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      require(counts[u * n + v] >= 0, "edge counts must be nonnegative");
      m(u, v) = counts[u * n + v];
    }
  }
  return loopsoup::Current(std::move(m));
}

std::vector<std::vector<double>> parse_grid(const char* spec) {
  std::vector<std::vector<double>> axes;
  if (!spec || !*spec) return {{0.5, 1.0, 2.0}};
  std::stringstream all(spec);
  std::string axis;
  while (std::getline(all, axis, ';')) {
    std::vector<double> values;
    std::stringstream parts(axis);
    std::string item;
    while (std::getline(parts, item, ',')) {
      std::size_t used = 0;
      double x = 0.0;
      try {
        x = std::stod(item, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || item.find_first_not_of(" \t", used) != std::string::npos) {
        throw loopsoup::Error(ErrorCode::kBadArgument, "bad grid value '" + item + "'");
      }
      values.push_back(x);
    }
    if (values.empty()) throw loopsoup::Error(ErrorCode::kBadArgument, "empty grid axis");
    axes.push_back(std::move(values));
  }
  return axes;
}

ls_report* make_report(bool passed, const json& j, std::string text) {
  auto* r = new ls_report;
  r->passed = passed;
  r->json = j.dump(2);
  r->text = std::move(text);
  return r;
}

ls_report* make_report(const loopsoup::VerificationReport& rep) {
  return make_report(rep.passed(), rep.to_json(), rep.to_text(false));
}

json cjson(Complex z) { return loopsoup::complex_json(z.real(), z.imag()); }

double pick(double tol, double fallback) { return tol > 0.0 ? tol : fallback; }

loopsoup::VerificationReport run_suite(const ls_weights* w, const std::string& suite,
                                       const ls_options& o) {
  namespace verify = loopsoup::verify;
  auto need = [&]() -> const loopsoup::WeightMatrix& {
    if (!w) throw loopsoup::Error(ErrorCode::kBadArgument, "suite '" + suite + "' needs a weight matrix");
    return w->q;
  };
  if (suite == "proposition") return verify::proposition(need(), o.max_mass, pick(o.tol, 1e-9));
  if (suite == "lemma") return verify::lemma(need(), o.max_mass, pick(o.tol, 1e-12));
  if (suite == "identities") return verify::identities();
  if (suite == "green") {
    // keep the rooted-loop inventory near a million loops
    const int n = need().size();
    int length = 1;
    double loops = 1.0, per = 1.0;
    while (length < o.max_length && loops + per * n <= 1e6) {
      per *= n;
      loops += per;
      ++length;
    }
    return verify::green_identities(need(), length, pick(o.tol, 1e-10));
  }
  if (suite == "isomorphism") {
    return verify::isomorphism(need(), {parse_grid(o.grid), o.max_total, o.quad_points,
                                        pick(o.tol, 1e-6)});
  }
  if (suite == "moments") return verify::moments(need(), o.max_total,
                                                  pick(o.tol, std::numeric_limits<double>::infinity()));
  if (suite == "torus") return verify::torus_indicator(3, 3, pick(o.tol, 1e-12));
  if (suite == "montecarlo") {
    verify::MonteCarloScale scale;
    scale.samples = o.samples;
    scale.seed = o.seed;
    scale.threads = o.threads;
    return verify::monte_carlo(need(), scale);
  }
  if (suite == "all") {
    loopsoup::VerificationReport all("all");
    json skipped = json::array();
    for (const char* name : {"identities", "torus"}) all.merge(run_suite(w, name, o));
    if (w) {
      const bool integrable = loopsoup::is_integrable(w->q);
      const bool hermitian = loopsoup::is_hermitian(w->q);
      if (!integrable) throw loopsoup::Error(ErrorCode::kNotIntegrable, "weight is not integrable");
      for (const char* name : {"proposition", "lemma", "green"}) all.merge(run_suite(w, name, o));
      for (const char* name : {"isomorphism", "moments"}) {
        if (hermitian) {
          all.merge(run_suite(w, name, o));
        } else {
          skipped.push_back({{"suite", name}, {"reason", "weight is not Hermitian"}});
        }
      }
      if (loopsoup::is_samplable(w->q)) {
        all.merge(run_suite(w, "montecarlo", o));
      } else {
        skipped.push_back({{"suite", "montecarlo"}, {"reason", "weight is not samplable"}});
      }
    }
    if (!skipped.empty()) all.summary()["skipped"] = skipped;
    return all;
  }
  throw loopsoup::Error(ErrorCode::kBadArgument, "unknown suite '" + suite + "'");
}

}  // namespace

extern "C" {

const char* ls_status_name(ls_status status) {
  switch (status) {
    case LS_OK: return "OK";
    case LS_ERR_IO: return "IOError";
    default: break;
  }
  if (status > LS_OK && status <= LS_ERR_INTERNAL) {
    return loopsoup::error_code_name(static_cast<ErrorCode>(status));
  }
  return "Unknown";
}

const char* ls_last_error(void) { return g_last_error.c_str(); }

ls_status ls_weights_parse(const char* json_text, ls_weights** out) {
  return guarded([&] {
    require(json_text && out, "null argument");
    *out = new ls_weights{loopsoup::parse_weight_json(json_text)};
  });
}

ls_status ls_weights_load(const char* path, ls_weights** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new ls_weights{loopsoup::load_weight_file(path)};
  });
}

ls_status ls_weights_create(int n, const double* re, const double* im, ls_weights** out) {
  return guarded([&] {
    require(n > 0 && re && out, "bad argument");
    std::vector<Complex> entries(static_cast<std::size_t>(n) * n);
    for (std::size_t i = 0; i < entries.size(); ++i) entries[i] = {re[i], im ? im[i] : 0.0};
    *out = new ls_weights{loopsoup::WeightMatrix::from_row_major(n, entries)};
  });
}

void ls_weights_free(ls_weights* w) { delete w; }

int ls_weights_size(const ls_weights* w) { return w ? w->q.size() : 0; }

ls_status ls_weights_entry(const ls_weights* w, int u, int v, double* re, double* im) {
  return guarded([&] {
    require(w && re && im, "null argument");
    require(u >= 0 && v >= 0 && u < w->q.size() && v < w->q.size(), "index out of range");
    *re = w->q(u, v).real();
    *im = w->q(u, v).imag();
  });
}

ls_status ls_spectral_radius_abs(const ls_weights* w, double* out) {
  return guarded([&] {
    require(w && out, "null argument");
    *out = loopsoup::spectral_radius_abs(w->q);
  });
}

ls_status ls_is_integrable(const ls_weights* w, double margin, int* out) {
  return guarded([&] {
    require(w && out, "null argument");
    *out = loopsoup::is_integrable(w->q, margin);
  });
}

ls_status ls_is_hermitian(const ls_weights* w, int* out) {
  return guarded([&] {
    require(w && out, "null argument");
    *out = loopsoup::is_hermitian(w->q);
  });
}

ls_status ls_is_samplable(const ls_weights* w, int* out) {
  return guarded([&] {
    require(w && out, "null argument");
    *out = loopsoup::is_samplable(w->q);
  });
}

ls_status ls_green(const ls_weights* w, double* g_re, double* g_im, double* det_re,
                   double* det_im) {
  return guarded([&] {
    require(w && det_re && det_im, "null argument");
    const auto g = loopsoup::green(w->q);
    const int n = g.size();
    for (int u = 0; u < n; ++u) {
      for (int v = 0; v < n; ++v) {
        if (g_re) g_re[u * n + v] = g(u, v).real();
        if (g_im) g_im[u * n + v] = g(u, v).imag();
      }
    }
    *det_re = g.det_i_minus_q.real();
    *det_im = g.det_i_minus_q.imag();
  });
}

ls_status ls_nu_c(const ls_weights* w, const int* counts, double* re, double* im) {
  return guarded([&] {
    require(re && im, "null argument");
    const Complex z = loopsoup::nu_c(w->q, current_from(w, counts));
    *re = z.real();
    *im = z.imag();
  });
}

ls_status ls_nu_c_oracle_bubble(const ls_weights* w, const int* counts, double* re, double* im) {
  return guarded([&] {
    require(re && im, "null argument");
    const Complex z = loopsoup::nu_c_oracle_bubble(w->q, current_from(w, counts));
    *re = z.real();
    *im = z.imag();
  });
}

ls_status ls_nu_c_oracle_loopsoup(const ls_weights* w, const int* counts, double* re,
                                  double* im) {
  return guarded([&] {
    require(re && im, "null argument");
    const Complex z = loopsoup::nu_c_oracle_loopsoup(w->q, current_from(w, counts));
    *re = z.real();
    *im = z.imag();
  });
}

ls_status ls_occupation_density(const ls_weights* w, const double* t, int max_total, double* re,
                                double* im, double* tail_bound) {
  return guarded([&] {
    require(w && t && re && im && tail_bound, "null argument");
    const auto s = loopsoup::occupation_density_series(
        w->q, std::span<const double>(t, static_cast<std::size_t>(w->q.size())), max_total);
    *re = s.value.real();
    *im = s.value.imag();
    *tail_bound = s.tail_bound;
  });
}

ls_status ls_density_abs_z2(const ls_weights* w, const double* t, int points, double* value,
                            double* error) {
  return guarded([&] {
    require(w && t && value && error, "null argument");
    const auto d = loopsoup::density_f_abs_z2(
        w->q, std::span<const double>(t, static_cast<std::size_t>(w->q.size())), points);
    *value = d.value;
    *error = d.error;
  });
}

ls_status ls_permanent(int n, const double* re, const double* im, double* out_re,
                       double* out_im) {
  return guarded([&] {
    require(n >= 0 && (n == 0 || re) && out_re && out_im, "bad argument");
    loopsoup::ComplexMatrix m(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) m(i, j) = {re[i * n + j], im ? im[i * n + j] : 0.0};
    }
    const Complex p = loopsoup::permanent(m);
    *out_re = p.real();
    *out_im = p.imag();
  });
}

void ls_options_init(ls_options* o) {
  if (!o) return;
  o->max_mass = 4;
  o->max_total = 20;
  o->quad_points = 64;
  o->max_length = 12;
  o->samples = 100000;
  o->seed = 20240611;
  o->tol = 0.0;
  o->grid = nullptr;
  o->threads = 1;
}

ls_status ls_validate(const ls_weights* w, ls_report** out) {
  return guarded([&] {
    require(w && out, "null argument");
    const auto& q = w->q;
    json rows = json::array();
    for (int u = 0; u < q.size(); ++u) {
      Complex s = 0.0;
      for (int v = 0; v < q.size(); ++v) s += q(u, v);
      rows.push_back(cjson(s));
    }
    const json j = {{"n", q.size()},
                    {"spectral_radius_abs", loopsoup::spectral_radius_abs(q)},
                    {"integrable", loopsoup::is_integrable(q)},
                    {"hermitian", loopsoup::is_hermitian(q)},
                    {"samplable", loopsoup::is_samplable(q)},
                    {"row_sums", rows}};
    *out = make_report(true, j, loopsoup::render_text(j));
  });
}

ls_status ls_verify(const ls_weights* w, const char* suite, const ls_options* opts,
                    ls_report** out) {
  return guarded([&] {
    require(suite && out, "null argument");
    ls_options o;
    ls_options_init(&o);
    if (opts) o = *opts;
    *out = make_report(run_suite(w, suite, o));
  });
}

ls_status ls_current_report(const ls_weights* w, const int* counts, int with_oracles,
                            ls_report** out) {
  return guarded([&] {
    require(out, "null argument");
    const loopsoup::Current c = current_from(w, counts);
    json j = {{"current", loopsoup::format_counts(c.counts())},
              {"total_mass", c.total()},
              {"nu_c", cjson(loopsoup::nu_c(w->q, c))}};
    if (with_oracles) {
      j["bubble_oracle"] = cjson(loopsoup::nu_c_oracle_bubble(w->q, c));
      j["loopsoup_oracle"] = cjson(loopsoup::nu_c_oracle_loopsoup(w->q, c));
    }
    *out = make_report(true, j, loopsoup::render_text(j));
  });
}

ls_status ls_density_report(const ls_weights* w, const double* t, const ls_options* opts,
                            ls_report** out) {
  return guarded([&] {
    require(w && t && out, "null argument");
    ls_options o;
    ls_options_init(&o);
    if (opts) o = *opts;
    const std::span<const double> point(t, static_cast<std::size_t>(w->q.size()));
    const auto s = loopsoup::occupation_density_series(w->q, point, o.max_total);
    json j = {{"t", std::vector<double>(point.begin(), point.end())},
              {"occupation_series", cjson(s.value)},
              {"max_total", s.max_total},
              {"tail_bound", s.tail_bound}};
    if (loopsoup::is_hermitian(w->q, 1e-12)) {
      const auto d = loopsoup::density_f_abs_z2(w->q, point, o.quad_points);
      j["abs_z2_density"] = d.value;
      j["quad_points"] = d.points;
      j["quadrature_error"] = d.error;
      j["discrepancy"] = std::abs(s.value - Complex(d.value, 0.0));
    } else {
      j["abs_z2_density"] = nullptr;
      j["note"] = "weight is not Hermitian; |Z|^2 density not defined";
    }
    *out = make_report(true, j, loopsoup::render_text(j));
  });
}

ls_status ls_sample(const ls_weights* w, const ls_options* opts, const char* out_path,
                    ls_report** out) {
  return guarded([&] {
    require(w && out, "null argument");
    ls_options o;
    ls_options_init(&o);
    if (opts) o = *opts;
    require(o.samples > 0, "samples must be positive");
    const auto samples = loopsoup::sample_occupation(w->q, o.samples, o.seed, o.threads);
    if (out_path) {
      std::ofstream file(out_path);
      if (!file) throw loopsoup::Error(ErrorCode::kBadArgument, std::string("cannot write ") + out_path);
      loopsoup::write_sample_records(file, samples);
    }
    const int n = w->q.size();
    const auto g = loopsoup::green(w->q);
    std::vector<double> mean_t(n, 0.0), mean_n(n, 0.0);
    double trivial = 0.0, mass = 0.0;
    for (const auto& s : samples) {
      for (int u = 0; u < n; ++u) {
        mean_t[u] += s.t[u];
        mean_n[u] += static_cast<double>(s.bubble.local_time[u]);
      }
      trivial += s.bubble.current.is_zero();
      mass += static_cast<double>(s.bubble.current.total());
    }
    const double count = static_cast<double>(samples.size());
    std::vector<double> g_diag(n);
    for (int u = 0; u < n; ++u) {
      mean_t[u] /= count;
      mean_n[u] /= count;
      g_diag[u] = g(u, u).real();
    }
    json j = {{"samples", samples.size()},
              {"seed", o.seed},
              {"mean_occupation", mean_t},
              {"green_diagonal", g_diag},
              {"mean_local_time", mean_n},
              {"zero_current_fraction", trivial / count},
              {"zero_current_probability", g.det_i_minus_q.real()},
              {"mean_total_mass", mass / count}};
    if (out_path) j["records"] = out_path;
    *out = make_report(true, j, loopsoup::render_text(j));
  });
}

int ls_report_passed(const ls_report* r) { return r && r->passed ? 1 : 0; }
const char* ls_report_json(const ls_report* r) { return r ? r->json.c_str() : ""; }
const char* ls_report_text(const ls_report* r) { return r ? r->text.c_str() : ""; }
void ls_report_free(ls_report* r) { delete r; }

}  // extern "C"
