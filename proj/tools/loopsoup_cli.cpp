#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "loopsoup/loopsoup.h"

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct Config {
  std::string input;
  std::string format = "text";
  std::string out;
  std::string grid;
  int max_total = 20;
  int quad = 64;
  long long samples = 100000;
  long long seed = 20240611;
  double tol = 0.0;
  int threads = 1;
};

struct WeightsDeleter {
  void operator()(ls_weights* w) const { ls_weights_free(w); }
};
struct ReportDeleter {
  void operator()(ls_report* r) const { ls_report_free(r); }
};
using WeightsPtr = std::unique_ptr<ls_weights, WeightsDeleter>;
using ReportPtr = std::unique_ptr<ls_report, ReportDeleter>;

struct Failure {
  int exit_code;
};

int exit_code_for(ls_status s) {
  return s == LS_ERR_PARSE || s == LS_ERR_BAD_ARGUMENT || s == LS_ERR_IO ? kExitUsage : kExitFail;
}

void check(ls_status s) {
  if (s == LS_OK) return;
  std::cerr << "error: " << ls_last_error() << "\n";
  throw Failure{exit_code_for(s)};
}

WeightsPtr load(const Config& cfg, bool required = true) {
  if (cfg.input.empty()) {
    if (!required) return nullptr;
    std::cerr << "error: --input is required\n";
    throw Failure{kExitUsage};
  }
  ls_weights* w = nullptr;
  const ls_status s = ls_weights_load(cfg.input.c_str(), &w);
  if (s != LS_OK) {
    std::cerr << "error: " << ls_last_error() << "\n";
    throw Failure{kExitUsage};
  }
  return WeightsPtr(w);
}

ls_options options_from(const Config& cfg) {
  ls_options o;
  ls_options_init(&o);
  o.max_total = cfg.max_total;
  o.quad_points = cfg.quad;
  o.samples = static_cast<size_t>(cfg.samples);
  o.seed = static_cast<uint64_t>(cfg.seed);
  o.tol = cfg.tol;
  o.grid = cfg.grid.empty() ? nullptr : cfg.grid.c_str();
  o.threads = cfg.threads;
  return o;
}

int emit(const Config& cfg, ls_report* raw) {
  ReportPtr r(raw);
  if (cfg.format == "json") {
    std::cout << ls_report_json(r.get()) << "\n";
  } else {
    std::cout << ls_report_text(r.get());
  }
  return ls_report_passed(r.get()) ? 0 : kExitFail;
}

std::vector<double> parse_point(const std::string& text, int n) {
  std::vector<double> t;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      t.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      std::cerr << "error: bad coordinate '" << item << "'\n";
      throw Failure{kExitUsage};
    }
  }
  if (static_cast<int>(t.size()) != n) {
    std::cerr << "error: point has " << t.size() << " coordinates, expected " << n << "\n";
    throw Failure{kExitUsage};
  }
  return t;
}

std::vector<int> parse_current(const std::vector<std::string>& triplets, int n) {
  std::vector<int> counts(static_cast<std::size_t>(n) * n, 0);
  for (const auto& spec : triplets) {
    int u = 0, v = 0, c = 0;
    char tail = 0;
    if (std::sscanf(spec.c_str(), "%d,%d,%d%c", &u, &v, &c, &tail) != 3 || u < 1 || v < 1 ||
        u > n || v > n || c < 0) {
      std::cerr << "error: bad edge count '" << spec << "' (expected u,v,count with 1 <= u,v <= "
                << n << ")\n";
      throw Failure{kExitUsage};
    }
    counts[(u - 1) * n + (v - 1)] += c;
  }
  return counts;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Loop soups and complex Gaussian free fields on weighted digraphs"};
  app.require_subcommand(1);
  Config cfg;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--input", cfg.input, "Weight matrix JSON file");
    sub->add_option("--format", cfg.format, "Output format")
        ->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--max-total", cfg.max_total, "Series truncation")->check(CLI::PositiveNumber);
    sub->add_option("--quad", cfg.quad, "Torus nodes per angle")->check(CLI::PositiveNumber);
    sub->add_option("--samples", cfg.samples, "Sample count")->check(CLI::PositiveNumber);
    sub->add_option("--seed", cfg.seed, "Random seed")->check(CLI::NonNegativeNumber);
    sub->add_option("--tol", cfg.tol, "Tolerance override")->check(CLI::Range(0.0, 1.0));
    sub->add_option("--grid", cfg.grid, "Grid: 0.5,1,2 or per coordinate 0.5,1;1,2");
    sub->add_option("--threads", cfg.threads, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--out", cfg.out, "Output path for sample records");
  };

  auto* validate = app.add_subcommand("validate", "Report basic properties of a weight matrix");
  add_common(validate);

  std::vector<std::string> triplets;
  bool oracles = false;
  auto* current = app.add_subcommand("current", "Probability of a current under the current field");
  add_common(current);
  current->add_option("edges", triplets, "Edge counts u,v,count (1-based)");
  current->add_flag("--oracles", oracles, "Also evaluate both enumeration oracles");

  std::string point;
  auto* density = app.add_subcommand("density", "Occupation field density at a point");
  add_common(density);
  density->add_option("--t", point, "Point t as comma separated values")->required();

  std::string suite;
  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  add_common(verify);
  verify->add_option("suite", suite, "Suite name")
      ->required()
      ->check(CLI::IsMember({"proposition", "lemma", "identities", "green", "isomorphism",
                             "moments", "torus", "montecarlo", "all"}));

  auto* sample = app.add_subcommand("sample", "Draw occupation field samples");
  add_common(sample);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    ls_report* r = nullptr;
    if (validate->parsed()) {
      auto w = load(cfg);
      check(ls_validate(w.get(), &r));
    } else if (current->parsed()) {
      auto w = load(cfg);
      const auto counts = parse_current(triplets, ls_weights_size(w.get()));
      check(ls_current_report(w.get(), counts.data(), oracles ? 1 : 0, &r));
    } else if (density->parsed()) {
      auto w = load(cfg);
      const auto t = parse_point(point, ls_weights_size(w.get()));
      const ls_options o = options_from(cfg);
      check(ls_density_report(w.get(), t.data(), &o, &r));
    } else if (verify->parsed()) {
      const bool needs_input = suite != "identities" && suite != "torus";
      auto w = load(cfg, needs_input);
      const ls_options o = options_from(cfg);
      check(ls_verify(w.get(), suite.c_str(), &o, &r));
    } else if (sample->parsed()) {
      auto w = load(cfg);
      const ls_options o = options_from(cfg);
      check(ls_sample(w.get(), &o, cfg.out.empty() ? nullptr : cfg.out.c_str(), &r));
    }
    return emit(cfg, r);
  } catch (const Failure& f) {
    return f.exit_code;
  }
}
