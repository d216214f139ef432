#include "loopsoup/report.hpp"

#include <sstream>

namespace loopsoup {

VerificationReport::VerificationReport(std::string suite) : suite_(std::move(suite)) {}

void VerificationReport::add(const std::string& name, bool pass, nlohmann::json detail) {
  nlohmann::json entry = {{"name", name}, {"pass", pass}};
  for (auto& [k, v] : detail.items()) entry[k] = v;
  checks_.push_back(std::move(entry));
  if (!pass) {
    passed_ = false;
    ++failures_;
  }
}

void VerificationReport::merge(const VerificationReport& other) {
  for (const auto& c : other.checks_) {
    nlohmann::json entry = c;
    entry["name"] = other.suite_ + "/" + c["name"].get<std::string>();
    checks_.push_back(std::move(entry));
  }
  if (!other.params_.empty()) params_[other.suite_] = other.params_;
  if (!other.summary_.empty()) summary_[other.suite_] = other.summary_;
  failures_ += other.failures_;
  passed_ = passed_ && other.passed_;
}

nlohmann::json VerificationReport::to_json() const {
  return {{"suite", suite_},   {"passed", passed_},   {"checks_run", checks_.size()},
          {"failures", failures_}, {"params", params_}, {"summary", summary_},
          {"checks", checks_}};
}

namespace {

void flatten(std::ostream& out, const std::string& prefix, const nlohmann::json& j) {
  if (j.is_object()) {
    for (auto& [k, v] : j.items()) flatten(out, prefix.empty() ? k : prefix + "." + k, v);
  } else {
    out << "  " << prefix << " = " << j.dump() << '\n';
  }
}

}  // namespace

std::string VerificationReport::to_text(bool include_passing) const {
  std::ostringstream out;
  out << "suite: " << suite_ << '\n';
  out << "result: " << (passed_ ? "PASS" : "FAIL") << " (" << checks_.size() << " checks, "
      << failures_ << " failed)\n";
  if (!params_.empty()) {
    out << "params:\n";
    flatten(out, "", params_);
  }
  if (!summary_.empty()) {
    out << "summary:\n";
    flatten(out, "", summary_);
  }
  for (const auto& c : checks_) {
    const bool pass = c["pass"].get<bool>();
    if (pass && !include_passing) continue;
    out << (pass ? "[PASS] " : "[FAIL] ") << c["name"].get<std::string>();
    for (auto& [k, v] : c.items()) {
      if (k == "name" || k == "pass") continue;
      out << ' ' << k << '=' << v.dump();
    }
    out << '\n';
  }
  return out.str();
}

std::string render_text(const nlohmann::json& j) {
  std::ostringstream out;
  flatten(out, "", j);
  return out.str();
}

nlohmann::json complex_json(double re, double im) { return {{"re", re}, {"im", im}}; }

}  // namespace loopsoup
