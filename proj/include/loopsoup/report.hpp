#pragma once

#include <string>

#include <json.hpp>

namespace loopsoup {

/// Outcome of one verification suite: the compared quantities, tolerances and
/// truncation parameters of every check, plus an overall verdict.
class VerificationReport {
 public:
  explicit VerificationReport(std::string suite);

  const std::string& suite() const noexcept { return suite_; }
  bool passed() const noexcept { return passed_; }
  std::size_t size() const noexcept { return checks_.size(); }
  std::size_t failures() const noexcept { return failures_; }

  /// Truncation / scale parameters of the run.
  nlohmann::json& params() noexcept { return params_; }
  /// Aggregates such as the maximum deviation seen.
  nlohmann::json& summary() noexcept { return summary_; }

  /// Records a check; `detail` carries the compared quantities.
  void add(const std::string& name, bool pass, nlohmann::json detail = nlohmann::json::object());
  /// Folds another report in as a sub-suite.
  void merge(const VerificationReport& other);

  nlohmann::json to_json() const;
  /// Renders the same data as to_json(), one check per line; numbers are
  /// printed with the JSON serializer so both forms agree digit for digit.
  std::string to_text(bool include_passing = true) const;

 private:
  std::string suite_;
  bool passed_ = true;
  std::size_t failures_ = 0;
  nlohmann::json params_ = nlohmann::json::object();
  nlohmann::json summary_ = nlohmann::json::object();
  nlohmann::json checks_ = nlohmann::json::array();
};

/// "key = value" lines for a JSON object, nested keys joined with '.'.
std::string render_text(const nlohmann::json& j);

/// Complex value as {"re": .., "im": ..}.
nlohmann::json complex_json(double re, double im);

}  // namespace loopsoup
