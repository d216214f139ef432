#include <doctest.h>

#include <json.hpp>
#include <cmath>
#include <cstring>
#include <string>

#include "loopsoup/loopsoup.h"

namespace {

const char* kHermitian = R"({"n": 2, "q": [[0, [0.3, 0.4]], [[0.3, -0.4], 0]]})";

ls_weights* parse(const char* text) {
  ls_weights* w = nullptr;
  REQUIRE(ls_weights_parse(text, &w) == LS_OK);
  return w;
}

}  // namespace

TEST_CASE("status names and errors") {
  CHECK(std::string(ls_status_name(LS_OK)) == "OK");
  CHECK(std::string(ls_status_name(LS_ERR_PARSE)) == "ParseError");
  CHECK(std::string(ls_status_name(LS_ERR_NOT_INTEGRABLE)) == "NotIntegrable");
  ls_weights* w = nullptr;
  CHECK(ls_weights_parse("{\"n\": 1", &w) == LS_ERR_PARSE);
  CHECK(w == nullptr);
  CHECK(std::strlen(ls_last_error()) > 0);
  CHECK(ls_weights_parse(nullptr, &w) == LS_ERR_BAD_ARGUMENT);
  CHECK(ls_weights_load("/nonexistent/weights.json", &w) != LS_OK);
}

TEST_CASE("weights through the C API") {
  ls_weights* w = parse(kHermitian);
  CHECK(ls_weights_size(w) == 2);
  double re = 0, im = 0;
  REQUIRE(ls_weights_entry(w, 0, 1, &re, &im) == LS_OK);
  CHECK(re == 0.3);
  CHECK(im == 0.4);
  CHECK(ls_weights_entry(w, 2, 0, &re, &im) == LS_ERR_BAD_ARGUMENT);

  double rho = 0;
  REQUIRE(ls_spectral_radius_abs(w, &rho) == LS_OK);
  CHECK(rho == doctest::Approx(0.5));
  int flag = -1;
  REQUIRE(ls_is_integrable(w, 0.0, &flag) == LS_OK);
  CHECK(flag == 1);
  REQUIRE(ls_is_hermitian(w, &flag) == LS_OK);
  CHECK(flag == 1);
  REQUIRE(ls_is_samplable(w, &flag) == LS_OK);
  CHECK(flag == 0);

  double g_re[4], g_im[4], det_re = 0, det_im = 0;
  REQUIRE(ls_green(w, g_re, g_im, &det_re, &det_im) == LS_OK);
  CHECK(det_re == doctest::Approx(0.75));
  CHECK(g_re[0] == doctest::Approx(1 / 0.75));
  CHECK(g_im[1] == doctest::Approx(0.4 / 0.75));

  const int counts[4] = {0, 1, 1, 0};
  double a = 0, b = 0;
  REQUIRE(ls_nu_c(w, counts, &a, &b) == LS_OK);
  CHECK(a == doctest::Approx(0.1875));
  REQUIRE(ls_nu_c_oracle_bubble(w, counts, &a, &b) == LS_OK);
  CHECK(a == doctest::Approx(0.1875));
  REQUIRE(ls_nu_c_oracle_loopsoup(w, counts, &a, &b) == LS_OK);
  CHECK(a == doctest::Approx(0.1875));
  const int not_current[4] = {0, 1, 0, 0};
  CHECK(ls_nu_c(w, not_current, &a, &b) == LS_ERR_NOT_A_CURRENT);

  const double t[2] = {1.0, 1.0};
  double tail = 0, value = 0, err = 0;
  REQUIRE(ls_occupation_density(w, t, 20, &a, &b, &tail) == LS_OK);
  REQUIRE(ls_density_abs_z2(w, t, 64, &value, &err) == LS_OK);
  CHECK(std::abs(a - value) <= tail + err + 1e-13);
  const double neg[2] = {-1.0, 1.0};
  CHECK(ls_occupation_density(w, neg, 20, &a, &b, &tail) == LS_ERR_NEGATIVE_POINT);

  const double m[4] = {1, 2, 3, 4};
  REQUIRE(ls_permanent(2, m, nullptr, &a, &b) == LS_OK);
  CHECK(a == 10.0);
  ls_weights_free(w);
}

TEST_CASE("create and integrability errors") {
  const double re[1] = {1.0};
  ls_weights* w = nullptr;
  REQUIRE(ls_weights_create(1, re, nullptr, &w) == LS_OK);
  double a = 0, b = 0, c = 0;
  CHECK(ls_green(w, nullptr, nullptr, &a, &b) == LS_ERR_NOT_INTEGRABLE);
  const double t[1] = {1.0};
  CHECK(ls_occupation_density(w, t, 4, &a, &b, &c) == LS_ERR_NOT_INTEGRABLE);
  ls_weights_free(w);
  CHECK(ls_weights_create(0, re, nullptr, &w) == LS_ERR_BAD_ARGUMENT);
}

TEST_CASE("reports") {
  ls_weights* w = parse(kHermitian);
  ls_options o;
  ls_options_init(&o);
  ls_report* r = nullptr;

  REQUIRE(ls_validate(w, &r) == LS_OK);
  auto j = nlohmann::json::parse(ls_report_json(r));
  CHECK(j["hermitian"] == true);
  CHECK(j["samplable"] == false);
  CHECK(std::string(ls_report_text(r)).find("integrable = true") != std::string::npos);
  ls_report_free(r);

  REQUIRE(ls_verify(w, "proposition", &o, &r) == LS_OK);
  CHECK(ls_report_passed(r) == 1);
  j = nlohmann::json::parse(ls_report_json(r));
  CHECK(j["suite"] == "proposition");
  CHECK(j["failures"] == 0);
  ls_report_free(r);

  CHECK(ls_verify(w, "bogus", &o, &r) == LS_ERR_BAD_ARGUMENT);
  CHECK(ls_verify(nullptr, "lemma", &o, &r) == LS_ERR_BAD_ARGUMENT);
  REQUIRE(ls_verify(nullptr, "identities", nullptr, &r) == LS_OK);
  CHECK(ls_report_passed(r) == 1);
  ls_report_free(r);

  o.grid = "0.5,1;1,2,x";
  CHECK(ls_verify(w, "isomorphism", &o, &r) == LS_ERR_BAD_ARGUMENT);
  o.grid = "0.5,1;1,2";
  REQUIRE(ls_verify(w, "isomorphism", &o, &r) == LS_OK);
  j = nlohmann::json::parse(ls_report_json(r));
  CHECK(j["checks"].size() == 4);
  CHECK(ls_report_passed(r) == 1);
  ls_report_free(r);

  o.samples = 1000;
  CHECK(ls_sample(w, &o, nullptr, &r) == LS_ERR_NOT_SAMPLABLE);

  const int counts[4] = {0, 2, 2, 0};
  REQUIRE(ls_current_report(w, counts, 1, &r) == LS_OK);
  j = nlohmann::json::parse(ls_report_json(r));
  CHECK(j["nu_c"]["re"].get<double>() ==
        doctest::Approx(j["bubble_oracle"]["re"].get<double>()).epsilon(1e-12));
  ls_report_free(r);

  const double t[2] = {0.5, 2.0};
  REQUIRE(ls_density_report(w, t, &o, &r) == LS_OK);
  j = nlohmann::json::parse(ls_report_json(r));
  CHECK(j["discrepancy"].get<double>() <=
        j["tail_bound"].get<double>() + j["quadrature_error"].get<double>() + 1e-13);
  ls_report_free(r);
  ls_weights_free(w);
}

TEST_CASE("sampling report") {
  const double re[1] = {0.5};
  ls_weights* w = nullptr;
  REQUIRE(ls_weights_create(1, re, nullptr, &w) == LS_OK);
  ls_options o;
  ls_options_init(&o);
  o.samples = 20000;
  ls_report* r = nullptr;
  REQUIRE(ls_sample(w, &o, nullptr, &r) == LS_OK);
  const auto j = nlohmann::json::parse(ls_report_json(r));
  CHECK(j["samples"] == 20000);
  CHECK(std::abs(j["mean_occupation"][0].get<double>() - 2.0) < 3 * 2.0 / std::sqrt(20000.0));
  ls_report_free(r);
  ls_weights_free(w);
}
