#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "voidhom/errors.hpp"
#include "voidhom/harness.hpp"

using namespace voidhom;
namespace fs = std::filesystem;

namespace {

// True when parsing `text` raises a ConfigError whose message carries the
// JSON-pointer `needle`.
bool parse_fails_at(const std::string& text, const std::string& needle) {
  try {
    (void)parse_config_text(text);
  } catch (const ConfigError& e) {
    return std::string(e.what()).find(needle) != std::string::npos;
  }
  return false;
}

ExperimentConfig small_void_config() {
  ExperimentConfig c;
  c.scenario = "detcheck";
  c.kind = "void";
  c.density.family = "constant";
  c.density.value = 1.0;
  c.nu_list = {{1.0, 0.0}, {0.6, 0.8}};
  c.rho_list = {0.5, 0.4, 0.3};
  c.cells_per_rho = 32;
  c.stencil = 16;
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_SUITE("harness") {
  TEST_CASE("config errors carry JSON-pointer paths") {
    CHECK(parse_fails_at("{", "/: invalid JSON"));
    CHECK(parse_fails_at("[]", "/"));
    CHECK(parse_fails_at(R"({"kind":"void"})", "/scenario"));
    CHECK(parse_fails_at(R"({"scenario":"x","kind":"melt","density":{"family":"constant"}})",
                         "/kind"));
    CHECK(parse_fails_at(
        R"({"scenario":"x","kind":"void","density":{"family":"granite"}})",
        "/density/family"));
    CHECK(parse_fails_at(
        R"({"scenario":"x","kind":"void","density":{"family":"constant"},
            "nu_list":[[1,0]],"rho_list":[-0.5]})",
        "/rho_list/0"));
    CHECK(parse_fails_at(
        R"({"scenario":"x","kind":"void","density":{"family":"constant"},
            "nu_list":[[1,0]],"rho_list":[0.5],"stencil":12})",
        "/stencil"));
    CHECK(parse_fails_at(
        R"({"scenario":"x","kind":"void","density":{"family":"constant"},"rho_list":[0.5]})",
        "/nu_list"));
    CHECK(parse_fails_at(
        R"({"scenario":"x","kind":"bulk","density":{"family":"quadratic"},
            "xi_list":[[[1,0],[0,1]]]})",
        "/r_list"));
  }

  TEST_CASE("configs survive a serialize-parse round-trip") {
    std::vector<std::string> names = scenario_names();
    CHECK(names.size() == 11);
    for (const std::string& name : names) {
      ExperimentConfig c = scenario_config(name);
      CHECK(c.scenario == name);
      std::string once = config_to_json(c);
      std::string twice = config_to_json(parse_config_text(once));
      CHECK(once == twice);
    }
    CHECK_THROWS_AS((void)scenario_config("no-such-scenario"), ConfigError);
  }

  TEST_CASE("datum labels are single CSV fields") {
    CHECK(nu_label({1.0, 0.0}) == "nu=(1;0)");
    CHECK(nu_label({0.0, -1.0}) == "nu=(0;-1)");
    CHECK(xi_label(Mat2::identity()) == "xi=[[1;0];[0;1]]");
    Mat2 m = {{{0.0, 0.5}, {1.0, 0.0}}};
    CHECK(xi_label(m) == "xi=[[0;0.5];[1;0]]");
  }

  TEST_CASE("reports are independent of scheduling and repeatable") {
    ExperimentConfig c = small_void_config();
    ExperimentReport serial = run_experiment(c, "", 1);
    ExperimentReport parallel = run_experiment(c, "", 8);
    ExperimentReport again = run_experiment(c, "", 1);
    CHECK(serial.csv() == parallel.csv());
    CHECK(serial.summary_json() == parallel.summary_json());
    CHECK(serial.csv() == again.csv());
    CHECK(serial.summary_json() == again.summary_json());

    // 2 data x 3 radii, one row each; constant density keeps values near 1.
    CHECK(serial.rows.size() == 6);
    for (const DatumSummary& s : serial.data) {
      CHECK(s.estimate.value == doctest::Approx(1.0).epsilon(0.05));
    }
    CHECK(serial.pass);
  }

  TEST_CASE("failed expectations carry diagnostics and fail the report") {
    ExperimentConfig c = small_void_config();
    Expectation e;
    e.name = "impossible";
    e.datum = nu_label({1.0, 0.0});
    e.quantity = "estimate";
    e.op = "at-most";
    e.value = 0.1;
    c.expectations = {e};

    ExperimentReport r = run_experiment(c, "", 2);
    REQUIRE(r.expectations.size() == 1);
    CHECK_FALSE(r.expectations[0].pass);
    CHECK_FALSE(r.pass);
    CHECK(r.expectations[0].detail.find("at-most") != std::string::npos);
    CHECK(r.summary_json().find("impossible") != std::string::npos);
  }

  TEST_CASE("unknown expectation references fail loudly") {
    ExperimentConfig c = small_void_config();
    Expectation e;
    e.name = "dangling";
    e.datum = "nu=(9;9)";  // no such datum in the config
    e.quantity = "estimate";
    e.op = "at-least";
    e.value = 0.0;
    c.expectations = {e};
    ExperimentReport r = run_experiment(c, "", 1);
    REQUIRE(r.expectations.size() == 1);
    CHECK_FALSE(r.pass);
    CHECK(r.expectations[0].detail.find("not present") != std::string::npos);
  }

  TEST_CASE("an empty suite selection is rejected") {
    bool ok = false;
    CHECK_THROWS_AS((void)run_suite({}, "", 1, &ok), ConfigError);
  }

  TEST_CASE("artifacts land on disk and re-render identically") {
    fs::path dir = fs::path("harness_artifact_scratch");
    fs::remove_all(dir);
    ExperimentConfig c = small_void_config();
    c.rho_list = {0.5, 0.4};
    ExperimentReport r = run_experiment(c, dir.string(), 2);

    CHECK(slurp(dir / "detcheck.csv") == r.csv());
    CHECK(slurp(dir / "detcheck.summary.json") == r.summary_json());
    CHECK(slurp(dir / "detcheck.config.json") == config_to_json(c));

    int metas = 0;
    for (const auto& entry : fs::directory_iterator(dir)) {
      std::string name = entry.path().filename().string();
      if (name.size() > 10 && name.substr(name.size() - 10) == ".meta.json") {
        ++metas;
        std::string stem = name.substr(0, name.size() - 10);
        CHECK(fs::exists(dir / (stem + ".pgm")));
        CHECK(fs::exists(dir / (stem + ".svg")));
        CHECK(render_stored_labels(entry.path().string()) == slurp(dir / (stem + ".svg")));
      }
    }
    CHECK(metas == 4);  // 2 data x 2 radii
    fs::remove_all(dir);
  }
}
