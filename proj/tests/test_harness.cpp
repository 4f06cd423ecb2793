#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bcz/checks.hpp"

using namespace bcz;

namespace {

SuiteConfig small_config() {
  SuiteConfig cfg;
  cfg.n = 2;
  cfg.m = 1.0;
  cfg.cantor_level = 2;
  cfg.trials = 200;
  cfg.seed = 7;
  return cfg;
}

}  // namespace

TEST_CASE("config validation") {
  SuiteConfig cfg = small_config();
  cfg.validate();
  cfg.p = 3.0;  // breaks 1/p + 1/q = 1/r
  CHECK_THROWS(cfg.validate());
  cfg = small_config();
  cfg.r = 0.4;
  CHECK_THROWS(cfg.validate());
  cfg = small_config();
  cfg.m = 5.0;  // m must stay at most n
  CHECK_THROWS(cfg.validate());
}

TEST_CASE("config json roundtrip") {
  SuiteConfig cfg = small_config();
  cfg.sigma = 6;
  cfg.lambda0 = 0.125;
  const SuiteConfig back = SuiteConfig::from_json(cfg.to_json());
  CHECK(back.sigma == 6);
  CHECK(back.lambda0 == 0.125);
  CHECK(back.seed == cfg.seed);
}

TEST_CASE("single checks run and pass on the small fixture") {
  const SuiteConfig cfg = small_config();
  for (const std::string name :
       {"kernel_conditions", "basic_integral_bound", "truncation_comparison",
        "weak11_sharp", "small_boundary_pairing"}) {
    const CheckReport rep = run_check(name, cfg);
    CHECK(rep.name == name);
    CHECK(rep.pass);
  }
}

TEST_CASE("reports are deterministic for a fixed seed") {
  const SuiteConfig cfg = small_config();
  const std::vector<std::string> which = {"basic_integral_bound", "weak_type"};
  const SuiteReport a = run_suite(cfg, which);
  const SuiteReport b = run_suite(cfg, which);
  CHECK(a.to_json() == b.to_json());
  CHECK(a.to_csv() == b.to_csv());

  SuiteConfig other = cfg;
  other.seed = 8;
  const SuiteReport c = run_suite(other, which);
  CHECK(a.to_json() != c.to_json());
}

TEST_CASE("csv format contract") {
  const SuiteConfig cfg = small_config();
  const SuiteReport rep = run_suite(cfg, {"kernel_conditions"});
  const std::string csv = rep.to_csv();
  CHECK(csv.rfind("name,constant,trials,pass\n", 0) == 0);
  CHECK(csv.find("kernel_conditions,") != std::string::npos);
}
