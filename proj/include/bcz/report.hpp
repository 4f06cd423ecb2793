#pragma once

#include <map>
#include <string>
#include <vector>

#include "bcz/common.hpp"

namespace bcz {

// One named inequality check: measured constants, sample counts, worst
// witness, and the pass verdict against the configured ceiling.  For a fixed
// seed and config the whole record reproduces bit-for-bit; timing is kept out
// of the serialized form unless explicitly requested.
struct CheckReport {
  std::string name;
  std::map<std::string, double> constants;
  long trials = 0;
  std::string witness;
  bool pass = true;
  uint64_t seed = 0;
  double millis = 0.0;  // serialized only when with_timing is set

  double constant() const {
    auto it = constants.find("constant");
    return it != constants.end() ? it->second
                                 : (constants.empty() ? 0.0
                                                      : constants.begin()->second);
  }
};

struct SuiteConfig {
  int n = 2;
  double m = 1.0;
  double alpha = 1.0;
  double s = 1.0;
  double p = 4.0, q = 4.0, r = 2.0;  // 1/p + 1/q = 1/r enforced
  double gamma = 0.5;
  int sigma = 4;
  double theta = 0.25;
  double t_small = 64.0;
  double b_doubling = 0.0;  // 0: derived as 2^{n+4}
  double lambda0 = 1.0;
  int trials = 400;
  uint64_t seed = 1;
  int cantor_level = 3;
  double ceiling = 64.0;  // generic measured-constant ceiling
  std::string kernel = "scalar";  // scalar | antisymmetric
  bool with_timing = false;

  void validate() const;
  double b_value() const {
    return b_doubling > 0.0 ? b_doubling : std::ldexp(1.0, n + 4);
  }

  std::string to_json() const;
  static SuiteConfig from_json(const std::string& text);
};

struct SuiteReport {
  SuiteConfig config;
  std::vector<CheckReport> checks;

  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  std::string to_json() const;
  std::string to_csv() const;
};

}  // namespace bcz
