#pragma once

#include <string>
#include <vector>

#include "bcz/measure.hpp"
#include "bcz/report.hpp"

namespace bcz {

// Fixture measure for a config: the planar four-corner Cantor set in
// dimension 2, the 1/4-Cantor set on the line in dimension 1.
AtomicMeasure fixture_measure(const SuiteConfig& cfg);

// Named inequality suites.  Each is a pure function of (config, seed):
// rerunning reproduces every constant bit-for-bit.
CheckReport check_cotlar_adapted(const SuiteConfig& cfg);
CheckReport check_weak_to_strong(const SuiteConfig& cfg);
CheckReport check_improved_testing(const SuiteConfig& cfg);
CheckReport check_cotlar_basic(const SuiteConfig& cfg);
CheckReport check_weak_type(const SuiteConfig& cfg);
CheckReport check_good_lambda(const SuiteConfig& cfg);
CheckReport check_small_boundary_pairing(const SuiteConfig& cfg);
CheckReport check_basic_integral_bound(const SuiteConfig& cfg);
CheckReport check_truncation_comparison(const SuiteConfig& cfg);
CheckReport check_suppression_bound(const SuiteConfig& cfg);
CheckReport check_improved_size(const SuiteConfig& cfg);
CheckReport check_separation_bound(const SuiteConfig& cfg);
CheckReport check_bad_cube_mc(const SuiteConfig& cfg);
CheckReport check_bad_square_function(const SuiteConfig& cfg);
CheckReport check_kernel_conditions(const SuiteConfig& cfg);
CheckReport check_weak_boundedness(const SuiteConfig& cfg);
CheckReport check_fefferman_stein(const SuiteConfig& cfg);
CheckReport check_weak11_sharp(const SuiteConfig& cfg);
CheckReport check_mz_randomization(const SuiteConfig& cfg);
CheckReport check_square_function_norms(const SuiteConfig& cfg);

std::vector<std::string> all_check_names();
CheckReport run_check(const std::string& name, const SuiteConfig& cfg);
SuiteReport run_suite(const SuiteConfig& cfg,
                      const std::vector<std::string>& which = {});

}  // namespace bcz
