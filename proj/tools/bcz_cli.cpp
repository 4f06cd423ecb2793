// Command-line harness: generate instance measures, run inequality suites,
// build decompositions, and convert reports.
//
// Exit codes: 0 all enabled checks pass, 1 a check failed, 2 input error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "bcz/boxset.hpp"
#include "bcz/checks.hpp"
#include "bcz/decomposition.hpp"
#include "bcz/measure.hpp"
#include "json.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw CLI::ValidationError("cannot write " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"non-homogeneous bilinear singular integral test harness"};
  app.require_subcommand(1);

  // ---- gen ----
  auto* gen = app.add_subcommand("gen", "generate an instance measure");
  std::string gen_kind = "cantor4";
  int gen_level = 3;
  int gen_dim = 2;
  uint64_t gen_seed = 1;
  std::string gen_out;
  gen->add_option("--kind", gen_kind,
                  "cantor4 | cantor1d | uniform | random");
  gen->add_option("--level", gen_level, "level (Cantor) or count");
  gen->add_option("--count", gen_level, "alias for --level");
  gen->add_option("--dim", gen_dim, "ambient dimension (uniform/random)");
  gen->add_option("--seed", gen_seed, "64-bit seed");
  gen->add_option("--out", gen_out, "output path (stdout when empty)");

  // ---- check ----
  auto* check = app.add_subcommand("check", "run inequality suites");
  std::string suite = "all";
  std::string config_path;
  std::string out_dir;
  std::string format = "json";
  bcz::SuiteConfig cfg;
  check->add_option("--suite", suite, "all or comma-separated check names");
  check->add_option("--config", config_path, "JSON config file");
  check->add_option("--seed", cfg.seed);
  check->add_option("--n", cfg.n);
  check->add_option("--m", cfg.m);
  check->add_option("--alpha", cfg.alpha);
  check->add_option("--s", cfg.s);
  check->add_option("--gamma", cfg.gamma);
  check->add_option("--sigma", cfg.sigma);
  check->add_option("--theta", cfg.theta);
  check->add_option("--lambda0", cfg.lambda0);
  check->add_option("--trials", cfg.trials);
  check->add_option("--level", cfg.cantor_level, "Cantor fixture level");
  check->add_option("--ceiling", cfg.ceiling);
  check->add_option("--kernel", cfg.kernel, "scalar | antisymmetric");
  check->add_option("--out", out_dir, "output directory");
  check->add_option("--format", format, "json | csv");
  check->add_flag("--timing", cfg.with_timing, "include timings (breaks byte determinism)");

  // ---- decompose ----
  auto* dec = app.add_subcommand("decompose", "CZ or Whitney decomposition");
  std::string dec_mode = "cz";
  std::string dec_mu, dec_nu, dec_omega, dec_out;
  double dec_lambda = 8.0;
  double dec_t = 64.0;
  double dec_m = 1.0;
  dec->add_option("--mode", dec_mode, "cz | whitney");
  dec->add_option("--mu", dec_mu, "reference measure (JSON)")->required();
  dec->add_option("--nu", dec_nu, "decomposed measure (JSON, cz mode)");
  dec->add_option("--omega", dec_omega, "region boxes (JSON, whitney mode)");
  dec->add_option("--lambda", dec_lambda);
  dec->add_option("--t", dec_t, "small-boundary parameter");
  dec->add_option("--m", dec_m, "growth dimension");
  dec->add_option("--out", dec_out);

  // ---- report ----
  auto* rpt = app.add_subcommand("report", "convert a report file");
  std::string rpt_in, rpt_format = "csv", rpt_out;
  rpt->add_option("--in", rpt_in)->required();
  rpt->add_option("--format", rpt_format, "csv | json");
  rpt->add_option("--out", rpt_out);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      const bcz::AtomicMeasure mu =
          bcz::generate(gen_kind, gen_dim, gen_level, gen_seed);
      const std::string text = mu.to_json();
      if (gen_out.empty())
        std::cout << text << "\n";
      else
        spit(gen_out, text);
      return 0;
    }

    if (check->parsed()) {
      if (!config_path.empty()) {
        // file values first, explicit command-line flags win
        const bcz::SuiteConfig cli_cfg = cfg;
        cfg = bcz::SuiteConfig::from_json(slurp(config_path));
        auto given = [&](const std::string& flag) {
          return check->count(flag) > 0;
        };
        if (given("--seed")) cfg.seed = cli_cfg.seed;
        if (given("--n")) cfg.n = cli_cfg.n;
        if (given("--m")) cfg.m = cli_cfg.m;
        if (given("--alpha")) cfg.alpha = cli_cfg.alpha;
        if (given("--s")) cfg.s = cli_cfg.s;
        if (given("--gamma")) cfg.gamma = cli_cfg.gamma;
        if (given("--sigma")) cfg.sigma = cli_cfg.sigma;
        if (given("--theta")) cfg.theta = cli_cfg.theta;
        if (given("--lambda0")) cfg.lambda0 = cli_cfg.lambda0;
        if (given("--trials")) cfg.trials = cli_cfg.trials;
        if (given("--level")) cfg.cantor_level = cli_cfg.cantor_level;
        if (given("--ceiling")) cfg.ceiling = cli_cfg.ceiling;
        if (given("--kernel")) cfg.kernel = cli_cfg.kernel;
        if (given("--timing")) cfg.with_timing = cli_cfg.with_timing;
      }
      std::vector<std::string> which;
      if (suite != "all") {
        std::stringstream ss(suite);
        std::string item;
        while (std::getline(ss, item, ',')) which.push_back(item);
      }
      const bcz::SuiteReport report = bcz::run_suite(cfg, which);
      const std::string text =
          format == "csv" ? report.to_csv() : report.to_json();
      if (out_dir.empty()) {
        std::cout << text << "\n";
      } else {
        std::filesystem::create_directories(out_dir);
        spit(out_dir + "/report." + (format == "csv" ? "csv" : "json"), text);
      }
      for (const auto& c : report.checks)
        std::cerr << (c.pass ? "[pass] " : "[FAIL] ") << c.name
                  << "  constant=" << c.constant() << "\n";
      return report.all_pass() ? 0 : 1;
    }

    if (dec->parsed()) {
      const bcz::AtomicMeasure mu = bcz::AtomicMeasure::from_json(slurp(dec_mu));
      std::string text;
      if (dec_mode == "cz") {
        if (dec_nu.empty())
          throw CLI::ValidationError("cz mode needs --nu");
        const bcz::AtomicMeasure nu = bcz::AtomicMeasure::from_json(slurp(dec_nu));
        const bcz::CZDecomposition d =
            bcz::cz_decompose(nu, mu, dec_lambda, dec_m);
        const bcz::CZVerification v = bcz::cz_verify(d, nu, mu, dec_m);
        nlohmann::json j = nlohmann::json::parse(bcz::cz_to_json(d));
        j["verified"] = v.all(1 << (2 * mu.dim() + 2), 1e4);
        j["measured_B"] = v.measured_B;
        j["max_overlap"] = v.max_overlap;
        text = j.dump(2);
      } else if (dec_mode == "whitney") {
        if (dec_omega.empty())
          throw CLI::ValidationError("whitney mode needs --omega");
        nlohmann::json oj = nlohmann::json::parse(slurp(dec_omega));
        bcz::BoxUnion omega;
        for (const auto& e : oj.at("boxes")) {
          bcz::Point c;
          const auto& xs = e.at("center");
          c.dim = static_cast<int>(xs.size());
          for (int i = 0; i < c.dim; ++i) c.x[i] = xs.at(i).get<double>();
          omega.add(bcz::Cube(c, e.at("halfside").get<double>(), true));
        }
        const bcz::WhitneyCover cover = bcz::whitney(omega, mu, dec_t);
        const bcz::WhitneyVerification v =
            bcz::whitney_verify(cover, omega, mu, dec_t);
        nlohmann::json j = nlohmann::json::parse(bcz::whitney_to_json(cover));
        j["verified"] = v.all();
        j["mass_fraction"] = v.mass_fraction;
        text = j.dump(2);
      } else {
        throw CLI::ValidationError("unknown decompose mode " + dec_mode);
      }
      if (dec_out.empty())
        std::cout << text << "\n";
      else
        spit(dec_out, text);
      return 0;
    }

    if (rpt->parsed()) {
      nlohmann::json j = nlohmann::json::parse(slurp(rpt_in));
      std::string text;
      if (rpt_format == "csv") {
        std::ostringstream os;
        os << "name,constant,trials,pass\n";
        for (const auto& c : j.at("checks"))
          os << c.at("name").get<std::string>() << ","
             << c.at("constant").get<double>() << ","
             << c.at("trials").get<long>() << ","
             << (c.at("pass").get<bool>() ? "1" : "0") << "\n";
        text = os.str();
      } else {
        text = j.dump(2);
      }
      if (rpt_out.empty())
        std::cout << text << "\n";
      else
        spit(rpt_out, text);
      return 0;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
