#include "bcz/report.hpp"

#include <cmath>
#include <sstream>

#include "json.hpp"

namespace bcz {

void SuiteConfig::validate() const {
  if (n < 1 || n > 2) fail("config: n must be 1 or 2");
  if (!(alpha > 0.0 && alpha <= 1.0)) fail("config: alpha must be in (0,1]");
  if (!(m > 0.0) || m > n) fail("config: need 0 < m <= n");
  if (!(p > 1.0) || !(q > 1.0)) fail("config: p,q must exceed 1");
  if (!(r > 0.5)) fail("config: r must exceed 1/2");
  if (std::abs(1.0 / p + 1.0 / q - 1.0 / r) > 1e-12)
    fail("config: exponent identity 1/p + 1/q = 1/r violated");
  if (!(gamma > 0.0 && gamma < 1.0)) fail("config: gamma must be in (0,1)");
  if (sigma < 1) fail("config: sigma must be a positive integer");
  if (!(theta > 0.0 && theta < 1.0)) fail("config: theta must be in (0,1)");
  if (!(lambda0 > 0.0)) fail("config: lambda0 must be positive");
  if (trials < 1) fail("config: trials must be positive");
  if (kernel != "scalar" && kernel != "antisymmetric")
    fail("config: unknown kernel '" + kernel + "'");
}

std::string SuiteConfig::to_json() const {
  nlohmann::json j;
  j["n"] = n;
  j["m"] = m;
  j["alpha"] = alpha;
  j["s"] = s;
  j["p"] = p;
  j["q"] = q;
  j["r"] = r;
  j["gamma"] = gamma;
  j["sigma"] = sigma;
  j["theta"] = theta;
  j["t_small"] = t_small;
  j["b_doubling"] = b_value();
  j["lambda0"] = lambda0;
  j["trials"] = trials;
  j["seed"] = seed;
  j["cantor_level"] = cantor_level;
  j["ceiling"] = ceiling;
  j["kernel"] = kernel;
  return j.dump(2);
}

SuiteConfig SuiteConfig::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  SuiteConfig c;
  c.n = j.value("n", c.n);
  c.m = j.value("m", c.m);
  c.alpha = j.value("alpha", c.alpha);
  c.s = j.value("s", c.s);
  c.p = j.value("p", c.p);
  c.q = j.value("q", c.q);
  c.r = j.value("r", c.r);
  c.gamma = j.value("gamma", c.gamma);
  c.sigma = j.value("sigma", c.sigma);
  c.theta = j.value("theta", c.theta);
  c.t_small = j.value("t_small", c.t_small);
  c.b_doubling = j.value("b_doubling", 0.0);
  c.lambda0 = j.value("lambda0", c.lambda0);
  c.trials = j.value("trials", c.trials);
  c.seed = j.value("seed", c.seed);
  c.cantor_level = j.value("cantor_level", c.cantor_level);
  c.ceiling = j.value("ceiling", c.ceiling);
  c.kernel = j.value("kernel", c.kernel);
  c.validate();
  return c;
}

std::string SuiteReport::to_json() const {
  nlohmann::json j;
  j["config"] = nlohmann::json::parse(config.to_json());
  auto arr = nlohmann::json::array();
  for (const auto& c : checks) {
    nlohmann::json e;
    e["name"] = c.name;
    e["constant"] = c.constant();
    nlohmann::json cs;
    for (const auto& [k, v] : c.constants) cs[k] = v;
    e["constants"] = cs;
    e["trials"] = c.trials;
    e["witness"] = c.witness;
    e["pass"] = c.pass;
    e["seed"] = c.seed;
    if (config.with_timing) e["millis"] = c.millis;
    arr.push_back(e);
  }
  j["checks"] = arr;
  return j.dump(2);
}

std::string SuiteReport::to_csv() const {
  std::ostringstream os;
  os << "name,constant,trials,pass\n";
  for (const auto& c : checks) {
    os << c.name << "," << c.constant() << "," << c.trials << ","
       << (c.pass ? "1" : "0") << "\n";
  }
  return os.str();
}

}  // namespace bcz
