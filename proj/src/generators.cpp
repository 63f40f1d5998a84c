#include "ellipticity/generators.hpp"

#include <cmath>
#include <sstream>

#include "ellipticity/errors.hpp"
#include "ellipticity/oracle.hpp"

namespace ellipticity {

Elast4 random_psd_fold(std::mt19937_64& rng, double shift) {
  std::normal_distribution<double> normal;
  Mat9 g;
  for (int r = 0; r < 9; ++r)
    for (int c = 0; c < 9; ++c) g(r, c) = normal(rng);
  Mat9 m = g * g.transpose() / 9.0 + shift * Mat9::Identity();
  m = 0.5 * (m + m.transpose());
  return Elast4::symmetrized(fold(m).entries());
}

Elast4 random_spd_tensor(std::mt19937_64& rng, double shift, int max_draws) {
  for (int n = 0; n < max_draws; ++n) {
    Elast4 a = random_psd_fold(rng, shift);
    if (is_spd(a)) return a;
  }
  throw BadParams("random_spd_tensor: no S-PD draw after max_draws attempts");
}

Elast4 random_elast4(std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  RawTensor raw;
  for (double& v : raw) v = normal(rng);
  return Elast4::symmetrized(raw);
}

namespace {

double param(const std::map<std::string, double>& p, const std::string& key, double fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

double required(const std::map<std::string, double>& p, const std::string& key, const std::string& gen) {
  auto it = p.find(key);
  if (it == p.end()) throw BadParams("generator '" + gen + "' needs --" + key);
  if (!std::isfinite(it->second)) throw BadParams("--" + key + " must be finite");
  return it->second;
}

std::uint64_t seed_of(const std::map<std::string, double>& p) {
  const double s = param(p, "seed", 0.0);
  if (s < 0 || s != std::floor(s)) throw BadParams("--seed must be a non-negative integer");
  return static_cast<std::uint64_t>(s);
}

}  // namespace

GeneratedTensor generate(const std::string& generator, const std::map<std::string, double>& params) {
  std::ostringstream name;
  if (generator == "E") return {tensor_E(), "E", ""};
  if (generator == "choi-lam") {
    const double gamma = param(params, "gamma", 1.0);
    if (!std::isfinite(gamma)) throw BadParams("--gamma must be finite");
    name << "choi-lam gamma=" << gamma;
    std::string note;
    if (!choi_lam_in_regime(gamma)) note = "gamma < 1 is outside the classical Choi-Lam regime";
    return {tensor_choi_lam(gamma), name.str(), note};
  }
  if (generator == "isotropic") {
    const double lambda = required(params, "lambda", generator);
    const double mu = required(params, "mu", generator);
    name << "isotropic lambda=" << lambda << " mu=" << mu;
    return {tensor_isotropic(lambda, mu), name.str(), ""};
  }
  if (generator == "counterexample-s2") return {tensor_mpsd_not_spsd(), "counterexample-s2", ""};
  if (generator == "random-spd") {
    const auto seed = seed_of(params);
    std::mt19937_64 rng(seed);
    name << "random-spd seed=" << seed;
    return {random_spd_tensor(rng), name.str(), ""};
  }
  if (generator == "random") {
    const auto seed = seed_of(params);
    std::mt19937_64 rng(seed);
    name << "random seed=" << seed;
    return {random_elast4(rng), name.str(), ""};
  }
  throw UnknownGenerator("unknown generator '" + generator +
                         "' (expected E, choi-lam, isotropic, counterexample-s2, random-spd, random)");
}

}  // namespace ellipticity
