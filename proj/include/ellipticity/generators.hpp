#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>

#include "ellipticity/tensor.hpp"

namespace ellipticity {

// Random PSD 9x9 matrix G G^T + shift I, folded and orbit-averaged into an
// elasticity tensor. The result is M-PD (its form equals that of the S-PD
// fold) but not necessarily S-PD; random_spd_tensor() redraws until the
// symmetrized tensor re-verifies as S-PD.
Elast4 random_psd_fold(std::mt19937_64& rng, double shift = 0.1);
Elast4 random_spd_tensor(std::mt19937_64& rng, double shift = 0.1, int max_draws = 1000);

// Standard normal entries, orbit-averaged.
Elast4 random_elast4(std::mt19937_64& rng);

// Named generators for the command line: E, choi-lam (gamma), isotropic
// (lambda, mu), counterexample-s2, random-spd (seed), random (seed). Throws
// UnknownGenerator / BadParams.
struct GeneratedTensor {
  Elast4 tensor;
  std::string name;
  std::string note;
};
GeneratedTensor generate(const std::string& generator, const std::map<std::string, double>& params);

}  // namespace ellipticity
