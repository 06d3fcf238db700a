#pragma once

#include <random>
#include <string>

#include "shockstab.hpp"

namespace testutil {

using shockstab::Vec;

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// random admissible state well inside each catalog system's domain
inline Vec random_state(const std::string& name, std::mt19937_64& rng) {
  if (name == "burgers") {
    Vec u(1);
    u << uniform(rng, -3.0, 3.0);
    return u;
  }
  if (name == "p_system") {
    Vec u(2);
    u << uniform(rng, 0.3, 3.0), uniform(rng, -2.0, 2.0);
    return u;
  }
  if (name == "euler_ideal") {
    const double rho = uniform(rng, 0.3, 3.0);
    const double vel = uniform(rng, -1.0, 1.0);
    const double p = uniform(rng, 0.3, 3.0);
    Vec u(3);
    u << rho, rho * vel, p / 0.4 + 0.5 * rho * vel * vel;
    return u;
  }
  if (name == "shallow_water") {
    const double h = uniform(rng, 0.3, 3.0);
    Vec u(2);
    u << h, h * uniform(rng, -1.5, 1.5);
    return u;
  }
  throw std::invalid_argument("random_state: unknown system " + name);
}

}  // namespace testutil
