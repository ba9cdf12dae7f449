#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "riskgame/game.hpp"

namespace riskgame {

// Seeded generator with platform-independent draws (std::mt19937_64 output
// mapped to doubles directly, avoiding distribution implementation drift).
struct Rng {
  std::mt19937_64 gen;

  explicit Rng(std::uint64_t seed) : gen(seed) {}

  double u01() { return (gen() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * u01(); }
  Index below(Index n) { return static_cast<Index>(gen() % n); }

  // A random point of the probability simplex (normalized exponentials).
  std::vector<double> simplex(Index n) {
    std::vector<double> p(n);
    double sum = 0;
    for (auto& x : p) {
      double u = u01();
      if (u <= 0) u = 0x1.0p-53;
      x = -std::log(u);
      sum += x;
    }
    for (auto& x : p) x /= sum;
    return p;
  }
};

}  // namespace riskgame
