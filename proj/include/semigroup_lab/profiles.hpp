#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <vector>

#include "semigroup_lab/coefficients.hpp"

namespace semigroup_lab {

using ProfileFn = std::function<double(const Point&, int comp)>;

inline ProfileFn gaussian_profile(double sigma, double amplitude = 1.0) {
  return [=](const Point& x, int) {
    const double r2 = x[0] * x[0] + x[1] * x[1];
    return amplitude * std::exp(-r2 / (2.0 * sigma * sigma));
  };
}

// Smooth compactly supported bump, support radius R.
inline ProfileFn bump_profile(double R, double amplitude = 1.0) {
  return [=](const Point& x, int) {
    const double s2 = (x[0] * x[0] + x[1] * x[1]) / (R * R);
    if (s2 >= 1.0) return 0.0;
    return amplitude * std::exp(1.0 - 1.0 / (1.0 - s2));
  };
}

// Mollified step along axis 0 with transition width w.
inline ProfileFn step_profile(double w, double amplitude = 1.0) {
  return [=](const Point& x, int) { return amplitude * std::tanh(x[0] / w); };
}

// Seeded superposition of cosine modes under a Gaussian envelope; smooth,
// bounded, with O(1) derivatives. Component profiles are independent.
inline ProfileFn random_smooth_profile(std::uint64_t seed, int comps,
                                       double envelope_sigma, int modes = 4,
                                       double max_wavenumber = 3.0) {
  struct Mode {
    double a, w0, w1, phase;
  };
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  std::uniform_real_distribution<double> wav(0.5, max_wavenumber);
  std::uniform_real_distribution<double> ph(0.0, 2.0 * M_PI);
  auto table = std::make_shared<std::vector<Mode>>();
  for (int c = 0; c < comps; ++c)
    for (int j = 0; j < modes; ++j)
      table->push_back({amp(rng), wav(rng), wav(rng), ph(rng)});
  return [table, envelope_sigma, modes](const Point& x, int comp) {
    const double env =
        std::exp(-(x[0] * x[0] + x[1] * x[1]) / (2.0 * envelope_sigma * envelope_sigma));
    double v = 0.0;
    for (int j = 0; j < modes; ++j) {
      const Mode& md = (*table)[comp * modes + j];
      v += md.a * std::cos(md.w0 * x[0] + md.w1 * x[1] + md.phase);
    }
    return env * v;
  };
}

}  // namespace semigroup_lab
