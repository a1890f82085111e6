#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "boxlat/box.hpp"
#include "boxlat/measure.hpp"
#include "boxlat/random.hpp"

namespace boxlat::testing {

inline Box interval(double lo, double hi) { return Box({lo}, {hi - lo}); }

inline Box square(double lo0, double hi0, double lo1, double hi1) { return Box({lo0, lo1}, {hi0 - lo0, hi1 - lo1}); }

// Box with corners drawn uniformly from [lo, hi]^n; widths at least min_width.
inline Box random_box(Rng& rng, std::size_t dim, double lo = 0.0, double hi = 1.0, double min_width = 1e-3) {
  std::vector<double> mins(dim), deltas(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    double a = rng.uniform(lo, hi);
    double b = rng.uniform(lo, hi);
    if (a > b) std::swap(a, b);
    if (b - a < min_width) {
      a = std::min(a, hi - min_width);
      b = a + min_width;
    }
    mins[i] = a;
    deltas[i] = delta_to_reach(a, b);
  }
  return Box(std::move(mins), std::move(deltas));
}

// The floor sits above central-difference roundoff, about eps * |loss| / h.
inline double rel_err(double analytic, double numeric) {
  return std::abs(analytic - numeric) / std::max({1e-5, std::abs(analytic), std::abs(numeric)});
}

// Random-restart hill climbing over pairs of 1-D boxes in [0, 1] for the
// most extreme correlation of the given sign. Returns the best value seen.
inline double search_correlation(Rng& rng, double sign, int restarts = 50, int steps = 2000) {
  const auto m = ProductMeasure::uniform(1);
  auto score = [&](const double* v) {
    const double a0 = std::min(v[0], v[1]), a1 = std::max(v[0], v[1]);
    const double b0 = std::min(v[2], v[3]), b1 = std::max(v[2], v[3]);
    if (a1 - a0 < 1e-6 || b1 - b0 < 1e-6 || a1 - a0 >= 1.0 || b1 - b0 >= 1.0) return -2.0;
    return sign * correlation(Box({a0}, {a1 - a0}), Box({b0}, {b1 - b0}), m);
  };
  double best = -2.0;
  for (int r = 0; r < restarts; ++r) {
    double v[4];
    for (double& x : v) x = rng.uniform();
    double current = score(v);
    double step = 0.2;
    for (int s = 0; s < steps; ++s) {
      double w[4];
      for (int i = 0; i < 4; ++i) w[i] = std::clamp(v[i] + rng.uniform(-step, step), 0.0, 1.0);
      const double candidate = score(w);
      if (candidate > current) {
        std::copy(w, w + 4, v);
        current = candidate;
      } else {
        step = std::max(1e-4, step * 0.995);
      }
    }
    best = std::max(best, current);
  }
  return sign * best;
}

}  // namespace boxlat::testing
