#include "duet/schedule.hpp"

#include <algorithm>
#include <cmath>

#include "duet/error.hpp"

namespace duet {

NoiseSchedule make_schedule(int steps, double beta_min, double beta_max) {
  if (steps < 2) fail(Err::InvalidSchedule, "need at least 2 steps");
  if (!(beta_min > 0.0) || !(beta_max < 1.0) || beta_min > beta_max)
    fail(Err::InvalidSchedule, "require 0 < beta_min <= beta_max < 1");
  NoiseSchedule s;
  s.steps = steps;
  s.beta.resize(steps + 1, 0.0);
  s.alpha_bar.resize(steps + 1, 1.0);
  for (int t = 1; t <= steps; ++t) {
    const double frac = static_cast<double>(t - 1) / static_cast<double>(steps - 1);
    s.beta[t] = beta_min + frac * (beta_max - beta_min);
    s.alpha_bar[t] = s.alpha_bar[t - 1] * (1.0 - s.beta[t]);
  }
  return s;
}

std::vector<int> ddim_timesteps(int total_steps, int count) {
  if (count < 1 || count > total_steps)
    fail(Err::InvalidSchedule, "DDIM step count must be in [1, T]");
  std::vector<int> ts;
  ts.reserve(count);
  // Evenly spaced from T down; strictly decreasing, last entry > 0.
  for (int i = 0; i < count; ++i) {
    int t = static_cast<int>(std::llround(
        static_cast<double>(total_steps) * static_cast<double>(count - i) /
        static_cast<double>(count)));
    t = std::clamp(t, 1, total_steps);
    if (!ts.empty() && t >= ts.back()) t = ts.back() - 1;
    if (t < 1) break;
    ts.push_back(t);
  }
  return ts;
}

}  // namespace duet
