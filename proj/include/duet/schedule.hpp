#pragma once

#include <vector>

namespace duet {

/// Forward-process variance schedule. beta[t] is valid for t in [1, T] with
/// beta[0] unused; alpha_bar[t] = prod_{s<=t} (1 - beta[s]) with
/// alpha_bar[0] = 1.
struct NoiseSchedule {
  int steps = 0;  // T
  std::vector<double> beta;
  std::vector<double> alpha_bar;
};

/// Linear beta interpolation between beta_min and beta_max over T steps.
/// InvalidSchedule unless 0 < beta_min <= beta_max < 1 and T >= 2.
NoiseSchedule make_schedule(int steps, double beta_min, double beta_max);

/// Descending DDIM timestep grid over [1, T], `count` entries ending above 0;
/// the reverse loop appends the terminal step to 0 itself.
std::vector<int> ddim_timesteps(int total_steps, int count);

}  // namespace duet
