#include "duet/diffusion.hpp"

#include <algorithm>
#include <cmath>

#include "duet/error.hpp"

namespace duet {

void GaussianPrior::validate() const {
  if (components.empty()) fail(Err::ValidationError, "prior needs >= 1 component");
  double wsum = 0.0;
  for (const auto& c : components) {
    if (!(c.sigma > 0.0)) fail(Err::ValidationError, "prior sigma must be positive");
    if (c.weight < 0.0) fail(Err::ValidationError, "prior weight must be >= 0");
    if (c.mean.empty()) fail(Err::ValidationError, "prior mean must not be empty");
    wsum += c.weight;
  }
  if (std::abs(wsum - 1.0) > 1e-9)
    fail(Err::ValidationError, "prior weights must sum to 1");
}

double GaussianPrior::mean_at(std::size_t component, std::size_t channel) const {
  const auto& m = components[component].mean;
  return m.size() == 1 ? m[0] : m[channel % m.size()];
}

double GuidanceConfig::alpha_for(const std::string& group) const {
  auto it = alpha_map.find(group);
  return it == alpha_map.end() ? 0.0 : it->second;
}

GaussianDenoiser::GaussianDenoiser(std::map<MotionState, GaussianPrior> priors,
                                   NoiseSchedule schedule)
    : priors_(std::move(priors)), schedule_(std::move(schedule)) {
  for (const auto& [state, prior] : priors_) prior.validate();
}

double GaussianDenoiser::posterior_mean(double x_t, double abar,
                                        const GaussianPrior& prior,
                                        std::size_t channel) const {
  if (prior.components.size() == 1) {
    const auto& c = prior.components[0];
    const double mu = prior.mean_at(0, channel);
    const double s2 = c.sigma * c.sigma;
    return (std::sqrt(abar) * s2 * x_t + (1.0 - abar) * mu) / (abar * s2 + 1.0 - abar);
  }
  // Responsibility-weighted posterior means, per scalar entry.
  double best_log = -1e300;
  std::vector<double> logw(prior.components.size());
  for (std::size_t k = 0; k < prior.components.size(); ++k) {
    const auto& c = prior.components[k];
    const double mu = prior.mean_at(k, channel);
    const double var = abar * c.sigma * c.sigma + 1.0 - abar;
    const double d = x_t - std::sqrt(abar) * mu;
    logw[k] = std::log(std::max(c.weight, 1e-300)) - 0.5 * std::log(var) -
              0.5 * d * d / var;
    best_log = std::max(best_log, logw[k]);
  }
  double norm = 0.0, acc = 0.0;
  for (std::size_t k = 0; k < prior.components.size(); ++k) {
    const auto& c = prior.components[k];
    const double mu = prior.mean_at(k, channel);
    const double s2 = c.sigma * c.sigma;
    const double resp = std::exp(logw[k] - best_log);
    const double ek =
        (std::sqrt(abar) * s2 * x_t + (1.0 - abar) * mu) / (abar * s2 + 1.0 - abar);
    norm += resp;
    acc += resp * ek;
  }
  return acc / norm;
}

void GaussianDenoiser::predict(const Mat& x_t, int t, const Conditions& cond,
                               Mat& eps_out) const {
  auto it = priors_.find(cond.state);
  if (it == priors_.end())
    fail(Err::ConfigError,
         std::string("no prior configured for state ") + to_string(cond.state));
  const GaussianPrior& prior = it->second;
  const double abar = schedule_.alpha_bar[t];
  eps_out.rows = x_t.rows;
  eps_out.cols = x_t.cols;
  eps_out.data.resize(x_t.data.size());
  const double sq = std::sqrt(abar);
  const double sq1 = std::sqrt(std::max(1.0 - abar, 0.0));
  for (std::size_t r = 0; r < x_t.rows; ++r) {
    for (std::size_t c = 0; c < x_t.cols; ++c) {
      const double x = x_t(r, c);
      const double e0 = posterior_mean(x, abar, prior, c);
      eps_out(r, c) = sq1 > 0.0 ? (x - sq * e0) / sq1 : 0.0;
    }
  }
}

static void check_t(const NoiseSchedule& s, int t) {
  if (t < 0 || t > s.steps) fail(Err::InvalidSchedule, "timestep out of range");
}

void forward_noise(const Mat& x0, int t, const Mat& eps, const NoiseSchedule& s,
                   Mat& out, kern::Exec exec) {
  check_t(s, t);
  const double abar = s.alpha_bar[t];
  kern::lincomb(std::sqrt(abar), x0, std::sqrt(1.0 - abar), eps, out, exec);
}

void predict_x0(const Mat& x_t, int t, const Mat& eps_hat, const NoiseSchedule& s,
                Mat& out, kern::Exec exec) {
  check_t(s, t);
  const double abar = s.alpha_bar[t];
  if (!(abar > 1e-300)) fail(Err::NumericalDomain, "alpha_bar vanished");
  const double inv = 1.0 / std::sqrt(abar);
  kern::lincomb(inv, x_t, -std::sqrt(1.0 - abar) * inv, eps_hat, out, exec);
}

void cfg_combine(const Mat& eps_cond, const Mat& eps_uncond, double lambda, Mat& out,
                 kern::Exec exec) {
  kern::lincomb(lambda, eps_cond, 1.0 - lambda, eps_uncond, out, exec);
}

double constraint_loss(const Mat& x0, const ConstraintSet& cs, Mat* grad, bool squared,
                       kern::Exec exec) {
  if (grad != nullptr) {
    grad->rows = x0.rows;
    grad->cols = x0.cols;
    grad->data.assign(x0.data.size(), 0.0);
  }
  double total = 0.0;
  for (const auto& c : cs.trajectory)
    total += kern::masked_sq_residual(x0, c.selector, c.targets, c.mask, grad, 1.0, exec);
  if (squared) return total;
  const double norm = std::sqrt(total);
  if (grad != nullptr) {
    const double scale = norm > 0.0 ? 0.5 / norm : 0.0;
    for (double& g : grad->data) g *= scale;
  }
  return norm;
}

void guide_x0(Mat& x0, const ConstraintSet& cs, const GuidanceConfig& cfg,
              int step_index, int total_steps, kern::Exec exec) {
  if (cs.trajectory.empty()) return;
  const int active = static_cast<int>(std::floor(cfg.tau * total_steps + 1e-9));
  if (step_index >= active) return;

  for (int it = 0; it < cfg.updates_per_step; ++it) {
    for (const auto& c : cs.trajectory) {
      const double alpha = cfg.alpha_for(c.group);
      if (alpha == 0.0) continue;
      const std::size_t n = c.targets.rows * c.targets.cols;
      if (n == 0) continue;
      if (cfg.squared_loss) {
        // Mean masked squared residual over the group matrix.
        const double step = alpha * 2.0 / static_cast<double>(n);
        kern::parallel_for(
            x0.rows,
            [&](std::size_t r) {
              for (std::size_t i = 0; i < c.selector.size(); ++i) {
                const double m = c.mask(r, i);
                if (m == 0.0) continue;
                const std::size_t ch = static_cast<std::size_t>(c.selector[i]);
                x0(r, ch) -= step * (x0(r, ch) - c.targets(r, i));
              }
            },
            exec);
      } else {
        ConstraintSet one;
        one.trajectory.push_back(c);
        Mat g;
        const double norm = constraint_loss(x0, one, &g, false, exec);
        if (norm == 0.0) continue;
        kern::parallel_for(
            x0.rows,
            [&](std::size_t r) {
              for (std::size_t ch = 0; ch < x0.cols; ++ch)
                x0(r, ch) -= alpha * g(r, ch);
            },
            exec);
      }
    }
  }
}

void similarity_replace(Mat& x0, const SimilarityConstraint& sc, int t,
                        const NoiseSchedule& s, bool literal_window) {
  const bool active =
      literal_window ? (t < sc.cutoff_step) : (t > s.steps - sc.cutoff_step);
  if (!active) return;
  if (!sc.target.same_shape(x0))
    fail(Err::InvalidConstraint, "similarity target shape mismatch");
  for (std::size_t r = 0; r < x0.rows; ++r)
    for (int ch : sc.selector)
      x0(r, static_cast<std::size_t>(ch)) = sc.target(r, static_cast<std::size_t>(ch));
}

void ddim_step(const Mat& x_t, const Mat& x0_hat, int t, int t_next,
               const NoiseSchedule& s, Mat& out, kern::Exec exec) {
  check_t(s, t);
  check_t(s, t_next);
  if (t_next >= t) fail(Err::InvalidSchedule, "ddim_step requires t_next < t");
  if (t_next == 0) {
    out = x0_hat;
    return;
  }
  const double abar = s.alpha_bar[t];
  const double abar_n = s.alpha_bar[t_next];
  const double denom = std::sqrt(1.0 - abar);
  // x' = sqrt(abar')*x0 + sqrt(1-abar')*eps with eps recovered from (x_t, x0).
  const double b = std::sqrt(1.0 - abar_n) / denom;
  const double a = std::sqrt(abar_n) - b * std::sqrt(abar);
  kern::lincomb(a, x0_hat, b, x_t, out, exec);
}

void inpaint_prefix(Mat& x_t, const Mat& prev_tail, int t, const Mat& eps,
                    const NoiseSchedule& s, kern::Exec exec) {
  if (prev_tail.rows == 0) return;
  if (prev_tail.rows > x_t.rows || prev_tail.cols != x_t.cols)
    fail(Err::InvalidOverlap, "overlap longer than the segment");
  if (!eps.same_shape(prev_tail)) fail(Err::InvalidOverlap, "noise shape mismatch");
  check_t(s, t);
  const double sq = std::sqrt(s.alpha_bar[t]);
  const double sq1 = std::sqrt(1.0 - s.alpha_bar[t]);
  kern::parallel_for(
      prev_tail.rows,
      [&](std::size_t r) {
        for (std::size_t c = 0; c < x_t.cols; ++c)
          x_t(r, c) = sq * prev_tail(r, c) + sq1 * eps(r, c);
      },
      exec);
}

Mat sample_segment(const DenoiserPort& denoiser, const Conditions& cond,
                   const ConstraintSet& constraints, const Mat* prev_tail,
                   const GuidanceConfig& cfg, const NoiseSchedule& schedule,
                   std::uint64_t seed, std::size_t frames, std::size_t width,
                   kern::Exec exec) {
  constraints.validate(frames, width);
  if (prev_tail != nullptr && prev_tail->rows > frames)
    fail(Err::InvalidOverlap, "previous tail longer than the window");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  Mat x(frames, width);
  for (double& v : x.data) v = normal(rng);

  const std::vector<int> ts = ddim_timesteps(schedule.steps, cfg.ddim_steps);
  const int total = static_cast<int>(ts.size());
  const Conditions uncond = cond.unconditional();

  Mat eps_c, eps_u, eps, x0_hat, x_next, prefix_eps;
  if (prev_tail != nullptr) prefix_eps = Mat(prev_tail->rows, width);

  for (int k = 0; k < total; ++k) {
    const int t = ts[k];
    const int t_next = k + 1 < total ? ts[k + 1] : 0;

    if (prev_tail != nullptr && prev_tail->rows > 0) {
      for (double& v : prefix_eps.data) v = normal(rng);
      inpaint_prefix(x, *prev_tail, t, prefix_eps, schedule, exec);
    }

    denoiser.predict(x, t, cond, eps_c);
    if (cfg.lambda == 1.0) {
      eps = eps_c;
    } else {
      denoiser.predict(x, t, uncond, eps_u);
      cfg_combine(eps_c, eps_u, cfg.lambda, eps, exec);
    }

    predict_x0(x, t, eps, schedule, x0_hat, exec);
    if (constraints.similarity)
      similarity_replace(x0_hat, *constraints.similarity, t, schedule,
                         cfg.literal_similarity_window);
    guide_x0(x0_hat, constraints, cfg, k, total, exec);

    if (t_next == 0) {
      x = x0_hat;
    } else {
      ddim_step(x, x0_hat, t, t_next, schedule, x_next, exec);
      std::swap(x, x_next);
    }
  }
  return x;
}

double training_loss(const DenoiserPort& denoiser, const Mat& x0, int t, const Mat& eps,
                     const Conditions& cond, const NoiseSchedule& s, kern::Exec exec) {
  Mat x_t, pred;
  forward_noise(x0, t, eps, s, x_t, exec);
  denoiser.predict(x_t, t, cond, pred);
  std::vector<double> row_err(x0.rows, 0.0);
  kern::parallel_for(
      x0.rows,
      [&](std::size_t r) {
        double acc = 0.0;
        for (std::size_t c = 0; c < x0.cols; ++c) {
          const double d = eps(r, c) - pred(r, c);
          acc += d * d;
        }
        row_err[r] = acc;
      },
      exec);
  double total = 0.0;
  for (double v : row_err) total += v;
  return total / static_cast<double>(x0.size());
}

void apply_condition_dropout(Conditions& cond, std::mt19937_64& rng, double p) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (u(rng) < p) cond.null_self = true;
  if (u(rng) < p) cond.null_partner = true;
}

}  // namespace duet
