#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include "duet/constraints.hpp"
#include "duet/kernels.hpp"
#include "duet/mat.hpp"
#include "duet/motion.hpp"
#include "duet/schedule.hpp"

namespace duet {

/// Conditioning passed to the noise predictor. Speech features are opaque
/// vectors; the null flags implement the unconditional branch.
struct Conditions {
  MotionState state = MotionState::stand;
  std::optional<std::vector<double>> self_speech;
  std::optional<std::vector<double>> partner_speech;
  bool null_self = false;
  bool null_partner = false;

  Conditions unconditional() const {
    Conditions c = *this;
    c.null_self = true;
    c.null_partner = true;
    return c;
  }
};

/// Pluggable noise predictor. Implementations must be deterministic given
/// identical inputs and must preserve the input shape.
class DenoiserPort {
 public:
  virtual ~DenoiserPort() = default;
  virtual void predict(const Mat& x_t, int t, const Conditions& cond,
                       Mat& eps_out) const = 0;
};

struct GaussianComponent {
  double weight = 1.0;
  std::vector<double> mean;  // one entry broadcasts over all channels
  double sigma = 1.0;
};

/// Per-channel iid Gaussian (or mixture) prior; the reference denoiser has a
/// closed-form posterior under it.
struct GaussianPrior {
  std::vector<GaussianComponent> components;
  void validate() const;
  double mean_at(std::size_t component, std::size_t channel) const;
};

/// Closed-form reference denoiser: returns the noise implied by the exact
/// posterior mean E[x0 | x_t] under the state's prior. Speech conditions are
/// ignored; the motion state selects the prior.
class GaussianDenoiser : public DenoiserPort {
 public:
  GaussianDenoiser(std::map<MotionState, GaussianPrior> priors, NoiseSchedule schedule);
  void predict(const Mat& x_t, int t, const Conditions& cond,
               Mat& eps_out) const override;

  /// Exposed for oracle tests: posterior mean for one scalar entry.
  double posterior_mean(double x_t, double alpha_bar, const GaussianPrior& prior,
                        std::size_t channel) const;

 private:
  std::map<MotionState, GaussianPrior> priors_;
  NoiseSchedule schedule_;
};

/// Sampler configuration; defaults follow the reference setup exactly.
struct GuidanceConfig {
  double lambda = 2.0;
  double tau = 0.8;
  int updates_per_step = 2;
  std::map<std::string, double> alpha_map = {
      {"root_position", 0.1}, {"root_rotation", 20.0}, {"head_rotation", 100.0}};
  int similarity_cutoff = 200;
  int ddim_steps = 200;
  bool squared_loss = true;
  // Alternate reading of the replacement window: active while t < cutoff
  // instead of during the earliest (high-noise) steps.
  bool literal_similarity_window = false;

  double alpha_for(const std::string& group) const;
};

// --- single-step operations ------------------------------------------------

/// x_t = sqrt(abar_t)*x0 + sqrt(1-abar_t)*eps.
void forward_noise(const Mat& x0, int t, const Mat& eps, const NoiseSchedule& s,
                   Mat& out, kern::Exec exec = kern::default_exec());

/// x0_hat = (x_t - sqrt(1-abar_t)*eps_hat) / sqrt(abar_t). NumericalDomain
/// when abar_t vanishes.
void predict_x0(const Mat& x_t, int t, const Mat& eps_hat, const NoiseSchedule& s,
                Mat& out, kern::Exec exec = kern::default_exec());

/// lambda*cond + (1-lambda)*uncond.
void cfg_combine(const Mat& eps_cond, const Mat& eps_uncond, double lambda, Mat& out,
                 kern::Exec exec = kern::default_exec());

/// Loss of all trajectory constraints and, when grad != nullptr, its gradient
/// (accumulated over constraints, zero on unconstrained entries).
/// squared=true: sum of squared masked residuals, gradient 2*W*(extract(x)-J)
/// scattered back. squared=false: the Euclidean norm of the stacked residual.
double constraint_loss(const Mat& x0, const ConstraintSet& cs, Mat* grad,
                       bool squared = true, kern::Exec exec = kern::default_exec());

/// In-place guidance: while the reverse-step index lies in the first tau
/// fraction of steps, runs updates_per_step gradient-descent iterations per
/// constraint group, each using the group's strength from alpha_map. The
/// descent direction is the gradient of the group's mean masked squared
/// residual (residuals re-evaluated between iterations), which keeps the
/// published strengths stable across group sizes.
void guide_x0(Mat& x0, const ConstraintSet& cs, const GuidanceConfig& cfg,
              int step_index, int total_steps, kern::Exec exec = kern::default_exec());

/// Replace the constrained channels of x0 with the similarity target while
/// the diffusion timestep is in the replacement window (t > T - cutoff, or
/// t < cutoff in literal mode).
void similarity_replace(Mat& x0, const SimilarityConstraint& sc, int t,
                        const NoiseSchedule& s, bool literal_window = false);

/// Deterministic DDIM update from timestep t to t_next (< t); t_next = 0
/// returns x0_hat.
void ddim_step(const Mat& x_t, const Mat& x0_hat, int t, int t_next,
               const NoiseSchedule& s, Mat& out,
               kern::Exec exec = kern::default_exec());

/// Overwrite the first prev_tail.rows frames of x_t with the noised previous
/// tail. InvalidOverlap when the tail is longer than the segment.
void inpaint_prefix(Mat& x_t, const Mat& prev_tail, int t, const Mat& eps,
                    const NoiseSchedule& s, kern::Exec exec = kern::default_exec());

// --- full loops --------------------------------------------------------------

/// Full reverse DDIM loop: per step, inpainting, conditional/unconditional
/// denoiser passes combined by CFG, clean-motion prediction, similarity
/// replacement, gradient guidance, DDIM update. Deterministic given the seed.
Mat sample_segment(const DenoiserPort& denoiser, const Conditions& cond,
                   const ConstraintSet& constraints, const Mat* prev_tail,
                   const GuidanceConfig& cfg, const NoiseSchedule& schedule,
                   std::uint64_t seed, std::size_t frames, std::size_t width,
                   kern::Exec exec = kern::default_exec());

/// Denoising objective: mean squared error between eps and the prediction at
/// x_t = forward_noise(x0, t, eps).
double training_loss(const DenoiserPort& denoiser, const Mat& x0, int t, const Mat& eps,
                     const Conditions& cond, const NoiseSchedule& s,
                     kern::Exec exec = kern::default_exec());

/// Null out each speech stream independently with probability p.
void apply_condition_dropout(Conditions& cond, std::mt19937_64& rng, double p);

}  // namespace duet
