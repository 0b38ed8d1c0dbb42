#pragma once

#include <array>
#include <vector>

#include "duet/kernels.hpp"
#include "duet/mat.hpp"

namespace duet::metrics {

/// Delayed motion synchrony configuration. joint_selector picks the
/// upper-body channels whose velocities enter the score.
struct DmssConfig {
  int window = 30;
  int max_lag = 5;
  int stride = 15;
  std::vector<int> joint_selector;

  void validate() const;  // window > 2*max_lag, stride >= 1
};

/// Maximum lagged Pearson correlation of two equally shaped velocity windows
/// over lags in [-max_lag, max_lag]. Both trimmed windows are z-scored per
/// channel before the flattened correlation; zero-variance channels are
/// skipped, and a window with no usable channel raises UndefinedCorrelation.
double dmss_window(const Mat& v1, const Mat& v2, int max_lag);

struct DmssReport {
  double aggregate = 0.0;
  std::vector<double> per_window;
  int skipped_windows = 0;
};

/// Sliding-window mean of dmss_window over the two characters' upper-body
/// velocities. Traces are full timelines (frames x width) of equal duration.
DmssReport dmss(const Mat& trace_a, const Mat& trace_b, const DmssConfig& cfg,
                kern::Exec exec = kern::default_exec());

/// Sufficient statistics for the Frechet distance.
struct GaussianSummary {
  std::vector<double> mean;
  Mat covariance;
};

GaussianSummary fit_gaussian(const Mat& samples,
                             kern::Exec exec = kern::default_exec());

/// ||mu1-mu2||^2 + tr(S1 + S2 - 2 (S1 S2)^{1/2}); near-singular covariances
/// get eps=1e-6 added to both diagonals before the matrix square root.
double frechet_distance(const GaussianSummary& a, const GaussianSummary& b);

/// Symmetric PSD square root via eigendecomposition (negative eigenvalues
/// clamped to zero).
Mat spd_sqrt(const Mat& sym);

/// Cross-character distance features: one row per frame pair, entry (i, j)
/// is the Euclidean distance between proxy point i of character A and proxy
/// point j of character B. Proxies are channel triples (joint positions are
/// approximated by their channel values).
struct FddConfig {
  std::vector<std::array<int, 3>> proxy_channels;
};

Mat fdd_features(const Mat& frames_a, const Mat& frames_b, const FddConfig& cfg,
                 kern::Exec exec = kern::default_exec());

/// Frechet distance between generated and reference populations of
/// cross-character distance matrices.
double fdd(const Mat& gen_a, const Mat& gen_b, const Mat& real_a, const Mat& real_b,
           const FddConfig& cfg, kern::Exec exec = kern::default_exec());

}  // namespace duet::metrics
