#include "duet/metrics.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "duet/error.hpp"
#include "duet/motion.hpp"

namespace duet::metrics {

void DmssConfig::validate() const {
  if (window <= 2 * max_lag)
    fail(Err::ValidationError, "window must exceed twice the maximum lag");
  if (stride < 1) fail(Err::ValidationError, "stride must be >= 1");
  if (max_lag < 0) fail(Err::ValidationError, "max_lag must be >= 0");
}

namespace {

struct Trimmed {
  const Mat* a;
  const Mat* b;
  std::size_t a_off, b_off, len;
};

Trimmed trim_for_lag(const Mat& v1, const Mat& v2, int lag) {
  const std::size_t t = v1.rows;
  if (lag > 0)
    return {&v1, &v2, static_cast<std::size_t>(lag), 0,
            t - static_cast<std::size_t>(lag)};
  if (lag < 0)
    return {&v1, &v2, 0, static_cast<std::size_t>(-lag),
            t - static_cast<std::size_t>(-lag)};
  return {&v1, &v2, 0, 0, t};
}

// Pearson over the flattened per-channel z-scored windows; returns false when
// every channel is degenerate.
bool lag_correlation(const Trimmed& w, double* out) {
  const std::size_t cols = w.a->cols;
  const std::size_t n = w.len;
  if (n < 2) return false;

  std::vector<double> za, zb;
  za.reserve(n * cols);
  zb.reserve(n * cols);
  for (std::size_t c = 0; c < cols; ++c) {
    double ma = 0, mb = 0;
    for (std::size_t r = 0; r < n; ++r) {
      ma += (*w.a)(w.a_off + r, c);
      mb += (*w.b)(w.b_off + r, c);
    }
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);
    double va = 0, vb = 0;
    for (std::size_t r = 0; r < n; ++r) {
      const double da = (*w.a)(w.a_off + r, c) - ma;
      const double db = (*w.b)(w.b_off + r, c) - mb;
      va += da * da;
      vb += db * db;
    }
    if (va <= 0.0 || vb <= 0.0) continue;  // zero-variance channel skipped
    const double sa = std::sqrt(va / static_cast<double>(n));
    const double sb = std::sqrt(vb / static_cast<double>(n));
    for (std::size_t r = 0; r < n; ++r) {
      za.push_back(((*w.a)(w.a_off + r, c) - ma) / sa);
      zb.push_back(((*w.b)(w.b_off + r, c) - mb) / sb);
    }
  }
  if (za.empty()) return false;

  const std::size_t m = za.size();
  double mean_a = 0, mean_b = 0;
  for (std::size_t i = 0; i < m; ++i) {
    mean_a += za[i];
    mean_b += zb[i];
  }
  mean_a /= static_cast<double>(m);
  mean_b /= static_cast<double>(m);
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double da = za[i] - mean_a;
    const double db = zb[i] - mean_b;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa <= 0.0 || sbb <= 0.0) return false;
  *out = sab / std::sqrt(saa * sbb);
  return true;
}

}  // namespace

double dmss_window(const Mat& v1, const Mat& v2, int max_lag) {
  if (!v1.same_shape(v2)) fail(Err::SkeletonMismatch, "velocity windows differ in shape");
  if (v1.rows < 2) fail(Err::TooShort, "window needs >= 2 velocity rows");
  double best = -2.0;
  for (int lag = -max_lag; lag <= max_lag; ++lag) {
    if (static_cast<std::size_t>(std::abs(lag)) >= v1.rows) continue;
    double r = 0.0;
    if (lag_correlation(trim_for_lag(v1, v2, lag), &r)) best = std::max(best, r);
  }
  if (best < -1.5) fail(Err::UndefinedCorrelation, "all channels zero-variance");
  return std::clamp(best, -1.0, 1.0);
}

DmssReport dmss(const Mat& trace_a, const Mat& trace_b, const DmssConfig& cfg,
                kern::Exec exec) {
  cfg.validate();
  if (trace_a.rows != trace_b.rows || trace_a.cols != trace_b.cols)
    fail(Err::SkeletonMismatch, "traces differ in shape");
  if (trace_a.rows < static_cast<std::size_t>(cfg.window + 1))
    fail(Err::TooShort, "trace shorter than one window");

  const Mat va = velocities(trace_a, cfg.joint_selector, exec);
  const Mat vb = velocities(trace_b, cfg.joint_selector, exec);

  std::vector<std::size_t> starts;
  for (std::size_t s = 0; s + cfg.window <= va.rows;
       s += static_cast<std::size_t>(cfg.stride))
    starts.push_back(s);

  std::vector<double> scores(starts.size());
  // 0 = degenerate, 1 = scored, 2 = hard failure (exceptions must not cross
  // the parallel region).
  std::vector<char> valid(starts.size(), 0);
  kern::parallel_for(
      starts.size(),
      [&](std::size_t i) {
        Mat wa(cfg.window, va.cols), wb(cfg.window, vb.cols);
        for (int r = 0; r < cfg.window; ++r)
          for (std::size_t c = 0; c < va.cols; ++c) {
            wa(r, c) = va(starts[i] + r, c);
            wb(r, c) = vb(starts[i] + r, c);
          }
        try {
          scores[i] = dmss_window(wa, wb, cfg.max_lag);
          valid[i] = 1;
        } catch (const Error& e) {
          if (e.code() != Err::UndefinedCorrelation) valid[i] = 2;
        }
      },
      exec);
  for (char v : valid)
    if (v == 2) fail(Err::ValidationError, "window scoring failed");

  DmssReport rep;
  double acc = 0.0;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    if (valid[i]) {
      rep.per_window.push_back(scores[i]);
      acc += scores[i];
    } else {
      ++rep.skipped_windows;
    }
  }
  if (rep.per_window.empty())
    fail(Err::UndefinedCorrelation, "every window was zero-variance");
  rep.aggregate = acc / static_cast<double>(rep.per_window.size());
  return rep;
}

GaussianSummary fit_gaussian(const Mat& samples, kern::Exec exec) {
  if (samples.rows < 2) fail(Err::TooShort, "need >= 2 samples to fit");
  GaussianSummary g;
  g.mean.assign(samples.cols, 0.0);
  for (std::size_t r = 0; r < samples.rows; ++r)
    for (std::size_t c = 0; c < samples.cols; ++c) g.mean[c] += samples(r, c);
  for (double& v : g.mean) v /= static_cast<double>(samples.rows);
  kern::covariance(samples, g.mean, g.covariance, exec);
  return g;
}

namespace {

using EMat = Eigen::MatrixXd;

EMat to_eigen(const Mat& m) {
  EMat out(m.rows, m.cols);
  for (std::size_t r = 0; r < m.rows; ++r)
    for (std::size_t c = 0; c < m.cols; ++c) out(r, c) = m(r, c);
  return out;
}

double min_eigenvalue(const EMat& sym) {
  Eigen::SelfAdjointEigenSolver<EMat> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

EMat spd_sqrt_eigen(const EMat& sym) {
  Eigen::SelfAdjointEigenSolver<EMat> es(sym);
  Eigen::VectorXd ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) ev[i] = std::sqrt(std::max(ev[i], 0.0));
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

Mat spd_sqrt(const Mat& sym) {
  if (sym.rows != sym.cols) fail(Err::InvalidConstraint, "matrix must be square");
  const EMat s = spd_sqrt_eigen(to_eigen(sym));
  Mat out(sym.rows, sym.cols);
  for (std::size_t r = 0; r < out.rows; ++r)
    for (std::size_t c = 0; c < out.cols; ++c) out(r, c) = s(r, c);
  return out;
}

double frechet_distance(const GaussianSummary& a, const GaussianSummary& b) {
  if (a.mean.size() != b.mean.size())
    fail(Err::SkeletonMismatch, "summary dimensions differ");
  const std::size_t d = a.mean.size();

  EMat s1 = to_eigen(a.covariance);
  EMat s2 = to_eigen(b.covariance);
  // Regularize both sides identically when either covariance is singular.
  const double floor = 1e-12;
  if (min_eigenvalue(s1) < floor || min_eigenvalue(s2) < floor) {
    const double eps = 1e-6;
    for (std::size_t i = 0; i < d; ++i) {
      s1(i, i) += eps;
      s2(i, i) += eps;
    }
  }

  double mean_term = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const double diff = a.mean[i] - b.mean[i];
    mean_term += diff * diff;
  }

  // tr((S1 S2)^{1/2}) computed on the symmetric form B S1 B, B = sqrt(S2).
  const EMat bsq = spd_sqrt_eigen(s2);
  EMat inner = bsq * s1 * bsq;
  inner = 0.5 * (inner + inner.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<EMat> es(inner, Eigen::EigenvaluesOnly);
  double tr_sqrt = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    tr_sqrt += std::sqrt(std::max(es.eigenvalues()[i], 0.0));

  return mean_term + s1.trace() + s2.trace() - 2.0 * tr_sqrt;
}

Mat fdd_features(const Mat& frames_a, const Mat& frames_b, const FddConfig& cfg,
                 kern::Exec exec) {
  if (frames_a.rows != frames_b.rows || frames_a.cols != frames_b.cols)
    fail(Err::SkeletonMismatch, "frame streams differ in shape");
  if (cfg.proxy_channels.empty()) fail(Err::ConfigError, "no proxy channels configured");
  for (const auto& p : cfg.proxy_channels)
    for (int ch : p)
      if (ch < 0 || static_cast<std::size_t>(ch) >= frames_a.cols)
        fail(Err::InvalidSelector, "proxy channel out of range");

  const std::size_t np = cfg.proxy_channels.size();
  Mat out(frames_a.rows, np * np);
  kern::parallel_for(
      frames_a.rows,
      [&](std::size_t r) {
        for (std::size_t i = 0; i < np; ++i) {
          const auto& pi = cfg.proxy_channels[i];
          for (std::size_t j = 0; j < np; ++j) {
            const auto& pj = cfg.proxy_channels[j];
            double acc = 0.0;
            for (int k = 0; k < 3; ++k) {
              const double d = frames_a(r, static_cast<std::size_t>(pi[k])) -
                               frames_b(r, static_cast<std::size_t>(pj[k]));
              acc += d * d;
            }
            out(r, i * np + j) = std::sqrt(acc);
          }
        }
      },
      exec);
  return out;
}

double fdd(const Mat& gen_a, const Mat& gen_b, const Mat& real_a, const Mat& real_b,
           const FddConfig& cfg, kern::Exec exec) {
  const Mat fg = fdd_features(gen_a, gen_b, cfg, exec);
  const Mat fr = fdd_features(real_a, real_b, cfg, exec);
  if (fg.cols != fr.cols) fail(Err::SkeletonMismatch, "feature dimensions differ");
  if (fg.rows < 2 || fr.rows < 2) fail(Err::TooShort, "need >= 2 frame pairs per side");
  return frechet_distance(fit_gaussian(fg, exec), fit_gaussian(fr, exec));
}

}  // namespace duet::metrics
