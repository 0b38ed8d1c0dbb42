#include "duet/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <string>

#include "duet/error.hpp"

#ifdef DUET_HAVE_OPENMP
#include <omp.h>
#endif

namespace duet::kern {

namespace {

Exec g_default = [] {
#ifdef DUET_HAVE_OPENMP
  const char* mode = std::getenv("DUET_KERNEL_MODE");
  if (mode != nullptr && std::string(mode) == "serial") return Exec::serial;
  return Exec::parallel;
#else
  return Exec::serial;
#endif
}();

}  // namespace

Exec default_exec() { return g_default; }
void set_default_exec(Exec mode) { g_default = mode; }

int thread_count() {
#ifdef DUET_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void lincomb(double a, const Mat& x, double b, const Mat& y, Mat& out, Exec exec) {
  if (!x.same_shape(y)) fail(Err::InvalidConstraint, "lincomb shape mismatch");
  out.rows = x.rows;
  out.cols = x.cols;
  out.data.resize(x.data.size());
  const std::size_t n = x.data.size();
  const double* px = x.data.data();
  const double* py = y.data.data();
  double* po = out.data.data();
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
      po[i] = a * px[i] + b * py[i];
  } else {
    for (std::size_t i = 0; i < n; ++i) po[i] = a * px[i] + b * py[i];
  }
}

void affine(double a, const Mat& x, double c, Mat& out, Exec exec) {
  out.rows = x.rows;
  out.cols = x.cols;
  out.data.resize(x.data.size());
  const std::size_t n = x.data.size();
  const double* px = x.data.data();
  double* po = out.data.data();
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i) po[i] = a * px[i] + c;
  } else {
    for (std::size_t i = 0; i < n; ++i) po[i] = a * px[i] + c;
  }
}

static void check_selector(const std::vector<int>& sel, std::size_t width) {
  for (int idx : sel)
    if (idx < 0 || static_cast<std::size_t>(idx) >= width)
      fail(Err::InvalidSelector,
           "channel index " + std::to_string(idx) + " out of range [0, " +
               std::to_string(width) + ")");
}

void gather(const Mat& x, const std::vector<int>& sel, Mat& out, Exec exec) {
  check_selector(sel, x.cols);
  out.rows = x.rows;
  out.cols = sel.size();
  out.data.resize(out.rows * out.cols);
  const long long rows = static_cast<long long>(x.rows);
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (long long r = 0; r < rows; ++r)
      for (std::size_t i = 0; i < sel.size(); ++i)
        out.data[r * out.cols + i] = x(r, static_cast<std::size_t>(sel[i]));
  } else {
    for (long long r = 0; r < rows; ++r)
      for (std::size_t i = 0; i < sel.size(); ++i)
        out.data[r * out.cols + i] = x(r, static_cast<std::size_t>(sel[i]));
  }
}

void scatter(const Mat& v, const std::vector<int>& sel, std::size_t width, Mat& out,
             Exec exec) {
  if (v.cols != sel.size()) fail(Err::InvalidSelector, "selector/value width mismatch");
  check_selector(sel, width);
  out.rows = v.rows;
  out.cols = width;
  out.data.assign(out.rows * out.cols, 0.0);
  const long long rows = static_cast<long long>(v.rows);
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (long long r = 0; r < rows; ++r)
      for (std::size_t i = 0; i < sel.size(); ++i)
        out.data[r * width + static_cast<std::size_t>(sel[i])] = v(r, i);
  } else {
    for (long long r = 0; r < rows; ++r)
      for (std::size_t i = 0; i < sel.size(); ++i)
        out.data[r * width + static_cast<std::size_t>(sel[i])] = v(r, i);
  }
}

double masked_sq_residual(const Mat& x, const std::vector<int>& sel, const Mat& targets,
                          const Mat& mask, Mat* grad_full, double grad_scale, Exec exec) {
  if (!targets.same_shape(mask) || targets.rows != x.rows || targets.cols != sel.size())
    fail(Err::InvalidConstraint, "constraint shape mismatch");
  check_selector(sel, x.cols);
  if (grad_full != nullptr && (grad_full->rows != x.rows || grad_full->cols != x.cols))
    fail(Err::InvalidConstraint, "gradient buffer shape mismatch");

  const long long rows = static_cast<long long>(x.rows);
  const std::size_t nsel = sel.size();
  // Per-row partial losses summed serially afterwards: deterministic for any
  // thread count.
  std::vector<double> row_loss(x.rows, 0.0);

  auto body = [&](long long r) {
    double acc = 0.0;
    const double* xr = x.row(static_cast<std::size_t>(r));
    const double* tr = targets.row(static_cast<std::size_t>(r));
    const double* wr = mask.row(static_cast<std::size_t>(r));
    double* gr = grad_full != nullptr ? grad_full->row(static_cast<std::size_t>(r)) : nullptr;
    for (std::size_t i = 0; i < nsel; ++i) {
      const double m = wr[i];
      const double res = m * (xr[static_cast<std::size_t>(sel[i])] - tr[i]);
      acc += res * res;
      if (gr != nullptr) gr[static_cast<std::size_t>(sel[i])] += grad_scale * 2.0 * m * res;
    }
    row_loss[static_cast<std::size_t>(r)] = acc;
  };

  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (long long r = 0; r < rows; ++r) body(r);
  } else {
    for (long long r = 0; r < rows; ++r) body(r);
  }

  double loss = 0.0;
  for (double v : row_loss) loss += v;
  return loss;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, Exec exec) {
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
      body(static_cast<std::size_t>(i));
  } else {
    for (std::size_t i = 0; i < n; ++i) body(i);
  }
}

void covariance(const Mat& samples, const std::vector<double>& mean, Mat& cov, Exec exec) {
  const std::size_t n = samples.rows;
  const std::size_t d = samples.cols;
  if (mean.size() != d) fail(Err::InvalidConstraint, "mean width mismatch");
  if (n < 2) fail(Err::TooShort, "covariance needs >= 2 samples");
  cov.rows = d;
  cov.cols = d;
  cov.data.assign(d * d, 0.0);
  const double norm = 1.0 / static_cast<double>(n - 1);
  // Each (i, j) entry is an independent serial sum over samples.
  auto entry = [&](std::size_t i, std::size_t j) {
    double acc = 0.0;
    for (std::size_t s = 0; s < n; ++s)
      acc += (samples(s, i) - mean[i]) * (samples(s, j) - mean[j]);
    return acc * norm;
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < static_cast<long long>(d); ++i)
      for (std::size_t j = static_cast<std::size_t>(i); j < d; ++j) {
        const double v = entry(static_cast<std::size_t>(i), j);
        cov(static_cast<std::size_t>(i), j) = v;
        cov(j, static_cast<std::size_t>(i)) = v;
      }
  } else {
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i; j < d; ++j) {
        const double v = entry(i, j);
        cov(i, j) = v;
        cov(j, i) = v;
      }
  }
}

}  // namespace duet::kern
