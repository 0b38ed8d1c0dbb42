#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "duet/mat.hpp"

// Data-parallel inner loops of the engine. Every kernel exists in a serial
// and an OpenMP flavor selected by Exec; outputs are bit-identical because
// each parallel iteration owns a disjoint slice of the output (reductions
// accumulate per-index partials that are summed serially afterwards).
namespace duet::kern {

enum class Exec { serial, parallel };

/// Process-wide default, `parallel` when built with OpenMP unless the
/// environment variable DUET_KERNEL_MODE=serial overrides it.
Exec default_exec();
void set_default_exec(Exec mode);

/// out = a*x + b*y, elementwise. Shapes must agree.
void lincomb(double a, const Mat& x, double b, const Mat& y, Mat& out, Exec exec);

/// out = a*x + c, elementwise.
void affine(double a, const Mat& x, double c, Mat& out, Exec exec);

/// Gather selected columns: out(r, i) = x(r, sel[i]).
void gather(const Mat& x, const std::vector<int>& sel, Mat& out, Exec exec);

/// Scatter into a zero matrix of the given width: out(r, sel[i]) = v(r, i).
void scatter(const Mat& v, const std::vector<int>& sel, std::size_t width, Mat& out,
             Exec exec);

/// Loss and gradient of the masked squared residual over one selector:
///   loss = sum_{r,i} (mask(r,i) * (x(r,sel[i]) - targets(r,i)))^2
/// The gradient 2*mask*(x-targets), scaled by grad_scale, is scattered and
/// accumulated into grad_full (full frame width) when grad_full != nullptr.
double masked_sq_residual(const Mat& x, const std::vector<int>& sel, const Mat& targets,
                          const Mat& mask, Mat* grad_full, double grad_scale, Exec exec);

/// Coarse-grained parallel loop; bodies must write disjoint state.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, Exec exec);

/// Sample covariance (Bessel-corrected) of row-observations, parallel over
/// the d*d output entries. mean must hold the column means.
void covariance(const Mat& samples, const std::vector<double>& mean, Mat& cov, Exec exec);

int thread_count();

}  // namespace duet::kern
