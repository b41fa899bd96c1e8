#ifndef WHITESR_METRICS_HPP
#define WHITESR_METRICS_HPP

#include <utility>
#include <vector>

#include "whitesr/image.hpp"

namespace whitesr {

/// 20 log10(sqrt(N) max(x, x*) / ||x - x*||_2); +inf sentinel for identical inputs.
double psnr(const ImageGrid& x_true, const ImageGrid& x_est);

/// 20 log10(||x - b_bar|| / ||x - x*||); +inf sentinel on zero denominator.
double isnr(const ImageGrid& x_true, const ImageGrid& x_est, const ImageGrid& b_bar);

/// Mean local SSIM, 11x11 gaussian window sigma 1.5, stability constants
/// (0.01 L)^2 and (0.03 L)^2 with L the dynamic range of the two inputs.
double ssim(const ImageGrid& x_true, const ImageGrid& x_est);

using PointList = std::vector<std::pair<double, double>>;  // (row, col)

/// Jaccard index TP/(TP+FN+FP) with greedy nearest-first one-to-one matching
/// within Euclidean radius delta.
double jaccard(const PointList& truth, const PointList& detected, double delta);

/// Nonzero pixels of a localisation image as (row, col, intensity is dropped).
PointList detect_points(const ImageGrid& x);

/// Separable Keys cubic interpolation (a = -0.5), periodic extension, aligned
/// so HR sample i*dr reproduces LR sample i.
ImageGrid bicubic_upsample(const ImageGrid& b, int dr, int dc);

}  // namespace whitesr

#endif
