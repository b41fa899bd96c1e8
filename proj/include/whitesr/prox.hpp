#ifndef WHITESR_PROX_HPP
#define WHITESR_PROX_HPP

#include <vector>

#include "whitesr/image.hpp"

namespace whitesr {

// Proximity operators of G/beta at q: argmin G(t) + (beta/2)||t - q||^2.
// Pair operators act on (q_h, q_v) per pixel (gradient splitting).

struct PairSeq {
    std::vector<double> h, v;  // same length
    size_t size() const { return h.size(); }
};

enum class TvaMode { exact, paper };
enum class Wl1NonnegMode { exact, paper };

/// Isotropic TV shrinkage: max(1 - 1/(beta*||q||_2), 0) * q.
PairSeq prox_tvi(const PairSeq& q, double beta);

/// Anisotropic TV.  exact: componentwise soft threshold at 1/beta (the true
/// proximity map of the l1 pair norm); paper: group shrinkage with the l1
/// norm in the denominator, kept for reproduction studies.
PairSeq prox_tva(const PairSeq& q, double beta, TvaMode mode = TvaMode::exact);

/// Weighted isotropic TV shrinkage with per-pixel alpha > 0.
PairSeq prox_wtv(const PairSeq& q, double beta, const std::vector<double>& alpha);

/// Weighted l1 soft threshold: sign(q) max(0, |q| - w/beta).
std::vector<double> prox_wl1(const std::vector<double>& q, double beta,
                             const std::vector<double>& w);

/// Proximity map of w|t| + indicator(t >= 0).  exact: max(0, q - w/beta);
/// paper: max(0, |q| - w/beta) as printed.
std::vector<double> prox_wl1_nonneg(const std::vector<double>& q, double beta,
                                    const std::vector<double>& w,
                                    Wl1NonnegMode mode = Wl1NonnegMode::exact);

/// Parameters of the continuous exact l0 relaxation penalty.
struct Cel0Params {
    double mu = 1.0;                 // fidelity weight
    std::vector<double> col_norms;   // per-pixel ||a_i||_2 of A = SK, all > 0
};

/// phi(x_i) = 1 - (mu ||a_i||^2 / 2)(|x_i| - sqrt(2/mu)/||a_i||)^2 on the
/// indicator support |x_i| <= sqrt(2/mu)/||a_i||, else 1; summed over pixels.
double cel0_penalty(const std::vector<double>& x, const Cel0Params& params);

/// Reweighting slopes w_i = mu (sqrt(2/mu)||a_i|| - ||a_i||^2 |x_i|) on the
/// indicator support, 0 outside; always >= 0.
std::vector<double> cel0_weights(const std::vector<double>& x, const Cel0Params& params);

struct WtvAlphaOptions {
    double smooth_sigma = 1.0;  // gaussian smoothing of the gradient magnitude
    double kappa = -1.0;        // < 0: calibrate so mean alpha = 0.5 on this image
};

/// Default WTV weight rule alpha_i = 1/(1 + kappa * g_i), g_i the smoothed
/// gradient magnitude of the current iterate.  Values lie in (0, 1].
std::vector<double> wtv_alpha_update(const ImageGrid& x, const WtvAlphaOptions& opts = {});

}  // namespace whitesr

#endif
