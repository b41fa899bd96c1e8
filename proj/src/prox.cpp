#include "whitesr/prox.hpp"

#include <cmath>

#include "whitesr/fft.hpp"

namespace whitesr {

namespace {

void check_beta(double beta) {
    if (!(beta > 0.0)) throw std::invalid_argument("prox: beta must be positive");
}

void check_pair(const PairSeq& q) {
    if (q.h.size() != q.v.size()) throw std::invalid_argument("prox: ragged pair sequence");
}

}  // namespace

PairSeq prox_tvi(const PairSeq& q, double beta) {
    check_beta(beta);
    check_pair(q);
    PairSeq out;
    out.h.resize(q.size());
    out.v.resize(q.size());
    for (size_t i = 0; i < q.size(); ++i) {
        const double norm = std::hypot(q.h[i], q.v[i]);
        const double shrink = norm > 0.0 ? std::max(1.0 - 1.0 / (beta * norm), 0.0) : 0.0;
        out.h[i] = shrink * q.h[i];
        out.v[i] = shrink * q.v[i];
    }
    return out;
}

PairSeq prox_tva(const PairSeq& q, double beta, TvaMode mode) {
    check_beta(beta);
    check_pair(q);
    PairSeq out;
    out.h.resize(q.size());
    out.v.resize(q.size());
    if (mode == TvaMode::exact) {
        auto soft = [beta](double x) {
            return std::copysign(std::max(std::abs(x) - 1.0 / beta, 0.0), x);
        };
        for (size_t i = 0; i < q.size(); ++i) {
            out.h[i] = soft(q.h[i]);
            out.v[i] = soft(q.v[i]);
        }
        return out;
    }
    // Literal printed formula: group shrinkage with the l1 norm in the denominator.
    for (size_t i = 0; i < q.size(); ++i) {
        const double norm1 = std::abs(q.h[i]) + std::abs(q.v[i]);
        const double shrink = norm1 > 0.0 ? std::max(1.0 - 1.0 / (beta * norm1), 0.0) : 0.0;
        out.h[i] = shrink * q.h[i];
        out.v[i] = shrink * q.v[i];
    }
    return out;
}

PairSeq prox_wtv(const PairSeq& q, double beta, const std::vector<double>& alpha) {
    check_beta(beta);
    check_pair(q);
    if (alpha.size() != q.size()) throw std::invalid_argument("prox_wtv: weight length mismatch");
    PairSeq out;
    out.h.resize(q.size());
    out.v.resize(q.size());
    for (size_t i = 0; i < q.size(); ++i) {
        if (!(alpha[i] > 0.0)) throw std::invalid_argument("prox_wtv: nonpositive alpha");
        const double norm = std::hypot(q.h[i], q.v[i]);
        const double shrink = norm > 0.0 ? std::max(1.0 - alpha[i] / (beta * norm), 0.0) : 0.0;
        out.h[i] = shrink * q.h[i];
        out.v[i] = shrink * q.v[i];
    }
    return out;
}

std::vector<double> prox_wl1(const std::vector<double>& q, double beta,
                             const std::vector<double>& w) {
    check_beta(beta);
    if (w.size() != q.size()) throw std::invalid_argument("prox_wl1: weight length mismatch");
    std::vector<double> out(q.size());
    for (size_t i = 0; i < q.size(); ++i) {
        if (!(w[i] > 0.0)) throw std::invalid_argument("prox_wl1: nonpositive weight");
        out[i] = std::copysign(std::max(std::abs(q[i]) - w[i] / beta, 0.0), q[i]);
    }
    return out;
}

std::vector<double> prox_wl1_nonneg(const std::vector<double>& q, double beta,
                                    const std::vector<double>& w, Wl1NonnegMode mode) {
    check_beta(beta);
    if (w.size() != q.size()) throw std::invalid_argument("prox_wl1_nonneg: weight length mismatch");
    std::vector<double> out(q.size());
    for (size_t i = 0; i < q.size(); ++i) {
        if (w[i] < 0.0) throw std::invalid_argument("prox_wl1_nonneg: negative weight");
        const double base = mode == Wl1NonnegMode::exact ? q[i] : std::abs(q[i]);
        out[i] = std::max(0.0, base - w[i] / beta);
    }
    return out;
}

double cel0_penalty(const std::vector<double>& x, const Cel0Params& params) {
    if (params.col_norms.size() != x.size())
        throw std::invalid_argument("cel0_penalty: column-norm length mismatch");
    const double thresh_num = std::sqrt(2.0 / params.mu);
    double acc = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        const double a = params.col_norms[i];
        const double ax = std::abs(x[i]);
        const double thresh = thresh_num / a;
        if (ax <= thresh) {
            const double diff = ax - thresh;
            acc += 1.0 - 0.5 * params.mu * a * a * diff * diff;
        } else {
            acc += 1.0;
        }
    }
    return acc;
}

std::vector<double> cel0_weights(const std::vector<double>& x, const Cel0Params& params) {
    if (params.col_norms.size() != x.size())
        throw std::invalid_argument("cel0_weights: column-norm length mismatch");
    const double thresh_num = std::sqrt(2.0 / params.mu);
    std::vector<double> w(x.size(), 0.0);
    for (size_t i = 0; i < x.size(); ++i) {
        const double a = params.col_norms[i];
        const double ax = std::abs(x[i]);
        if (ax <= thresh_num / a)
            w[i] = params.mu * (thresh_num * a - a * a * ax);
    }
    return w;
}

std::vector<double> wtv_alpha_update(const ImageGrid& x, const WtvAlphaOptions& opts) {
    // Smoothed gradient magnitude (forward differences, periodic wrap).
    const int nr = x.rows(), nc = x.cols();
    ImageGrid gmag(nr, nc);
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < nc; ++j) {
            const double gh = x.wrap(i, j + 1) - x.at(i, j);
            const double gv = x.wrap(i + 1, j) - x.at(i, j);
            gmag.at(i, j) = std::hypot(gh, gv);
        }
    const int half = std::max(1, static_cast<int>(std::ceil(3.0 * opts.smooth_sigma)));
    std::vector<double> gk(2 * half + 1);
    double gsum = 0.0;
    for (int i = -half; i <= half; ++i) {
        gk[i + half] = std::exp(-i * i / (2.0 * opts.smooth_sigma * opts.smooth_sigma));
        gsum += gk[i + half];
    }
    for (auto& v : gk) v /= gsum;
    ImageGrid tmp(nr, nc), smooth(nr, nc);
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < nc; ++j) {
            double acc = 0.0;
            for (int k = -half; k <= half; ++k) acc += gk[k + half] * gmag.wrap(i, j + k);
            tmp.at(i, j) = acc;
        }
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < nc; ++j) {
            double acc = 0.0;
            for (int k = -half; k <= half; ++k) acc += gk[k + half] * tmp.wrap(i + k, j);
            smooth.at(i, j) = acc;
        }

    double kappa = opts.kappa;
    if (kappa < 0.0) {
        // Calibrate kappa so the mean weight is 0.5 (bisection; mean alpha is
        // decreasing in kappa).  Flat images keep alpha == 1.
        auto mean_alpha = [&](double k) {
            double acc = 0.0;
            for (double v : smooth.data()) acc += 1.0 / (1.0 + k * v);
            return acc / static_cast<double>(smooth.size());
        };
        double lo = 0.0, hi = 1.0;
        while (mean_alpha(hi) > 0.5 && hi < 1e12) hi *= 2.0;
        if (mean_alpha(hi) > 0.5) {
            kappa = 0.0;  // not reachable (mostly flat image)
        } else {
            for (int it = 0; it < 100; ++it) {
                const double mid = 0.5 * (lo + hi);
                (mean_alpha(mid) > 0.5 ? lo : hi) = mid;
            }
            kappa = 0.5 * (lo + hi);
        }
    }
    std::vector<double> alpha(smooth.size());
    for (long i = 0; i < smooth.size(); ++i)
        alpha[i] = 1.0 / (1.0 + kappa * smooth.data()[i]);
    return alpha;
}

}  // namespace whitesr
