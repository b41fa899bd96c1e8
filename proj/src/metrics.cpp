#include "whitesr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace whitesr {

namespace {

double l2_diff(const ImageGrid& a, const ImageGrid& b) {
    double acc = 0.0;
    for (long i = 0; i < a.size(); ++i) {
        const double d = a.data()[i] - b.data()[i];
        acc += d * d;
    }
    return std::sqrt(acc);
}

}  // namespace

double psnr(const ImageGrid& x_true, const ImageGrid& x_est) {
    if (!x_true.same_shape(x_est)) throw std::invalid_argument("psnr: shape mismatch");
    const double err = l2_diff(x_true, x_est);
    if (err == 0.0) return std::numeric_limits<double>::infinity();
    double peak = -std::numeric_limits<double>::infinity();
    for (double v : x_true.data()) peak = std::max(peak, v);
    for (double v : x_est.data()) peak = std::max(peak, v);
    return 20.0 * std::log10(std::sqrt(static_cast<double>(x_true.size())) * peak / err);
}

double isnr(const ImageGrid& x_true, const ImageGrid& x_est, const ImageGrid& b_bar) {
    if (!x_true.same_shape(x_est) || !x_true.same_shape(b_bar))
        throw std::invalid_argument("isnr: shape mismatch");
    const double err = l2_diff(x_true, x_est);
    if (err == 0.0) return std::numeric_limits<double>::infinity();
    return 20.0 * std::log10(l2_diff(x_true, b_bar) / err);
}

double ssim(const ImageGrid& x_true, const ImageGrid& x_est) {
    if (!x_true.same_shape(x_est)) throw std::invalid_argument("ssim: shape mismatch");
    const int nr = x_true.rows(), nc = x_true.cols();

    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (double v : x_true.data()) { lo = std::min(lo, v); hi = std::max(hi, v); }
    for (double v : x_est.data()) { lo = std::min(lo, v); hi = std::max(hi, v); }
    const double L = hi > lo ? hi - lo : 1.0;
    const double c1 = (0.01 * L) * (0.01 * L);
    const double c2 = (0.03 * L) * (0.03 * L);

    // 11x11 gaussian window, sigma 1.5, circular boundary.
    const int half = 5;
    double win[11][11];
    double wsum = 0.0;
    for (int i = -half; i <= half; ++i)
        for (int j = -half; j <= half; ++j) {
            win[i + half][j + half] = std::exp(-(i * i + j * j) / (2.0 * 1.5 * 1.5));
            wsum += win[i + half][j + half];
        }
    for (auto& row : win)
        for (auto& w : row) w /= wsum;

    double acc = 0.0;
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < nc; ++j) {
            double ma = 0, mb = 0;
            for (int p = -half; p <= half; ++p)
                for (int q = -half; q <= half; ++q) {
                    const double w = win[p + half][q + half];
                    ma += w * x_true.wrap(i + p, j + q);
                    mb += w * x_est.wrap(i + p, j + q);
                }
            double va = 0, vb = 0, cov = 0;
            for (int p = -half; p <= half; ++p)
                for (int q = -half; q <= half; ++q) {
                    const double w = win[p + half][q + half];
                    const double da = x_true.wrap(i + p, j + q) - ma;
                    const double db = x_est.wrap(i + p, j + q) - mb;
                    va += w * da * da;
                    vb += w * db * db;
                    cov += w * da * db;
                }
            acc += ((2 * ma * mb + c1) * (2 * cov + c2)) /
                   ((ma * ma + mb * mb + c1) * (va + vb + c2));
        }
    return acc / static_cast<double>(x_true.size());
}

double jaccard(const PointList& truth, const PointList& detected, double delta) {
    if (delta < 0.0) throw std::invalid_argument("jaccard: negative tolerance");
    if (truth.empty() && detected.empty()) return 1.0;
    // Greedy nearest-first one-to-one matching within radius delta.
    struct Cand { double dist; size_t t, d; };
    std::vector<Cand> cands;
    for (size_t t = 0; t < truth.size(); ++t)
        for (size_t d = 0; d < detected.size(); ++d) {
            const double dist = std::hypot(truth[t].first - detected[d].first,
                                           truth[t].second - detected[d].second);
            if (dist <= delta) cands.push_back({dist, t, d});
        }
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
        if (a.dist != b.dist) return a.dist < b.dist;
        if (a.t != b.t) return a.t < b.t;
        return a.d < b.d;
    });
    std::vector<bool> t_used(truth.size(), false), d_used(detected.size(), false);
    long tp = 0;
    for (const auto& c : cands) {
        if (t_used[c.t] || d_used[c.d]) continue;
        t_used[c.t] = d_used[c.d] = true;
        ++tp;
    }
    const long fn = static_cast<long>(truth.size()) - tp;
    const long fp = static_cast<long>(detected.size()) - tp;
    return static_cast<double>(tp) / static_cast<double>(tp + fn + fp);
}

PointList detect_points(const ImageGrid& x) {
    PointList out;
    for (int i = 0; i < x.rows(); ++i)
        for (int j = 0; j < x.cols(); ++j)
            if (x.at(i, j) > 0.0) out.emplace_back(i, j);
    return out;
}

namespace {

// Keys cubic convolution kernel, a = -0.5.
double keys(double t) {
    t = std::abs(t);
    if (t < 1.0) return 1.5 * t * t * t - 2.5 * t * t + 1.0;
    if (t < 2.0) return -0.5 * t * t * t + 2.5 * t * t - 4.0 * t + 2.0;
    return 0.0;
}

}  // namespace

ImageGrid bicubic_upsample(const ImageGrid& b, int dr, int dc) {
    if (dr < 1 || dc < 1) throw std::invalid_argument("bicubic_upsample: factors must be >= 1");
    if (dr == 1 && dc == 1) return b;
    const int nr = b.rows(), nc = b.cols();
    const int Nr = nr * dr, Nc = nc * dc;
    ImageGrid out(Nr, Nc);
    for (int i = 0; i < Nr; ++i) {
        const double y = static_cast<double>(i) / dr;
        const int y0 = static_cast<int>(std::floor(y));
        for (int j = 0; j < Nc; ++j) {
            const double x = static_cast<double>(j) / dc;
            const int x0 = static_cast<int>(std::floor(x));
            double acc = 0.0;
            for (int p = -1; p <= 2; ++p) {
                const double wy = keys(y - (y0 + p));
                if (wy == 0.0) continue;
                for (int q = -1; q <= 2; ++q) {
                    const double wx = keys(x - (x0 + q));
                    if (wx == 0.0) continue;
                    acc += wy * wx * b.wrap(y0 + p, x0 + q);
                }
            }
            out.at(i, j) = acc;
        }
    }
    return out;
}

}  // namespace whitesr
