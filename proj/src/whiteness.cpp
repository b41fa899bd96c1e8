#include "whitesr/whiteness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace whitesr {

ImageGrid sample_autocorrelation(const ImageGrid& e) {
    const int nr = e.rows(), nc = e.cols();
    const double n = static_cast<double>(e.size());
    // Circular correlation via FFT: DFT(e*e) = |DFT(e)|^2.
    SpectralGrid et = dft2(e);
    SpectralGrid sq(nr, nc);
    for (long i = 0; i < et.size(); ++i) sq.data()[i] = std::norm(et.data()[i]);
    ImageGrid corr = idft2(sq, 1e-6 * (1.0 + std::abs(sq.data()[0])));
    for (auto& v : corr.data()) v /= n;
    return corr;
}

double whiteness_of_image(const ImageGrid& e) {
    double p2 = 0.0, p4 = 0.0;
    SpectralGrid et = dft2(e);
    for (const auto& z : et.data()) {
        const double m2 = std::norm(z);
        p2 += m2;
        p4 += m2 * m2;
    }
    if (p2 == 0.0) throw std::invalid_argument("whiteness_of_image: zero image");
    return p4 / (p2 * p2);
}

double whiteness_of_mu(const SpectralCache& cache, const std::vector<cplx>& nu, double mu) {
    if (!(mu > 0.0)) throw std::invalid_argument("whiteness_of_mu: mu must be positive");
    const long n = cache.n();
    double p2 = 0.0, p4 = 0.0;
    for (long g = 0; g < n; ++g) {
        const double t2 = std::norm((nu[g] - cache.rho[g]) / (1.0 + cache.eta[g] * mu));
        p2 += t2;
        p4 += t2 * t2;
    }
    if (p2 == 0.0) throw NumericError("whiteness_of_mu: residual spectrum vanishes");
    return p4 / (p2 * p2);
}

WhitenessMinimum minimize_whiteness(const SpectralCache& cache, const std::vector<cplx>& nu,
                                    const SearchOptions& opts) {
    if (!(opts.mu_lo > 0.0) || !(opts.mu_hi > opts.mu_lo))
        throw std::invalid_argument("minimize_whiteness: invalid bracket");
    const int m = std::max(opts.grid_points, 2);
    const double llo = std::log(opts.mu_lo), lhi = std::log(opts.mu_hi);
    auto W = [&](double lmu) { return whiteness_of_mu(cache, nu, std::exp(lmu)); };

    int best = 0;
    double bestW = std::numeric_limits<double>::infinity();
    bool any_finite = false;
    std::vector<double> grid(m);
    for (int i = 0; i < m; ++i) {
        grid[i] = llo + (lhi - llo) * i / (m - 1);
        const double w = W(grid[i]);
        if (std::isfinite(w)) {
            any_finite = true;
            if (w < bestW) { bestW = w; best = i; }  // ties keep the smaller mu
        }
    }
    if (!any_finite) throw NumericError("minimize_whiteness: W non-finite on the whole bracket");

    WhitenessMinimum out;
    if (best == 0 || best == m - 1) {
        out.mu = std::exp(grid[best]);
        out.W = bestW;
        out.boundary_hit = true;
        return out;
    }

    // Golden-section refinement on log mu around the grid argmin.
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = grid[best - 1], b = grid[best + 1];
    double c = b - gr * (b - a), dpt = a + gr * (b - a);
    double fc = W(c), fd = W(dpt);
    while (b - a > opts.rel_tol) {  // log-width == relative width of the bracket
        if (fc < fd) {
            b = dpt; dpt = c; fd = fc;
            c = b - gr * (b - a);
            fc = W(c);
        } else {
            a = c; c = dpt; fc = fd;
            dpt = a + gr * (b - a);
            fd = W(dpt);
        }
    }
    const double lm = 0.5 * (a + b);
    out.mu = std::exp(lm);
    out.W = W(lm);
    out.boundary_hit = false;
    return out;
}

double tau_star(double residual_norm, long n, double sigma) {
    if (sigma <= 0.0) throw std::invalid_argument("tau_star: sigma must be positive");
    if (n < 1) throw std::invalid_argument("tau_star: n must be >= 1");
    return residual_norm / (std::sqrt(static_cast<double>(n)) * sigma);
}

double solve_dp_mu(const SpectralCache& cache, const std::vector<cplx>& nu,
                   double sigma, double tau, const SearchOptions& opts) {
    if (sigma <= 0.0) throw std::invalid_argument("solve_dp_mu: sigma must be positive");
    const double target = tau * std::sqrt(static_cast<double>(cache.n())) * sigma;
    double lo = opts.mu_lo, hi = opts.mu_hi;
    const double r_lo = residual_norm_of_mu(cache, nu, lo);   // largest (norm decreases in mu)
    const double r_hi = residual_norm_of_mu(cache, nu, hi);
    if (target > r_lo || target < r_hi) {
        std::ostringstream msg;
        msg << "solve_dp_mu: target residual " << target << " outside attainable ["
            << r_hi << ", " << r_lo << "]";
        throw NumericError(msg.str());
    }
    // Bisection on log mu; stop when tau*(mu) is within 1e-3 of tau.
    for (int it = 0; it < 200; ++it) {
        const double mid = std::sqrt(lo * hi);
        const double r = residual_norm_of_mu(cache, nu, mid);
        if (std::abs(tau_star(r, cache.n(), sigma) - tau) <= 1e-3) return mid;
        if (r > target) lo = mid; else hi = mid;
    }
    return std::sqrt(lo * hi);
}

std::string WhitenessCurve::to_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "mu,tau,W\n";
    for (size_t i = 0; i < mus.size(); ++i) {
        os << mus[i] << ",";
        if (i < tau_values.size()) os << tau_values[i];
        os << "," << W_values[i] << "\n";
    }
    return os.str();
}

}  // namespace whitesr
