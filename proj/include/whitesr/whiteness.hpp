#ifndef WHITESR_WHITENESS_HPP
#define WHITESR_WHITENESS_HPP

#include <string>
#include <vector>

#include "whitesr/spectral_solver.hpp"

namespace whitesr {

/// Sample autocorrelation over the non-negative lag window, circular indexing:
/// a_{l,m} = (1/n) sum e_{i,j} e_{i+l,j+m}.
ImageGrid sample_autocorrelation(const ImageGrid& e);

/// Frequency-form whiteness measure: sum |e~|^4 / (sum |e~|^2)^2.
/// The autocorrelation-definition route ||e*e||^2/||e||^4 equals n times this
/// value under the unnormalised-forward DFT convention.
double whiteness_of_image(const ImageGrid& e);

/// Closed-form W(mu) from per-group terms t_g = |(nu_g - rho_g)/(1 + eta_g mu)|.
/// Summed once per alias group, which makes the value coincide exactly with
/// whiteness_of_image of the LR residual.
double whiteness_of_mu(const SpectralCache& cache, const std::vector<cplx>& nu, double mu);

struct WhitenessMinimum {
    double mu = 0.0;
    double W = 0.0;
    bool boundary_hit = false;
};

struct SearchOptions {
    double mu_lo = 1e-4;
    double mu_hi = 1e4;
    int grid_points = 60;
    double rel_tol = 1e-3;  // golden-section relative bracket width
};

/// Coarse log-grid scan followed by golden-section refinement.  Ties on the
/// grid break toward smaller mu.  Deterministic.
WhitenessMinimum minimize_whiteness(const SpectralCache& cache, const std::vector<cplx>& nu,
                                    const SearchOptions& opts = {});

/// tau*(mu) = ||r||_2 / (sqrt(n) sigma).
double tau_star(double residual_norm, long n, double sigma);

/// Discrepancy-principle mu: bisection on the decreasing residual norm so that
/// tau*(mu) = tau within 1e-3.  Throws NumericError when the target is outside
/// the attainable range, reporting the attainable interval.
double solve_dp_mu(const SpectralCache& cache, const std::vector<cplx>& nu,
                   double sigma, double tau, const SearchOptions& opts = {});

struct WhitenessCurve {
    std::vector<double> mus;
    std::vector<double> W_values;
    std::vector<double> tau_values;  // optional, empty when sigma unknown

    /// CSV with header `mu,tau,W`, 17 significant digits.
    std::string to_csv() const;
};

}  // namespace whitesr

#endif
