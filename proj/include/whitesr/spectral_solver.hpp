#ifndef WHITESR_SPECTRAL_SOLVER_HPP
#define WHITESR_SPECTRAL_SOLVER_HPP

#include <complex>
#include <vector>

#include "whitesr/operators.hpp"

namespace whitesr {

using cplx = std::complex<double>;

/// Per-group spectral scalars enabling O(N) evaluation of the l2-l2 solver
/// and of the residual whiteness closed form.  Independent of mu and of v.
struct SpectralCache {
    Decimator dec;
    AliasGroups groups;
    std::vector<cplx> lambda_hat;   // permuted blur diagonal, length N
    std::vector<double> zeta;       // per-entry sum_j |gamma_hat_{j,i}|^2
    std::vector<std::vector<cplx>> gamma_hat;  // s permuted regulariser diagonals
    std::vector<cplx> b_hat_H;      // permuted DFT of S^H b
    std::vector<double> omega;      // per-group sum |lambda_hat|^2/(zeta+eps)
    std::vector<double> eta;        // omega/d
    std::vector<cplx> rho;          // per-group sum of b_hat_H entries
    double epsilon = 0.0;
    int s = 1;

    long N() const { return dec.N(); }
    long n() const { return dec.n(); }
    int d() const { return dec.d(); }
};

/// Default epsilon rule: 1e-10 * (max zeta + 1).
double default_epsilon(const std::vector<double>& zeta);

/// Precompute all per-entry and per-group scalars.  Pass epsilon <= 0 to use
/// the default rule.
SpectralCache precompute_cache(const SpectralDiagonal& Lambda,
                               const RegularizerOperator& reg,
                               const ImageGrid& b,
                               const Decimator& dec,
                               double epsilon = 0.0);

/// Per-group nu_g = sum_l lambda_hat * (sum_j conj(gamma_hat_j) v_hat_j) / (zeta+eps).
/// v is the l2-l2 target, one HR grid per regulariser component (empty == 0).
std::vector<cplx> compute_nu(const SpectralCache& cache, const std::vector<ImageGrid>& v);

/// Unique minimiser of (mu/2)||SKx-b||^2 + (1/2)||Lx-v||^2 (+ eps/2 ||x||^2),
/// solved group-wise via the rank-one inversion formula.
ImageGrid solve_l2l2(const SpectralCache& cache, const std::vector<ImageGrid>& v, double mu);

/// ||SK x*(mu) - b||_2 from the closed form, without solving.
double residual_norm_of_mu(const SpectralCache& cache, const std::vector<cplx>& nu, double mu);

/// Spatial residual SKx - b on the LR grid.
ImageGrid lowres_residual(const ImageGrid& x, const SpectralDiagonal& Lambda,
                          const Decimator& dec, const ImageGrid& b);

}  // namespace whitesr

#endif
