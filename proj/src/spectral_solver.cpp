#include "whitesr/spectral_solver.hpp"

#include <cmath>

namespace whitesr {

double default_epsilon(const std::vector<double>& zeta) {
    double zmax = 0.0;
    for (double z : zeta) zmax = std::max(zmax, z);
    return 1e-10 * (zmax + 1.0);
}

SpectralCache precompute_cache(const SpectralDiagonal& Lambda,
                               const RegularizerOperator& reg,
                               const ImageGrid& b,
                               const Decimator& dec,
                               double epsilon) {
    if (Lambda.rows() != dec.Nr || Lambda.cols() != dec.Nc)
        throw std::invalid_argument("precompute_cache: blur diagonal shape mismatch");
    for (const auto& g : reg.diagonals)
        if (g.rows() != dec.Nr || g.cols() != dec.Nc)
            throw std::invalid_argument("precompute_cache: regulariser diagonal shape mismatch");
    if (b.rows() != dec.nr() || b.cols() != dec.nc())
        throw std::invalid_argument("precompute_cache: observed image does not match LR shape");

    SpectralCache cache;
    cache.dec = dec;
    cache.s = reg.s();
    cache.groups = alias_permutation(dec.nr(), dec.nc(), dec.dr, dec.dc);
    cache.lambda_hat = cache.groups.gather(Lambda.data());

    const long N = dec.N();
    cache.zeta.assign(N, 0.0);
    cache.gamma_hat.reserve(reg.s());
    for (const auto& g : reg.diagonals) {
        cache.gamma_hat.push_back(cache.groups.gather(g.data()));
        const auto& gh = cache.gamma_hat.back();
        for (long i = 0; i < N; ++i) cache.zeta[i] += std::norm(gh[i]);
    }
    cache.epsilon = epsilon > 0.0 ? epsilon : default_epsilon(cache.zeta);

    cache.b_hat_H = cache.groups.gather(dft2(zero_interpolate(b, dec)).data());

    const int d = dec.d();
    const long n = dec.n();
    cache.omega.assign(n, 0.0);
    cache.eta.assign(n, 0.0);
    cache.rho.assign(n, cplx(0.0));
    for (long g = 0; g < n; ++g) {
        for (int l = 0; l < d; ++l) {
            const long i = g * d + l;
            cache.omega[g] += std::norm(cache.lambda_hat[i]) / (cache.zeta[i] + cache.epsilon);
            cache.rho[g] += cache.b_hat_H[i];
        }
        cache.eta[g] = cache.omega[g] / d;
    }
    return cache;
}

namespace {

// Permuted DFTs of the split target v (empty v means zero).
std::vector<std::vector<cplx>> hat_of_v(const SpectralCache& cache,
                                        const std::vector<ImageGrid>& v) {
    if (v.empty()) return {};
    if (static_cast<int>(v.size()) != cache.s)
        throw std::invalid_argument("split target has wrong component count");
    std::vector<std::vector<cplx>> v_hat;
    v_hat.reserve(v.size());
    for (const auto& vj : v) {
        if (vj.rows() != cache.dec.Nr || vj.cols() != cache.dec.Nc)
            throw std::invalid_argument("split target component has wrong shape");
        v_hat.push_back(cache.groups.gather(dft2(vj).data()));
    }
    return v_hat;
}

}  // namespace

std::vector<cplx> compute_nu(const SpectralCache& cache, const std::vector<ImageGrid>& v) {
    const long n = cache.n();
    std::vector<cplx> nu(n, cplx(0.0));
    if (v.empty()) return nu;
    auto v_hat = hat_of_v(cache, v);
    const int d = cache.d();
    for (long g = 0; g < n; ++g) {
        cplx acc(0.0);
        for (int l = 0; l < d; ++l) {
            const long i = g * d + l;
            cplx inner(0.0);
            for (int j = 0; j < cache.s; ++j)
                inner += std::conj(cache.gamma_hat[j][i]) * v_hat[j][i];
            acc += cache.lambda_hat[i] * inner / (cache.zeta[i] + cache.epsilon);
        }
        nu[g] = acc;
    }
    return nu;
}

ImageGrid solve_l2l2(const SpectralCache& cache, const std::vector<ImageGrid>& v, double mu) {
    if (!(mu > 0.0)) throw std::invalid_argument("solve_l2l2: mu must be positive");
    const long N = cache.N();
    const long n = cache.n();
    const int d = cache.d();
    auto v_hat = hat_of_v(cache, v);

    // Right-hand side in permuted frequency space:
    //   g_i = mu conj(lambda)_i bH_i + sum_j conj(gamma_j)_i v_j_i
    std::vector<cplx> rhs(N);
    for (long i = 0; i < N; ++i) {
        cplx acc = mu * std::conj(cache.lambda_hat[i]) * cache.b_hat_H[i];
        if (!v_hat.empty())
            for (int j = 0; j < cache.s; ++j)
                acc += std::conj(cache.gamma_hat[j][i]) * v_hat[j][i];
        rhs[i] = acc;
    }

    // Per group the system is diag(zeta+eps) plus (mu/d) times a rank-one
    // term; invert with the Sherman-Morrison scalar 1/(1 + mu eta_g).
    const double c = mu / d;
    std::vector<cplx> x_hat(N);
    for (long g = 0; g < n; ++g) {
        const double q = 1.0 + mu * cache.eta[g];
        cplx sdot(0.0);
        for (int l = 0; l < d; ++l) {
            const long i = g * d + l;
            sdot += cache.lambda_hat[i] * rhs[i] / (cache.zeta[i] + cache.epsilon);
        }
        const cplx correction = c * sdot / q;
        for (int l = 0; l < d; ++l) {
            const long i = g * d + l;
            const double diag = cache.zeta[i] + cache.epsilon;
            if (c * std::norm(cache.lambda_hat[i]) <= 1e6 * diag) {
                x_hat[i] = (rhs[i] - std::conj(cache.lambda_hat[i]) * correction) / diag;
            } else {
                // The rank-one term dwarfs the diagonal here (e.g. the DC
                // entry of a gradient regulariser, whose diagonal is just
                // epsilon).  The direct form subtracts two O(1) numbers that
                // agree to O(diag), so rescale by q*diag first; the exactly
                // cancelling j == l term is dropped analytically.
                cplx num = rhs[i];
                for (int j = 0; j < d; ++j) {
                    if (j == l) continue;
                    const long k = g * d + j;
                    num += c *
                           (std::norm(cache.lambda_hat[k]) * rhs[i] -
                            std::conj(cache.lambda_hat[i]) * cache.lambda_hat[k] * rhs[k]) /
                           (cache.zeta[k] + cache.epsilon);
                }
                x_hat[i] = num / (q * diag);
            }
        }
    }

    SpectralGrid x_tilde(cache.dec.Nr, cache.dec.Nc);
    x_tilde.data() = cache.groups.scatter(x_hat);
    double spatial_scale = 0.0;
    for (const auto& z : x_tilde.data()) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw NumericError("solve_l2l2: non-finite spectral solution");
        spatial_scale = std::max(spatial_scale, std::abs(z));
    }
    spatial_scale /= static_cast<double>(N);
    return idft2(x_tilde, 1e-9 * (1.0 + spatial_scale));
}

double residual_norm_of_mu(const SpectralCache& cache, const std::vector<cplx>& nu, double mu) {
    if (!(mu > 0.0)) throw std::invalid_argument("residual_norm_of_mu: mu must be positive");
    const long n = cache.n();
    double acc = 0.0;
    for (long g = 0; g < n; ++g) {
        const cplx t = (nu[g] - cache.rho[g]) / (1.0 + cache.eta[g] * mu);
        acc += std::norm(t);
    }
    return std::sqrt(acc / (static_cast<double>(cache.N()) * cache.d()));
}

ImageGrid lowres_residual(const ImageGrid& x, const SpectralDiagonal& Lambda,
                          const Decimator& dec, const ImageGrid& b) {
    if (x.rows() != dec.Nr || x.cols() != dec.Nc)
        throw std::invalid_argument("lowres_residual: HR shape mismatch");
    if (b.rows() != dec.nr() || b.cols() != dec.nc())
        throw std::invalid_argument("lowres_residual: LR shape mismatch");
    SpectralGrid xt = dft2(x);
    SpectralGrid prod(dec.Nr, dec.Nc);
    for (long i = 0; i < xt.size(); ++i) prod.data()[i] = Lambda.data()[i] * xt.data()[i];
    double scale = 0.0;
    for (double vv : x.data()) scale = std::max(scale, std::abs(vv));
    ImageGrid kx = idft2(prod, 1e-8 * (1.0 + scale));
    ImageGrid r = decimate(kx, dec);
    for (int i = 0; i < r.rows(); ++i)
        for (int j = 0; j < r.cols(); ++j) r.at(i, j) -= b.at(i, j);
    return r;
}

}  // namespace whitesr
