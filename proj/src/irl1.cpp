#include "whitesr/irl1.hpp"

#include <cmath>

namespace whitesr {

std::vector<double> column_norms(const SpectralDiagonal& Lambda, const Decimator& dec) {
    std::vector<double> phase(static_cast<size_t>(dec.d()), 0.0);
    for (int p = 0; p < dec.dr; ++p)
        for (int q = 0; q < dec.dc; ++q) {
            ImageGrid impulse(dec.Nr, dec.Nc, 0.0);
            impulse.at(p, q) = 1.0;
            SpectralGrid it = dft2(impulse);
            SpectralGrid prod(dec.Nr, dec.Nc);
            for (long i = 0; i < it.size(); ++i) prod.data()[i] = Lambda.data()[i] * it.data()[i];
            ImageGrid col = decimate(idft2(prod, 1e-8), dec);
            double acc = 0.0;
            for (double v : col.data()) acc += v * v;
            phase[static_cast<size_t>(p) * dec.dc + q] = std::sqrt(acc);
        }
    for (double v : phase)
        if (!(v > 0.0))
            throw NumericError("column_norms: vanishing column norm (degenerate model)");
    std::vector<double> out(static_cast<size_t>(dec.N()));
    for (int i = 0; i < dec.Nr; ++i)
        for (int j = 0; j < dec.Nc; ++j)
            out[static_cast<size_t>(i) * dec.Nc + j] =
                phase[static_cast<size_t>(i % dec.dr) * dec.dc + j % dec.dc];
    return out;
}

double cel0_objective(const ImageGrid& x, const SpectralDiagonal& Lambda,
                      const Decimator& dec, const ImageGrid& b, const Cel0Params& params) {
    ImageGrid r = lowres_residual(x, Lambda, dec, b);
    double fid = 0.0;
    for (double v : r.data()) fid += v * v;
    return cel0_penalty(x.data(), params) + 0.5 * params.mu * fid;
}

Irl1Report irwp_irl1_run(const ImageGrid& b, const SpectralDiagonal& Lambda,
                         const Decimator& dec, const Irl1Options& opts,
                         double sigma, const GroundTruth& truth) {
    (void)truth;
    std::vector<double> norms = column_norms(Lambda, dec);

    // Zero data: every mu yields the zero solution and the residual whiteness
    // is undefined; answer directly.
    bool b_zero = true;
    for (double vb : b.data())
        if (vb != 0.0) { b_zero = false; break; }
    if (b_zero) {
        Irl1Report out;
        out.final.x_star = ImageGrid(dec.Nr, dec.Nc, 0.0);
        out.init.x_star = out.final.x_star;
        out.final.converged = out.init.converged = true;
        out.outer_iterations = 1;
        return out;
    }

    RegularizerOperator reg_op =
        build_regularizer(RegularizerOperator::Kind::identity, dec.Nr, dec.Nc);
    SpectralCache cache = precompute_cache(Lambda, reg_op, b, dec);

    Irl1Report out;

    // Initialisation: whiteness-driven ADMM for the unit-weight nonnegative
    // l1 model; keep the final splitting state for the warm start.
    RegularizerKind reg;
    reg.tag = RegularizerKind::Tag::WL1_NONNEG;
    reg.weights.assign(static_cast<size_t>(dec.N()), 1.0);

    AdmmState state;
    {
        ReconstructionReport tik = exact_rwp_tik(b, Lambda, dec, opts.inner.search);
        state.x = tik.x_star;
        state.t = {state.x};
        state.lambda.assign(1, ImageGrid(dec.Nr, dec.Nc, 0.0));
        state.beta = opts.inner.beta;
        state.gamma = tik.mu_star / opts.inner.beta;
    }
    for (int k = 0; k < opts.inner.k_max; ++k) {
        irwp_admm_step(state, cache, reg_op, reg, opts.inner, &out.init);
        if (state.k >= 2 && out.init.change_trace.back() < opts.inner.tol) {
            out.init.converged = true;
            break;
        }
    }
    out.init.x_star = state.x;
    out.init.mu_star = state.gamma * state.beta;
    out.init.iterations = state.k;
    out.init.boundary_hit = state.boundary_hit;

    // Outer reweighting: mu re-selected at each outer start from the current
    // splitting, weights frozen along the inner ADMM iterations.
    int total_inner = state.k;
    double gamma = state.gamma;
    for (int h = 0; h < opts.h_max; ++h) {
        std::vector<ImageGrid> v = {state.t[0]};
        for (long i = 0; i < v[0].size(); ++i)
            v[0].data()[i] -= state.lambda[0].data()[i] / state.beta;
        std::vector<cplx> nu = compute_nu(cache, v);
        if (opts.inner.fixed_mu > 0.0) {
            gamma = opts.inner.fixed_mu / state.beta;
        } else if (opts.inner.dp_sigma > 0.0) {
            try {
                gamma = solve_dp_mu(cache, nu, opts.inner.dp_sigma, opts.inner.dp_tau,
                                    opts.inner.search);
            } catch (const NumericError&) {
                const double target = opts.inner.dp_tau *
                    std::sqrt(static_cast<double>(cache.n())) * opts.inner.dp_sigma;
                const double r_lo = residual_norm_of_mu(cache, nu, opts.inner.search.mu_lo);
                gamma = r_lo < target ? opts.inner.search.mu_lo : opts.inner.search.mu_hi;
            }
        } else {
            SearchOptions search = opts.inner.search;
            if (gamma > 0.0) search = warm_bracket(opts.inner.search, state, gamma);
            gamma = minimize_whiteness(cache, nu, search).mu;
        }
        const double mu_h = gamma * state.beta;

        Cel0Params params{mu_h, norms};
        reg.weights = cel0_weights(state.x.data(), params);
        out.mu_outer_trace.push_back(mu_h);
        out.objective_trace.push_back(cel0_objective(state.x, Lambda, dec, b, params));
        out.outer_x.push_back(state.x);

        AdmmOptions inner = opts.inner;
        inner.fixed_mu = mu_h;
        ImageGrid x_prev = state.x;
        for (int k = 0; k < opts.inner.k_max; ++k) {
            irwp_admm_step(state, cache, reg_op, reg, inner, &out.final);
            ++total_inner;
            if (out.final.change_trace.back() < opts.inner.tol) break;
        }
        ++out.outer_iterations;

        double dn = 0.0, bn = 0.0;
        for (long i = 0; i < state.x.size(); ++i) {
            const double d = state.x.data()[i] - x_prev.data()[i];
            dn += d * d;
            bn += x_prev.data()[i] * x_prev.data()[i];
        }
        const double outer_change = bn > 0.0 ? std::sqrt(dn / bn) : std::sqrt(dn);
        if (outer_change < opts.tol_outer) {
            out.final.converged = true;
            break;
        }
    }

    out.final.x_star = state.x;
    out.final.mu_star = gamma * state.beta;
    out.final.iterations = total_inner;
    out.final.boundary_hit = state.boundary_hit;
    if (sigma > 0.0) {
        ImageGrid r = lowres_residual(state.x, Lambda, dec, b);
        double rn = 0.0;
        for (double vv : r.data()) rn += vv * vv;
        out.final.tau_star = tau_star(std::sqrt(rn), dec.n(), sigma);
    }
    return out;
}

}  // namespace whitesr
