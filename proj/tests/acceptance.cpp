// End-to-end acceptance checks.  Each check prints exactly one PASS/FAIL line;
// the process exits non-zero if any check fails.  Oracles are dense linear
// algebra and brute-force minimisation from tests/oracles.hpp, never the
// library's own spectral machinery.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "whitesr/admm.hpp"
#include "whitesr/irl1.hpp"
#include "whitesr/metrics.hpp"
#include "whitesr/sim.hpp"

using namespace whitesr;
using oracle::cplx;
using oracle::Mat;

namespace {

int g_failures = 0;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(int index, const std::string& title, bool pass, const std::string& detail) {
    std::printf("[%s] %2d %s (%s)\n", pass ? "PASS" : "FAIL", index, title.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

// ---- shared small-instance family (checks 1-2) ----------------------------

struct SmallInstance {
    Decimator dec;
    ImageGrid kernel;
    int anchor_r = 0, anchor_c = 0;
    RegularizerOperator::Kind reg_kind = RegularizerOperator::Kind::identity;
    ImageGrid b;
    std::vector<ImageGrid> v;
    double mu = 1.0;
};

std::vector<SmallInstance> make_small_instances() {
    std::vector<SmallInstance> out;
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::uniform_real_distribution<double> logmu(-2.0, 2.0);
    const int N = 12;
    for (int i = 0; i < 20; ++i) {
        SmallInstance inst;
        const int d = (i % 2) + 1;
        inst.dec = Decimator(d, d, N, N);
        if ((i / 2) % 2 == 0) {
            inst.kernel = build_kernel(KernelSpec::gaussian(3, 1.0));
            inst.anchor_r = inst.anchor_c = kernel_anchor(3);
        } else {
            inst.kernel = build_kernel(KernelSpec::uniform(2, 2));
            inst.anchor_r = inst.anchor_c = kernel_anchor(2);
        }
        inst.reg_kind = ((i / 4) % 2 == 0) ? RegularizerOperator::Kind::identity
                                           : RegularizerOperator::Kind::gradient;
        inst.b = ImageGrid(inst.dec.nr(), inst.dec.nc());
        for (auto& x : inst.b.data()) x = uni(rng);
        RegularizerOperator reg = build_regularizer(inst.reg_kind, N, N);
        for (int j = 0; j < reg.s(); ++j) {
            ImageGrid vj(N, N);
            for (auto& x : vj.data()) x = uni(rng);
            inst.v.push_back(std::move(vj));
        }
        inst.mu = std::pow(10.0, logmu(rng));
        out.push_back(std::move(inst));
    }
    return out;
}

// Dense solve of (mu A^H A + sum_j L_j^H L_j + eps I) x = mu A^H b + sum L_j^H v_j.
std::vector<cplx> dense_normal_solve(const SmallInstance& inst, double eps, double mu) {
    const int N = inst.dec.Nr, M = inst.dec.Nc;
    Mat K = oracle::convolution_matrix(inst.kernel, N, M, inst.anchor_r, inst.anchor_c);
    Mat S = oracle::decimation_matrix(N, M, inst.dec.dr, inst.dec.dc);
    Mat A = oracle::mul(S, K);
    Mat lhs = oracle::scale(oracle::mul(oracle::adjoint(A), A), mu);
    std::vector<cplx> rhs(static_cast<size_t>(N) * M, cplx(0.0));
    {
        std::vector<cplx> bb(inst.b.data().begin(), inst.b.data().end());
        Mat AH = oracle::adjoint(A);
        for (int r = 0; r < AH.rows; ++r) {
            cplx acc(0.0);
            for (int c = 0; c < AH.cols; ++c) acc += AH(r, c) * bb[static_cast<size_t>(c)];
            rhs[static_cast<size_t>(r)] = mu * acc;
        }
    }
    std::vector<Mat> Ls;
    if (inst.reg_kind == RegularizerOperator::Kind::identity) {
        Ls.push_back(oracle::eye(N * M));
    } else {
        Ls.push_back(oracle::dh_matrix(N, M));
        Ls.push_back(oracle::dv_matrix(N, M));
    }
    for (size_t j = 0; j < Ls.size(); ++j) {
        Mat LH = oracle::adjoint(Ls[j]);
        lhs = oracle::add(lhs, oracle::mul(LH, Ls[j]));
        const auto& vj = inst.v[j].data();
        for (int r = 0; r < LH.rows; ++r) {
            cplx acc(0.0);
            for (int c = 0; c < LH.cols; ++c) acc += LH(r, c) * vj[static_cast<size_t>(c)];
            rhs[static_cast<size_t>(r)] += acc;
        }
    }
    lhs = oracle::add(lhs, oracle::scale(oracle::eye(N * M), eps));
    return oracle::solve_dense(lhs, rhs);
}

// ---- shared super-resolution instance family (checks 5-9) -----------------

struct SRInstance {
    ImageGrid truth;
    ImageGrid b;
    ImageGrid b_bar;
    SpectralDiagonal Lambda;
    Decimator dec;
    double sigma = 0.1;
    // filled while running check 5
    ReconstructionReport tik;
    ReconstructionReport tvi;
    AdmmState tvi_state;       // converged splitting state
    SpectralCache tvi_cache;   // gradient regulariser cache
};

std::vector<SRInstance> make_sr_instances() {
    std::vector<SRInstance> out;
    for (int i = 0; i < 10; ++i) {
        SRInstance inst;
        PhantomSpec ph;
        ph.kind = PhantomSpec::Kind::blocks;
        ph.size = 256;
        ph.seed = 100 + static_cast<uint64_t>(i);
        inst.truth = make_phantom(ph).image;

        DegradationSpec spec;
        spec.kernel = KernelSpec::gaussian(13, 3.0);
        spec.dr = spec.dc = 4;
        spec.sigma = 0.1;
        spec.seed = 500 + static_cast<uint64_t>(i);
        DegradedData data = degrade(inst.truth, spec);
        inst.b = data.b;
        inst.b_bar = bicubic_upsample(data.b, 4, 4);
        inst.Lambda = degradation_otf(data, 256, 256);
        inst.dec = Decimator(4, 4, 256, 256);
        inst.sigma = data.sigma_used;
        out.push_back(std::move(inst));
    }
    return out;
}

// Run the iterated-whiteness TVI splitting keeping the final state available.
void run_tvi(SRInstance& inst) {
    RegularizerOperator reg_op =
        build_regularizer(RegularizerOperator::Kind::gradient, inst.dec.Nr, inst.dec.Nc);
    inst.tvi_cache = precompute_cache(inst.Lambda, reg_op, inst.b, inst.dec);
    RegularizerKind reg = RegularizerKind::parse("tvi");
    AdmmOptions opts;

    ReconstructionReport init = exact_rwp_tik(inst.b, inst.Lambda, inst.dec, opts.search);
    AdmmState state;
    state.x = init.x_star;
    state.t = apply_regularizer(reg_op, state.x);
    state.lambda.assign(reg_op.s(), ImageGrid(inst.dec.Nr, inst.dec.Nc, 0.0));
    state.beta = opts.beta;
    state.gamma = init.mu_star / opts.beta;

    ReconstructionReport rep;
    for (int k = 0; k < opts.k_max; ++k) {
        irwp_admm_step(state, inst.tvi_cache, reg_op, reg, opts, &rep);
        if (state.k >= 2 && rep.change_trace.back() < opts.tol) {
            rep.converged = true;
            break;
        }
    }
    rep.x_star = state.x;
    rep.mu_star = state.gamma * state.beta;
    rep.iterations = state.k;
    inst.tvi = std::move(rep);
    inst.tvi_state = std::move(state);
}

double residual_tau(const ImageGrid& x, const SRInstance& inst) {
    ImageGrid r = lowres_residual(x, inst.Lambda, inst.dec, inst.b);
    return tau_star(oracle::norm2(r.data()), inst.dec.n(), inst.sigma);
}

}  // namespace

int main() {
    // ---- 1: fast solver vs dense normal equations -------------------------
    {
        const auto t0 = std::chrono::steady_clock::now();
        auto instances = make_small_instances();
        double worst = 0.0;
        for (const auto& inst : instances) {
            RegularizerOperator reg =
                build_regularizer(inst.reg_kind, inst.dec.Nr, inst.dec.Nc);
            SpectralDiagonal Lambda = kernel_to_otf(inst.kernel, inst.dec.Nr, inst.dec.Nc,
                                                    inst.anchor_r, inst.anchor_c);
            SpectralCache cache = precompute_cache(Lambda, reg, inst.b, inst.dec);
            ImageGrid x = solve_l2l2(cache, inst.v, inst.mu);
            std::vector<cplx> xd = dense_normal_solve(inst, cache.epsilon, inst.mu);
            double dn = 0.0, rn = 0.0;
            for (long i = 0; i < x.size(); ++i) {
                dn += std::norm(x.data()[i] - xd[static_cast<size_t>(i)]);
                rn += std::norm(xd[static_cast<size_t>(i)]);
            }
            worst = std::max(worst, std::sqrt(dn / rn));
        }
        const double dt = seconds_since(t0);
        std::ostringstream d;
        d << "20 instances, max rel err " << worst << ", " << dt << " s";
        report(1, "fast quadratic solver matches dense normal equations", worst <= 1e-10 && dt < 5.0,
               d.str());
    }

    // ---- 2: closed-form whiteness vs measured residual whiteness ----------
    {
        const auto t0 = std::chrono::steady_clock::now();
        auto instances = make_small_instances();
        double worst = 0.0;
        for (const auto& inst : instances) {
            RegularizerOperator reg =
                build_regularizer(inst.reg_kind, inst.dec.Nr, inst.dec.Nc);
            SpectralDiagonal Lambda = kernel_to_otf(inst.kernel, inst.dec.Nr, inst.dec.Nc,
                                                    inst.anchor_r, inst.anchor_c);
            SpectralCache cache = precompute_cache(Lambda, reg, inst.b, inst.dec);
            std::vector<cplx> nu = compute_nu(cache, inst.v);

            // Dense LR forward operator, used to form the residual in extended
            // precision: at large mu the residual is a tiny difference of
            // O(1) quantities and double subtraction would swamp the check.
            Mat K = oracle::convolution_matrix(inst.kernel, inst.dec.Nr, inst.dec.Nc,
                                               inst.anchor_r, inst.anchor_c);
            Mat A = oracle::mul(oracle::decimation_matrix(inst.dec.Nr, inst.dec.Nc,
                                                          inst.dec.dr, inst.dec.dc), K);
            const int nr = inst.dec.nr(), nc = inst.dec.nc();
            for (int j = 0; j < 20; ++j) {
                const double mu = std::pow(10.0, -3.0 + 6.0 * j / 19.0);
                const double closed = whiteness_of_mu(cache, nu, mu);
                ImageGrid x = solve_l2l2(cache, inst.v, mu);
                std::vector<long double> r(static_cast<size_t>(inst.dec.n()));
                for (int row = 0; row < A.rows; ++row) {
                    long double acc = -static_cast<long double>(
                        inst.b.data()[static_cast<size_t>(row)]);
                    for (int col = 0; col < A.cols; ++col)
                        acc += static_cast<long double>(A(row, col).real()) *
                               static_cast<long double>(x.data()[static_cast<size_t>(col)]);
                    r[static_cast<size_t>(row)] = acc;
                }
                long double p2 = 0.0L, p4 = 0.0L;
                for (int u = 0; u < nr; ++u)
                    for (int vq = 0; vq < nc; ++vq) {
                        long double re = 0.0L, im = 0.0L;
                        for (int a = 0; a < nr; ++a)
                            for (int bq = 0; bq < nc; ++bq) {
                                const long double ph =
                                    -2.0L * oracle::kPi *
                                    (static_cast<long double>(u) * a / nr +
                                     static_cast<long double>(vq) * bq / nc);
                                const long double val = r[static_cast<size_t>(a) * nc + bq];
                                re += val * std::cos(ph);
                                im += val * std::sin(ph);
                            }
                        const long double m2 = re * re + im * im;
                        p2 += m2;
                        p4 += m2 * m2;
                    }
                const double measured = static_cast<double>(p4 / (p2 * p2));
                worst = std::max(worst, std::abs(closed - measured) / measured);
            }
        }
        const double dt = seconds_since(t0);
        std::ostringstream d;
        d << "20 instances x 20 mu, max rel err " << worst << ", " << dt << " s";
        report(2, "whiteness closed form equals the measured residual whiteness",
               worst <= 1e-8 && dt < 10.0, d.str());
    }

    // ---- 3: dense structural identities of the decimated DFT --------------
    {
        double worst = 0.0;
        for (int dr = 1; dr <= 2; ++dr)
            for (int dc = 1; dc <= 2; ++dc)
                for (int nr = 2; nr <= 3; ++nr)
                    for (int nc = 2; nc <= 3; ++nc) {
                        const int Nr = nr * dr, Nc = nc * dc;
                        const long N = static_cast<long>(Nr) * Nc;
                        const int d = dr * dc;
                        const long n = static_cast<long>(nr) * nc;

                        // sampling-spectrum structure: (1/N) F S^H S F^H is a
                        // (1/d)-scaled Kronecker replication pattern
                        Mat F = oracle::dft_matrix_2d(Nr, Nc);
                        Mat S = oracle::decimation_matrix(Nr, Nc, dr, dc);
                        Mat ShS = oracle::mul(oracle::adjoint(S), S);
                        Mat lhs = oracle::scale(
                            oracle::mul(oracle::mul(F, ShS), oracle::adjoint(F)),
                            1.0 / static_cast<double>(N));
                        Mat Jr(dr, dr), Jc(dc, dc);
                        for (auto& z : Jr.a) z = 1.0;
                        for (auto& z : Jc.a) z = 1.0;
                        Mat kr = oracle::kron(oracle::kron(Jr, oracle::eye(nr)),
                                              oracle::kron(Jc, oracle::eye(nc)));
                        worst = std::max(
                            worst, oracle::max_abs_diff(lhs, oracle::scale(kr, 1.0 / d)));

                        // the alias permutation conjugates that pattern into
                        // contiguous all-ones blocks
                        AliasGroups groups = alias_permutation(nr, nc, dr, dc);
                        Mat P(static_cast<int>(N), static_cast<int>(N));
                        for (long k = 0; k < N; ++k)
                            P(static_cast<int>(k), static_cast<int>(groups.src[k])) = 1.0;
                        Mat conj_form =
                            oracle::mul(oracle::mul(P, kr), oracle::adjoint(P));
                        Mat Jd(d, d);
                        for (auto& z : Jd.a) z = 1.0;
                        Mat blocks = oracle::kron(oracle::eye(static_cast<int>(n)), Jd);
                        worst = std::max(worst, oracle::max_abs_diff(conj_form, blocks));

                        // block-column blur matrix: conjugation by a diagonal
                        // replicated per group factors through the group norms,
                        // and the cached omega equals the dense diagonal
                        ImageGrid kernel = build_kernel(KernelSpec::uniform(2, 2));
                        SpectralDiagonal otf = kernel_to_otf(kernel, Nr, Nc);
                        std::vector<cplx> lam = groups.gather(otf.data());
                        Mat Lb(static_cast<int>(N), static_cast<int>(n));
                        for (long g = 0; g < n; ++g)
                            for (int l = 0; l < d; ++l)
                                Lb(static_cast<int>(g * d + l), static_cast<int>(g)) =
                                    lam[static_cast<size_t>(g * d + l)];
                        std::mt19937 rng(static_cast<unsigned>(1000 * dr + 100 * dc +
                                                               10 * nr + nc));
                        std::uniform_real_distribution<double> uni(0.5, 2.0);
                        Mat Phi(static_cast<int>(n), static_cast<int>(n));
                        Mat PhiId(static_cast<int>(N), static_cast<int>(N));
                        for (long g = 0; g < n; ++g) {
                            const double phi = uni(rng);
                            Phi(static_cast<int>(g), static_cast<int>(g)) = phi;
                            for (int l = 0; l < d; ++l)
                                PhiId(static_cast<int>(g * d + l),
                                      static_cast<int>(g * d + l)) = phi;
                        }
                        Mat left = oracle::mul(oracle::mul(oracle::adjoint(Lb), PhiId), Lb);
                        Mat right = oracle::mul(Phi, oracle::mul(oracle::adjoint(Lb), Lb));
                        worst = std::max(worst, oracle::max_abs_diff(left, right));

                        // cached per-group omega vs the dense weighted diagonal
                        RegularizerOperator reg = build_regularizer(
                            RegularizerOperator::Kind::gradient, Nr, Nc);
                        ImageGrid b(nr, nc, 0.5);
                        SpectralCache cache =
                            precompute_cache(otf, reg, b, Decimator(dr, dc, Nr, Nc));
                        Mat Psi(static_cast<int>(N), static_cast<int>(N));
                        for (long i = 0; i < N; ++i)
                            Psi(static_cast<int>(i), static_cast<int>(i)) =
                                1.0 / (cache.zeta[static_cast<size_t>(i)] + cache.epsilon);
                        Mat OmegaD = oracle::mul(oracle::mul(oracle::adjoint(Lb), Psi), Lb);
                        for (long g = 0; g < n; ++g)
                            worst = std::max(
                                worst,
                                std::abs(OmegaD(static_cast<int>(g), static_cast<int>(g)) -
                                         cplx(cache.omega[static_cast<size_t>(g)])));
                    }
        std::ostringstream d;
        d << "all shapes up to 3x3 groups, factors up to 2x2, max entry err " << worst;
        report(3, "dense decimated-spectrum identities hold entrywise", worst <= 1e-10, d.str());
    }

    // ---- 4: whiteness statistic of pure noise -----------------------------
    {
        const auto t0 = std::chrono::steady_clock::now();
        const long n = 64L * 64L;
        double mean = 0.0;
        for (uint64_t s = 0; s < 50; ++s) {
            ImageGrid e(64, 64);
            for (long i = 0; i < e.size(); ++i)
                e.data()[i] = counter_normal(9000 + s, static_cast<uint64_t>(i));
            mean += whiteness_of_image(e);
        }
        mean /= 50.0;
        const double dt = seconds_since(t0);
        std::ostringstream d;
        d << "mean W = " << mean << " = " << mean * static_cast<double>(n)
          << "/n over 50 seeds, " << dt << " s";
        report(4, "white-noise images score the theoretical whiteness level",
               mean >= 1.7 / static_cast<double>(n) && mean <= 2.3 / static_cast<double>(n) &&
                   dt < 2.0,
               d.str());
    }

    // ---- 5: selection quality on the super-resolution benchmark -----------
    auto sr = make_sr_instances();
    {
        bool pass = true;
        double worst_gap_tik = 0.0, worst_gap_tvi = 0.0;
        double tau_lo = std::numeric_limits<double>::infinity(), tau_hi = 0.0;
        for (auto& inst : sr) {
            // quadratic model: exact selection vs a fine fixed-mu grid
            inst.tik = exact_rwp_tik(inst.b, inst.Lambda, inst.dec);
            RegularizerOperator reg = build_regularizer(RegularizerOperator::Kind::gradient,
                                                        inst.dec.Nr, inst.dec.Nc);
            SpectralCache cache = precompute_cache(inst.Lambda, reg, inst.b, inst.dec);
            double best_tik = -std::numeric_limits<double>::infinity();
            for (int i = 0; i <= 80; ++i) {
                const double mu = std::pow(10.0, -4.0 + 8.0 * i / 80.0);
                best_tik = std::max(best_tik,
                                    isnr(inst.truth, solve_l2l2(cache, {}, mu), inst.b_bar));
            }
            const double got_tik = isnr(inst.truth, inst.tik.x_star, inst.b_bar);
            worst_gap_tik = std::max(worst_gap_tik, best_tik - got_tik);

            // TV model: whiteness-driven run vs fixed-mu grid runs
            run_tvi(inst);
            double best_tvi = -std::numeric_limits<double>::infinity();
            for (int i = 0; i <= 15; ++i) {
                const double mu = std::pow(10.0, -2.0 + 5.0 * i / 15.0);
                AdmmOptions fixed;
                fixed.fixed_mu = mu;
                fixed.k_max = 120;
                fixed.tol = 1e-4;
                ReconstructionReport rep = irwp_admm_run(inst.b, inst.Lambda, inst.dec,
                                                         RegularizerKind::parse("tvi"), fixed);
                best_tvi = std::max(best_tvi, isnr(inst.truth, rep.x_star, inst.b_bar));
            }
            const double got_tvi = isnr(inst.truth, inst.tvi.x_star, inst.b_bar);
            worst_gap_tvi = std::max(worst_gap_tvi, best_tvi - got_tvi);

            for (double tau : {residual_tau(inst.tik.x_star, inst),
                               residual_tau(inst.tvi.x_star, inst)}) {
                tau_lo = std::min(tau_lo, tau);
                tau_hi = std::max(tau_hi, tau);
            }
        }
        pass = pass && worst_gap_tik <= 1.0 && worst_gap_tvi <= 1.0 && tau_lo >= 0.9 &&
               tau_hi <= 1.3;
        std::ostringstream d;
        d << "10 instances; ISNR gap to grid best: quad " << worst_gap_tik << " dB, TV "
          << worst_gap_tvi << " dB; tau in [" << tau_lo << ", " << tau_hi << "]";
        report(5, "automatic selection is near-oracle on the benchmark", pass, d.str());
    }

    // ---- 6: discrepancy-principle contract --------------------------------
    {
        bool pass = true;
        double worst = 0.0;
        for (const auto& inst : sr) {
            const std::vector<cplx> nu(inst.tvi_cache.n(), cplx(0.0));
            const double mu_dp = solve_dp_mu(inst.tvi_cache, nu, inst.sigma, 1.0);
            const double tau = tau_star(residual_norm_of_mu(inst.tvi_cache, nu, mu_dp),
                                        inst.dec.n(), inst.sigma);
            worst = std::max(worst, std::abs(tau - 1.0));
            pass = pass && std::abs(tau - 1.0) <= 1e-3;
        }
        std::ostringstream d;
        d << "10 instances, max |tau - 1| = " << worst;
        report(6, "discrepancy-target root finding hits the requested residual level", pass,
               d.str());
    }

    // ---- 7: proximity operators vs brute-force minimisation ---------------
    {
        std::mt19937 rng(777);
        std::uniform_real_distribution<double> uni(-3.0, 3.0);
        std::uniform_real_distribution<double> upos(0.2, 3.0);
        double worst = 0.0, worst_exp = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const double qh = uni(rng), qv = uni(rng), beta = upos(rng);
            const double w = upos(rng), alpha = upos(rng);

            PairSeq q{{qh}, {qv}};
            auto pair_err = [&](const PairSeq& got,
                                const std::function<double(double, double)>& f) {
                auto [oh, ov] = oracle::prox_2d(f, qh, qv, beta);
                return std::hypot(got.h[0] - oh, got.v[0] - ov);
            };
            worst = std::max(worst, pair_err(prox_tvi(q, beta), [](double a, double b) {
                return std::hypot(a, b);
            }));
            worst = std::max(worst, pair_err(prox_tva(q, beta), [](double a, double b) {
                return std::abs(a) + std::abs(b);
            }));
            worst = std::max(
                worst, pair_err(prox_wtv(q, beta, {alpha}), [alpha](double a, double b) {
                    return alpha * std::hypot(a, b);
                }));
            const double s1 = prox_wl1({qh}, beta, {w})[0];
            worst = std::max(worst, std::abs(s1 - oracle::prox_1d([w](double t) {
                                       return w * std::abs(t);
                                   }, qh, beta)));
            const double s2 = prox_wl1_nonneg({qh}, beta, {w})[0];
            worst = std::max(worst, std::abs(s2 - oracle::prox_1d([w](double t) {
                                       return t < 0.0 ? 1e30 : w * t;
                                   }, qh, beta)));

            // non-expansiveness on a second random point
            const double rh = uni(rng), rv = uni(rng);
            PairSeq r{{rh}, {rv}};
            auto gap2 = [&](const PairSeq& a, const PairSeq& b) {
                return std::hypot(a.h[0] - b.h[0], a.v[0] - b.v[0]);
            };
            const double dq = std::hypot(qh - rh, qv - rv);
            worst_exp = std::max(worst_exp,
                                 gap2(prox_tvi(q, beta), prox_tvi(r, beta)) - dq);
            worst_exp = std::max(worst_exp,
                                 gap2(prox_tva(q, beta), prox_tva(r, beta)) - dq);
            worst_exp = std::max(
                worst_exp, gap2(prox_wtv(q, beta, {alpha}), prox_wtv(r, beta, {alpha})) - dq);
            worst_exp = std::max(worst_exp,
                                 std::abs(prox_wl1({qh}, beta, {w})[0] -
                                          prox_wl1({rh}, beta, {w})[0]) -
                                     std::abs(qh - rh));
            worst_exp = std::max(worst_exp,
                                 std::abs(prox_wl1_nonneg({qh}, beta, {w})[0] -
                                          prox_wl1_nonneg({rh}, beta, {w})[0]) -
                                     std::abs(qh - rh));
        }
        std::ostringstream d;
        d << "1000 draws; max oracle gap " << worst << "; max expansiveness excess "
          << worst_exp;
        report(7, "proximity operators match brute-force minimisation and are non-expansive",
               worst <= 1e-6 && worst_exp <= 1e-12, d.str());
    }

    // ---- 8: splitting fixed-point behaviour -------------------------------
    {
        bool pass = true;
        double worst_viol = 0.0, worst_drift = 0.0, worst_resel = 0.0;
        for (auto& inst : sr) {
            pass = pass && inst.tvi.iterations <= 500;
            worst_viol = std::max(worst_viol, inst.tvi.violation_trace.back());
            const auto& mus = inst.tvi.mu_trace;
            for (size_t k = mus.size() - 10; k < mus.size(); ++k)
                worst_drift =
                    std::max(worst_drift, std::abs(mus[k] - mus[k - 1]) / mus[k - 1]);

            // re-run the weight selection from the converged splitting
            const AdmmState& st = inst.tvi_state;
            std::vector<ImageGrid> v;
            for (size_t j = 0; j < st.t.size(); ++j) {
                ImageGrid vj = st.t[j];
                for (long i = 0; i < vj.size(); ++i)
                    vj.data()[i] -= st.lambda[j].data()[i] / st.beta;
                v.push_back(std::move(vj));
            }
            std::vector<cplx> nu = compute_nu(inst.tvi_cache, v);
            SearchOptions search;
            if (st.warm_lo > 0.0 && st.warm_hi > st.warm_lo) {
                search.mu_lo = st.warm_lo;
                search.mu_hi = st.warm_hi;
            } else {
                search.mu_lo = st.gamma / 10.0;
                search.mu_hi = st.gamma * 10.0;
            }
            const double gamma2 = minimize_whiteness(inst.tvi_cache, nu, search).mu;
            worst_resel = std::max(worst_resel, std::abs(gamma2 - st.gamma) / st.gamma);
        }
        pass = pass && worst_viol < 1e-4 && worst_drift < 1e-2 && worst_resel <= 1e-3;
        std::ostringstream d;
        d << "10 runs; max violation " << worst_viol << ", max mu drift " << worst_drift
          << ", reselection gap " << worst_resel;
        report(8, "splitting converges to a consistent whiteness fixed point", pass, d.str());
    }

    // ---- 9: model quality ordering ----------------------------------------
    {
        // A coarser blocks image than the selection benchmark: with 16-pixel
        // cells the edge-versus-texture trade-off separates the models cleanly
        // (at 8-pixel cells the 13-tap blur erases most structure and every
        // model collapses towards the same smooth reconstruction).
        PhantomSpec ph;
        ph.kind = PhantomSpec::Kind::blocks;
        ph.size = 256;
        ph.cell = 16;
        ph.seed = 300;
        ImageGrid truth = make_phantom(ph).image;
        DegradationSpec spec;
        spec.kernel = KernelSpec::gaussian(13, 3.0);
        spec.dr = spec.dc = 4;
        spec.sigma = 0.1;
        spec.seed = 500;
        DegradedData data = degrade(truth, spec);
        Decimator dec(4, 4, 256, 256);
        SpectralDiagonal Lambda = degradation_otf(data, 256, 256);

        ReconstructionReport tik = exact_rwp_tik(data.b, Lambda, dec);
        ReconstructionReport tvi = irwp_admm_run(data.b, Lambda, dec,
                                                 RegularizerKind::parse("tvi"));
        ReconstructionReport tva = irwp_admm_run(data.b, Lambda, dec,
                                                 RegularizerKind::parse("tva"));
        const double p_tva = psnr(truth, tva.x_star);
        const double p_tvi = psnr(truth, tvi.x_star);
        const double p_tik = psnr(truth, tik.x_star);
        const double p_bic = psnr(truth, bicubic_upsample(data.b, 4, 4));
        const bool pass = p_tva >= p_tvi && p_tvi >= p_tik && p_tik >= p_bic;
        std::ostringstream d;
        d << "PSNR dB: tva " << p_tva << " >= tvi " << p_tvi << " >= tik " << p_tik
          << " >= bicubic " << p_bic << "; gaps " << p_tva - p_tvi << ", " << p_tvi - p_tik
          << ", " << p_tik - p_bic;
        report(9, "reconstruction quality respects the model ordering", pass, d.str());
    }

    // ---- 10: reweighting surrogate and localisation gain ------------------
    {
        PhantomSpec ph;
        ph.kind = PhantomSpec::Kind::points;
        ph.size = 64;
        ph.points = 5;
        ph.min_separation = 8.0;
        ph.seed = 5;
        Phantom phantom = make_phantom(ph);

        DegradationSpec spec;
        spec.kernel = KernelSpec::gaussian(9, 2.0);
        spec.dr = spec.dc = 2;
        spec.percent = 1.0;
        spec.seed = 6;
        DegradedData data = degrade(phantom.image, spec);
        Decimator dec(2, 2, 64, 64);
        SpectralDiagonal Lambda = degradation_otf(data, 64, 64);

        Irl1Report rep = irwp_irl1_run(data.b, Lambda, dec, {}, data.sigma_used);
        std::vector<double> norms = column_norms(Lambda, dec);

        double worst_tangency = 0.0, worst_major = -std::numeric_limits<double>::infinity();
        std::mt19937 rng(4242);
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (size_t h = 0; h < rep.outer_x.size(); ++h) {
            const Cel0Params params{rep.mu_outer_trace[h], norms};
            const std::vector<double>& x0 = rep.outer_x[h].data();
            const std::vector<double> w = cel0_weights(x0, params);
            const double f0 = cel0_penalty(x0, params);
            auto surrogate = [&](const std::vector<double>& x) {
                double acc = f0;
                for (size_t i = 0; i < x.size(); ++i)
                    acc += w[i] * (std::abs(x[i]) - std::abs(x0[i]));
                return acc;
            };
            worst_tangency = std::max(worst_tangency, std::abs(surrogate(x0) - f0));
            for (int p = 0; p < 50; ++p) {
                std::vector<double> probe = x0;
                for (size_t i = 0; i < probe.size(); ++i) {
                    const double thresh = std::sqrt(2.0 / params.mu) / params.col_norms[i];
                    probe[i] += thresh * gauss(rng);
                }
                worst_major = std::max(worst_major,
                                       cel0_penalty(probe, params) - surrogate(probe));
            }
        }
        const double j_init =
            jaccard(phantom.truth_points, detect_points(rep.init.x_star), 2.0);
        const double j_final =
            jaccard(phantom.truth_points, detect_points(rep.final.x_star), 2.0);
        const bool pass =
            worst_tangency <= 1e-10 && worst_major <= 1e-10 && j_final >= j_init;
        std::ostringstream d;
        d << rep.outer_iterations << " outer steps; tangency gap " << worst_tangency
          << ", majorisation excess " << worst_major << "; Jaccard " << j_init << " -> "
          << j_final;
        report(10, "reweighted surrogate is tangent-majorising and sharpens localisation",
               pass, d.str());
    }

    // ---- 11: no-decimation reduction to plain deconvolution ---------------
    {
        PhantomSpec ph;
        ph.kind = PhantomSpec::Kind::blocks;
        ph.size = 64;
        ph.seed = 9;
        ImageGrid truth = make_phantom(ph).image;
        DegradationSpec spec;
        spec.kernel = KernelSpec::gaussian(7, 1.5);
        spec.dr = spec.dc = 1;
        spec.sigma = 0.05;
        spec.seed = 10;
        DegradedData data = degrade(truth, spec);
        Decimator dec(1, 1, 64, 64);
        SpectralDiagonal Lambda = degradation_otf(data, 64, 64);

        ReconstructionReport pipeline = exact_rwp_tik(data.b, Lambda, dec);

        // Independent deconvolution path: per-frequency closed forms for the
        // solution and the residual whiteness, plus the same deterministic
        // grid-then-golden-section search.
        RegularizerOperator reg =
            build_regularizer(RegularizerOperator::Kind::gradient, 64, 64);
        const long N = 64L * 64L;
        std::vector<double> zeta(static_cast<size_t>(N), 0.0);
        for (const auto& g : reg.diagonals)
            for (long i = 0; i < N; ++i)
                zeta[static_cast<size_t>(i)] += std::norm(g.data()[static_cast<size_t>(i)]);
        double zmax = 0.0;
        for (double z : zeta) zmax = std::max(zmax, z);
        const double eps = 1e-10 * (zmax + 1.0);
        SpectralGrid bt = dft2(data.b);
        std::vector<double> omega(static_cast<size_t>(N));
        for (long i = 0; i < N; ++i)
            omega[static_cast<size_t>(i)] =
                std::norm(Lambda.data()[static_cast<size_t>(i)]) /
                (zeta[static_cast<size_t>(i)] + eps);

        auto W = [&](double mu) {
            double p2 = 0.0, p4 = 0.0;
            for (long i = 0; i < N; ++i) {
                const double t2 = std::norm((cplx(0.0) - bt.data()[static_cast<size_t>(i)]) /
                                            (1.0 + omega[static_cast<size_t>(i)] * mu));
                p2 += t2;
                p4 += t2 * t2;
            }
            return p4 / (p2 * p2);
        };
        // same search arithmetic as the pipeline: 60-point log grid on
        // [1e-4, 1e4], golden-section to relative width 1e-3, midpoint result
        const int m = 60;
        const double llo = std::log(1e-4), lhi = std::log(1e4);
        std::vector<double> grid(m);
        int best = 0;
        double bestW = std::numeric_limits<double>::infinity();
        for (int i = 0; i < m; ++i) {
            grid[static_cast<size_t>(i)] = llo + (lhi - llo) * i / (m - 1);
            const double w = W(std::exp(grid[static_cast<size_t>(i)]));
            if (std::isfinite(w) && w < bestW) { bestW = w; best = i; }
        }
        double a = grid[static_cast<size_t>(best - 1)], bb = grid[static_cast<size_t>(best + 1)];
        const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
        double c = bb - gr * (bb - a), dpt = a + gr * (bb - a);
        double fc = W(std::exp(c)), fd = W(std::exp(dpt));
        while (bb - a > 1e-3) {
            if (fc < fd) {
                bb = dpt; dpt = c; fd = fc;
                c = bb - gr * (bb - a);
                fc = W(std::exp(c));
            } else {
                a = c; c = dpt; fc = fd;
                dpt = a + gr * (bb - a);
                fd = W(std::exp(dpt));
            }
        }
        const double mu_deconv = std::exp(0.5 * (a + bb));

        SpectralGrid xt(64, 64);
        for (long i = 0; i < N; ++i) {
            const cplx lam = Lambda.data()[static_cast<size_t>(i)];
            xt.data()[static_cast<size_t>(i)] =
                mu_deconv * std::conj(lam) * bt.data()[static_cast<size_t>(i)] /
                (mu_deconv * std::norm(lam) + zeta[static_cast<size_t>(i)] + eps);
        }
        ImageGrid x_deconv = idft2(xt, 1e-6);

        const double mu_gap = std::abs(mu_deconv - pipeline.mu_star) / pipeline.mu_star;
        const double x_gap = oracle::rel_l2_diff(x_deconv.data(), pipeline.x_star.data());
        std::ostringstream d;
        d << "mu " << pipeline.mu_star << " vs " << mu_deconv << " (rel gap " << mu_gap
          << "), solution rel gap " << x_gap;
        report(11, "unit decimation reduces exactly to plain deconvolution",
               mu_gap <= 1e-12 && x_gap <= 1e-12, d.str());
    }

    std::printf("%s: %d/11 checks passed\n", g_failures == 0 ? "OK" : "FAILURES",
                11 - g_failures);
    return g_failures == 0 ? 0 : 1;
}
