#ifndef WHITESR_ADMM_HPP
#define WHITESR_ADMM_HPP

#include <string>
#include <vector>

#include "whitesr/prox.hpp"
#include "whitesr/spectral_solver.hpp"
#include "whitesr/whiteness.hpp"

namespace whitesr {

/// Regularisation model selector for the ADMM driver.
struct RegularizerKind {
    enum class Tag { TIK, TVI, TVA, WTV, WL1, WL1_NONNEG };
    Tag tag = Tag::TVI;
    std::vector<double> weights;     // alpha for WTV, w for WL1 variants
    TvaMode tva_mode = TvaMode::exact;
    Wl1NonnegMode wl1_mode = Wl1NonnegMode::exact;
    WtvAlphaOptions wtv_opts;

    bool uses_gradient() const {
        return tag == Tag::TIK || tag == Tag::TVI || tag == Tag::TVA || tag == Tag::WTV;
    }
    static RegularizerKind parse(const std::string& name);
    std::string name() const;
};

struct AdmmOptions {
    double beta = 1.0;
    double tol = 1e-5;        // relative change stopping threshold
    int k_max = 500;
    SearchOptions search;     // gamma-selection bracket and resolution
    int warm_start_after = 3; // centre the bracket on gamma^(k) past this iteration
    double fixed_mu = -1.0;   // > 0: skip whiteness selection, use gamma = fixed_mu/beta
    double dp_tau = -1.0;     // with dp_sigma > 0: discrepancy-principle selection
    double dp_sigma = -1.0;   //   instead of whiteness minimisation
};

struct AdmmState {
    ImageGrid x;
    std::vector<ImageGrid> t;       // s grids
    std::vector<ImageGrid> lambda;  // s grids, dual
    double beta = 1.0;
    double gamma = 0.0;             // current mu/beta
    double warm_lo = 0.0;           // gamma-search bracket in effect (0: unset)
    double warm_hi = 0.0;
    int k = 0;
    bool boundary_hit = false;
};

/// Warm-started gamma-search bracket: one decade each side of gamma, clamped
/// to the configured domain, and recentred only when gamma leaves the middle
/// of the current bracket (keeps the selection a fixed point at convergence).
SearchOptions warm_bracket(const SearchOptions& base, AdmmState& state, double gamma);

struct ReconstructionReport {
    ImageGrid x_star;
    double mu_star = 0.0;
    double tau_star = -1.0;   // filled when sigma is known
    int iterations = 0;
    bool converged = false;
    bool boundary_hit = false;
    std::vector<double> mu_trace;
    std::vector<double> tau_trace;      // empty when sigma unknown
    std::vector<double> change_trace;   // relative x change per iteration
    std::vector<double> violation_trace;  // ||t - Lx||_inf
    std::vector<double> isnr_trace;     // present only with ground truth
    std::vector<double> ssim_trace;
    std::vector<double> objective_trace;  // used by the IRL1 driver
    std::string notes;

    /// CSV `k,mu,tau,change,isnr,ssim`; metric columns only when present.
    std::string traces_csv() const;
};

/// Exact whiteness-principle selection for the Tikhonov l2-l2 model with
/// gradient L and v = 0; also the ADMM initialisation.
ReconstructionReport exact_rwp_tik(const ImageGrid& b, const SpectralDiagonal& Lambda,
                                   const Decimator& dec, const SearchOptions& opts = {},
                                   double epsilon = 0.0);

/// One ADMM iteration: v = t - lambda/beta, gamma by whiteness minimisation,
/// x-solve, optional WTV alpha refresh, prox step, dual update.
void irwp_admm_step(AdmmState& state, const SpectralCache& cache,
                    const RegularizerOperator& reg_op, RegularizerKind& reg,
                    const AdmmOptions& opts, ReconstructionReport* report);

struct GroundTruth {
    const ImageGrid* x = nullptr;
    const ImageGrid* b_bar = nullptr;  // bicubic baseline, HR size
};

/// Full iterated-whiteness ADMM run, initialised from the exact Tikhonov
/// solution (t0 = L x0).
ReconstructionReport irwp_admm_run(const ImageGrid& b, const SpectralDiagonal& Lambda,
                                   const Decimator& dec, RegularizerKind reg,
                                   const AdmmOptions& opts = {}, double sigma = -1.0,
                                   const GroundTruth& truth = {});

}  // namespace whitesr

#endif
