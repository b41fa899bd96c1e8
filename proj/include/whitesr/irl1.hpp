#ifndef WHITESR_IRL1_HPP
#define WHITESR_IRL1_HPP

#include "whitesr/admm.hpp"

namespace whitesr {

/// ||SK e_i||_2 per pixel.  Under periodic boundary conditions there are
/// exactly d distinct values, one per decimation phase; computed on d impulses
/// and broadcast.  Throws NumericError when any phase norm vanishes
/// (degenerate model: the CEL0 threshold divides by it).
std::vector<double> column_norms(const SpectralDiagonal& Lambda, const Decimator& dec);

struct Irl1Options {
    double tol_outer = 1e-4;
    int h_max = 30;
    AdmmOptions inner;   // inner.k_max defaults below
    Irl1Options() { inner.k_max = 200; }
};

struct Irl1Report {
    ReconstructionReport final;          // converged CEL0 solution
    ReconstructionReport init;           // WL1 (w == 1, nonnegative) initialisation
    int outer_iterations = 0;
    std::vector<double> mu_outer_trace;
    std::vector<double> objective_trace;  // CEL0 objective at each outer start
    std::vector<ImageGrid> outer_x;       // iterate x^(h) at each outer start
};

/// Iteratively reweighted l1 driver for the nonnegative CEL0 model: outer
/// reweighting with whiteness-based mu selection at each outer start, inner
/// ADMM with the nonnegative weighted-l1 prox and frozen (mu, w).
Irl1Report irwp_irl1_run(const ImageGrid& b, const SpectralDiagonal& Lambda,
                         const Decimator& dec, const Irl1Options& opts = {},
                         double sigma = -1.0, const GroundTruth& truth = {});

/// CEL0 objective Phi_CEL0(x) + (mu/2)||SKx - b||^2.
double cel0_objective(const ImageGrid& x, const SpectralDiagonal& Lambda,
                      const Decimator& dec, const ImageGrid& b, const Cel0Params& params);

}  // namespace whitesr

#endif
