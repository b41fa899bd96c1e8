#ifndef WHITESR_FFT_HPP
#define WHITESR_FFT_HPP

#include <string>

#include "whitesr/image.hpp"

namespace whitesr {

// DFT convention used throughout: unnormalised forward (DC = sum of samples),
// inverse carries the 1/(rows*cols) factor.

/// Forward 2-D DFT of a real grid.
SpectralGrid dft2(const ImageGrid& img);

/// Inverse 2-D DFT; imaginary part is discarded by the caller where appropriate.
SpectralGrid idft2_complex(const SpectralGrid& spec);

/// Inverse 2-D DFT of a conjugate-symmetric spectrum, returning the real grid.
/// Throws NumericError if the imaginary residue exceeds max_imag (absolute).
ImageGrid idft2(const SpectralGrid& spec, double max_imag = 1e-9);

struct KernelSpec {
    enum class Kind { gaussian, uniform };
    Kind kind = Kind::gaussian;
    int band = 1;      // odd square support side (gaussian)
    double sigma = 1;  // pixels (gaussian)
    int dr = 1, dc = 1;  // uniform support

    static KernelSpec gaussian(int band, double sigma) {
        KernelSpec s; s.kind = Kind::gaussian; s.band = band; s.sigma = sigma; return s;
    }
    static KernelSpec uniform(int dr, int dc) {
        KernelSpec s; s.kind = Kind::uniform; s.dr = dr; s.dc = dc; return s;
    }
    /// Parse "gaussian:band:sigma", "uniform:dr:dc" or "identity".
    static KernelSpec parse(const std::string& text);
};

/// Small unit-sum convolution kernel.
ImageGrid build_kernel(const KernelSpec& spec);

/// Centre anchor of a kernel: ((band-1)/2) for odd sides, (ceil(d/2)-1) for even.
int kernel_anchor(int extent);

/// OTF of `kernel` zero-embedded into rows x cols with its anchor sample moved
/// to index (0,0).  Applying the diagonal in frequency equals circular
/// convolution with the kernel.  Anchors default to kernel_anchor() of each
/// extent; pass them explicitly for composed kernels.
SpectralDiagonal kernel_to_otf(const ImageGrid& kernel, int rows, int cols,
                               int anchor_r = -1, int anchor_c = -1);

/// Full (a_rows+b_rows-1) discrete convolution of two small kernels, used to
/// compose camera and pixel blurs.  The composed anchor is the sum of the two
/// input anchors.
ImageGrid convolve_kernels(const ImageGrid& a, const ImageGrid& b);

}  // namespace whitesr

#endif
