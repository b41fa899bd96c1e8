#include "whitesr/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <sstream>
#include <tuple>

namespace whitesr {

namespace {

// FFTW planning is not thread-safe; execution of distinct plans is.
std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

void run_fft(const std::complex<double>* in, std::complex<double>* out,
             int rows, int cols, int sign) {
    // Plans are cached per (rows, cols, direction) and reused via the
    // new-array interface; FFTW_UNALIGNED makes that valid for any buffer.
    static std::map<std::tuple<int, int, int>, fftw_plan> cache;
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(plan_mutex());
        auto& slot = cache[{rows, cols, sign}];
        if (!slot) {
            // Planned out-of-place; every execution below is out-of-place too.
            std::vector<std::complex<double>> s_in(static_cast<size_t>(rows) * cols);
            std::vector<std::complex<double>> s_out(s_in.size());
            slot = fftw_plan_dft_2d(rows, cols,
                                    reinterpret_cast<fftw_complex*>(s_in.data()),
                                    reinterpret_cast<fftw_complex*>(s_out.data()), sign,
                                    FFTW_ESTIMATE | FFTW_UNALIGNED | FFTW_PRESERVE_INPUT);
        }
        plan = slot;
    }
    fftw_execute_dft(plan,
                     reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
}

}  // namespace

SpectralGrid dft2(const ImageGrid& img) {
    SpectralGrid spec(img.rows(), img.cols());
    std::vector<std::complex<double>> in(img.size());
    for (long i = 0; i < img.size(); ++i) in[i] = img.data()[i];
    run_fft(in.data(), spec.data().data(), img.rows(), img.cols(), FFTW_FORWARD);
    return spec;
}

SpectralGrid idft2_complex(const SpectralGrid& spec) {
    SpectralGrid out(spec.rows(), spec.cols());
    run_fft(spec.data().data(), out.data().data(), spec.rows(), spec.cols(), FFTW_BACKWARD);
    const double scale = 1.0 / static_cast<double>(spec.size());
    for (auto& z : out.data()) z *= scale;
    return out;
}

ImageGrid idft2(const SpectralGrid& spec, double max_imag) {
    SpectralGrid full = idft2_complex(spec);
    double worst = 0.0;
    for (const auto& z : full.data()) worst = std::max(worst, std::abs(z.imag()));
    if (worst > max_imag) {
        std::ostringstream msg;
        msg << "idft2: imaginary residue " << worst << " exceeds " << max_imag;
        throw NumericError(msg.str());
    }
    ImageGrid out(spec.rows(), spec.cols());
    for (long i = 0; i < out.size(); ++i) out.data()[i] = full.data()[i].real();
    return out;
}

KernelSpec KernelSpec::parse(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.empty()) throw std::invalid_argument("KernelSpec: empty spec");
    if (parts[0] == "identity") return uniform(1, 1);
    if (parts[0] == "gaussian") {
        if (parts.size() != 3) throw std::invalid_argument("KernelSpec: want gaussian:band:sigma");
        return gaussian(std::stoi(parts[1]), std::stod(parts[2]));
    }
    if (parts[0] == "uniform") {
        if (parts.size() != 3) throw std::invalid_argument("KernelSpec: want uniform:dr:dc");
        return uniform(std::stoi(parts[1]), std::stoi(parts[2]));
    }
    throw std::invalid_argument("KernelSpec: unknown kind '" + parts[0] + "'");
}

ImageGrid build_kernel(const KernelSpec& spec) {
    if (spec.kind == KernelSpec::Kind::gaussian) {
        if (spec.band < 1 || spec.band % 2 == 0)
            throw std::invalid_argument("build_kernel: gaussian band must be odd positive");
        if (spec.sigma <= 0.0)
            throw std::invalid_argument("build_kernel: sigma must be positive");
        const int half = (spec.band - 1) / 2;
        ImageGrid k(spec.band, spec.band);
        double sum = 0.0;
        for (int i = -half; i <= half; ++i)
            for (int j = -half; j <= half; ++j) {
                double w = std::exp(-(i * i + j * j) / (2.0 * spec.sigma * spec.sigma));
                k.at(i + half, j + half) = w;
                sum += w;
            }
        for (auto& w : k.data()) w /= sum;
        return k;
    }
    if (spec.dr < 1 || spec.dc < 1)
        throw std::invalid_argument("build_kernel: uniform support must be positive");
    return ImageGrid(spec.dr, spec.dc, 1.0 / (spec.dr * spec.dc));
}

int kernel_anchor(int extent) {
    return (extent % 2 == 1) ? (extent - 1) / 2 : extent / 2 - 1;
}

SpectralDiagonal kernel_to_otf(const ImageGrid& kernel, int rows, int cols,
                               int anchor_r, int anchor_c) {
    if (kernel.rows() > rows || kernel.cols() > cols)
        throw std::invalid_argument("kernel_to_otf: kernel larger than target grid");
    if (anchor_r < 0) anchor_r = kernel_anchor(kernel.rows());
    if (anchor_c < 0) anchor_c = kernel_anchor(kernel.cols());
    ImageGrid embedded(rows, cols, 0.0);
    for (int i = 0; i < kernel.rows(); ++i)
        for (int j = 0; j < kernel.cols(); ++j) {
            int r = ((i - anchor_r) % rows + rows) % rows;
            int c = ((j - anchor_c) % cols + cols) % cols;
            embedded.at(r, c) += kernel.at(i, j);
        }
    return dft2(embedded);
}

ImageGrid convolve_kernels(const ImageGrid& a, const ImageGrid& b) {
    ImageGrid out(a.rows() + b.rows() - 1, a.cols() + b.cols() - 1, 0.0);
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            for (int p = 0; p < b.rows(); ++p)
                for (int q = 0; q < b.cols(); ++q)
                    out.at(i + p, j + q) += a.at(i, j) * b.at(p, q);
    return out;
}

}  // namespace whitesr
