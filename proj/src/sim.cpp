#include "whitesr/sim.hpp"

#include <cmath>

#include "whitesr/spectral_solver.hpp"

namespace whitesr {

namespace {

// splitmix64 over (seed, index); stateless, so parallel sweeps with distinct
// seeds never share streams.
uint64_t mix(uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

uint64_t keyed(uint64_t seed, uint64_t index) {
    return mix(mix(seed) ^ mix(index * 0x9e3779b97f4a7c15ULL + 0x6a09e667f3bcc909ULL));
}

}  // namespace

double counter_uniform(uint64_t seed, uint64_t index) {
    return (keyed(seed, index) >> 11) * 0x1.0p-53;
}

double counter_normal(uint64_t seed, uint64_t index) {
    // Box-Muller on two counter draws; u1 kept away from 0.
    const double u1 = (counter_uniform(seed, 2 * index) + 0x1.0p-54);
    const double u2 = counter_uniform(seed, 2 * index + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

ComposedKernel compose_kernel(const KernelSpec& camera_spec, bool pixel_blur, int dr, int dc) {
    ComposedKernel out;
    ImageGrid camera = build_kernel(camera_spec);
    const int ar = kernel_anchor(camera.rows());
    const int ac = kernel_anchor(camera.cols());
    if (pixel_blur && (dr > 1 || dc > 1)) {
        ImageGrid pixel = build_kernel(KernelSpec::uniform(dr, dc));
        out.anchor_r = ar + kernel_anchor(pixel.rows());
        out.anchor_c = ac + kernel_anchor(pixel.cols());
        out.kernel = convolve_kernels(camera, pixel);
    } else {
        out.kernel = std::move(camera);
        out.anchor_r = ar;
        out.anchor_c = ac;
    }
    return out;
}

DegradedData degrade(const ImageGrid& x, const DegradationSpec& spec) {
    Decimator dec(spec.dr, spec.dc, x.rows(), x.cols());

    DegradedData out;
    ComposedKernel ck = compose_kernel(spec.kernel, spec.pixel_blur, spec.dr, spec.dc);
    out.composed_kernel = std::move(ck.kernel);
    out.anchor_r = ck.anchor_r;
    out.anchor_c = ck.anchor_c;

    SpectralDiagonal otf = kernel_to_otf(out.composed_kernel, x.rows(), x.cols(),
                                         out.anchor_r, out.anchor_c);
    SpectralGrid xt = dft2(x);
    SpectralGrid prod(x.rows(), x.cols());
    for (long i = 0; i < xt.size(); ++i) prod.data()[i] = otf.data()[i] * xt.data()[i];
    double scale = 0.0;
    for (double v : x.data()) scale = std::max(scale, std::abs(v));
    ImageGrid blurred = idft2(prod, 1e-8 * (1.0 + scale));
    ImageGrid clean = decimate(blurred, dec);

    double sigma = spec.sigma;
    if (spec.percent >= 0.0) {
        double peak = 0.0;
        for (double v : clean.data()) peak = std::max(peak, std::abs(v));
        sigma = spec.percent / 100.0 * peak;
    }
    if (sigma < 0.0) throw std::invalid_argument("degrade: negative noise level");

    out.b = clean;
    if (sigma > 0.0)
        for (long i = 0; i < out.b.size(); ++i)
            out.b.data()[i] += sigma * counter_normal(spec.seed, static_cast<uint64_t>(i));
    out.sigma_used = sigma;
    return out;
}

SpectralDiagonal degradation_otf(const DegradedData& data, int Nr, int Nc) {
    return kernel_to_otf(data.composed_kernel, Nr, Nc, data.anchor_r, data.anchor_c);
}

PhantomSpec::Kind PhantomSpec::parse_kind(const std::string& name) {
    if (name == "blocks") return Kind::blocks;
    if (name == "geometric") return Kind::geometric;
    if (name == "points") return Kind::points;
    throw std::invalid_argument("make_phantom: unknown kind '" + name + "'");
}

Phantom make_phantom(const PhantomSpec& spec) {
    if (spec.size < 1) throw std::invalid_argument("make_phantom: non-positive size");
    Phantom out;
    out.image = ImageGrid(spec.size, spec.size, 0.0);
    const int n = spec.size;

    switch (spec.kind) {
        case PhantomSpec::Kind::blocks: {
            // qr-like: random binary cells, axis-aligned edges.
            const int cell = std::max(1, spec.cell);
            const int cells = (n + cell - 1) / cell;
            uint64_t idx = 0;
            for (int ci = 0; ci < cells; ++ci)
                for (int cj = 0; cj < cells; ++cj) {
                    const double v = counter_uniform(spec.seed, idx++) < 0.5 ? 0.0 : spec.intensity;
                    for (int i = ci * cell; i < std::min((ci + 1) * cell, n); ++i)
                        for (int j = cj * cell; j < std::min((cj + 1) * cell, n); ++j)
                            out.image.at(i, j) = v;
                }
            break;
        }
        case PhantomSpec::Kind::geometric: {
            // Overlapping constant-intensity rectangles and disks.
            uint64_t idx = 0;
            auto next = [&] { return counter_uniform(spec.seed, idx++); };
            for (int s = 0; s < spec.shapes; ++s) {
                const double level = (0.2 + 0.8 * next()) * spec.intensity;
                const bool disk = next() < 0.5;
                const double cy = next() * n, cx = next() * n;
                const double ry = (0.05 + 0.2 * next()) * n;
                const double rx = (0.05 + 0.2 * next()) * n;
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        const double dy = (i - cy) / ry, dx = (j - cx) / rx;
                        const bool inside = disk ? (dy * dy + dx * dx <= 1.0)
                                                 : (std::abs(dy) <= 1.0 && std::abs(dx) <= 1.0);
                        if (inside) out.image.at(i, j) = level;
                    }
            }
            break;
        }
        case PhantomSpec::Kind::points: {
            // k unit impulses with minimum pairwise separation.
            uint64_t idx = 0;
            const long max_tries = 10000L * std::max(1, spec.points);
            long tries = 0;
            while (static_cast<int>(out.truth_points.size()) < spec.points) {
                if (++tries > max_tries)
                    throw NumericError("make_phantom: separation constraint infeasible");
                const double r = std::floor(counter_uniform(spec.seed, idx++) * n);
                const double c = std::floor(counter_uniform(spec.seed, idx++) * n);
                bool ok = true;
                for (const auto& p : out.truth_points)
                    if (std::hypot(p.first - r, p.second - c) < spec.min_separation) {
                        ok = false;
                        break;
                    }
                if (!ok) continue;
                out.truth_points.emplace_back(r, c);
                out.image.at(static_cast<int>(r), static_cast<int>(c)) = spec.intensity;
            }
            break;
        }
    }
    return out;
}

}  // namespace whitesr
