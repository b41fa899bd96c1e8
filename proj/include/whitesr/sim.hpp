#ifndef WHITESR_SIM_HPP
#define WHITESR_SIM_HPP

#include <cstdint>
#include <string>

#include "whitesr/metrics.hpp"
#include "whitesr/operators.hpp"

namespace whitesr {

/// Seeded forward degradation: b = decimate(K x) + e, e ~ N(0, sigma^2) from a
/// counter-based generator (bit-identical per seed, stream-safe in parallel).
struct DegradationSpec {
    KernelSpec kernel;         // camera blur
    bool pixel_blur = true;    // compose a uniform dr x dc blur into K
    int dr = 1, dc = 1;
    double sigma = 0.0;        // absolute noise std; ignored if percent >= 0
    double percent = -1.0;     // sigma = percent/100 * max noiseless LR value
    uint64_t seed = 0;
};

struct DegradedData {
    ImageGrid b;
    double sigma_used = 0.0;
    ImageGrid composed_kernel;  // camera (*) pixel blur, unit sum
    int anchor_r = 0, anchor_c = 0;
};

DegradedData degrade(const ImageGrid& x, const DegradationSpec& spec);

struct ComposedKernel {
    ImageGrid kernel;
    int anchor_r = 0, anchor_c = 0;
};

/// Camera blur, optionally composed with the uniform dr x dc pixel blur.
/// The anchor of the composition is the sum of the input anchors.
ComposedKernel compose_kernel(const KernelSpec& camera, bool pixel_blur, int dr, int dc);

/// Composed blur OTF for the spec on the HR grid of x.
SpectralDiagonal degradation_otf(const DegradedData& data, int Nr, int Nc);

struct PhantomSpec {
    enum class Kind { blocks, geometric, points };
    Kind kind = Kind::blocks;
    int size = 256;
    uint64_t seed = 0;
    int cell = 8;          // blocks: cell side in pixels
    int shapes = 12;       // geometric: number of rectangles/disks
    int points = 5;        // points: impulse count
    double min_separation = 8.0;
    double intensity = 1.0;

    static Kind parse_kind(const std::string& name);
};

struct Phantom {
    ImageGrid image;
    PointList truth_points;  // only for points phantoms
};

Phantom make_phantom(const PhantomSpec& spec);

/// Counter-based uniform in [0,1) and standard normal, keyed by (seed, index).
double counter_uniform(uint64_t seed, uint64_t index);
double counter_normal(uint64_t seed, uint64_t index);

}  // namespace whitesr

#endif
