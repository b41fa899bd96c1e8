#ifndef WHITESR_OPERATORS_HPP
#define WHITESR_OPERATORS_HPP

#include <vector>

#include "whitesr/fft.hpp"
#include "whitesr/image.hpp"

namespace whitesr {

/// Decimation operator S: selects the top-left sample of each dr x dc cell.
/// S S^H = I on the low-resolution space; S^H interpolates with zeros.
struct Decimator {
    int dr = 1, dc = 1;   // decimation factors
    int Nr = 0, Nc = 0;   // high-resolution dimensions, Nr = nr*dr, Nc = nc*dc

    Decimator() = default;
    Decimator(int dr_, int dc_, int Nr_, int Nc_);

    int nr() const { return Nr / dr; }
    int nc() const { return Nc / dc; }
    int d() const { return dr * dc; }
    long N() const { return static_cast<long>(Nr) * Nc; }
    long n() const { return static_cast<long>(nr()) * nc(); }
};

ImageGrid decimate(const ImageGrid& x, const Decimator& dec);
ImageGrid zero_interpolate(const ImageGrid& b, const Decimator& dec);

/// Index structure grouping the d high-resolution frequencies that alias onto
/// each low-resolution frequency.  Contiguous blocks of size d after
/// permutation; src[k] is the unpermuted (DFT-ordered) index feeding permuted
/// slot k.
struct AliasGroups {
    std::vector<long> src;  // hat index -> tilde index, length N
    int d = 1;              // group size dr*dc
    long n = 0;             // number of groups

    /// Permute a DFT-ordered vector into alias-group order.
    template <class T>
    std::vector<T> gather(const std::vector<T>& tilde) const {
        std::vector<T> hat(tilde.size());
        for (size_t k = 0; k < src.size(); ++k) hat[k] = tilde[src[k]];
        return hat;
    }
    /// Inverse of gather().
    template <class T>
    std::vector<T> scatter(const std::vector<T>& hat) const {
        std::vector<T> tilde(hat.size());
        for (size_t k = 0; k < src.size(); ++k) tilde[src[k]] = hat[k];
        return tilde;
    }
};

AliasGroups alias_permutation(int nr, int nc, int dr, int dc);

/// First index of the block containing 1-based index i, blocks of size d.
long group_base(long i, int d);

/// Stacked circular-convolution regularisation operator L = (L_1 .. L_s).
struct RegularizerOperator {
    enum class Kind { identity, gradient };
    Kind kind = Kind::identity;
    std::vector<SpectralDiagonal> diagonals;  // s diagonals in DFT order

    int s() const { return static_cast<int>(diagonals.size()); }
};

/// identity: single all-ones diagonal; gradient: periodic forward differences
/// D_h, D_v with stencil [-1, +1].
RegularizerOperator build_regularizer(RegularizerOperator::Kind kind, int Nr, int Nc);

/// L x as s grids, applied via FFT.
std::vector<ImageGrid> apply_regularizer(const RegularizerOperator& reg, const ImageGrid& x);

}  // namespace whitesr

#endif
