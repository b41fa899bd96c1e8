#include "whitesr/operators.hpp"

#include <cmath>
#include <numeric>

namespace whitesr {

Decimator::Decimator(int dr_, int dc_, int Nr_, int Nc_)
    : dr(dr_), dc(dc_), Nr(Nr_), Nc(Nc_) {
    if (dr < 1 || dc < 1 || Nr < 1 || Nc < 1)
        throw std::invalid_argument("Decimator: non-positive sizes");
    if (Nr % dr != 0 || Nc % dc != 0)
        throw std::invalid_argument("Decimator: HR shape not divisible by factors");
}

ImageGrid decimate(const ImageGrid& x, const Decimator& dec) {
    if (x.rows() != dec.Nr || x.cols() != dec.Nc)
        throw std::invalid_argument("decimate: image does not match HR shape");
    ImageGrid out(dec.nr(), dec.nc());
    for (int i = 0; i < out.rows(); ++i)
        for (int j = 0; j < out.cols(); ++j)
            out.at(i, j) = x.at(i * dec.dr, j * dec.dc);
    return out;
}

ImageGrid zero_interpolate(const ImageGrid& b, const Decimator& dec) {
    if (b.rows() != dec.nr() || b.cols() != dec.nc())
        throw std::invalid_argument("zero_interpolate: image does not match LR shape");
    ImageGrid out(dec.Nr, dec.Nc, 0.0);
    for (int i = 0; i < b.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j)
            out.at(i * dec.dr, j * dec.dc) = b.at(i, j);
    return out;
}

AliasGroups alias_permutation(int nr, int nc, int dr, int dc) {
    if (nr < 1 || nc < 1 || dr < 1 || dc < 1)
        throw std::invalid_argument("alias_permutation: non-positive sizes");
    const int Nr = nr * dr, Nc = nc * dc;
    AliasGroups g;
    g.d = dr * dc;
    g.n = static_cast<long>(nr) * nc;
    g.src.assign(static_cast<size_t>(Nr) * Nc, 0);
    // HR frequency (u,v) with u = u_lo + p*nr, v = v_lo + q*nc goes to slot
    // (u_lo*nc + v_lo)*d + p*dc + q.
    for (int u = 0; u < Nr; ++u) {
        const int u_lo = u % nr, p = u / nr;
        for (int v = 0; v < Nc; ++v) {
            const int v_lo = v % nc, q = v / nc;
            const long group = static_cast<long>(u_lo) * nc + v_lo;
            const long offset = static_cast<long>(p) * dc + q;
            g.src[group * g.d + offset] = static_cast<long>(u) * Nc + v;
        }
    }
    return g;
}

long group_base(long i, int d) {
    if (i < 1) throw std::invalid_argument("group_base: index must be >= 1");
    return 1 + ((i - 1) / d) * d;
}

RegularizerOperator build_regularizer(RegularizerOperator::Kind kind, int Nr, int Nc) {
    RegularizerOperator reg;
    reg.kind = kind;
    if (kind == RegularizerOperator::Kind::identity) {
        SpectralDiagonal ones(Nr, Nc);
        for (auto& z : ones.data()) z = 1.0;
        reg.diagonals.push_back(std::move(ones));
        return reg;
    }
    // Periodic forward differences, stencil [-1, +1]: (Dh x)(i,j) = x(i,j+1) - x(i,j).
    // Diagonals are the DFT of the operator's first column (impulse response).
    ImageGrid dh(Nr, Nc, 0.0), dv(Nr, Nc, 0.0);
    dh.at(0, 0) = -1.0;
    dh.at(0, Nc - 1) += 1.0;
    dv.at(0, 0) += -1.0;
    dv.at(Nr - 1, 0) += 1.0;
    reg.diagonals.push_back(dft2(dh));
    reg.diagonals.push_back(dft2(dv));
    return reg;
}

std::vector<ImageGrid> apply_regularizer(const RegularizerOperator& reg, const ImageGrid& x) {
    SpectralGrid xt = dft2(x);
    std::vector<ImageGrid> out;
    out.reserve(reg.diagonals.size());
    double scale = 0.0;
    for (double v : x.data()) scale = std::max(scale, std::abs(v));
    for (const auto& diag : reg.diagonals) {
        SpectralGrid prod(x.rows(), x.cols());
        for (long i = 0; i < xt.size(); ++i) prod.data()[i] = diag.data()[i] * xt.data()[i];
        out.push_back(idft2(prod, 1e-8 * (1.0 + scale)));
    }
    return out;
}

}  // namespace whitesr
