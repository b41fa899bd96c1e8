#include <doctest.h>

#include <complex>

#include "oracles.hpp"
#include "whitesr/fft.hpp"

using namespace whitesr;
using cplx = std::complex<double>;

TEST_SUITE("fft") {

TEST_CASE("impulse transforms to all-ones spectrum") {
    ImageGrid x(4, 4, 0.0);
    x.at(0, 0) = 1.0;
    SpectralGrid s = dft2(x);
    for (const auto& z : s.data()) {
        CHECK(z.real() == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(z.imag() == doctest::Approx(0.0).epsilon(1e-14));
    }
}

TEST_CASE("constant image concentrates at DC") {
    const double c = 0.37;
    ImageGrid x(3, 5, c);
    SpectralGrid s = dft2(x);
    CHECK(std::abs(s.at(0, 0) - cplx(15.0 * c)) < 1e-12);
    for (int u = 0; u < 3; ++u)
        for (int v = 0; v < 5; ++v)
            if (u || v) CHECK(std::abs(s.at(u, v)) < 1e-12);
}

TEST_CASE("roundtrip, Parseval, and direct-DFT oracle on random 8x8") {
    ImageGrid x = oracle::random_image(8, 8, 11);
    SpectralGrid s = dft2(x);

    auto ref = oracle::dft2_direct(x);
    for (long i = 0; i < s.size(); ++i) CHECK(std::abs(s.data()[i] - ref[i]) < 1e-10);

    ImageGrid back = idft2(s);
    double num = 0.0, den = 0.0;
    for (long i = 0; i < x.size(); ++i) {
        num += (back.data()[i] - x.data()[i]) * (back.data()[i] - x.data()[i]);
        den += x.data()[i] * x.data()[i];
    }
    CHECK(std::sqrt(num / den) < 1e-12);

    double spatial = 0.0, spectral = 0.0;
    for (double v : x.data()) spatial += v * v;
    for (const auto& z : s.data()) spectral += std::norm(z);
    CHECK(spatial == doctest::Approx(spectral / 64.0).epsilon(1e-12));
}

TEST_CASE("dft2 is linear") {
    ImageGrid a = oracle::random_image(6, 7, 1), b = oracle::random_image(6, 7, 2);
    ImageGrid mix(6, 7);
    for (long i = 0; i < mix.size(); ++i) mix.data()[i] = 2.5 * a.data()[i] - 0.5 * b.data()[i];
    SpectralGrid sa = dft2(a), sb = dft2(b), sm = dft2(mix);
    for (long i = 0; i < sm.size(); ++i)
        CHECK(std::abs(sm.data()[i] - (2.5 * sa.data()[i] - 0.5 * sb.data()[i])) < 1e-10);
}

TEST_CASE("forward transform of a real grid is conjugate-symmetric") {
    ImageGrid x = oracle::random_image(6, 4, 5);
    SpectralGrid s = dft2(x);
    for (int u = 0; u < 6; ++u)
        for (int v = 0; v < 4; ++v)
            CHECK(std::abs(s.at(u, v) - std::conj(s.at((6 - u) % 6, (4 - v) % 4))) < 1e-10);
}

TEST_CASE("gaussian kernel weights, band 3 sigma 0.5") {
    ImageGrid k = build_kernel(KernelSpec::gaussian(3, 0.5));
    CHECK(k.at(1, 1) == doctest::Approx(0.619347).epsilon(1e-5));
    CHECK(k.at(0, 1) == doctest::Approx(0.083820).epsilon(1e-4));
    CHECK(k.at(0, 0) == doctest::Approx(0.011344).epsilon(1e-3));
    double sum = 0.0;
    for (double v : k.data()) sum += v;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("uniform and degenerate kernels") {
    ImageGrid u = build_kernel(KernelSpec::uniform(2, 2));
    for (double v : u.data()) CHECK(v == doctest::Approx(0.25));
    ImageGrid g1 = build_kernel(KernelSpec::gaussian(1, 2.0));
    CHECK(g1.size() == 1);
    CHECK(g1.at(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("kernel construction rejects bad parameters") {
    KernelSpec even = KernelSpec::gaussian(4, 1.0);
    CHECK_THROWS_AS(build_kernel(even), std::invalid_argument);
    KernelSpec bad_sigma = KernelSpec::gaussian(3, 0.0);
    CHECK_THROWS_AS(build_kernel(bad_sigma), std::invalid_argument);
}

TEST_CASE("kernel spec parsing") {
    KernelSpec g = KernelSpec::parse("gaussian:13:3");
    CHECK(g.kind == KernelSpec::Kind::gaussian);
    CHECK(g.band == 13);
    CHECK(g.sigma == doctest::Approx(3.0));
    KernelSpec u = KernelSpec::parse("uniform:2:4");
    CHECK(u.kind == KernelSpec::Kind::uniform);
    CHECK(u.dr == 2);
    CHECK(u.dc == 4);
    KernelSpec id = KernelSpec::parse("identity");
    CHECK(build_kernel(id).size() == 1);
    CHECK_THROWS_AS(KernelSpec::parse("triangle:3"), std::invalid_argument);
    CHECK_THROWS_AS(KernelSpec::parse("gaussian:13"), std::invalid_argument);
}

TEST_CASE("otf of the identity kernel is all ones") {
    ImageGrid k(1, 1, 1.0);
    SpectralDiagonal otf = kernel_to_otf(k, 5, 3);
    for (const auto& z : otf.data()) CHECK(std::abs(z - cplx(1.0)) < 1e-13);
}

TEST_CASE("otf matches dense circulant eigenvalues, uniform 2x2 on 4x4") {
    ImageGrid k = build_kernel(KernelSpec::uniform(2, 2));
    SpectralDiagonal otf = kernel_to_otf(k, 4, 4);
    oracle::Mat K = oracle::convolution_matrix(k, 4, 4, kernel_anchor(2), kernel_anchor(2));
    oracle::Mat F = oracle::dft_matrix_2d(4, 4);
    // (1/N) F K F^H must be diagonal with the otf entries.
    oracle::Mat M = oracle::scale(oracle::mul(oracle::mul(F, K), oracle::adjoint(F)),
                                  1.0 / 16.0);
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j) {
            if (i == j) CHECK(std::abs(M(i, j) - otf.data()[i]) < 1e-10);
            else CHECK(std::abs(M(i, j)) < 1e-10);
        }
}

TEST_CASE("otf DC gain equals kernel sum") {
    ImageGrid k = build_kernel(KernelSpec::gaussian(5, 1.2));
    SpectralDiagonal otf = kernel_to_otf(k, 8, 8);
    CHECK(std::abs(otf.at(0, 0) - cplx(1.0)) < 1e-12);
}

TEST_CASE("otf rejects kernels larger than the grid") {
    ImageGrid k(5, 5, 0.04);
    CHECK_THROWS_AS(kernel_to_otf(k, 4, 4), std::invalid_argument);
}

TEST_CASE("frequency-domain application equals brute-force circular convolution") {
    for (int size : {4, 6, 8}) {
        ImageGrid k = build_kernel(KernelSpec::gaussian(3, 0.8));
        ImageGrid x = oracle::random_image(size, size, 100 + size);
        SpectralDiagonal otf = kernel_to_otf(k, size, size);
        SpectralGrid xt = dft2(x);
        SpectralGrid prod(size, size);
        for (long i = 0; i < xt.size(); ++i) prod.data()[i] = otf.data()[i] * xt.data()[i];
        ImageGrid via_fft = idft2(prod);

        const int a = kernel_anchor(3);
        for (int i = 0; i < size; ++i)
            for (int j = 0; j < size; ++j) {
                double acc = 0.0;
                for (int p = 0; p < 3; ++p)
                    for (int q = 0; q < 3; ++q)
                        acc += k.at(p, q) * x.wrap(i - (p - a), j - (q - a));
                CHECK(std::abs(via_fft.at(i, j) - acc) < 1e-10);
            }
    }
}

TEST_CASE("kernel anchors for odd and even extents") {
    CHECK(kernel_anchor(1) == 0);
    CHECK(kernel_anchor(3) == 1);
    CHECK(kernel_anchor(13) == 6);
    CHECK(kernel_anchor(2) == 0);
    CHECK(kernel_anchor(4) == 1);
}

TEST_CASE("kernel composition is a full discrete convolution") {
    ImageGrid a = build_kernel(KernelSpec::gaussian(3, 1.0));
    ImageGrid b = build_kernel(KernelSpec::uniform(2, 2));
    ImageGrid c = convolve_kernels(a, b);
    CHECK(c.rows() == 4);
    CHECK(c.cols() == 4);
    double sum = 0.0;
    for (double v : c.data()) sum += v;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("idft2 rejects spectra with a large imaginary residue") {
    SpectralGrid s(2, 2);
    s.at(0, 1) = cplx(0.0, 1.0);  // breaks conjugate symmetry
    CHECK_THROWS_AS(idft2(s, 1e-9), NumericError);
}

}  // TEST_SUITE
