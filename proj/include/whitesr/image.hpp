#ifndef WHITESR_IMAGE_HPP
#define WHITESR_IMAGE_HPP

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace whitesr {

/// Real-valued 2-D raster stored row-major (row index varies slowest).
class ImageGrid {
public:
    ImageGrid() = default;
    ImageGrid(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(static_cast<size_t>(check_dims(rows, cols)), fill) {}
    ImageGrid(int rows, int cols, std::vector<double> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (data_.size() != static_cast<size_t>(check_dims(rows, cols)))
            throw std::invalid_argument("ImageGrid: data length does not match rows*cols");
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    long size() const { return static_cast<long>(rows_) * cols_; }

    double& at(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
    double at(int r, int c) const { return data_[static_cast<size_t>(r) * cols_ + c]; }

    /// Circular access, any integer indices.
    double wrap(int r, int c) const {
        r %= rows_; if (r < 0) r += rows_;
        c %= cols_; if (c < 0) c += cols_;
        return at(r, c);
    }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    bool same_shape(const ImageGrid& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

private:
    static long check_dims(int rows, int cols) {
        if (rows < 1 || cols < 1) throw std::invalid_argument("ImageGrid: non-positive shape");
        return static_cast<long>(rows) * cols;
    }
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

/// Complex 2-D grid in DFT ordering: frequency (u,v) at index u*cols+v.
class SpectralGrid {
public:
    SpectralGrid() = default;
    SpectralGrid(int rows, int cols)
        : rows_(rows), cols_(cols), data_(static_cast<size_t>(static_cast<long>(rows) * cols)) {
        if (rows < 1 || cols < 1) throw std::invalid_argument("SpectralGrid: non-positive shape");
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    long size() const { return static_cast<long>(rows_) * cols_; }

    std::complex<double>& at(int u, int v) { return data_[static_cast<size_t>(u) * cols_ + v]; }
    std::complex<double> at(int u, int v) const { return data_[static_cast<size_t>(u) * cols_ + v]; }

    std::vector<std::complex<double>>& data() { return data_; }
    const std::vector<std::complex<double>>& data() const { return data_; }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<std::complex<double>> data_;
};

/// A diagonal operator in the 2-D DFT basis (eigenvalues of a circular convolution).
using SpectralDiagonal = SpectralGrid;

/// Raised by solvers and selection routines on non-recoverable numerical trouble.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace whitesr

#endif
