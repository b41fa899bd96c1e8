#include "whitesr/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

namespace whitesr {

namespace {

std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
    std::ofstream os(path, mode);
    if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
    return os;
}

std::ifstream open_in(const std::string& path, std::ios::openmode mode = std::ios::in) {
    std::ifstream is(path, mode);
    if (!is) throw std::runtime_error("cannot open '" + path + "' for reading");
    return is;
}

}  // namespace

void write_matrix(const std::string& path, const ImageGrid& img) {
    std::ofstream os = open_out(path);
    os.precision(17);
    os << img.rows() << " " << img.cols() << "\n";
    for (int i = 0; i < img.rows(); ++i) {
        for (int j = 0; j < img.cols(); ++j) os << (j ? " " : "") << img.at(i, j);
        os << "\n";
    }
    if (!os) throw std::runtime_error("write failed for '" + path + "'");
}

ImageGrid read_matrix(const std::string& path) {
    std::ifstream is = open_in(path);
    int rows = 0, cols = 0;
    if (!(is >> rows >> cols) || rows < 1 || cols < 1)
        throw std::runtime_error("bad matrix header in '" + path + "'");
    ImageGrid img(rows, cols);
    for (long i = 0; i < img.size(); ++i)
        if (!(is >> img.data()[i]))
            throw std::runtime_error("truncated matrix in '" + path + "'");
    return img;
}

void write_pgm16(const std::string& path, const ImageGrid& img, double lo, double hi) {
    if (lo >= hi) {
        lo = *std::min_element(img.data().begin(), img.data().end());
        hi = *std::max_element(img.data().begin(), img.data().end());
        if (hi <= lo) hi = lo + 1.0;
    }
    std::ofstream os = open_out(path, std::ios::binary);
    os << "P5\n" << img.cols() << " " << img.rows() << "\n65535\n";
    for (double v : img.data()) {
        double s = (v - lo) / (hi - lo) * 65535.0;
        const uint16_t u = static_cast<uint16_t>(std::clamp(std::lround(s), 0L, 65535L));
        const unsigned char bytes[2] = {static_cast<unsigned char>(u >> 8),
                                        static_cast<unsigned char>(u & 0xff)};
        os.write(reinterpret_cast<const char*>(bytes), 2);
    }
    if (!os) throw std::runtime_error("write failed for '" + path + "'");
}

void write_metadata(const std::string& path, const std::map<std::string, std::string>& kv) {
    std::ofstream os = open_out(path);
    for (const auto& [k, v] : kv) os << k << "=" << v << "\n";
    if (!os) throw std::runtime_error("write failed for '" + path + "'");
}

std::map<std::string, std::string> read_metadata(const std::string& path) {
    std::ifstream is = open_in(path);
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("bad metadata line in '" + path + "': " + line);
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return kv;
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream os = open_out(path);
    os << content;
    if (!os) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace whitesr
