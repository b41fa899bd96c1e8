#ifndef WHITESR_IO_HPP
#define WHITESR_IO_HPP

#include <map>
#include <string>

#include "whitesr/image.hpp"

namespace whitesr {

/// Plain-text float matrix: `rows cols` header then row-major values, 17
/// significant digits.  Bit-exact round trip.
void write_matrix(const std::string& path, const ImageGrid& img);
ImageGrid read_matrix(const std::string& path);

/// 16-bit binary PGM (P5, maxval 65535, big-endian samples), values linearly
/// mapped from [lo, hi]; pass lo >= hi to use the image's own range.
void write_pgm16(const std::string& path, const ImageGrid& img,
                 double lo = 0.0, double hi = -1.0);

/// Flat key=value metadata record, keys sorted.
void write_metadata(const std::string& path, const std::map<std::string, std::string>& kv);
std::map<std::string, std::string> read_metadata(const std::string& path);

void write_text(const std::string& path, const std::string& content);

}  // namespace whitesr

#endif
