#include <doctest.h>

#include <cstdint>
#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "whitesr/io.hpp"

using namespace whitesr;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / "whitesr_io_tests";
    fs::create_directories(dir);
    return dir / name;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("matrix files round-trip bit-exactly") {
    ImageGrid x = oracle::random_image(5, 7, 1, -1e3, 1e3);
    x.at(0, 0) = 1.0 / 3.0;
    x.at(0, 1) = -2.2250738585072014e-308;
    x.at(0, 2) = 0.1 + 0.2;
    const auto path = temp_file("roundtrip.txt");
    write_matrix(path.string(), x);
    ImageGrid back = read_matrix(path.string());
    REQUIRE(back.rows() == 5);
    REQUIRE(back.cols() == 7);
    for (long i = 0; i < x.size(); ++i) CHECK(back.data()[i] == x.data()[i]);
}

TEST_CASE("matrix reader validates its input") {
    CHECK_THROWS(read_matrix(temp_file("missing.txt").string()));
    const auto path = temp_file("short.txt");
    write_text(path.string(), "2 2\n1.0 2.0 3.0\n");
    CHECK_THROWS(read_matrix(path.string()));
}

TEST_CASE("16-bit PGM output") {
    ImageGrid x(2, 3);
    x.at(0, 0) = 0.0;
    x.at(0, 1) = 0.5;
    x.at(0, 2) = 1.0;
    x.at(1, 0) = 0.25;
    x.at(1, 1) = 0.75;
    x.at(1, 2) = 1.0;
    const auto path = temp_file("img.pgm");
    write_pgm16(path.string(), x, 0.0, 1.0);
    std::string raw = slurp(path);

    // header then 6 big-endian 16-bit samples
    REQUIRE(raw.rfind("P5", 0) == 0);
    const size_t data_at = raw.size() - 12;
    auto sample = [&](int idx) {
        const auto hi = static_cast<uint8_t>(raw[data_at + 2 * idx]);
        const auto lo = static_cast<uint8_t>(raw[data_at + 2 * idx + 1]);
        return (static_cast<unsigned>(hi) << 8) | lo;
    };
    CHECK(sample(0) == 0);
    CHECK(sample(1) == 32768);
    CHECK(sample(2) == 65535);
    CHECK(sample(3) == 16384);

    // auto-range maps min -> 0 and max -> 65535
    write_pgm16(path.string(), x);
    raw = slurp(path);
    CHECK(sample(0) == 0);
    CHECK(sample(2) == 65535);
}

TEST_CASE("metadata files round-trip with sorted keys") {
    std::map<std::string, std::string> kv = {
        {"kernel", "gaussian:13:3"}, {"dr", "4"}, {"sigma_used", "0.1"}, {"a_first", "x"}};
    const auto path = temp_file("meta.txt");
    write_metadata(path.string(), kv);
    CHECK(read_metadata(path.string()) == kv);

    std::string raw = slurp(path);
    CHECK(raw.find("a_first=") < raw.find("dr="));
    CHECK(raw.find("dr=") < raw.find("kernel="));
}

TEST_CASE("plain text writer") {
    const auto path = temp_file("note.txt");
    write_text(path.string(), "hello\nworld\n");
    CHECK(slurp(path) == "hello\nworld\n");
}

}  // TEST_SUITE
