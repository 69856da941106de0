#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "gks/io.hpp"
#include "gks/rng.hpp"

using namespace gks;

namespace {

std::string temp_path(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "gks_test" / "io";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

void write_bytes(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

std::string read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("grid files round-trip at 32-bit precision") {
  Rng rng(61);
  std::vector<double> values(3 * 4 * 2);
  // Values exactly representable in binary32.
  for (double& v : values)
    v = static_cast<double>(static_cast<float>(rng.next_double() * 16.0 - 8.0));
  const Field original({3, 4, 2}, {1.0, 0.5, 2.25}, values);
  const std::string path = temp_path("roundtrip.gksf");
  write_grid_file(path, original);
  const Field loaded = read_grid_file(path);
  CHECK(loaded.dims() == original.dims());
  CHECK(loaded.spacing() == original.spacing());
  CHECK(loaded.values() == original.values());
}

TEST_CASE("grid file rejects a bad magic with the byte offset") {
  const std::string path = temp_path("badmagic.gksf");
  write_bytes(path, "GKSX????????");
  CHECK_THROWS_WITH_AS(read_grid_file(path), doctest::Contains("byte 3"),
                       std::runtime_error);
}

TEST_CASE("grid file rejects truncation with the byte offset") {
  const std::string path = temp_path("trunc.gksf");
  const Field f({4}, {1.0, 2.0, 3.0, 4.0});
  write_grid_file(path, f);
  const std::string full = read_bytes(path);
  // Cut into the samples: header is 4+1+1+8+8 = 22 bytes, then 4 per value.
  write_bytes(path, full.substr(0, 22 + 4 * 2 + 1));
  CHECK_THROWS_WITH_AS(read_grid_file(path), doctest::Contains("byte 30"),
                       std::runtime_error);
}

TEST_CASE("grid file rejects trailing bytes and zero dimensions") {
  const std::string path = temp_path("trailing.gksf");
  const Field f({2}, {1.0, 2.0});
  write_grid_file(path, f);
  write_bytes(path, read_bytes(path) + "x");
  CHECK_THROWS_WITH_AS(read_grid_file(path), doctest::Contains("trailing"),
                       std::runtime_error);

  // rank 1, dim 0.
  std::string zero_dim("GKSF", 4);
  zero_dim.push_back(1);
  zero_dim.push_back(1);
  zero_dim.append(8, '\0');
  write_bytes(path, zero_dim);
  CHECK_THROWS_WITH_AS(read_grid_file(path), doctest::Contains("byte 6"),
                       std::runtime_error);
}

TEST_CASE("pgm files round-trip quantized grayscale data") {
  for (int maxval : {255, 65535}) {
    std::vector<double> values;
    for (int q : {0, 1, 7, maxval / 2, maxval - 1, maxval})
      values.push_back(static_cast<double>(q) / maxval);
    const Field img({2, 3}, values);
    const std::string path = temp_path("roundtrip.pgm");
    write_pgm(path, img, maxval);
    const Field loaded = read_pnm(path);
    CHECK(loaded.dims() == img.dims());
    CHECK(loaded.values() == img.values());
  }
}

TEST_CASE("pgm writer clamps out-of-range values") {
  const Field img({1, 3}, {-0.5, 0.5, 1.5});
  const std::string path = temp_path("clamp.pgm");
  write_pgm(path, img);
  const Field loaded = read_pnm(path);
  CHECK(loaded[0] == 0.0);
  CHECK(loaded[1] == doctest::Approx(128.0 / 255.0).epsilon(1e-12));
  CHECK(loaded[2] == 1.0);
}

TEST_CASE("ascii pgm with comments parses") {
  const std::string path = temp_path("ascii.pgm");
  write_bytes(path,
              "P2 # type\n# a comment line\n3 2\n255\n0 128 255\n10 20 30\n");
  const Field img = read_pnm(path);
  REQUIRE(img.dims() == std::vector<std::size_t>{2, 3});
  CHECK(img.at({0, 0}) == 0.0);
  CHECK(img.at({0, 1}) == doctest::Approx(128.0 / 255.0).epsilon(1e-12));
  CHECK(img.at({0, 2}) == 1.0);
  CHECK(img.at({1, 2}) == doctest::Approx(30.0 / 255.0).epsilon(1e-12));
}

TEST_CASE("binary ppm loads as rank-3 and channel 0 extracts losslessly") {
  const std::string path = temp_path("color.ppm");
  std::string bytes = "P6\n2 1\n255\n";
  const unsigned char raster[6] = {255, 10, 20, 128, 30, 40};
  bytes.append(reinterpret_cast<const char*>(raster), 6);
  write_bytes(path, bytes);
  const Field img = read_pnm(path);
  REQUIRE(img.dims() == std::vector<std::size_t>{1, 2, 3});
  const Field first = binarize_first_channel(img);
  REQUIRE(first.dims() == std::vector<std::size_t>{1, 2});
  CHECK(first[0] == 1.0);
  // Intermediate values pass through scaled; nothing is thresholded.
  CHECK(first[1] == doctest::Approx(128.0 / 255.0).epsilon(1e-12));
}

TEST_CASE("a binary mask binarizes to exact zeros and ones") {
  const std::string path = temp_path("mask.pgm");
  write_bytes(path, std::string("P5\n2 2\n255\n") + '\x00' + '\xff' + '\xff' +
                        '\x00');
  const Field mask = binarize_first_channel(read_pnm(path));
  CHECK(mask.values() == std::vector<double>{0.0, 1.0, 1.0, 0.0});
}

TEST_CASE("sixteen-bit samples are big-endian two-byte pairs") {
  const std::string path = temp_path("deep.pgm");
  std::string bytes = "P5\n1 2\n65535\n";
  const unsigned char raster[4] = {0x01, 0x00, 0xFF, 0xFF};
  bytes.append(reinterpret_cast<const char*>(raster), 4);
  write_bytes(path, bytes);
  const Field img = read_pnm(path);
  CHECK(img[0] == doctest::Approx(256.0 / 65535.0).epsilon(1e-12));
  CHECK(img[1] == 1.0);
}

TEST_CASE("pnm reader reports malformed content with a byte offset") {
  const std::string path = temp_path("bad.pgm");
  write_bytes(path, "P7\n2 2\n255\n....");
  CHECK_THROWS_WITH_AS(read_pnm(path), doctest::Contains("byte 0"),
                       std::runtime_error);
  write_bytes(path, "P5\n2 2\n255\nab");  // raster cut short
  CHECK_THROWS_WITH_AS(read_pnm(path), doctest::Contains("byte"),
                       std::runtime_error);
  write_bytes(path, "P2\n2 1\n255\n12 999\n");  // sample above maxval
  CHECK_THROWS_AS(read_pnm(path), std::runtime_error);
}

TEST_CASE("csv round-trips doubles bit-exactly") {
  const std::vector<std::vector<double>> rows = {
      {0.1, -3.5, 1e-300},
      {3.141592653589793, 2.2250738585072014e-308, -0.0},
      {1e308, 123456789.123456789, 42.0}};
  const std::string path = temp_path("roundtrip.csv");
  write_csv(path, {"a", "b", "c"}, rows);
  const auto loaded = read_csv(path);
  REQUIRE(loaded.size() == rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    REQUIRE(loaded[r].size() == 3);
    for (std::size_t c = 0; c < 3; ++c) {
      // Bit-exact, including signed zero.
      CHECK(std::memcmp(&loaded[r][c], &rows[r][c], sizeof(double)) == 0);
    }
  }
}

TEST_CASE("headerless csv parses from the first row") {
  const std::string path = temp_path("plain.csv");
  write_csv(path, {}, {{1.0, 2.0}, {3.0, 4.0}});
  const auto rows = read_csv(path);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0][0] == 1.0);
  CHECK(rows[1][1] == 4.0);
}

TEST_CASE("csv rejects malformed numbers past the header") {
  const std::string path = temp_path("bad.csv");
  write_bytes(path, "x,y\n1.0,2.0\n3.0,oops\n");
  CHECK_THROWS_WITH_AS(read_csv(path), doctest::Contains("byte"),
                       std::runtime_error);
}

TEST_CASE("format_double emits shortest round-trip decimals") {
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(42.0) == "42");
  CHECK(format_double(-0.1) == "-0.1");
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17,
                   std::numeric_limits<double>::denorm_min()}) {
    CHECK(parse_double(format_double(v)) == v);
  }
  CHECK_THROWS_AS(parse_double("1.2.3"), std::runtime_error);
  CHECK_THROWS_AS(parse_double(""), std::runtime_error);
}

TEST_CASE("write_pgm validates rank and maxval") {
  const Field volume({2, 2, 2}, std::vector<double>(8, 0.0));
  CHECK_THROWS_AS(write_pgm(temp_path("bad_rank.pgm"), volume),
                  std::invalid_argument);
  const Field flat({1, 1}, {0.0});
  CHECK_THROWS_AS(write_pgm(temp_path("bad_maxval.pgm"), flat, 1000),
                  std::invalid_argument);
}
