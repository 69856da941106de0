#include "gks/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string_view>
#include <system_error>

namespace gks {

namespace {

constexpr char kMagic[4] = {'G', 'K', 'S', 'F'};
constexpr std::uint8_t kVersion = 1;

std::string read_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

void write_binary(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("short write to " + path);
}

[[noreturn]] void fail_at(const std::string& path, std::size_t offset,
                          const std::string& what) {
  throw std::runtime_error(path + ": " + what + " at byte " +
                           std::to_string(offset));
}

void append_u64_le(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i)
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void append_f64_le(std::string& out, double v) {
  std::uint64_t bits;
  static_assert(sizeof(bits) == sizeof(v));
  std::memcpy(&bits, &v, sizeof(bits));
  append_u64_le(out, bits);
}

void append_f32_le(std::string& out, float v) {
  std::uint32_t bits;
  static_assert(sizeof(bits) == sizeof(v));
  std::memcpy(&bits, &v, sizeof(bits));
  for (int i = 0; i < 4; ++i)
    out.push_back(static_cast<char>((bits >> (8 * i)) & 0xFF));
}

/// Cursor over a byte buffer; every decode checks bounds and reports the
/// offset of the first missing or malformed byte.
struct ByteReader {
  const std::string& path;
  const std::string& bytes;
  std::size_t pos = 0;

  std::uint8_t u8(const std::string& what) {
    if (pos >= bytes.size()) fail_at(path, pos, "truncated " + what);
    return static_cast<std::uint8_t>(bytes[pos++]);
  }
  std::uint64_t u64_le(const std::string& what) {
    if (pos + 8 > bytes.size()) fail_at(path, pos, "truncated " + what);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
      v |= static_cast<std::uint64_t>(
               static_cast<std::uint8_t>(bytes[pos + static_cast<std::size_t>(i)]))
           << (8 * i);
    pos += 8;
    return v;
  }
  double f64_le(const std::string& what) {
    const std::uint64_t bits = u64_le(what);
    double v;
    std::memcpy(&v, &bits, sizeof(v));
    return v;
  }
  float f32_le(const std::string& what) {
    if (pos + 4 > bytes.size()) fail_at(path, pos, "truncated " + what);
    std::uint32_t bits = 0;
    for (int i = 0; i < 4; ++i)
      bits |= static_cast<std::uint32_t>(
                  static_cast<std::uint8_t>(bytes[pos + static_cast<std::size_t>(i)]))
              << (8 * i);
    pos += 4;
    float v;
    std::memcpy(&v, &bits, sizeof(v));
    return v;
  }
};

}  // namespace

void write_grid_file(const std::string& path, const Field& field) {
  if (field.rank() > 255)
    throw std::invalid_argument("grid file supports rank <= 255");
  std::string out;
  out.reserve(6 + field.rank() * 16 + field.size() * 4);
  out.append(kMagic, sizeof(kMagic));
  out.push_back(static_cast<char>(kVersion));
  out.push_back(static_cast<char>(field.rank()));
  for (std::size_t d : field.dims()) append_u64_le(out, d);
  for (double s : field.spacing()) append_f64_le(out, s);
  for (double v : field.values()) append_f32_le(out, static_cast<float>(v));
  write_binary(path, out);
}

Field read_grid_file(const std::string& path) {
  const std::string bytes = read_binary(path);
  ByteReader r{path, bytes};

  for (std::size_t i = 0; i < sizeof(kMagic); ++i) {
    const std::size_t at = r.pos;
    if (r.u8("magic") != static_cast<std::uint8_t>(kMagic[i]))
      fail_at(path, at, "bad magic byte");
  }
  {
    const std::size_t at = r.pos;
    const std::uint8_t version = r.u8("version");
    if (version != kVersion)
      fail_at(path, at,
              "unsupported version " + std::to_string(version));
  }
  const std::size_t rank_at = r.pos;
  const std::uint8_t rank = r.u8("rank");
  if (rank == 0) fail_at(path, rank_at, "zero rank");

  std::vector<std::size_t> dims(rank);
  std::size_t count = 1;
  for (std::size_t a = 0; a < rank; ++a) {
    const std::size_t at = r.pos;
    const std::uint64_t d = r.u64_le("dimension");
    if (d == 0) fail_at(path, at, "zero dimension");
    dims[a] = static_cast<std::size_t>(d);
    if (count > SIZE_MAX / dims[a]) fail_at(path, at, "dimension overflow");
    count *= dims[a];
  }
  std::vector<double> spacing(rank);
  for (std::size_t a = 0; a < rank; ++a) {
    const std::size_t at = r.pos;
    spacing[a] = r.f64_le("spacing");
    if (!(spacing[a] > 0.0) || !std::isfinite(spacing[a]))
      fail_at(path, at, "non-positive spacing");
  }
  std::vector<double> values(count);
  for (std::size_t i = 0; i < count; ++i)
    values[i] = static_cast<double>(r.f32_le("sample"));
  if (r.pos != bytes.size())
    fail_at(path, r.pos, "trailing bytes");
  return Field(std::move(dims), std::move(spacing), std::move(values));
}

namespace {

/// Next header token of a netpbm file, skipping whitespace and '#' comments.
std::string pnm_token(ByteReader& r) {
  for (;;) {
    while (r.pos < r.bytes.size() &&
           std::isspace(static_cast<unsigned char>(r.bytes[r.pos])))
      ++r.pos;
    if (r.pos < r.bytes.size() && r.bytes[r.pos] == '#') {
      while (r.pos < r.bytes.size() && r.bytes[r.pos] != '\n') ++r.pos;
      continue;
    }
    break;
  }
  if (r.pos >= r.bytes.size()) fail_at(r.path, r.pos, "truncated header");
  const std::size_t start = r.pos;
  while (r.pos < r.bytes.size() &&
         !std::isspace(static_cast<unsigned char>(r.bytes[r.pos])) &&
         r.bytes[r.pos] != '#')
    ++r.pos;
  return r.bytes.substr(start, r.pos - start);
}

std::size_t pnm_uint(ByteReader& r, const std::string& what,
                     std::size_t max_value, std::size_t min_value = 1) {
  const std::size_t at = r.pos;
  const std::string tok = pnm_token(r);
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    fail_at(r.path, at, "malformed " + what);
  if (v < min_value || v > max_value) fail_at(r.path, at, what + " out of range");
  return v;
}

}  // namespace

Field read_pnm(const std::string& path) {
  const std::string bytes = read_binary(path);
  ByteReader r{path, bytes};

  const std::size_t magic_at = r.pos;
  const std::string magic = pnm_token(r);
  if (magic != "P2" && magic != "P5" && magic != "P6")
    fail_at(path, magic_at, "unsupported netpbm type '" + magic + "'");
  const bool color = magic == "P6";
  const bool ascii = magic == "P2";

  const std::size_t width = pnm_uint(r, "width", 1u << 20);
  const std::size_t height = pnm_uint(r, "height", 1u << 20);
  const std::size_t maxval = pnm_uint(r, "maxval", 65535);
  const std::size_t channels = color ? 3 : 1;
  const std::size_t count = width * height * channels;
  // Divide, never multiply by a reciprocal: sample/maxval is the exactly
  // rounded fraction, so round trips are bit-stable.
  const auto to_unit = [maxval](std::size_t v) {
    return static_cast<double>(v) / static_cast<double>(maxval);
  };

  std::vector<double> values(count);
  if (ascii) {
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t at = r.pos;
      const std::size_t v = pnm_uint(r, "sample", 65535, 0);
      if (v > maxval) fail_at(path, at, "sample exceeds maxval");
      values[i] = to_unit(v);
    }
  } else {
    // Exactly one whitespace byte separates the header from the raster.
    r.u8("raster separator");
    const bool two_byte = maxval > 255;
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t at = r.pos;
      std::size_t v = r.u8("sample");
      if (two_byte) v = (v << 8) | r.u8("sample");
      if (v > maxval) fail_at(path, at, "sample exceeds maxval");
      values[i] = to_unit(v);
    }
    if (r.pos != bytes.size()) fail_at(path, r.pos, "trailing bytes");
  }

  std::vector<std::size_t> dims = color
      ? std::vector<std::size_t>{height, width, 3}
      : std::vector<std::size_t>{height, width};
  return Field(std::move(dims), std::move(values));
}

void write_pgm(const std::string& path, const Field& field, int maxval) {
  if (field.rank() != 2)
    throw std::invalid_argument("write_pgm: field must be rank 2");
  if (maxval != 255 && maxval != 65535)
    throw std::invalid_argument("write_pgm: maxval must be 255 or 65535");

  const std::size_t height = field.dims()[0];
  const std::size_t width = field.dims()[1];
  std::string out = "P5\n" + std::to_string(width) + " " +
                    std::to_string(height) + "\n" + std::to_string(maxval) +
                    "\n";
  const bool two_byte = maxval > 255;
  out.reserve(out.size() + field.size() * (two_byte ? 2 : 1));
  for (double v : field.values()) {
    const double clamped = std::clamp(v, 0.0, 1.0);
    const auto q = static_cast<std::uint32_t>(
        std::lround(clamped * static_cast<double>(maxval)));
    if (two_byte) out.push_back(static_cast<char>((q >> 8) & 0xFF));
    out.push_back(static_cast<char>(q & 0xFF));
  }
  write_binary(path, out);
}

Field binarize_first_channel(const Field& image) {
  if (image.rank() != 2 && image.rank() != 3)
    throw std::invalid_argument(
        "binarize_first_channel: image must be rank 2 or 3");
  const std::size_t height = image.dims()[0];
  const std::size_t width = image.dims()[1];
  const std::size_t channels = image.rank() == 3 ? image.dims()[2] : 1;

  std::vector<double> values(height * width);
  for (std::size_t i = 0; i < values.size(); ++i)
    values[i] = image[i * channels];
  return Field({height, width}, std::move(values));
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) throw std::runtime_error("format_double failed");
  return std::string(buf, ptr);
}

double parse_double(const std::string& text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last)
    throw std::runtime_error("malformed number '" + text + "'");
  return v;
}

void write_csv(const std::string& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::string out;
  if (!header.empty()) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i) out.push_back(',');
      out += header[i];
    }
    out.push_back('\n');
  }
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out.push_back(',');
      out += format_double(row[i]);
    }
    out.push_back('\n');
  }
  write_binary(path, out);
}

std::vector<std::vector<double>> read_csv(const std::string& path) {
  const std::string bytes = read_binary(path);
  std::vector<std::vector<double>> rows;
  std::size_t line_start = 0;
  bool first_line = true;
  while (line_start < bytes.size()) {
    std::size_t line_end = bytes.find('\n', line_start);
    if (line_end == std::string::npos) line_end = bytes.size();
    std::string_view line(bytes.data() + line_start, line_end - line_start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) {
      std::vector<double> row;
      bool numeric = true;
      std::size_t cell_start = 0;
      for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
          const std::string_view cell = line.substr(cell_start, i - cell_start);
          double v = 0.0;
          const auto [ptr, ec] =
              std::from_chars(cell.data(), cell.data() + cell.size(), v);
          if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
            if (first_line) {
              numeric = false;  // header row
              break;
            }
            fail_at(path, line_start + cell_start, "malformed number");
          }
          row.push_back(v);
          cell_start = i + 1;
        }
      }
      if (numeric) rows.push_back(std::move(row));
    }
    first_line = false;
    line_start = line_end + 1;
  }
  return rows;
}

}  // namespace gks
