#ifndef GKS_IO_HPP
#define GKS_IO_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "gks/field.hpp"

namespace gks {

/// Binary grid container: magic "GKSF", version byte (currently 1), rank byte,
/// then rank dimensions as unsigned 64-bit little-endian, rank spacings as
/// binary64 little-endian, then the samples row-major as binary32
/// little-endian. Read errors report the byte offset of the defect.
void write_grid_file(const std::string& path, const Field& field);
Field read_grid_file(const std::string& path);

/// Grayscale or color raster in PGM/PPM form (types P2, P5, P6; maxval up to
/// 65535, two-byte samples big-endian when maxval > 255). Samples are scaled
/// to [0,1] by maxval on read. Color images come back rank-3 with the channel
/// as the trailing axis.
Field read_pnm(const std::string& path);

/// Writes a rank-2 field as binary PGM (P5). Values are clamped to [0,1] and
/// scaled by maxval (255 or 65535).
void write_pgm(const std::string& path, const Field& field, int maxval = 255);

/// Reduces a raster to a rank-2 field: channel 0 of a color image (or the
/// single channel of a grayscale one). Samples were already scaled to [0,1]
/// by maxval on load, so a genuinely binary mask comes out exactly {0,1};
/// intermediate values pass through scaled, with no thresholding.
Field binarize_first_channel(const Field& image);

/// Shortest decimal form that parses back to the same binary64.
std::string format_double(double value);
double parse_double(const std::string& text);

/// Rectangular CSV of numbers. Rows are newline-separated, cells
/// comma-separated; an optional single header row is written verbatim and
/// skipped on read when the first cell is non-numeric.
void write_csv(const std::string& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);
std::vector<std::vector<double>> read_csv(const std::string& path);

}  // namespace gks

#endif  // GKS_IO_HPP
