#ifndef GKS_SIM_HPP
#define GKS_SIM_HPP

#include <array>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "gks/field.hpp"
#include "gks/rng.hpp"

namespace gks {

/// Outcome of one simulation experiment: what ran, with which parameters,
/// what it measured, and which files it wrote. Serialization order equals
/// insertion order, so a fixed seed yields byte-identical report text.
struct ExperimentReport {
  std::string name;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::vector<std::pair<std::string, double>> metrics;  // values always finite
  std::vector<std::string> artifacts;  // paths relative to the output dir

  void add_param(std::string key, std::string value);
  void add_metric(std::string key, double value);  // rejects non-finite
  double metric(const std::string& key) const;     // throws if absent
};

/// Line-oriented "key=value" form: experiment=, param.*=, metric.*=,
/// artifact= lines in insertion order. Numbers use shortest round-trip
/// decimals, so equal reports serialize to equal bytes.
std::string report_text(const ExperimentReport& report);
void write_report(const std::string& path, const ExperimentReport& report);

/// Procedural binary key silhouette, rows x cols = 160 x 256, values in
/// {0, 1}: an annular bow (center row 80, col 60, radii 16 and 40), a shaft
/// (rows 72..88, cols 95..230) and three teeth hanging below the shaft. The
/// whole shape keeps a margin >= 10 samples from every border.
Field key_image();

/// A (row, col) pixel on the key's edge: the pixel itself is 1, the pixel
/// directly above is 0, and a 10-sample neighborhood fits inside the image.
std::array<std::size_t, 2> key_edge_pixel();

/// Noisy parabola on t = 1..100: Y(t) = (t-50)^2/500 + N(0, noise_sd^2),
/// smoothed along the line. Reports rmse_noisy and rmse_smoothed against the
/// clean signal. noise_sd 0 runs the noise-free variant. A non-empty out_dir
/// receives signal_1d.csv with columns t,mu,noisy,smoothed.
ExperimentReport experiment_1d(Rng& rng, double bandwidth_sigma = 10.0,
                               std::size_t radius = 5, double noise_sd = 2.0,
                               const std::string& out_dir = "");

/// Noisy 2-D wave on a 101x101 unit-square grid: mu(row i, col j) =
/// cos(10 * j/100) + sin(8 * i/100), noise N(0, noise_sd^2), smoothing in
/// pixel units. Reports rmse_noisy and rmse_smoothed; artifacts are the mu,
/// noisy and smoothed grids.
ExperimentReport experiment_2d(Rng& rng, double bandwidth_sigma = 1.0,
                               std::size_t radius = 2, double noise_sd = 0.4,
                               const std::string& out_dir = "");

/// Binary key silhouette contaminated with N(0, noise_sd^2), smoothed at each
/// sigma with a common radius. Reports rmse_noisy and one
/// rmse_smoothed_sigma_<s> per sigma (ascending sigmas required).
ExperimentReport experiment_key(Rng& rng,
                                std::vector<double> sigmas = {1.0, 10.0},
                                std::size_t radius = 10, double noise_sd = 5.0,
                                const std::string& out_dir = "");

/// Repeats the key-plus-noise experiment n_reps times with independent child
/// seeds, recording the raw and smoothed value at one pixel. Reports the
/// variance ratio var(smoothed)/var(raw) next to its theoretical value
/// sum of squared dense kernel weights, and the middle-90% normal-plot R^2 of
/// both value sets. Requires n_reps >= 2 and the pixel at least `radius`
/// samples from every border.
ExperimentReport experiment_gaussianness(
    Rng& rng, std::size_t n_reps = 50, double sigma = 100.0,
    std::array<std::size_t, 2> pixel = key_edge_pixel(),
    std::size_t radius = 10, double noise_sd = 5.0,
    const std::string& out_dir = "");

}  // namespace gks

#endif
