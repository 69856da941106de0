#include "gks/sim.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "gks/convolve.hpp"
#include "gks/io.hpp"
#include "gks/stats.hpp"

namespace gks {

void ExperimentReport::add_param(std::string key, std::string value) {
  parameters.emplace_back(std::move(key), std::move(value));
}

void ExperimentReport::add_metric(std::string key, double value) {
  if (!std::isfinite(value))
    throw std::invalid_argument("report metric '" + key + "' is not finite");
  metrics.emplace_back(std::move(key), value);
}

double ExperimentReport::metric(const std::string& key) const {
  for (const auto& [k, v] : metrics)
    if (k == key) return v;
  throw std::out_of_range("report has no metric '" + key + "'");
}

std::string report_text(const ExperimentReport& report) {
  std::string out = "experiment=" + report.name + "\n";
  for (const auto& [k, v] : report.parameters) out += "param." + k + "=" + v + "\n";
  for (const auto& [k, v] : report.metrics)
    out += "metric." + k + "=" + format_double(v) + "\n";
  for (const auto& a : report.artifacts) out += "artifact=" + a + "\n";
  return out;
}

void write_report(const std::string& path, const ExperimentReport& report) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << report_text(report);
}

namespace {

constexpr BoundaryMode kExperimentBoundary = BoundaryMode::Reflect;

std::string prepare_out_dir(const std::string& out_dir) {
  if (out_dir.empty()) return "";
  std::filesystem::create_directories(out_dir);
  return out_dir + "/";
}

std::vector<double> noise_vector(Rng& rng, double noise_sd, std::size_t count) {
  if (noise_sd == 0.0) return std::vector<double>(count, 0.0);
  return normal_draws(rng, 0.0, noise_sd, count).values();
}

std::string boundary_name(BoundaryMode mode) {
  switch (mode) {
    case BoundaryMode::ZeroPad: return "zero";
    case BoundaryMode::Reflect: return "reflect";
    case BoundaryMode::Replicate: return "replicate";
  }
  return "?";
}

double sample_variance(const std::vector<double>& xs) {
  const std::size_t n = xs.size();
  long double mean = 0.0L;
  for (double x : xs) mean += x;
  mean /= static_cast<long double>(n);
  long double ss = 0.0L;
  for (double x : xs) {
    const long double d = x - mean;
    ss += d * d;
  }
  return static_cast<double>(ss / static_cast<long double>(n - 1));
}

void write_plot_csv(const std::string& path, const QQCurve& curve) {
  std::vector<std::vector<double>> rows;
  rows.reserve(curve.size());
  for (const QQPoint& pt : curve.points()) rows.push_back({pt.p, pt.qx, pt.qy});
  write_csv(path, {"p", "qx", "qy"}, rows);
}

}  // namespace

ExperimentReport experiment_1d(Rng& rng, double bandwidth_sigma,
                               std::size_t radius, double noise_sd,
                               const std::string& out_dir) {
  constexpr std::size_t n = 100;
  std::vector<double> mu(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i + 1);
    mu[i] = (t - 50.0) * (t - 50.0) / 500.0;
  }
  const std::vector<double> noise = noise_vector(rng, noise_sd, n);
  std::vector<double> noisy(n);
  for (std::size_t i = 0; i < n; ++i) noisy[i] = mu[i] + noise[i];

  const Field mu_field({n}, mu);
  const Field noisy_field({n}, noisy);
  const Field smoothed = smooth(
      noisy_field, separable_kernel(bandwidth_sigma, radius, 1),
      kExperimentBoundary);

  ExperimentReport report;
  report.name = "1d";
  report.add_param("seed", std::to_string(rng.seed()));
  report.add_param("n", std::to_string(n));
  report.add_param("sigma", format_double(bandwidth_sigma));
  report.add_param("radius", std::to_string(radius));
  report.add_param("noise_sd", format_double(noise_sd));
  report.add_param("boundary", boundary_name(kExperimentBoundary));
  report.add_metric("rmse_noisy", rmse(noisy_field, mu_field));
  report.add_metric("rmse_smoothed", rmse(smoothed, mu_field));

  const std::string prefix = prepare_out_dir(out_dir);
  if (!prefix.empty()) {
    std::vector<std::vector<double>> rows;
    rows.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
      rows.push_back({static_cast<double>(i + 1), mu[i], noisy[i], smoothed[i]});
    write_csv(prefix + "signal_1d.csv", {"t", "mu", "noisy", "smoothed"}, rows);
    report.artifacts.push_back("signal_1d.csv");
  }
  return report;
}

ExperimentReport experiment_2d(Rng& rng, double bandwidth_sigma,
                               std::size_t radius, double noise_sd,
                               const std::string& out_dir) {
  constexpr std::size_t n = 101;
  std::vector<double> mu(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double x = static_cast<double>(j) / 100.0;
      const double y = static_cast<double>(i) / 100.0;
      mu[i * n + j] = std::cos(10.0 * x) + std::sin(8.0 * y);
    }
  const std::vector<double> noise = noise_vector(rng, noise_sd, n * n);
  std::vector<double> noisy(n * n);
  for (std::size_t i = 0; i < noisy.size(); ++i) noisy[i] = mu[i] + noise[i];

  const Field mu_field({n, n}, mu);
  const Field noisy_field({n, n}, noisy);
  const Field smoothed = smooth(
      noisy_field, separable_kernel(bandwidth_sigma, radius, 2),
      kExperimentBoundary);

  ExperimentReport report;
  report.name = "2d";
  report.add_param("seed", std::to_string(rng.seed()));
  report.add_param("grid", std::to_string(n) + "x" + std::to_string(n));
  report.add_param("sigma", format_double(bandwidth_sigma));
  report.add_param("radius", std::to_string(radius));
  report.add_param("noise_sd", format_double(noise_sd));
  report.add_param("boundary", boundary_name(kExperimentBoundary));
  report.add_metric("rmse_noisy", rmse(noisy_field, mu_field));
  report.add_metric("rmse_smoothed", rmse(smoothed, mu_field));

  const std::string prefix = prepare_out_dir(out_dir);
  if (!prefix.empty()) {
    write_grid_file(prefix + "field_2d_mu.gksf", mu_field);
    write_grid_file(prefix + "field_2d_noisy.gksf", noisy_field);
    write_grid_file(prefix + "field_2d_smoothed.gksf", smoothed);
    report.artifacts.push_back("field_2d_mu.gksf");
    report.artifacts.push_back("field_2d_noisy.gksf");
    report.artifacts.push_back("field_2d_smoothed.gksf");
  }
  return report;
}

Field key_image() {
  constexpr std::size_t rows = 160;
  constexpr std::size_t cols = 256;
  std::vector<double> values(rows * cols, 0.0);

  const auto set_rect = [&](std::size_t r0, std::size_t r1, std::size_t c0,
                            std::size_t c1) {
    for (std::size_t r = r0; r <= r1; ++r)
      for (std::size_t c = c0; c <= c1; ++c) values[r * cols + c] = 1.0;
  };

  // Bow: annulus centered (80, 60), radii 16 (hole) and 40 (outer).
  for (std::size_t r = 40; r <= 120; ++r)
    for (std::size_t c = 20; c <= 100; ++c) {
      const double dr = static_cast<double>(r) - 80.0;
      const double dc = static_cast<double>(c) - 60.0;
      const double d2 = dr * dr + dc * dc;
      if (d2 <= 40.0 * 40.0 && d2 >= 16.0 * 16.0) values[r * cols + c] = 1.0;
    }
  // Shaft.
  set_rect(72, 88, 95, 230);
  // Teeth.
  set_rect(88, 112, 180, 188);
  set_rect(88, 120, 200, 208);
  set_rect(88, 116, 220, 230);

  return Field({rows, cols}, std::move(values));
}

std::array<std::size_t, 2> key_edge_pixel() { return {72, 160}; }

ExperimentReport experiment_key(Rng& rng, std::vector<double> sigmas,
                                std::size_t radius, double noise_sd,
                                const std::string& out_dir) {
  if (sigmas.empty())
    throw std::invalid_argument("experiment_key: at least one sigma required");
  for (std::size_t i = 1; i < sigmas.size(); ++i)
    if (!(sigmas[i] > sigmas[i - 1]))
      throw std::invalid_argument("experiment_key: sigmas must be ascending");

  const Field signal = key_image();
  const std::vector<double> noise = noise_vector(rng, noise_sd, signal.size());
  std::vector<double> noisy(signal.size());
  for (std::size_t i = 0; i < noisy.size(); ++i)
    noisy[i] = signal[i] + noise[i];
  const Field noisy_field(signal.dims(), std::move(noisy));

  ExperimentReport report;
  report.name = "key";
  report.add_param("seed", std::to_string(rng.seed()));
  report.add_param("rows", std::to_string(signal.dims()[0]));
  report.add_param("cols", std::to_string(signal.dims()[1]));
  std::string sigma_list;
  for (std::size_t i = 0; i < sigmas.size(); ++i) {
    if (i) sigma_list += ",";
    sigma_list += format_double(sigmas[i]);
  }
  report.add_param("sigmas", sigma_list);
  report.add_param("radius", std::to_string(radius));
  report.add_param("noise_sd", format_double(noise_sd));
  report.add_param("boundary", boundary_name(kExperimentBoundary));
  report.add_metric("rmse_noisy", rmse(noisy_field, signal));

  const std::string prefix = prepare_out_dir(out_dir);
  if (!prefix.empty()) {
    write_pgm(prefix + "key_signal.pgm", signal);
    write_grid_file(prefix + "key_noisy.gksf", noisy_field);
    report.artifacts.push_back("key_signal.pgm");
    report.artifacts.push_back("key_noisy.gksf");
  }

  for (double sigma : sigmas) {
    const Field smoothed = smooth(noisy_field,
                                  separable_kernel(sigma, radius, 2),
                                  kExperimentBoundary);
    const std::string tag = "sigma_" + format_double(sigma);
    report.add_metric("rmse_smoothed_" + tag, rmse(smoothed, signal));
    if (!prefix.empty()) {
      write_grid_file(prefix + "key_smoothed_" + tag + ".gksf", smoothed);
      write_pgm(prefix + "key_smoothed_" + tag + ".pgm", smoothed);
      report.artifacts.push_back("key_smoothed_" + tag + ".gksf");
      report.artifacts.push_back("key_smoothed_" + tag + ".pgm");
    }
  }
  return report;
}

ExperimentReport experiment_gaussianness(Rng& rng, std::size_t n_reps,
                                         double sigma,
                                         std::array<std::size_t, 2> pixel,
                                         std::size_t radius, double noise_sd,
                                         const std::string& out_dir) {
  if (n_reps < 2)
    throw std::invalid_argument(
        "experiment_gaussianness: n_reps must be >= 2 (variance undefined)");
  if (!(noise_sd > 0.0))
    throw std::invalid_argument(
        "experiment_gaussianness: noise_sd must be positive");
  const Field signal = key_image();
  const std::size_t rows = signal.dims()[0];
  const std::size_t cols = signal.dims()[1];
  if (pixel[0] < radius || pixel[1] < radius || pixel[0] + radius >= rows ||
      pixel[1] + radius >= cols)
    throw std::invalid_argument(
        "experiment_gaussianness: pixel not interior at the kernel radius");

  const SeparableKernel kernel = separable_kernel(sigma, radius, 2);

  std::vector<double> raw_values(n_reps);
  std::vector<double> smoothed_values(n_reps);
  for (std::size_t rep = 0; rep < n_reps; ++rep) {
    Rng child = rng.child(rep);
    const std::vector<double> noise =
        noise_vector(child, noise_sd, signal.size());
    std::vector<double> noisy(signal.size());
    for (std::size_t i = 0; i < noisy.size(); ++i)
      noisy[i] = signal[i] + noise[i];
    const Field noisy_field(signal.dims(), std::move(noisy));
    const Field smoothed = smooth(noisy_field, kernel, kExperimentBoundary);
    raw_values[rep] = noisy_field.at({pixel[0], pixel[1]});
    smoothed_values[rep] = smoothed.at({pixel[0], pixel[1]});
  }

  const double var_raw = sample_variance(raw_values);
  const double var_smoothed = sample_variance(smoothed_values);

  long double sum_sq = 0.0L;
  for (double w : kernel.dense()) sum_sq += static_cast<long double>(w) * w;

  const QQCurve raw_plot = normal_probability_plot(SampleSet(raw_values));
  const QQCurve smoothed_plot =
      normal_probability_plot(SampleSet(smoothed_values));
  const LineFit raw_fit = qq_line_fit(raw_plot);
  const LineFit smoothed_fit = qq_line_fit(smoothed_plot);

  ExperimentReport report;
  report.name = "gaussianness";
  report.add_param("seed", std::to_string(rng.seed()));
  report.add_param("n_reps", std::to_string(n_reps));
  report.add_param("sigma", format_double(sigma));
  report.add_param("radius", std::to_string(radius));
  report.add_param("noise_sd", format_double(noise_sd));
  report.add_param("pixel_row", std::to_string(pixel[0]));
  report.add_param("pixel_col", std::to_string(pixel[1]));
  report.add_param("boundary", boundary_name(kExperimentBoundary));
  report.add_metric("var_raw", var_raw);
  report.add_metric("var_smoothed", var_smoothed);
  report.add_metric("variance_ratio", var_smoothed / var_raw);
  report.add_metric("sum_sq_weights", static_cast<double>(sum_sq));
  report.add_metric("r2_raw", raw_fit.r2);
  report.add_metric("r2_smoothed", smoothed_fit.r2);

  const std::string prefix = prepare_out_dir(out_dir);
  if (!prefix.empty()) {
    std::vector<std::vector<double>> rows_csv;
    rows_csv.reserve(n_reps);
    for (std::size_t rep = 0; rep < n_reps; ++rep)
      rows_csv.push_back({static_cast<double>(rep), raw_values[rep],
                          smoothed_values[rep]});
    write_csv(prefix + "pixel_values.csv", {"rep", "raw", "smoothed"},
              rows_csv);
    write_plot_csv(prefix + "normal_plot_raw.csv", raw_plot);
    write_plot_csv(prefix + "normal_plot_smoothed.csv", smoothed_plot);
    report.artifacts.push_back("pixel_values.csv");
    report.artifacts.push_back("normal_plot_raw.csv");
    report.artifacts.push_back("normal_plot_smoothed.csv");
  }
  return report;
}

}  // namespace gks
