#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gks/convolve.hpp"
#include "gks/io.hpp"
#include "gks/kernel.hpp"
#include "gks/rng.hpp"
#include "gks/sim.hpp"
#include "gks/smoothness.hpp"
#include "gks/stats.hpp"

namespace {

using namespace gks;

[[noreturn]] void usage_error(const std::string& what) {
  throw std::runtime_error(what);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t end = s.find(sep, start);
    parts.push_back(s.substr(start, end - start));
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return parts;
}

std::vector<double> parse_double_list(const std::string& s,
                                      const std::string& what) {
  std::vector<double> out;
  for (const std::string& part : split(s, ',')) {
    if (part.empty()) usage_error(what + ": empty element in '" + s + "'");
    out.push_back(parse_double(part));
  }
  return out;
}

BoundaryMode parse_boundary(const std::string& name) {
  if (name == "zero") return BoundaryMode::ZeroPad;
  if (name == "reflect") return BoundaryMode::Reflect;
  if (name == "replicate") return BoundaryMode::Replicate;
  usage_error("unknown boundary mode '" + name +
              "' (expected zero|reflect|replicate)");
}

std::string lower_ext(const std::string& path) {
  const std::size_t dot = path.rfind('.');
  if (dot == std::string::npos) return "";
  std::string ext = path.substr(dot + 1);
  for (char& c : ext) c = static_cast<char>(std::tolower(c));
  return ext;
}

/// Reads a field from .gksf, .pgm/.ppm/.pnm or .csv (1 row or 1 column ->
/// rank 1, otherwise rank 2).
Field read_field(const std::string& path) {
  const std::string ext = lower_ext(path);
  if (ext == "gksf") return read_grid_file(path);
  if (ext == "pgm" || ext == "ppm" || ext == "pnm") return read_pnm(path);
  if (ext == "csv") {
    const auto rows = read_csv(path);
    if (rows.empty()) usage_error(path + ": empty table");
    const std::size_t width = rows[0].size();
    for (const auto& row : rows)
      if (row.size() != width) usage_error(path + ": ragged rows");
    if (rows.size() == 1) return Field({width}, rows[0]);
    std::vector<double> values;
    values.reserve(rows.size() * width);
    for (const auto& row : rows) values.insert(values.end(), row.begin(), row.end());
    if (width == 1) return Field({rows.size()}, std::move(values));
    return Field({rows.size(), width}, std::move(values));
  }
  usage_error(path + ": unknown input format (expected .gksf, .pgm or .csv)");
}

void write_field(const std::string& path, const Field& field) {
  const std::string ext = lower_ext(path);
  if (ext == "gksf") {
    write_grid_file(path, field);
    return;
  }
  if (ext == "pgm") {
    write_pgm(path, field);
    return;
  }
  if (ext == "csv") {
    std::vector<std::vector<double>> rows;
    if (field.rank() == 1) {
      for (double v : field.values()) rows.push_back({v});
    } else if (field.rank() == 2) {
      const std::size_t width = field.dims()[1];
      for (std::size_t r = 0; r < field.dims()[0]; ++r) {
        std::vector<double> row(width);
        for (std::size_t c = 0; c < width; ++c) row[c] = field[r * width + c];
        rows.push_back(std::move(row));
      }
    } else {
      usage_error(path + ": CSV output supports rank 1 or 2 only (use .gksf)");
    }
    write_csv(path, {}, rows);
    return;
  }
  usage_error(path + ": unknown output format (expected .gksf, .pgm or .csv)");
}

/// All numeric cells of a CSV, flattened row-major, as one sample set.
SampleSet read_samples(const std::string& path) {
  std::vector<double> values;
  for (const auto& row : read_csv(path))
    values.insert(values.end(), row.begin(), row.end());
  if (values.empty()) usage_error(path + ": no samples");
  return SampleSet(std::move(values));
}

struct SmoothOpts {
  std::string in, out;
  double sigma = 0.0, fwhm = 0.0;
  bool has_sigma = false, has_fwhm = false;
  std::size_t radius = 0;
  std::string boundary = "zero";
};

void run_smooth(const SmoothOpts& o) {
  if (o.has_sigma == o.has_fwhm)
    usage_error("exactly one of --sigma and --fwhm is required");
  const double sigma = o.has_sigma ? o.sigma : fwhm_to_sigma(o.fwhm);
  const Field in = read_field(o.in);
  const Field out = smooth_isotropic(in, sigma, o.radius,
                                     parse_boundary(o.boundary));
  write_field(o.out, out);
}

struct ScaleSpaceOpts {
  std::string in, sigmas, out_prefix;
  std::size_t radius = 0;
  std::string boundary = "zero";
};

void run_scalespace(const ScaleSpaceOpts& o) {
  const std::vector<double> sigmas = parse_double_list(o.sigmas, "--sigmas");
  const Field in = read_field(o.in);
  const std::vector<Field> levels =
      scale_space(in, sigmas, parse_boundary(o.boundary), o.radius);
  for (std::size_t k = 0; k < levels.size(); ++k) {
    const std::string path = o.out_prefix + std::to_string(k + 1) + ".gksf";
    write_grid_file(path, levels[k]);
    std::cout << "sigma=" << format_double(sigmas[k]) << " file=" << path
              << "\n";
  }
}

struct EfwhmOpts {
  std::vector<std::string> residuals;
  std::string spacing;
  std::string out;
  bool from_samples = false;
  std::size_t margin = 1;
  bool include_border = false;
};

void run_efwhm(const EfwhmOpts& o) {
  std::vector<Field> images;
  if (o.residuals.size() == 1) {
    // A single file is a stack: axis 0 indexes the images.
    const Field stack = read_field(o.residuals[0]);
    if (stack.rank() < 2)
      usage_error("a residual stack needs rank >= 2 (axis 0 = image index)");
    const std::size_t n = stack.dims()[0];
    if (n < 2) usage_error("a residual stack needs >= 2 images along axis 0");
    const std::vector<std::size_t> dims(stack.dims().begin() + 1,
                                        stack.dims().end());
    const std::vector<double> spacing(stack.spacing().begin() + 1,
                                      stack.spacing().end());
    std::size_t image_size = 1;
    for (std::size_t d : dims) image_size *= d;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> values(
          stack.values().begin() + static_cast<std::ptrdiff_t>(i * image_size),
          stack.values().begin() +
              static_cast<std::ptrdiff_t>((i + 1) * image_size));
      images.emplace_back(dims, spacing, std::move(values));
    }
  } else {
    for (const std::string& path : o.residuals)
      images.push_back(read_field(path));
  }

  if (!o.spacing.empty()) {
    const std::vector<double> spacing =
        parse_double_list(o.spacing, "--spacing");
    for (Field& f : images) {
      if (spacing.size() != f.rank())
        usage_error("--spacing needs one value per image axis");
      f = Field(f.dims(), spacing, f.values());
    }
  }

  const ResidualEnsemble residuals =
      o.from_samples ? subtract_mean(images) : ResidualEnsemble(images);

  SmoothnessOptions options;
  options.border_margin = o.include_border ? 0 : o.margin;
  const SmoothnessSummary summary = field_efwhm(residuals, options);

  if (!o.out.empty()) {
    std::vector<std::vector<double>> rows;
    rows.reserve(summary.edges.size());
    for (const EdgeEstimate& e : summary.edges)
      rows.push_back({static_cast<double>(e.voxel_a),
                      static_cast<double>(e.voxel_b),
                      static_cast<double>(e.axis), e.delta_u, e.lambda,
                      e.efwhm});
    write_csv(o.out, {"voxel_a", "voxel_b", "axis", "delta_u", "lambda",
                      "efwhm"},
              rows);
  }

  std::cout << "n_images=" << residuals.n_images() << "\n";
  std::cout << "edges=" << summary.edges.size() << "\n";
  std::cout << "summarized_edges=" << summary.summarized_edges << "\n";
  std::cout << "infinite_excluded=" << summary.infinite_excluded << "\n";
  std::cout << "median_efwhm=" << format_double(summary.median_efwhm) << "\n";
  std::cout << "lambda_rms_fwhm=" << format_double(summary.lambda_rms_fwhm)
            << "\n";
}

struct QqOpts {
  std::string x, y, out;
  std::size_t points = 100;
};

/// Quantile source for one QQ axis: a CSV of samples, "normal", or
/// "exp:RATE".
struct QuantileSource {
  std::unique_ptr<SampleSet> samples;
  bool normal = false;
  double exp_rate = 0.0;

  static QuantileSource parse(const std::string& text) {
    QuantileSource src;
    if (text == "normal") {
      src.normal = true;
    } else if (text.rfind("exp:", 0) == 0) {
      src.exp_rate = parse_double(text.substr(4));
      if (!(src.exp_rate > 0.0)) usage_error("exp rate must be positive");
    } else {
      src.samples = std::make_unique<SampleSet>(read_samples(text));
    }
    return src;
  }

  double quantile(double p) const {
    if (samples) return sample_quantile(*samples, p);
    if (normal) return normal_quantile(p);
    return exponential_quantile(exp_rate, p);
  }
};

void write_qq_svg(const std::string& path, const QQCurve& curve) {
  constexpr double size = 640.0, margin = 40.0;
  double xmin = curve.points().front().qx, xmax = xmin;
  double ymin = curve.points().front().qy, ymax = ymin;
  for (const QQPoint& pt : curve.points()) {
    xmin = std::min(xmin, pt.qx);
    xmax = std::max(xmax, pt.qx);
    ymin = std::min(ymin, pt.qy);
    ymax = std::max(ymax, pt.qy);
  }
  if (xmax == xmin) xmax = xmin + 1.0;
  if (ymax == ymin) ymax = ymin + 1.0;
  const double span = size - 2.0 * margin;

  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" "
                    "height=\"640\" viewBox=\"0 0 640 640\">\n"
                    "<polyline fill=\"none\" stroke=\"black\" points=\"";
  bool first = true;
  for (const QQPoint& pt : curve.points()) {
    const double px = margin + (pt.qx - xmin) / (xmax - xmin) * span;
    const double py = size - margin - (pt.qy - ymin) / (ymax - ymin) * span;
    if (!first) svg.push_back(' ');
    svg += format_double(px) + "," + format_double(py);
    first = false;
  }
  svg += "\"/>\n</svg>\n";
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) usage_error("cannot open " + path + " for writing");
  out << svg;
}

void run_qq(const QqOpts& o) {
  if (o.points < 2) usage_error("--points must be >= 2");
  const QuantileSource x = QuantileSource::parse(o.x);
  const QuantileSource y = QuantileSource::parse(o.y);

  std::vector<QQPoint> pts;
  pts.reserve(o.points);
  for (std::size_t j = 1; j <= o.points; ++j) {
    const double p =
        (static_cast<double>(j) - 0.5) / static_cast<double>(o.points);
    pts.push_back({p, x.quantile(p), y.quantile(p)});
  }
  const QQCurve curve{std::move(pts)};

  const std::string ext = lower_ext(o.out);
  if (ext == "svg") {
    write_qq_svg(o.out, curve);
  } else if (ext == "csv") {
    std::vector<std::vector<double>> rows;
    rows.reserve(curve.size());
    for (const QQPoint& pt : curve.points())
      rows.push_back({pt.p, pt.qx, pt.qy});
    write_csv(o.out, {"p", "qx", "qy"}, rows);
  } else {
    usage_error(o.out + ": unknown output format (expected .csv or .svg)");
  }
}

struct KdeOpts {
  std::string points, out;
  double sigma = 0.0;
  std::vector<std::string> grid;
};

GridAxis parse_grid_axis(const std::string& text) {
  const std::vector<std::string> parts = split(text, ':');
  if (parts.size() != 3)
    usage_error("--grid expects MIN:STEP:MAX, got '" + text + "'");
  GridAxis axis;
  axis.min = parse_double(parts[0]);
  axis.step = parse_double(parts[1]);
  const double max = parse_double(parts[2]);
  if (!(axis.step > 0.0)) usage_error("--grid step must be positive");
  if (max < axis.min) usage_error("--grid max must be >= min");
  axis.count =
      static_cast<std::size_t>(std::floor((max - axis.min) / axis.step + 1e-9)) +
      1;
  return axis;
}

void run_kde(const KdeOpts& o) {
  std::vector<GridAxis> grid;
  for (const std::string& text : o.grid) grid.push_back(parse_grid_axis(text));

  const auto rows = read_csv(o.points);
  if (rows.empty()) usage_error(o.points + ": no points");
  std::vector<std::vector<double>> points;
  points.reserve(rows.size());
  for (const auto& row : rows) {
    if (row.size() != grid.size())
      usage_error(o.points + ": each row must have one column per --grid axis");
    points.push_back(row);
  }

  const KdeResult result = kde(points, o.sigma, grid);
  if (!result.grid_covers_data)
    std::cerr << "warning: grid does not cover all data points\n";

  const std::size_t d = grid.size();
  std::vector<std::string> header;
  static const char* kAxisNames[] = {"x", "y", "z"};
  for (std::size_t a = 0; a < d; ++a)
    header.push_back(a < 3 ? kAxisNames[a] : "x" + std::to_string(a));
  header.push_back("density");

  std::vector<std::vector<double>> out_rows;
  out_rows.reserve(result.density.size());
  std::vector<std::size_t> idx(d, 0);
  for (std::size_t i = 0; i < result.density.size(); ++i) {
    std::vector<double> row(d + 1);
    for (std::size_t a = 0; a < d; ++a)
      row[a] = grid[a].min + static_cast<double>(idx[a]) * grid[a].step;
    row[d] = result.density[i];
    out_rows.push_back(std::move(row));
    for (std::size_t a = d; a-- > 0;) {
      if (++idx[a] < grid[a].count) break;
      idx[a] = 0;
    }
  }
  write_csv(o.out, header, out_rows);
}

struct BinarizeOpts {
  std::string in, out;
};

void run_binarize(const BinarizeOpts& o) {
  write_field(o.out, binarize_first_channel(read_pnm(o.in)));
}

struct SimulateOpts {
  std::string experiment, out_dir;
  std::uint64_t seed = 0;
  bool has_seed = false;
  double sigma = 0.0;
  bool has_sigma = false;
  std::string sigmas;
  std::size_t radius = 0;
  bool has_radius = false;
  double noise_sd = 0.0;
  bool has_noise_sd = false;
  std::size_t n_reps = 50;
  std::string pixel;
};

std::uint64_t resolve_seed(const SimulateOpts& o) {
  if (o.has_seed) return o.seed;
  if (const char* env = std::getenv("GKS_SEED")) {
    std::uint64_t seed = 0;
    const char* last = env + std::string(env).size();
    const auto [ptr, ec] = std::from_chars(env, last, seed);
    if (ec != std::errc{} || ptr != last)
      usage_error(std::string("malformed GKS_SEED '") + env + "'");
    return seed;
  }
  usage_error("no seed: pass --seed or set GKS_SEED");
}

void run_simulate(const SimulateOpts& o) {
  Rng rng(resolve_seed(o));
  ExperimentReport report;
  if (o.experiment == "1d") {
    report = experiment_1d(rng, o.has_sigma ? o.sigma : 10.0,
                           o.has_radius ? o.radius : 5,
                           o.has_noise_sd ? o.noise_sd : 2.0, o.out_dir);
  } else if (o.experiment == "2d") {
    report = experiment_2d(rng, o.has_sigma ? o.sigma : 1.0,
                           o.has_radius ? o.radius : 2,
                           o.has_noise_sd ? o.noise_sd : 0.4, o.out_dir);
  } else if (o.experiment == "key") {
    std::vector<double> sigmas =
        o.sigmas.empty() ? std::vector<double>{1.0, 10.0}
                         : parse_double_list(o.sigmas, "--sigmas");
    report = experiment_key(rng, std::move(sigmas),
                            o.has_radius ? o.radius : 10,
                            o.has_noise_sd ? o.noise_sd : 5.0, o.out_dir);
  } else if (o.experiment == "gaussianness") {
    std::array<std::size_t, 2> pixel = key_edge_pixel();
    if (!o.pixel.empty()) {
      const std::vector<double> rc = parse_double_list(o.pixel, "--pixel");
      if (rc.size() != 2 || rc[0] < 1 || rc[1] < 1 ||
          rc[0] != std::floor(rc[0]) || rc[1] != std::floor(rc[1]))
        usage_error("--pixel expects one-based ROW,COL integers");
      pixel = {static_cast<std::size_t>(rc[0]) - 1,
               static_cast<std::size_t>(rc[1]) - 1};
    }
    report = experiment_gaussianness(rng, o.n_reps,
                                     o.has_sigma ? o.sigma : 100.0, pixel,
                                     o.has_radius ? o.radius : 10,
                                     o.has_noise_sd ? o.noise_sd : 5.0,
                                     o.out_dir);
  } else {
    usage_error("unknown experiment '" + o.experiment +
                "' (expected 1d|2d|key|gaussianness)");
  }
  if (!o.out_dir.empty()) write_report(o.out_dir + "/report.txt", report);
  std::cout << report_text(report);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian kernel smoothing toolkit"};
  app.require_subcommand(1);

  auto smooth_opts = std::make_shared<SmoothOpts>();
  {
    CLI::App* cmd = app.add_subcommand(
        "smooth", "Smooth a field with an isotropic Gaussian kernel");
    cmd->add_option("--in", smooth_opts->in, "Input field (.gksf, .pgm, .csv)")
        ->required();
    cmd->add_option("--out", smooth_opts->out,
                    "Output field (.gksf, .pgm, .csv)")
        ->required();
    CLI::Option* s = cmd->add_option("--sigma", smooth_opts->sigma,
                                     "Kernel bandwidth sigma");
    CLI::Option* f = cmd->add_option("--fwhm", smooth_opts->fwhm,
                                     "Kernel bandwidth as FWHM");
    s->excludes(f);
    f->excludes(s);
    cmd->add_option("--radius", smooth_opts->radius,
                    "Kernel radius in samples (0 = 4 sigma rule)");
    cmd->add_option("--boundary", smooth_opts->boundary,
                    "Boundary mode: zero|reflect|replicate");
    cmd->callback([smooth_opts, s, f] {
      smooth_opts->has_sigma = s->count() > 0;
      smooth_opts->has_fwhm = f->count() > 0;
      run_smooth(*smooth_opts);
    });
  }

  auto scalespace_opts = std::make_shared<ScaleSpaceOpts>();
  {
    CLI::App* cmd = app.add_subcommand(
        "scalespace", "Smooth a field at an ascending ladder of sigmas");
    cmd->add_option("--in", scalespace_opts->in,
                    "Input field (.gksf, .pgm, .csv)")
        ->required();
    cmd->add_option("--sigmas", scalespace_opts->sigmas,
                    "Comma-separated ascending sigmas")
        ->required();
    cmd->add_option("--out-prefix", scalespace_opts->out_prefix,
                    "Output prefix; level k goes to <prefix><k>.gksf")
        ->required();
    cmd->add_option("--radius", scalespace_opts->radius,
                    "Kernel radius (0 = 4 sigma rule per level)");
    cmd->add_option("--boundary", scalespace_opts->boundary,
                    "Boundary mode: zero|reflect|replicate");
    cmd->callback([scalespace_opts] { run_scalespace(*scalespace_opts); });
  }

  auto efwhm_opts = std::make_shared<EfwhmOpts>();
  {
    CLI::App* cmd = app.add_subcommand(
        "efwhm",
        "Estimate effective FWHM per lattice edge from residual images");
    cmd->add_option("--residuals", efwhm_opts->residuals,
                    "Residual images, or one stack whose axis 0 indexes them")
        ->required()
        ->expected(-1);
    cmd->add_option("--spacing", efwhm_opts->spacing,
                    "Comma-separated per-axis spacing override");
    cmd->add_option("--out", efwhm_opts->out, "Per-edge CSV output");
    cmd->add_flag("--from-samples", efwhm_opts->from_samples,
                  "Inputs are raw samples; subtract the cross-image mean");
    cmd->add_option("--margin", efwhm_opts->margin,
                    "Border margin in samples for the summary (default 1)");
    cmd->add_flag("--include-border", efwhm_opts->include_border,
                  "Summarize border edges too (margin 0)");
    cmd->callback([efwhm_opts] { run_efwhm(*efwhm_opts); });
  }

  auto qq_opts = std::make_shared<QqOpts>();
  {
    CLI::App* cmd = app.add_subcommand(
        "qq", "Pair quantiles of two sources on a common probability grid");
    cmd->add_option("--x", qq_opts->x,
                    "Horizontal source: samples.csv, normal, or exp:RATE")
        ->required();
    cmd->add_option("--y", qq_opts->y,
                    "Vertical source: samples.csv, normal, or exp:RATE")
        ->required();
    cmd->add_option("--points", qq_opts->points,
                    "Number of probability grid points (default 100)");
    cmd->add_option("--out", qq_opts->out, "Output .csv or .svg")->required();
    cmd->callback([qq_opts] { run_qq(*qq_opts); });
  }

  auto kde_opts = std::make_shared<KdeOpts>();
  {
    CLI::App* cmd = app.add_subcommand(
        "kde", "Gaussian kernel density estimate on a lattice");
    cmd->add_option("--points", kde_opts->points,
                    "CSV of points, one row per point")
        ->required();
    cmd->add_option("--sigma", kde_opts->sigma, "Kernel bandwidth sigma")
        ->required();
    cmd->add_option("--grid", kde_opts->grid,
                    "Evaluation axis MIN:STEP:MAX, once per dimension")
        ->required()
        ->expected(-1);
    cmd->add_option("--out", kde_opts->out, "Output CSV")->required();
    cmd->callback([kde_opts] { run_kde(*kde_opts); });
  }

  auto binarize_opts = std::make_shared<BinarizeOpts>();
  {
    CLI::App* cmd = app.add_subcommand(
        "binarize", "Extract channel 0 of a raster scaled to [0,1]");
    cmd->add_option("--in", binarize_opts->in, "Input .pgm/.ppm")->required();
    cmd->add_option("--out", binarize_opts->out, "Output field")->required();
    cmd->callback([binarize_opts] { run_binarize(*binarize_opts); });
  }

  auto simulate_opts = std::make_shared<SimulateOpts>();
  {
    CLI::App* cmd = app.add_subcommand(
        "simulate", "Run a seeded simulation experiment");
    cmd->add_option("--experiment", simulate_opts->experiment,
                    "1d|2d|key|gaussianness")
        ->required();
    CLI::Option* seed = cmd->add_option("--seed", simulate_opts->seed,
                                        "Master seed (falls back to GKS_SEED)");
    cmd->add_option("--out-dir", simulate_opts->out_dir,
                    "Directory for report.txt and artifacts");
    CLI::Option* sigma =
        cmd->add_option("--sigma", simulate_opts->sigma, "Bandwidth override");
    cmd->add_option("--sigmas", simulate_opts->sigmas,
                    "Ascending sigma list (key experiment)");
    CLI::Option* radius = cmd->add_option("--radius", simulate_opts->radius,
                                          "Kernel radius override");
    CLI::Option* noise = cmd->add_option("--noise-sd", simulate_opts->noise_sd,
                                         "Noise standard deviation override");
    cmd->add_option("--n-reps", simulate_opts->n_reps,
                    "Repetitions (gaussianness experiment)");
    cmd->add_option("--pixel", simulate_opts->pixel,
                    "One-based ROW,COL probe pixel (gaussianness experiment)");
    cmd->callback([simulate_opts, seed, sigma, radius, noise] {
      simulate_opts->has_seed = seed->count() > 0;
      simulate_opts->has_sigma = sigma->count() > 0;
      simulate_opts->has_radius = radius->count() > 0;
      simulate_opts->has_noise_sd = noise->count() > 0;
      run_simulate(*simulate_opts);
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
