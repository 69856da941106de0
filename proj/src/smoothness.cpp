#include "gks/smoothness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace gks {

namespace {

// sqrt(4 ln 2)
const double kEfwhmNumerator = std::sqrt(4.0 * std::log(2.0));

std::vector<std::size_t> decode_index(std::size_t lin,
                                      const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> idx(dims.size());
  for (std::size_t a = dims.size(); a-- > 0;) {
    idx[a] = lin % dims[a];
    lin /= dims[a];
  }
  return idx;
}

double median_of(std::vector<double>& v) {
  const std::size_t n = v.size();
  std::sort(v.begin(), v.end());
  if (n % 2 == 1) return v[n / 2];
  return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

ResidualEnsemble::ResidualEnsemble(std::vector<Field> fields)
    : fields_(std::move(fields)) {
  if (fields_.size() < 2)
    throw std::invalid_argument("ResidualEnsemble: needs at least 2 images");
  for (const Field& f : fields_) {
    if (f.dims() != fields_[0].dims())
      throw std::invalid_argument("ResidualEnsemble: all fields must share dims");
    if (f.spacing() != fields_[0].spacing())
      throw std::invalid_argument(
          "ResidualEnsemble: all fields must share spacing");
  }
}

ResidualEnsemble subtract_mean(const std::vector<Field>& samples) {
  if (samples.size() < 2)
    throw std::invalid_argument("subtract_mean: needs at least 2 images");
  const std::size_t n = samples.size();
  const std::size_t voxels = samples[0].size();
  std::vector<double> mean(voxels, 0.0);
  for (const Field& f : samples) {
    if (f.dims() != samples[0].dims())
      throw std::invalid_argument("subtract_mean: all fields must share dims");
    for (std::size_t j = 0; j < voxels; ++j) mean[j] += f[j];
  }
  for (double& m : mean) m /= static_cast<double>(n);

  std::vector<Field> residuals;
  residuals.reserve(n);
  for (const Field& f : samples) {
    std::vector<double> r(voxels);
    for (std::size_t j = 0; j < voxels; ++j) r[j] = f[j] - mean[j];
    residuals.emplace_back(f.dims(), f.spacing(), std::move(r));
  }
  return ResidualEnsemble(std::move(residuals));
}

ResidualEnsemble normalize_residuals(const ResidualEnsemble& ens) {
  const std::size_t n = ens.n_images();
  const std::size_t voxels = ens.voxel_count();

  std::vector<double> inv_norm(voxels);
  for (std::size_t j = 0; j < voxels; ++j) {
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = ens.fields()[i][j];
      ss += r * r;
    }
    if (!(ss > 0.0))
      throw std::invalid_argument(
          "normalize_residuals: zero residual column at voxel " +
          std::to_string(j));
    inv_norm[j] = 1.0 / std::sqrt(ss);
  }

  std::vector<Field> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> u(voxels);
    for (std::size_t j = 0; j < voxels; ++j)
      u[j] = ens.fields()[i][j] * inv_norm[j];
    out.emplace_back(ens.dims(), ens.spacing(), std::move(u));
  }
  return ResidualEnsemble(std::move(out));
}

EdgeEstimate edge_efwhm(const ResidualEnsemble& normalized, std::size_t voxel_a,
                        std::size_t voxel_b, double delta_x) {
  if (!(delta_x > 0.0))
    throw std::invalid_argument("edge_efwhm: delta_x must be positive");
  const auto& dims = normalized.dims();
  if (voxel_a >= normalized.voxel_count() || voxel_b >= normalized.voxel_count())
    throw std::invalid_argument("edge_efwhm: voxel index out of range");
  if (voxel_b < voxel_a) std::swap(voxel_a, voxel_b);

  // Adjacent along exactly one axis: linear distance equals that axis'
  // stride and the index does not wrap past the axis end.
  const std::vector<std::size_t> idx = decode_index(voxel_a, dims);
  std::size_t axis = dims.size();
  std::size_t stride = 1;
  for (std::size_t a = dims.size(); a-- > 0;) {
    if (voxel_b - voxel_a == stride && idx[a] + 1 < dims[a]) {
      axis = a;
      break;
    }
    stride *= dims[a];
  }
  if (axis == dims.size())
    throw std::invalid_argument("edge_efwhm: voxels " + std::to_string(voxel_a) +
                                " and " + std::to_string(voxel_b) +
                                " are not lattice-adjacent");

  EdgeEstimate e;
  e.voxel_a = voxel_a;
  e.voxel_b = voxel_b;
  e.axis = axis;
  double ss = 0.0;
  for (std::size_t i = 0; i < normalized.n_images(); ++i) {
    const double d =
        normalized.fields()[i][voxel_a] - normalized.fields()[i][voxel_b];
    ss += d * d;
  }
  e.delta_u = std::sqrt(ss);
  e.lambda = e.delta_u / delta_x;
  e.efwhm = e.lambda > 0.0 ? kEfwhmNumerator / e.lambda
                           : std::numeric_limits<double>::infinity();
  return e;
}

SmoothnessSummary field_efwhm(const ResidualEnsemble& residuals,
                              const SmoothnessOptions& options) {
  const auto& dims = residuals.dims();
  for (std::size_t a = 0; a < dims.size(); ++a)
    if (dims[a] < 2)
      throw std::invalid_argument("field_efwhm: every axis extent must be >= 2");

  const ResidualEnsemble normalized = normalize_residuals(residuals);

  SmoothnessSummary summary;
  std::vector<double> finite_efwhm;
  long double lambda_sq_sum = 0.0L;

  const std::size_t voxels = residuals.voxel_count();
  for (std::size_t lin = 0; lin < voxels; ++lin) {
    const std::vector<std::size_t> idx = decode_index(lin, dims);
    std::size_t stride = 1;
    for (std::size_t a = dims.size(); a-- > 0;) {
      if (idx[a] + 1 < dims[a]) {
        const EdgeEstimate e =
            edge_efwhm(normalized, lin, lin + stride, residuals.spacing()[a]);
        summary.edges.push_back(e);

        bool interior = true;
        const std::size_t m = options.border_margin;
        for (std::size_t b = 0; b < dims.size() && interior; ++b) {
          const std::size_t hi = idx[b] + (b == a ? 1 : 0);
          if (idx[b] < m || hi + m >= dims[b]) interior = false;
        }
        if (interior) {
          ++summary.summarized_edges;
          lambda_sq_sum += static_cast<long double>(e.lambda) * e.lambda;
          if (std::isinf(e.efwhm))
            ++summary.infinite_excluded;
          else
            finite_efwhm.push_back(e.efwhm);
        }
      }
      stride *= dims[a];
    }
  }

  summary.median_efwhm = finite_efwhm.empty()
                             ? std::numeric_limits<double>::infinity()
                             : median_of(finite_efwhm);
  const double rms =
      summary.summarized_edges == 0
          ? 0.0
          : std::sqrt(static_cast<double>(
                lambda_sq_sum / static_cast<long double>(summary.summarized_edges)));
  summary.lambda_rms_fwhm = rms > 0.0
                                ? kEfwhmNumerator / rms
                                : std::numeric_limits<double>::infinity();
  return summary;
}

}  // namespace gks
