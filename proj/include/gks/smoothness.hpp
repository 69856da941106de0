#ifndef GKS_SMOOTHNESS_HPP
#define GKS_SMOOTHNESS_HPP

#include <cstddef>
#include <vector>

#include "gks/field.hpp"

namespace gks {

/// n >= 2 residual images over a common lattice.
class ResidualEnsemble {
public:
  explicit ResidualEnsemble(std::vector<Field> fields);

  const std::vector<Field>& fields() const { return fields_; }
  std::size_t n_images() const { return fields_.size(); }
  const std::vector<std::size_t>& dims() const { return fields_[0].dims(); }
  const std::vector<double>& spacing() const { return fields_[0].spacing(); }
  std::size_t voxel_count() const { return fields_[0].size(); }

private:
  std::vector<Field> fields_;
};

/// Residuals from the simplest fit: r_ij = x_ij - mean_i(x_ij).
ResidualEnsemble subtract_mean(const std::vector<Field>& samples);

/// Scales each voxel column to unit sum of squares across images:
/// u_ij = r_ij / sqrt(sum_i r_ij^2). Throws if any voxel has an all-zero
/// residual column, naming the voxel.
ResidualEnsemble normalize_residuals(const ResidualEnsemble& ens);

/// Roughness and effective FWHM along one lattice edge. efwhm is
/// sqrt(4 ln 2) / lambda, +infinity when lambda == 0.
struct EdgeEstimate {
  std::size_t voxel_a = 0;  // linear indices, voxel_b = voxel_a + stride(axis)
  std::size_t voxel_b = 0;
  std::size_t axis = 0;
  double delta_u = 0.0;   // sqrt(sum_i (u_ia - u_ib)^2)
  double lambda = 0.0;    // delta_u / delta_x, units 1/length
  double efwhm = 0.0;     // units length
};

/// Estimate along the edge between two voxels that must be adjacent along
/// exactly one axis. Expects normalized residuals.
EdgeEstimate edge_efwhm(const ResidualEnsemble& normalized, std::size_t voxel_a,
                        std::size_t voxel_b, double delta_x);

struct SmoothnessOptions {
  /// Edges are summarized only if both endpoints lie at least this many
  /// samples from every border. 0 includes border edges.
  std::size_t border_margin = 1;
};

struct SmoothnessSummary {
  std::vector<EdgeEstimate> edges;   // every lattice edge, border included
  double median_efwhm = 0.0;         // over finite summarized estimates
  double lambda_rms_fwhm = 0.0;      // sqrt(4 ln 2) / rms(lambda), summarized edges
  std::size_t summarized_edges = 0;
  std::size_t infinite_excluded = 0; // infinite estimates dropped from the median
};

/// Normalizes the residuals and estimates eFWHM along every lattice edge,
/// using the ensemble spacing as the per-axis edge length. Every axis extent
/// must be >= 2.
SmoothnessSummary field_efwhm(const ResidualEnsemble& residuals,
                              const SmoothnessOptions& options = {});

}  // namespace gks

#endif
