#ifndef GKS_KERNEL_HPP
#define GKS_KERNEL_HPP

#include <cstddef>
#include <vector>

namespace gks {

/// FWHM of a Gaussian = 2 sqrt(2 ln 2) * sigma.
double sigma_to_fwhm(double sigma);
double fwhm_to_sigma(double fwhm);

/// Discrete normalized Gaussian weights along one axis.
///
/// Weights sum to 1 (within 1e-12), are mirror-symmetric about the center
/// index (exactly, by construction), and are unimodal with the maximum at
/// the center.
class Kernel1D {
public:
  Kernel1D(double sigma, std::size_t radius, std::vector<double> weights);

  double sigma() const { return sigma_; }
  std::size_t radius() const { return radius_; }
  const std::vector<double>& weights() const { return weights_; }
  std::size_t size() const { return weights_.size(); }

private:
  double sigma_;
  std::size_t radius_;
  std::vector<double> weights_;
};

/// Samples exp(-(k*spacing)^2 / (2 sigma^2)) for k in [-radius, radius] and
/// renormalizes so the weights sum to 1. Requires sigma > 0 and radius >= 1.
Kernel1D gaussian_kernel_1d(double sigma, std::size_t radius,
                            double spacing = 1.0);

/// An n-D isotropic kernel factored as one Kernel1D per axis. The dense
/// outer-product kernel sums to 1 within 1e-10.
class SeparableKernel {
public:
  explicit SeparableKernel(std::vector<Kernel1D> axes);

  const std::vector<Kernel1D>& axes() const { return axes_; }
  std::size_t rank() const { return axes_.size(); }

  /// Extent 2*radius+1 per axis of the dense equivalent.
  std::vector<std::size_t> dense_dims() const;

  /// Materialized outer product, row-major.
  std::vector<double> dense() const;

private:
  std::vector<Kernel1D> axes_;
};

/// One isotropic Kernel1D per axis, each built with that axis' spacing.
/// `spacing` may be empty (all axes 1.0) or have length == rank.
SeparableKernel separable_kernel(double sigma, std::size_t radius,
                                 std::size_t rank,
                                 std::vector<double> spacing = {});

/// Default truncation radius: ceil(4 sigma / spacing), at least 1.
std::size_t default_radius(double sigma, double spacing = 1.0);

}  // namespace gks

#endif
