#include "gks/kernel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace gks {

namespace {

// 2 sqrt(2 ln 2)
constexpr double kFwhmPerSigma = 2.3548200450309493;

}  // namespace

double sigma_to_fwhm(double sigma) {
  if (!(sigma >= 0.0))
    throw std::invalid_argument("sigma_to_fwhm: sigma must be >= 0");
  return sigma * kFwhmPerSigma;
}

double fwhm_to_sigma(double fwhm) {
  if (!(fwhm >= 0.0))
    throw std::invalid_argument("fwhm_to_sigma: fwhm must be >= 0");
  return fwhm / kFwhmPerSigma;
}

Kernel1D::Kernel1D(double sigma, std::size_t radius, std::vector<double> weights)
    : sigma_(sigma), radius_(radius), weights_(std::move(weights)) {
  if (!(sigma_ > 0.0) || !std::isfinite(sigma_))
    throw std::invalid_argument("Kernel1D: sigma must be positive");
  if (weights_.size() != 2 * radius_ + 1)
    throw std::invalid_argument("Kernel1D: expected 2*radius+1 weights");
  long double sum = 0.0L;
  for (double w : weights_) {
    if (!std::isfinite(w) || w < 0.0)
      throw std::invalid_argument("Kernel1D: weights must be finite and >= 0");
    sum += w;
  }
  if (std::fabs(static_cast<double>(sum) - 1.0) > 1e-12)
    throw std::invalid_argument("Kernel1D: weights must sum to 1");
  for (std::size_t k = 1; k <= radius_; ++k) {
    if (weights_[radius_ - k] != weights_[radius_ + k])
      throw std::invalid_argument("Kernel1D: weights must be symmetric");
    if (weights_[radius_ + k] > weights_[radius_ + k - 1])
      throw std::invalid_argument(
          "Kernel1D: weights must be unimodal with the maximum at the center");
  }
}

Kernel1D gaussian_kernel_1d(double sigma, std::size_t radius, double spacing) {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw std::invalid_argument("gaussian_kernel_1d: sigma must be positive");
  if (radius < 1)
    throw std::invalid_argument("gaussian_kernel_1d: radius must be >= 1");
  if (!(spacing > 0.0) || !std::isfinite(spacing))
    throw std::invalid_argument("gaussian_kernel_1d: spacing must be positive");

  // Evaluate one half and mirror so symmetry is exact.
  std::vector<double> half(radius + 1);
  long double sum = 0.0L;
  for (std::size_t k = 0; k <= radius; ++k) {
    const double t = static_cast<double>(k) * spacing;
    half[k] = std::exp(-(t * t) / (2.0 * sigma * sigma));
    sum += (k == 0 ? 1.0L : 2.0L) * half[k];
  }
  const double inv = static_cast<double>(1.0L / sum);

  std::vector<double> w(2 * radius + 1);
  for (std::size_t k = 0; k <= radius; ++k) {
    const double v = half[k] * inv;
    w[radius - k] = v;
    w[radius + k] = v;
  }
  return Kernel1D(sigma, radius, std::move(w));
}

SeparableKernel::SeparableKernel(std::vector<Kernel1D> axes)
    : axes_(std::move(axes)) {
  if (axes_.empty())
    throw std::invalid_argument("SeparableKernel: needs at least one axis");
  // The dense sum is the product of the per-axis sums.
  long double product = 1.0L;
  for (const Kernel1D& k : axes_) {
    long double s = 0.0L;
    for (double w : k.weights()) s += w;
    product *= s;
  }
  if (std::fabs(static_cast<double>(product) - 1.0) > 1e-10)
    throw std::invalid_argument("SeparableKernel: dense kernel must sum to 1");
}

std::vector<std::size_t> SeparableKernel::dense_dims() const {
  std::vector<std::size_t> d(axes_.size());
  for (std::size_t a = 0; a < axes_.size(); ++a) d[a] = axes_[a].size();
  return d;
}

std::vector<double> SeparableKernel::dense() const {
  const auto dims = dense_dims();
  std::size_t total = 1;
  for (std::size_t d : dims) total *= d;

  std::vector<double> out(total);
  std::vector<std::size_t> idx(dims.size(), 0);
  for (std::size_t lin = 0; lin < total; ++lin) {
    double v = 1.0;
    for (std::size_t a = 0; a < dims.size(); ++a)
      v *= axes_[a].weights()[idx[a]];
    out[lin] = v;
    for (std::size_t a = dims.size(); a-- > 0;) {
      if (++idx[a] < dims[a]) break;
      idx[a] = 0;
    }
  }
  return out;
}

SeparableKernel separable_kernel(double sigma, std::size_t radius,
                                 std::size_t rank,
                                 std::vector<double> spacing) {
  if (rank < 1)
    throw std::invalid_argument("separable_kernel: rank must be >= 1");
  if (spacing.empty()) spacing.assign(rank, 1.0);
  if (spacing.size() != rank)
    throw std::invalid_argument("separable_kernel: spacing length must match rank");
  std::vector<Kernel1D> axes;
  axes.reserve(rank);
  for (std::size_t a = 0; a < rank; ++a)
    axes.push_back(gaussian_kernel_1d(sigma, radius, spacing[a]));
  return SeparableKernel(std::move(axes));
}

std::size_t default_radius(double sigma, double spacing) {
  if (!(sigma > 0.0) || !(spacing > 0.0))
    throw std::invalid_argument("default_radius: sigma and spacing must be positive");
  const double r = std::ceil(4.0 * sigma / spacing);
  return r < 1.0 ? 1 : static_cast<std::size_t>(r);
}

}  // namespace gks
