#include "gks/convolve.hpp"

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace gks {

namespace {

using Index = std::ptrdiff_t;

// Maps an out-of-range line index according to the boundary mode. Returns -1
// for ZeroPad misses.
Index resolve_index(Index i, Index n, BoundaryMode mode) {
  if (i >= 0 && i < n) return i;
  switch (mode) {
    case BoundaryMode::ZeroPad:
      return -1;
    case BoundaryMode::Reflect:
      while (i < 0 || i >= n) {
        if (i < 0) i = -1 - i;
        if (i >= n) i = 2 * n - 1 - i;
      }
      return i;
    case BoundaryMode::Replicate:
      return i < 0 ? 0 : n - 1;
  }
  return -1;
}

void check_kernel_fits(std::size_t radius, std::size_t extent,
                       std::size_t axis) {
  if (radius >= extent)
    throw std::invalid_argument(
        "convolve: kernel radius " + std::to_string(radius) +
        " must be smaller than extent " + std::to_string(extent) +
        " along axis " + std::to_string(axis));
}

}  // namespace

Field convolve_axis(const Field& field, const Kernel1D& kernel,
                    std::size_t axis, BoundaryMode boundary) {
  const auto& dims = field.dims();
  if (axis >= dims.size())
    throw std::invalid_argument("convolve_axis: axis " + std::to_string(axis) +
                                " out of range for rank " +
                                std::to_string(dims.size()));
  const Index n = static_cast<Index>(dims[axis]);
  const Index r = static_cast<Index>(kernel.radius());
  check_kernel_fits(kernel.radius(), dims[axis], axis);

  const auto& w = kernel.weights();
  const auto& x = field.values();
  std::vector<double> out(x.size());

  const std::size_t stride = field.stride(axis);
  const std::size_t block = stride * dims[axis];
  const std::size_t outer = x.size() / block;

  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t s = 0; s < stride; ++s) {
      const std::size_t base = o * block + s;
      for (Index t = 0; t < n; ++t) {
        long double acc = 0.0L;
        for (Index k = -r; k <= r; ++k) {
          const Index src = resolve_index(t + k, n, boundary);
          if (src < 0) continue;
          acc += static_cast<long double>(w[static_cast<std::size_t>(k + r)]) *
                 x[base + static_cast<std::size_t>(src) * stride];
        }
        out[base + static_cast<std::size_t>(t) * stride] =
            static_cast<double>(acc);
      }
    }
  }
  return Field(dims, field.spacing(), std::move(out));
}

Field smooth(const Field& field, const SeparableKernel& kernel,
             BoundaryMode boundary) {
  if (kernel.rank() != field.rank())
    throw std::invalid_argument("smooth: kernel rank must match field rank");
  Field result = field;
  for (std::size_t axis = 0; axis < field.rank(); ++axis)
    result = convolve_axis(result, kernel.axes()[axis], axis, boundary);
  return result;
}

Field convolve_dense(const Field& field, const SeparableKernel& kernel,
                     BoundaryMode boundary) {
  if (kernel.rank() != field.rank())
    throw std::invalid_argument("convolve_dense: kernel rank must match field rank");
  const auto& dims = field.dims();
  const std::size_t rank = dims.size();
  for (std::size_t a = 0; a < rank; ++a)
    check_kernel_fits(kernel.axes()[a].radius(), dims[a], a);

  const std::vector<double> dense = kernel.dense();
  const std::vector<std::size_t> kdims = kernel.dense_dims();
  const auto& x = field.values();
  std::vector<double> out(x.size());

  std::vector<std::size_t> idx(rank, 0);     // output position
  std::vector<std::size_t> kidx(rank, 0);    // kernel offset
  std::vector<Index> src(rank, 0);
  for (std::size_t lin = 0; lin < x.size(); ++lin) {
    long double acc = 0.0L;
    std::fill(kidx.begin(), kidx.end(), 0);
    for (std::size_t klin = 0; klin < dense.size(); ++klin) {
      bool hit = true;
      for (std::size_t a = 0; a < rank; ++a) {
        const Index off = static_cast<Index>(kidx[a]) -
                          static_cast<Index>(kernel.axes()[a].radius());
        const Index m = resolve_index(static_cast<Index>(idx[a]) + off,
                                      static_cast<Index>(dims[a]), boundary);
        if (m < 0) {
          hit = false;
          break;
        }
        src[a] = m;
      }
      if (hit) {
        std::size_t slin = 0;
        for (std::size_t a = 0; a < rank; ++a)
          slin = slin * dims[a] + static_cast<std::size_t>(src[a]);
        acc += static_cast<long double>(dense[klin]) * x[slin];
      }
      for (std::size_t a = rank; a-- > 0;) {
        if (++kidx[a] < kdims[a]) break;
        kidx[a] = 0;
      }
    }
    out[lin] = static_cast<double>(acc);
    for (std::size_t a = rank; a-- > 0;) {
      if (++idx[a] < dims[a]) break;
      idx[a] = 0;
    }
  }
  return Field(dims, field.spacing(), std::move(out));
}

Field smooth_isotropic(const Field& field, double sigma, std::size_t radius,
                       BoundaryMode boundary) {
  std::vector<Kernel1D> axes;
  axes.reserve(field.rank());
  for (std::size_t a = 0; a < field.rank(); ++a) {
    const double sp = field.spacing()[a];
    const std::size_t r = radius > 0 ? radius : default_radius(sigma, sp);
    axes.push_back(gaussian_kernel_1d(sigma, r, sp));
  }
  return smooth(field, SeparableKernel(std::move(axes)), boundary);
}

std::vector<Field> scale_space(const Field& field,
                               const std::vector<double>& sigmas,
                               BoundaryMode boundary, std::size_t radius) {
  if (sigmas.empty())
    throw std::invalid_argument("scale_space: sigma list must be non-empty");
  for (std::size_t i = 0; i < sigmas.size(); ++i) {
    if (!(sigmas[i] > 0.0))
      throw std::invalid_argument("scale_space: sigmas must be positive");
    if (i > 0 && !(sigmas[i] > sigmas[i - 1]))
      throw std::invalid_argument("scale_space: sigmas must be strictly ascending");
  }
  std::vector<Field> levels;
  levels.reserve(sigmas.size());
  for (double sigma : sigmas)
    levels.push_back(smooth_isotropic(field, sigma, radius, boundary));
  return levels;
}

Field gaussblur_fwhm(const Field& field, double fwhm, BoundaryMode boundary,
                     std::size_t radius) {
  if (!(fwhm > 0.0))
    throw std::invalid_argument("gaussblur_fwhm: fwhm must be positive");
  return smooth_isotropic(field, fwhm_to_sigma(fwhm), radius, boundary);
}

}  // namespace gks
