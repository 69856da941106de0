#ifndef GKS_CONVOLVE_HPP
#define GKS_CONVOLVE_HPP

#include <cstddef>
#include <vector>

#include "gks/field.hpp"
#include "gks/kernel.hpp"

namespace gks {

/// How samples outside the grid are supplied during 'same'-shaped convolution.
///   ZeroPad:   out-of-range samples are 0
///   Reflect:   mirrored about the border, edge sample repeated (x[-1] = x[0])
///   Replicate: clamped to the nearest edge sample
enum class BoundaryMode { ZeroPad, Reflect, Replicate };

/// One 1-D pass along `axis`; output dims equal input dims. The kernel is
/// applied as a correlation, which is identical to convolution for the
/// symmetric kernels this library constructs. Each output sample accumulates
/// in long double in a fixed tap order. Requires kernel radius < extent of
/// the axis.
Field convolve_axis(const Field& field, const Kernel1D& kernel,
                    std::size_t axis, BoundaryMode boundary);

/// Separable n-D smoothing: sequential convolve_axis over every axis.
Field smooth(const Field& field, const SeparableKernel& kernel,
             BoundaryMode boundary = BoundaryMode::ZeroPad);

/// Brute-force n-D convolution with the materialized dense kernel. Same
/// contract as smooth, O(k^n) per sample; kept as the equivalence oracle.
Field convolve_dense(const Field& field, const SeparableKernel& kernel,
                     BoundaryMode boundary = BoundaryMode::ZeroPad);

/// Isotropic smoothing helper; radius 0 selects default_radius per axis.
Field smooth_isotropic(const Field& field, double sigma, std::size_t radius = 0,
                       BoundaryMode boundary = BoundaryMode::ZeroPad);

/// One smoothed copy per sigma. Sigmas must be non-empty and strictly
/// ascending; radius 0 selects default_radius per axis and sigma.
std::vector<Field> scale_space(const Field& field,
                               const std::vector<double>& sigmas,
                               BoundaryMode boundary = BoundaryMode::ZeroPad,
                               std::size_t radius = 0);

/// Smoothing parameterized by FWHM instead of sigma.
Field gaussblur_fwhm(const Field& field, double fwhm,
                     BoundaryMode boundary = BoundaryMode::ZeroPad,
                     std::size_t radius = 0);

}  // namespace gks

#endif
