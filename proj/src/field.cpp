#include "gks/field.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace gks {

namespace {

std::vector<double> unit_spacing(std::size_t rank) {
  return std::vector<double>(rank, 1.0);
}

std::size_t checked_sample_count(const std::vector<std::size_t>& dims) {
  if (dims.empty()) throw std::invalid_argument("Field: dims must be non-empty");
  std::size_t n = 1;
  for (std::size_t d : dims) {
    if (d < 1) throw std::invalid_argument("Field: every dim must be >= 1");
    n *= d;
  }
  return n;
}

}  // namespace

Field::Field(std::vector<std::size_t> dims, std::vector<double> values)
    : Field(std::move(dims), {}, std::move(values)) {}

Field::Field(std::vector<std::size_t> dims, std::vector<double> spacing,
             std::vector<double> values)
    : dims_(std::move(dims)),
      spacing_(std::move(spacing)),
      values_(std::move(values)) {
  const std::size_t n = checked_sample_count(dims_);
  if (spacing_.empty()) spacing_ = unit_spacing(dims_.size());
  if (spacing_.size() != dims_.size())
    throw std::invalid_argument("Field: spacing length must match rank");
  for (double s : spacing_)
    if (!(s > 0.0) || !std::isfinite(s))
      throw std::invalid_argument("Field: every spacing must be positive");
  if (values_.size() != n)
    throw std::invalid_argument("Field: expected " + std::to_string(n) +
                                " values, got " + std::to_string(values_.size()));
  for (double v : values_)
    if (!std::isfinite(v))
      throw std::invalid_argument("Field: values must be finite");
}

Field Field::zeros(std::vector<std::size_t> dims, std::vector<double> spacing) {
  const std::size_t n = checked_sample_count(dims);
  return Field(std::move(dims), std::move(spacing), std::vector<double>(n, 0.0));
}

std::size_t Field::stride(std::size_t axis) const {
  if (axis >= dims_.size())
    throw std::invalid_argument("Field::stride: axis out of range");
  std::size_t s = 1;
  for (std::size_t a = axis + 1; a < dims_.size(); ++a) s *= dims_[a];
  return s;
}

std::size_t Field::linear_index(std::span<const std::size_t> idx) const {
  if (idx.size() != dims_.size())
    throw std::invalid_argument("Field::linear_index: index rank mismatch");
  std::size_t lin = 0;
  for (std::size_t a = 0; a < dims_.size(); ++a) {
    if (idx[a] >= dims_[a])
      throw std::invalid_argument("Field::linear_index: index out of range");
    lin = lin * dims_[a] + idx[a];
  }
  return lin;
}

double rmse(const Field& a, const Field& b) {
  if (a.dims() != b.dims())
    throw std::invalid_argument("rmse: fields must share dims");
  long double acc = 0.0L;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const long double d = static_cast<long double>(a[i]) - b[i];
    acc += d * d;
  }
  return std::sqrt(static_cast<double>(acc / a.size()));
}

}  // namespace gks
