#ifndef GKS_FIELD_HPP
#define GKS_FIELD_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace gks {

/// An n-dimensional grid of real samples with per-axis spacing, stored
/// row-major (last axis fastest). Immutable after construction.
class Field {
public:
  /// Unit spacing on every axis.
  Field(std::vector<std::size_t> dims, std::vector<double> values);

  Field(std::vector<std::size_t> dims, std::vector<double> spacing,
        std::vector<double> values);

  static Field zeros(std::vector<std::size_t> dims,
                     std::vector<double> spacing = {});

  const std::vector<std::size_t>& dims() const { return dims_; }
  const std::vector<double>& spacing() const { return spacing_; }
  const std::vector<double>& values() const { return values_; }

  std::size_t rank() const { return dims_.size(); }
  std::size_t size() const { return values_.size(); }

  /// Row-major stride of `axis` in samples.
  std::size_t stride(std::size_t axis) const;

  std::size_t linear_index(std::span<const std::size_t> idx) const;

  double at(std::span<const std::size_t> idx) const {
    return values_[linear_index(idx)];
  }
  double at(std::initializer_list<std::size_t> idx) const {
    return at(std::span<const std::size_t>(idx.begin(), idx.size()));
  }
  double operator[](std::size_t i) const { return values_[i]; }

private:
  std::vector<std::size_t> dims_;
  std::vector<double> spacing_;
  std::vector<double> values_;
};

/// Root-mean-square difference between two same-shaped fields.
double rmse(const Field& a, const Field& b);

}  // namespace gks

#endif
