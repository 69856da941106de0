#ifndef GKS_STATS_HPP
#define GKS_STATS_HPP

#include <cstddef>
#include <vector>

#include "gks/field.hpp"

namespace gks {

/// A finite collection of real observations with its order statistics.
class SampleSet {
public:
  explicit SampleSet(std::vector<double> values);

  const std::vector<double>& values() const { return values_; }
  /// Ascending order statistics X_(1) <= ... <= X_(n).
  const std::vector<double>& sorted() const { return sorted_; }
  std::size_t size() const { return values_.size(); }

private:
  std::vector<double> values_;
  std::vector<double> sorted_;
};

/// #{X_i <= q} / n.
double empirical_cdf(const SampleSet& s, double q);

/// Sample quantile at p in (0,1) under plotting positions p_j = (j-0.5)/n,
/// linearly interpolated between adjacent order statistics and clamped to
/// X_(1) / X_(n) outside [p_1, p_n].
double sample_quantile(const SampleSet& s, double p);

/// Standard normal CDF, evaluated through erfc.
double normal_cdf(double x);

/// Inverse standard normal CDF. Rational approximation refined by one
/// Halley step on the erfc-based CDF; |Phi(result) - p| stays below 1e-8
/// across (0,1).
double normal_quantile(double p);

/// -ln(1-p)/rate for p in [0,1); p == 1 is rejected.
double exponential_quantile(double rate, double p);

struct QQPoint {
  double p;   // quantile parameter in (0,1)
  double qx;  // horizontal quantile
  double qy;  // vertical quantile
};

/// A finite list of paired quantile points; p strictly increasing, qx and qy
/// non-decreasing in p.
class QQCurve {
public:
  explicit QQCurve(std::vector<QQPoint> points);
  const std::vector<QQPoint>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }

private:
  std::vector<QQPoint> points_;
};

/// Pairs sample quantiles of x and y on the grid p_j = (j-0.5)/n_points.
QQCurve qq_curve(const SampleSet& x, const SampleSet& y, std::size_t n_points);

/// Theoretical standard normal quantiles against the order statistics:
/// points ((j-0.5)/n, normal_quantile(p_j), X_(j)). Requires n >= 3.
QQCurve normal_probability_plot(const SampleSet& s);

/// Least-squares line qy ~ qx over points with p in [trim, 1-trim].
/// r2_defined is false for degenerate (constant) coordinates.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  bool r2_defined = false;
};

LineFit qq_line_fit(const QQCurve& curve, double trim = 0.05);

/// Evaluation lattice for one KDE axis: nodes min + i*step, i in [0, count).
struct GridAxis {
  double min = 0.0;
  double step = 1.0;
  std::size_t count = 0;
};

struct KdeResult {
  Field density;
  /// False when some data point lies outside the grid span on some axis.
  bool grid_covers_data = true;
};

/// Gaussian kernel density estimate (1/n) sum_i K_sigma(x - x_i) evaluated
/// with the exact (untruncated) product kernel at every grid node. Points are
/// d-dimensional; grid must have one axis per dimension.
KdeResult kde(const std::vector<std::vector<double>>& points, double sigma,
              const std::vector<GridAxis>& grid);

/// 1-D convenience overload.
KdeResult kde(const SampleSet& s, double sigma, const GridAxis& grid);

}  // namespace gks

#endif
