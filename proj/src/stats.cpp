#include "gks/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace gks {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kSqrt2Pi = 2.5066282746310002;

// Coefficients of Acklam's rational approximation to the inverse normal CDF
// (relative error below 1.15e-9 before refinement).
constexpr double kA[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                         -2.759285104469687e+02, 1.383577518672690e+02,
                         -3.066479806614716e+01, 2.506628277459239e+00};
constexpr double kB[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                         -1.556989798598866e+02, 6.680131188771972e+01,
                         -1.328068155288572e+01};
constexpr double kC[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                         -2.400758277161838e+00, -2.549732539343734e+00,
                         4.374664141464968e+00,  2.938163982698783e+00};
constexpr double kD[] = {7.784695709041462e-03, 3.224671290700398e-01,
                         2.445134137142996e+00, 3.754408661907416e+00};
constexpr double kPLow = 0.02425;

double acklam(double p) {
  if (p < kPLow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((kC[0] * q + kC[1]) * q + kC[2]) * q + kC[3]) * q + kC[4]) * q +
            kC[5]) /
           ((((kD[0] * q + kD[1]) * q + kD[2]) * q + kD[3]) * q + 1.0);
  }
  if (p > 1.0 - kPLow) {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((kC[0] * q + kC[1]) * q + kC[2]) * q + kC[3]) * q + kC[4]) * q +
             kC[5]) /
           ((((kD[0] * q + kD[1]) * q + kD[2]) * q + kD[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((kA[0] * r + kA[1]) * r + kA[2]) * r + kA[3]) * r + kA[4]) * r +
          kA[5]) *
         q /
         (((((kB[0] * r + kB[1]) * r + kB[2]) * r + kB[3]) * r + kB[4]) * r +
          1.0);
}

}  // namespace

SampleSet::SampleSet(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty())
    throw std::invalid_argument("SampleSet: needs at least one observation");
  for (double v : values_)
    if (!std::isfinite(v))
      throw std::invalid_argument("SampleSet: observations must be finite");
  sorted_ = values_;
  std::sort(sorted_.begin(), sorted_.end());
}

double empirical_cdf(const SampleSet& s, double q) {
  const auto& xs = s.sorted();
  const auto it = std::upper_bound(xs.begin(), xs.end(), q);
  return static_cast<double>(it - xs.begin()) / static_cast<double>(xs.size());
}

double sample_quantile(const SampleSet& s, double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("sample_quantile: p must lie in (0,1)");
  const auto& xs = s.sorted();
  const std::size_t n = xs.size();

  // Fractional 1-based order-statistic position: p == (j-0.5)/n  =>  j = pn+0.5
  const double pos = p * static_cast<double>(n) + 0.5;
  if (pos <= 1.0) return xs.front();
  if (pos >= static_cast<double>(n)) return xs.back();

  const std::size_t j = static_cast<std::size_t>(pos);  // floor; 1 <= j < n
  const double t = pos - static_cast<double>(j);
  const double lo = xs[j - 1];
  const double hi = xs[j];
  return std::clamp(lo + (hi - lo) * t, lo, hi);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("normal_quantile: p must lie in (0,1)");
  double x = acklam(p);
  // One Halley step against the erfc-based CDF.
  const double density = std::exp(-0.5 * x * x) / kSqrt2Pi;
  if (density > 0.0 && std::isfinite(density)) {
    const double e = normal_cdf(x) - p;
    const double u = e / density;
    x = x - u / (1.0 + 0.5 * x * u);
  }
  return x;
}

double exponential_quantile(double rate, double p) {
  if (!(rate > 0.0))
    throw std::invalid_argument("exponential_quantile: rate must be positive");
  if (!(p >= 0.0 && p < 1.0))
    throw std::invalid_argument("exponential_quantile: p must lie in [0,1)");
  return -std::log1p(-p) / rate;
}

QQCurve::QQCurve(std::vector<QQPoint> points) : points_(std::move(points)) {
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const QQPoint& pt = points_[i];
    if (!(pt.p > 0.0 && pt.p < 1.0))
      throw std::invalid_argument("QQCurve: p must lie in (0,1)");
    if (!std::isfinite(pt.qx) || !std::isfinite(pt.qy))
      throw std::invalid_argument("QQCurve: quantiles must be finite");
    if (i > 0) {
      if (!(pt.p > points_[i - 1].p))
        throw std::invalid_argument("QQCurve: p must be strictly increasing");
      if (pt.qx < points_[i - 1].qx || pt.qy < points_[i - 1].qy)
        throw std::invalid_argument("QQCurve: quantiles must be non-decreasing");
    }
  }
}

QQCurve qq_curve(const SampleSet& x, const SampleSet& y, std::size_t n_points) {
  if (n_points < 2)
    throw std::invalid_argument("qq_curve: n_points must be >= 2");
  std::vector<QQPoint> pts;
  pts.reserve(n_points);
  for (std::size_t j = 1; j <= n_points; ++j) {
    const double p =
        (static_cast<double>(j) - 0.5) / static_cast<double>(n_points);
    pts.push_back({p, sample_quantile(x, p), sample_quantile(y, p)});
  }
  return QQCurve(std::move(pts));
}

QQCurve normal_probability_plot(const SampleSet& s) {
  const std::size_t n = s.size();
  if (n < 3)
    throw std::invalid_argument("normal_probability_plot: needs n >= 3");
  std::vector<QQPoint> pts;
  pts.reserve(n);
  for (std::size_t j = 1; j <= n; ++j) {
    const double p = (static_cast<double>(j) - 0.5) / static_cast<double>(n);
    pts.push_back({p, normal_quantile(p), s.sorted()[j - 1]});
  }
  return QQCurve(std::move(pts));
}

LineFit qq_line_fit(const QQCurve& curve, double trim) {
  if (!(trim >= 0.0 && trim < 0.5))
    throw std::invalid_argument("qq_line_fit: trim must lie in [0, 0.5)");
  std::vector<const QQPoint*> pts;
  for (const QQPoint& pt : curve.points())
    if (pt.p >= trim && pt.p <= 1.0 - trim) pts.push_back(&pt);
  LineFit fit;
  if (pts.size() < 2) return fit;

  const double n = static_cast<double>(pts.size());
  double mx = 0.0, my = 0.0;
  for (const QQPoint* pt : pts) {
    mx += pt->qx;
    my += pt->qy;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const QQPoint* pt : pts) {
    const double dx = pt->qx - mx;
    const double dy = pt->qy - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    fit.intercept = my;
    return fit;  // degenerate, r2 undefined
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = (sxy * sxy) / (sxx * syy);
  fit.r2_defined = true;
  return fit;
}

KdeResult kde(const std::vector<std::vector<double>>& points, double sigma,
              const std::vector<GridAxis>& grid) {
  if (!(sigma > 0.0))
    throw std::invalid_argument("kde: sigma must be positive");
  if (points.empty()) throw std::invalid_argument("kde: needs data points");
  if (grid.empty()) throw std::invalid_argument("kde: needs a grid axis");
  const std::size_t d = grid.size();
  for (const GridAxis& ax : grid) {
    if (ax.count < 1) throw std::invalid_argument("kde: axis count must be >= 1");
    if (!(ax.step > 0.0)) throw std::invalid_argument("kde: axis step must be positive");
  }
  for (const auto& pt : points)
    if (pt.size() != d)
      throw std::invalid_argument("kde: point dimension must match grid rank");

  bool covered = true;
  for (std::size_t a = 0; a < d && covered; ++a) {
    const double lo = grid[a].min;
    const double hi = grid[a].min + grid[a].step * static_cast<double>(grid[a].count - 1);
    for (const auto& pt : points)
      if (pt[a] < lo || pt[a] > hi) {
        covered = false;
        break;
      }
  }

  std::vector<std::size_t> dims(d);
  std::vector<double> spacing(d);
  std::size_t total = 1;
  for (std::size_t a = 0; a < d; ++a) {
    dims[a] = grid[a].count;
    spacing[a] = grid[a].step;
    total *= dims[a];
  }

  // (sigma sqrt(2 pi))^-d, the product-kernel normalization
  double norm = 1.0;
  for (std::size_t a = 0; a < d; ++a) norm /= sigma * kSqrt2Pi;
  const double inv_two_sigma_sq = 1.0 / (2.0 * sigma * sigma);

  std::vector<double> values(total);
  std::vector<std::size_t> idx(d, 0);
  std::vector<double> node(d);
  for (std::size_t lin = 0; lin < total; ++lin) {
    for (std::size_t a = 0; a < d; ++a)
      node[a] = grid[a].min + grid[a].step * static_cast<double>(idx[a]);
    long double acc = 0.0L;
    for (const auto& pt : points) {
      double sq = 0.0;
      for (std::size_t a = 0; a < d; ++a) {
        const double dd = node[a] - pt[a];
        sq += dd * dd;
      }
      acc += std::exp(-sq * inv_two_sigma_sq);
    }
    values[lin] = static_cast<double>(acc) * norm / static_cast<double>(points.size());
    for (std::size_t a = d; a-- > 0;) {
      if (++idx[a] < dims[a]) break;
      idx[a] = 0;
    }
  }
  return {Field(std::move(dims), std::move(spacing), std::move(values)), covered};
}

KdeResult kde(const SampleSet& s, double sigma, const GridAxis& grid) {
  std::vector<std::vector<double>> pts;
  pts.reserve(s.size());
  for (double v : s.values()) pts.push_back({v});
  return kde(pts, sigma, {grid});
}

}  // namespace gks
