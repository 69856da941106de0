#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "gks/convolve.hpp"
#include "gks/rng.hpp"
#include "gks/stats.hpp"

using namespace gks;

TEST_CASE("empirical cdf counts weakly-below observations") {
  const SampleSet s({1.0, 2.0, 2.0, 3.0});
  CHECK(empirical_cdf(s, 0.0) == 0.0);
  CHECK(empirical_cdf(s, 1.0) == 0.25);
  CHECK(empirical_cdf(s, 1.5) == 0.25);
  CHECK(empirical_cdf(s, 2.0) == 0.75);
  CHECK(empirical_cdf(s, 3.0) == 1.0);
  CHECK(empirical_cdf(s, 99.0) == 1.0);
}

TEST_CASE("sample quantiles interpolate between plotting positions") {
  const SampleSet s({40.0, 10.0, 30.0, 20.0});  // order is irrelevant
  // Plotting positions: 0.125, 0.375, 0.625, 0.875.
  CHECK(sample_quantile(s, 0.125) == doctest::Approx(10.0).epsilon(1e-15));
  CHECK(sample_quantile(s, 0.375) == doctest::Approx(20.0).epsilon(1e-15));
  CHECK(sample_quantile(s, 0.5) == doctest::Approx(25.0).epsilon(1e-15));
  CHECK(sample_quantile(s, 0.25) == doctest::Approx(15.0).epsilon(1e-15));
  // Clamped to the extreme order statistics outside [p_1, p_n].
  CHECK(sample_quantile(s, 0.01) == 10.0);
  CHECK(sample_quantile(s, 0.99) == 40.0);
  CHECK_THROWS_AS(sample_quantile(s, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(sample_quantile(s, 1.0), std::invalid_argument);
}

TEST_CASE("sample sets reject empty or non-finite input") {
  CHECK_THROWS_AS(SampleSet({}), std::invalid_argument);
  CHECK_THROWS_AS(SampleSet({1.0, std::nan("")}), std::invalid_argument);
  const SampleSet s({3.0, 1.0, 2.0});
  CHECK(s.sorted() == std::vector<double>{1.0, 2.0, 3.0});
  CHECK(s.values() == std::vector<double>{3.0, 1.0, 2.0});
}

TEST_CASE("normal cdf reference values") {
  CHECK(normal_cdf(0.0) == 0.5);
  CHECK(normal_cdf(1.0) == doctest::Approx(0.8413447460685429).epsilon(1e-14));
  CHECK(normal_cdf(1.96) == doctest::Approx(0.9750021048517795).epsilon(1e-14));
  CHECK(normal_cdf(-1.96) ==
        doctest::Approx(1.0 - 0.9750021048517795).epsilon(1e-12));
  CHECK(normal_cdf(-8.0) > 0.0);
  CHECK(normal_cdf(8.0) < 1.0);
}

TEST_CASE("normal quantile inverts the cdf") {
  CHECK(normal_quantile(0.5) == 0.0);
  CHECK(normal_quantile(0.975) ==
        doctest::Approx(1.959963984540054).epsilon(1e-9));
  CHECK(normal_quantile(0.8413447460685429) ==
        doctest::Approx(1.0).epsilon(1e-9));
  for (double p = 0.001; p < 1.0; p += 0.001)
    CHECK(std::abs(normal_cdf(normal_quantile(p)) - p) < 1e-9);
  // Tails stay finite and accurate in cdf space.
  for (double p : {1e-12, 1e-9, 1e-6, 1.0 - 1e-6, 1.0 - 1e-9}) {
    const double q = normal_quantile(p);
    CHECK(std::isfinite(q));
    CHECK(std::abs(normal_cdf(q) - p) < 1e-8 * std::max(1.0, std::abs(q)));
  }
  // Antisymmetry about the median.
  for (double p : {0.01, 0.1, 0.25, 0.4})
    CHECK(normal_quantile(1.0 - p) ==
          doctest::Approx(-normal_quantile(p)).epsilon(1e-9));
  CHECK_THROWS_AS(normal_quantile(0.0), std::invalid_argument);
  CHECK_THROWS_AS(normal_quantile(1.0), std::invalid_argument);
}

TEST_CASE("exponential quantile closed form at rate 2") {
  CHECK(exponential_quantile(2.0, 0.0) == 0.0);
  CHECK(exponential_quantile(2.0, 0.5) ==
        doctest::Approx(std::log(2.0) / 2.0).epsilon(1e-15));
  CHECK(exponential_quantile(2.0, 0.75) ==
        doctest::Approx(std::log(4.0) / 2.0).epsilon(1e-15));
  CHECK(exponential_quantile(2.0, 0.9) ==
        doctest::Approx(-std::log(0.1) / 2.0).epsilon(1e-14));
  CHECK_THROWS_AS(exponential_quantile(2.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(exponential_quantile(2.0, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(exponential_quantile(0.0, 0.5), std::invalid_argument);
}

TEST_CASE("qq curve of a sample against itself is the diagonal") {
  Rng rng(31);
  const SampleSet s(normal_draws(rng, 3.0, 2.0, 200).values());
  const QQCurve curve = qq_curve(s, s, 50);
  REQUIRE(curve.size() == 50);
  for (const QQPoint& pt : curve.points()) CHECK(pt.qx == pt.qy);
}

TEST_CASE("qq curve uses the centered probability grid") {
  const SampleSet s({1.0, 2.0, 3.0, 4.0});
  const QQCurve curve = qq_curve(s, s, 4);
  CHECK(curve.points()[0].p == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(curve.points()[3].p == doctest::Approx(0.875).epsilon(1e-15));
  CHECK_THROWS_AS(qq_curve(s, s, 1), std::invalid_argument);
}

TEST_CASE("qq points of two gaussians fall on the distribution line") {
  // X ~ N(1, 2^2), Y ~ N(-3, 0.5^2): the QQ pairs satisfy
  // qy = mu_y + (sigma_y/sigma_x) (qx - mu_x) = 0.25 qx - 3.25.
  std::vector<QQPoint> pts;
  for (int j = 1; j <= 99; ++j) {
    const double p = j / 100.0;
    const double z = normal_quantile(p);
    pts.push_back({p, 1.0 + 2.0 * z, -3.0 + 0.5 * z});
  }
  const QQCurve curve{std::move(pts)};
  for (const QQPoint& pt : curve.points())
    CHECK(std::abs(pt.qy - (0.25 * pt.qx - 3.25)) < 1e-10);
  const LineFit fit = qq_line_fit(curve);
  CHECK(fit.slope == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(fit.intercept == doctest::Approx(-3.25).epsilon(1e-9));
  REQUIRE(fit.r2_defined);
  CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("qq curve validates monotonicity") {
  CHECK_THROWS_AS(QQCurve({{0.5, 0.0, 0.0}, {0.25, 1.0, 1.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(QQCurve({{0.25, 1.0, 0.0}, {0.5, 0.0, 1.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(QQCurve({{0.25, 0.0, 1.0}, {0.5, 1.0, 0.0}}),
                  std::invalid_argument);
}

TEST_CASE("normal probability plot pairs order statistics with normal scores") {
  const SampleSet s({5.0, -1.0, 2.0});
  const QQCurve curve = normal_probability_plot(s);
  REQUIRE(curve.size() == 3);
  CHECK(curve.points()[0].p == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(curve.points()[1].p == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(curve.points()[1].qx == 0.0);
  CHECK(curve.points()[0].qy == -1.0);
  CHECK(curve.points()[1].qy == 2.0);
  CHECK(curve.points()[2].qy == 5.0);
  CHECK(curve.points()[0].qx ==
        doctest::Approx(-curve.points()[2].qx).epsilon(1e-9));
  CHECK_THROWS_AS(normal_probability_plot(SampleSet({1.0, 2.0})),
                  std::invalid_argument);
}

TEST_CASE("gaussian samples plot close to a straight line") {
  Rng rng(32);
  const SampleSet s(normal_draws(rng, 0.0, 1.0, 500).values());
  const LineFit fit = qq_line_fit(normal_probability_plot(s));
  REQUIRE(fit.r2_defined);
  CHECK(fit.r2 > 0.98);
  CHECK(fit.slope == doctest::Approx(1.0).epsilon(0.15));
  CHECK(fit.intercept == doctest::Approx(0.0).epsilon(0.15));
}

TEST_CASE("heavy-tailed samples plot less straight than gaussian ones") {
  Rng rng(33);
  const SampleSet gauss(normal_draws(rng, 0.0, 1.0, 400).values());
  std::vector<double> heavy;
  for (double v : gauss.values()) heavy.push_back(v * v * v);
  const LineFit gauss_fit = qq_line_fit(normal_probability_plot(gauss));
  const LineFit heavy_fit =
      qq_line_fit(normal_probability_plot(SampleSet(heavy)));
  CHECK(gauss_fit.r2 > heavy_fit.r2);
}

TEST_CASE("line fit trims the requested tails") {
  // Perfect line between p = 0.05 and 0.95, wild monotone jumps outside.
  std::vector<QQPoint> pts;
  for (int j = 1; j <= 99; ++j) {
    const double p = j / 100.0;
    double qy = 2.0 * p + 1.0;
    if (p < 0.05) qy -= 100.0;
    if (p > 0.95) qy += 100.0;
    pts.push_back({p, p, qy});
  }
  const LineFit fit = qq_line_fit(QQCurve{std::move(pts)});
  CHECK(fit.slope == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("line fit flags degenerate curves") {
  std::vector<QQPoint> flat;
  for (int j = 1; j <= 9; ++j)
    flat.push_back({j / 10.0, static_cast<double>(j), 7.0});
  const LineFit fit = qq_line_fit(QQCurve{std::move(flat)});
  CHECK(fit.slope == 0.0);
  CHECK(fit.intercept == 7.0);
  CHECK_FALSE(fit.r2_defined);
}

TEST_CASE("kde of one point is the kernel itself") {
  const GridAxis axis{-8.0, 0.01, 1601};
  const KdeResult res = kde(SampleSet({0.0}), 1.0, axis);
  REQUIRE(res.density.size() == 1601);
  CHECK(res.grid_covers_data);
  // Node 800 sits exactly at the data point.
  CHECK(std::abs(res.density[800] - 0.3989422804014327) < 1e-9);
  CHECK(res.density[900] ==
        doctest::Approx(0.3989422804014327 * std::exp(-0.5)).epsilon(1e-12));
}

TEST_CASE("kde integrates to one and averages kernel mass") {
  Rng rng(34);
  for (double sigma : {0.5, 1.0}) {
    const SampleSet s(normal_draws(rng, 0.0, 1.0, 50).values());
    const double lo = s.sorted().front() - 8.0 * sigma;
    const double hi = s.sorted().back() + 8.0 * sigma;
    const double step = sigma / 20.0;
    const std::size_t count =
        static_cast<std::size_t>(std::ceil((hi - lo) / step)) + 1;
    const KdeResult res = kde(s, sigma, GridAxis{lo, step, count});
    CHECK(res.grid_covers_data);
    long double integral = 0.0L;
    for (std::size_t i = 1; i < res.density.size(); ++i)
      integral += 0.5L * (res.density[i - 1] + res.density[i]) * step;
    CHECK(std::abs(static_cast<double>(integral) - 1.0) < 1e-3);
  }
}

TEST_CASE("kde coverage flag trips when data leaves the grid") {
  const KdeResult res = kde(SampleSet({0.0, 30.0}), 1.0,
                            GridAxis{-5.0, 0.5, 21});
  CHECK_FALSE(res.grid_covers_data);
}

TEST_CASE("two-dimensional kde factorizes for a single point") {
  const GridAxis axis{-3.0, 0.25, 25};
  const KdeResult plane =
      kde({{0.0, 0.0}}, 1.0, std::vector<GridAxis>{axis, axis});
  const KdeResult line = kde(SampleSet({0.0}), 1.0, axis);
  REQUIRE(plane.density.dims() == std::vector<std::size_t>{25, 25});
  for (std::size_t i = 0; i < 25; ++i)
    for (std::size_t j = 0; j < 25; ++j)
      CHECK(plane.density.at({i, j}) ==
            doctest::Approx(line.density[i] * line.density[j]).epsilon(1e-12));
}

TEST_CASE("kde equals discrete convolution of the binned sample train") {
  // With points snapped to lattice nodes, the estimate at the nodes is the
  // convolution of the per-node point masses with the sampled kernel. The
  // discretely-normalized kernel approximates the continuous one to o(1e-3)
  // at step = sigma/50.
  Rng rng(35);
  const double sigma = 1.0;
  const double step = sigma / 50.0;
  const GridAxis axis{-6.0, step, 601};
  std::vector<double> snapped;
  std::vector<double> bins(axis.count, 0.0);
  for (double v : normal_draws(rng, 0.0, 1.0, 40).values()) {
    const auto node = static_cast<std::size_t>(
        std::lround((std::clamp(v, -4.0, 4.0) - axis.min) / step));
    snapped.push_back(axis.min + static_cast<double>(node) * step);
    bins[node] += 1.0 / 40.0;
  }
  const KdeResult exact = kde(SampleSet(snapped), sigma, axis);
  const Field binned = convolve_axis(
      Field({axis.count}, std::move(bins)),
      gaussian_kernel_1d(sigma, default_radius(sigma, step), step), 0,
      BoundaryMode::ZeroPad);
  const double peak = *std::max_element(exact.density.values().begin(),
                                        exact.density.values().end());
  for (std::size_t i = 0; i < axis.count; ++i)
    CHECK(std::abs(binned[i] / step - exact.density[i]) < 1e-3 * peak);
}

TEST_CASE("kde validates its inputs") {
  CHECK_THROWS_AS(kde(SampleSet({0.0}), 0.0, GridAxis{-1.0, 0.1, 21}),
                  std::invalid_argument);
  CHECK_THROWS_AS(kde(SampleSet({0.0}), 1.0, GridAxis{-1.0, 0.1, 0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(kde(SampleSet({0.0}), 1.0, GridAxis{-1.0, -0.1, 21}),
                  std::invalid_argument);
  // Point dimension must match the grid rank.
  CHECK_THROWS_AS(kde({{0.0, 0.0}}, 1.0,
                      std::vector<GridAxis>{GridAxis{-1.0, 0.1, 21}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(kde(std::vector<std::vector<double>>{}, 1.0,
                      std::vector<GridAxis>{GridAxis{-1.0, 0.1, 21}}),
                  std::invalid_argument);
}

TEST_CASE("sample quantiles are non-decreasing in p") {
  Rng rng(61);
  const SampleSet s = normal_draws(rng, 1.0, 3.0, 37);
  double prev = sample_quantile(s, 0.001);
  for (int j = 1; j <= 199; ++j) {
    const double q = sample_quantile(s, j / 200.0);
    CHECK(q >= prev);
    prev = q;
  }
}

TEST_CASE("sample quantiles of heavy draws approach the analytic curve") {
  Rng rng(62);
  const SampleSet s = exponential_draws(rng, 2.0, 100000);
  for (int k = 1; k <= 9; ++k) {
    const double p = k / 10.0;
    CHECK(std::abs(sample_quantile(s, p) - exponential_quantile(2.0, p)) <
          0.02);
  }
}
