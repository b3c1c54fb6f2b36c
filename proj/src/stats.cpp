#include "pilgrim/stats.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pilgrim/exponent.hpp"
#include "pilgrim/numeric.hpp"

namespace pilgrim {

std::vector<double> expected_blocks_recursion(long n, const ModelParams& params) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  const double rho = params.rho();
  std::vector<double> mu(static_cast<std::size_t>(n + 1), 0.0);
  std::vector<double> w(static_cast<std::size_t>(n + 1), 0.0);  // 1 / (d + rho - 1)
  double zeta = 0.0;
  for (long m = 1; m <= n; ++m) {
    w[m] = 1.0 / (m + rho - 1.0);
    zeta += w[m];
    double s = 0.0;
    for (long d = 1; d <= m; ++d) s += mu[m - d] * w[d];
    mu[m] = 1.0 + s / zeta;
  }
  return mu;
}

std::vector<double> expected_blocks_exact(long n, const ModelParams& params) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  const SplittingRule rule(params, n);
  std::vector<double> mu(static_cast<std::size_t>(n + 1), 0.0);
  for (long m = 1; m <= n; ++m) {
    double s = 0.0;
    for (long d = 1; d < m; ++d) s += std::exp(rule.log_first_block(m, d)) * mu[m - d];
    mu[m] = 1.0 + s;
  }
  return mu;
}

MeanSe mean_se(std::span<const double> x) {
  MeanSe r;
  if (x.empty()) return r;
  double s = 0.0;
  for (double v : x) s += v;
  r.mean = s / static_cast<double>(x.size());
  if (x.size() > 1) {
    double ss = 0.0;
    for (double v : x) ss += (v - r.mean) * (v - r.mean);
    r.var = ss / static_cast<double>(x.size() - 1);
    r.se = std::sqrt(r.var / static_cast<double>(x.size()));
  }
  return r;
}

std::vector<long> occupancy_counts(const HotelLedger& ledger, int j_max) {
  std::vector<long> c(static_cast<std::size_t>(std::max(j_max, 0)), 0);
  for (const auto& h : ledger.hotels()) {
    if (h.occupancy >= 1 && h.occupancy <= j_max) ++c[static_cast<std::size_t>(h.occupancy - 1)];
  }
  return c;
}

std::vector<OccupancyRow> occupancy_spectrum(const std::vector<std::vector<long>>& samples, int j_max) {
  std::vector<OccupancyRow> rows;
  const auto reps = static_cast<double>(samples.size());
  for (int j = 1; j <= j_max; ++j) {
    std::vector<double> x;
    x.reserve(samples.size());
    for (const auto& s : samples) x.push_back(j - 1 < static_cast<int>(s.size()) ? static_cast<double>(s[j - 1]) : 0.0);
    OccupancyRow row;
    row.j = j;
    row.count = mean_se(x);
    if (row.count.mean > 0.0 && samples.size() > 1) {
      row.dispersion = (reps - 1.0) * row.count.var / row.count.mean;
      const boost::math::chi_squared chi(reps - 1.0);
      // Boost overflows evaluating the CDF at exactly zero for large df
      const double lower = row.dispersion > 0.0 ? boost::math::cdf(chi, row.dispersion) : 0.0;
      row.dispersion_p = std::min(1.0, 2.0 * std::min(lower, 1.0 - lower));
    }
    rows.push_back(row);
  }
  return rows;
}

LinearFit ols(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("ols needs two or more paired points");
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinearFit f;
  f.points = static_cast<long>(x.size());
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return f;
}

GrowthReport growth_diagnostics(const std::vector<std::vector<TrajectoryPoint>>& samples, long burn_in) {
  if (samples.empty() || samples.front().empty()) throw std::invalid_argument("no trajectories");
  const auto& grid = samples.front();
  for (const auto& s : samples) {
    if (s.size() != grid.size()) throw std::invalid_argument("trajectories use different checkpoints");
  }
  GrowthReport rep;
  std::vector<double> logn;
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i].n >= burn_in) {
      keep.push_back(i);
      logn.push_back(std::log(static_cast<double>(grid[i].n)));
    }
  }
  if (keep.size() < 2) throw std::invalid_argument("fewer than two checkpoints after burn-in");
  std::vector<double> mean_root(keep.size(), 0.0);
  rep.min_replicate_r2 = 1.0;
  for (const auto& s : samples) {
    std::vector<double> y;
    for (std::size_t k = 0; k < keep.size(); ++k) {
      const double v = static_cast<double>(s[keep[k]].hotels);
      y.push_back(std::sqrt(v));
      mean_root[k] += v / static_cast<double>(samples.size());
    }
    const double r2 = ols(logn, y).r2;
    rep.replicate_r2.push_back(r2);
    rep.min_replicate_r2 = std::min(rep.min_replicate_r2, r2);
  }
  for (auto& v : mean_root) v = std::sqrt(v);
  rep.mean_fit = ols(logn, mean_root);
  rep.final_n = grid.back().n;
  std::vector<double> k_final, ratio;
  for (const auto& s : samples) {
    k_final.push_back(static_cast<double>(s.back().hotels));
    ratio.push_back(s.back().tolls / static_cast<double>(s.back().hotels));
  }
  rep.final_hotels = mean_se(k_final);
  rep.final_toll_ratio = mean_se(ratio);
  return rep;
}

std::vector<double> standardize_blocks(std::span<const double> hotels, double c, double scale) {
  if (!(c > 0.0) || !(scale > 0.0)) throw std::invalid_argument("standardization needs positive C and scale");
  const double centre = c * scale;
  const double sd = std::sqrt(centre);
  std::vector<double> z;
  z.reserve(hotels.size());
  for (double k : hotels) z.push_back((k - centre) / sd);
  return z;
}

double ks_critical_1pct(long m) {
  if (m < 1) throw std::invalid_argument("sample size must be positive");
  // asymptotic Kolmogorov quantile sqrt(-log(0.005) / 2)
  return std::sqrt(-std::log(0.005) / 2.0) / std::sqrt(static_cast<double>(m));
}

namespace {

template <class Cdf>
KsResult ks_one_sample(std::span<const double> data, Cdf cdf) {
  if (data.empty()) throw std::invalid_argument("empty sample");
  std::vector<double> x(data.begin(), data.end());
  std::sort(x.begin(), x.end());
  const auto m = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, static_cast<double>(i + 1) / m - f, f - static_cast<double>(i) / m});
  }
  KsResult r;
  r.m = static_cast<long>(x.size());
  r.statistic = d;
  r.critical_1pct = ks_critical_1pct(r.m);
  r.pass = d < r.critical_1pct;
  return r;
}

}  // namespace

KsResult ks_normal(std::span<const double> z) {
  const boost::math::normal_distribution<double> nd(0.0, 1.0);
  return ks_one_sample(z, [&](double v) { return boost::math::cdf(nd, v); });
}

KsResult ks_exponential(std::span<const double> x, double mean) {
  if (!(mean > 0.0)) throw std::invalid_argument("mean must be positive");
  return ks_one_sample(x, [&](double v) { return v <= 0.0 ? 0.0 : -std::expm1(-v / mean); });
}

TailFit power_law_tail(std::span<const double> sizes, double x_min, double x_max) {
  std::vector<double> s(sizes.begin(), sizes.end());
  std::sort(s.begin(), s.end(), std::greater<>());
  std::vector<double> lx, lr;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] >= x_min && s[i] <= x_max) {
      lx.push_back(std::log(s[i]));
      lr.push_back(std::log(static_cast<double>(i + 1)));
    }
  }
  TailFit t;
  t.fit = ols(lx, lr);
  // rank ~ x^{1 - alpha}
  t.exponent = 1.0 - t.fit.slope;
  return t;
}

LinearFit loglog_slope(std::span<const double> x, std::span<const double> y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  return ols(lx, ly);
}

double first_hotel_limit(double beta, long d) {
  if (!(beta > -1.0 && beta < 0.0)) throw std::invalid_argument("limit law needs beta in (-1, 0)");
  if (d < 1) throw std::invalid_argument("d must be positive");
  return -beta / std::tgamma(1.0 + beta) * std::exp(std::lgamma(d + beta) - std::lgamma(d + 1.0));
}

}  // namespace pilgrim
