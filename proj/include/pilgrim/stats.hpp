#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pilgrim/monopoly.hpp"
#include "pilgrim/params.hpp"

namespace pilgrim {

// mu_0..mu_n from mu_m = 1 + (1/zeta(m)) sum_d mu_{m-d} / (d + rho - 1), with the
// harmonic zeta at nu = 1. beta and nu are ignored.
std::vector<double> expected_blocks_recursion(long n, const ModelParams& params);

// mu_0..mu_n from the first-block decomposition mu_m = 1 + sum_d C(m,d) q(m-d,d) mu_{m-d}.
std::vector<double> expected_blocks_exact(long n, const ModelParams& params);

struct MeanSe {
  double mean = 0.0;
  double var = 0.0;
  double se = 0.0;
};

MeanSe mean_se(std::span<const double> x);

// N_{n,j} for j = 1..j_max (element j - 1).
std::vector<long> occupancy_counts(const HotelLedger& ledger, int j_max);

struct OccupancyRow {
  int j = 0;
  MeanSe count;
  double dispersion = 0.0;  // (R - 1) var / mean, chi-square with R - 1 df under Poisson
  double dispersion_p = 1.0;  // two-sided
};

std::vector<OccupancyRow> occupancy_spectrum(const std::vector<std::vector<long>>& samples, int j_max);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  long points = 0;
};

LinearFit ols(std::span<const double> x, std::span<const double> y);

struct GrowthReport {
  LinearFit mean_fit;              // sqrt of mean K_n against log n
  std::vector<double> replicate_r2;
  double min_replicate_r2 = 0.0;
  long final_n = 0;
  MeanSe final_hotels;
  MeanSe final_toll_ratio;         // Z_n / K_n at the final checkpoint
};

// Fits exclude checkpoints with n < burn_in.
GrowthReport growth_diagnostics(const std::vector<std::vector<TrajectoryPoint>>& samples, long burn_in = 50);

// (K - C L) / sqrt(C L), where L is log n or log^2 n.
std::vector<double> standardize_blocks(std::span<const double> hotels, double c, double scale);

struct KsResult {
  double statistic = 0.0;
  double critical_1pct = 0.0;
  bool pass = false;
  long m = 0;
};

// One-sample Kolmogorov-Smirnov against N(0, 1).
KsResult ks_normal(std::span<const double> z);
// against Exp(1/mean)
KsResult ks_exponential(std::span<const double> x, double mean);
double ks_critical_1pct(long m);

// Tail exponent alpha of P(S = x) ~ x^{-alpha} by rank regression over x in [x_min, x_max].
struct TailFit {
  double exponent = 0.0;
  LinearFit fit;
};
TailFit power_law_tail(std::span<const double> sizes, double x_min, double x_max);

// slope of log y against log x
LinearFit loglog_slope(std::span<const double> x, std::span<const double> y);

// limiting law of the first hotel's occupancy for beta in (-1, 0)
double first_hotel_limit(double beta, long d);

}  // namespace pilgrim
