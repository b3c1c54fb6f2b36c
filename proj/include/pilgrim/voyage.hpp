#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pilgrim/density.hpp"
#include "pilgrim/params.hpp"
#include "pilgrim/rng.hpp"

namespace pilgrim {

struct Feature {
  std::vector<int> members;  // sorted 1-based pilgrims
  int founder = 0;           // smallest member
  std::optional<double> position;
};

// rows are pilgrims, columns are features in founding order
using IncidenceMatrix = std::vector<std::vector<char>>;

// Features listed in founding order.
class FeatureAllocation {
 public:
  FeatureAllocation() = default;
  FeatureAllocation(int n, std::vector<Feature> features);

  int n() const noexcept { return n_; }
  int k() const noexcept { return static_cast<int>(features_.size()); }
  const std::vector<Feature>& features() const noexcept { return features_; }
  IncidenceMatrix incidence() const;
  // number of features first taken by pilgrim i (1-based)
  int new_features(int i) const;

 private:
  int n_ = 0;
  std::vector<Feature> features_;
};

struct VoyageResult {
  VoyageTimes times;
  FeatureAllocation allocation;
};

// Each pilgrim walks (0, horizon] with fresh unit exponential funds after every
// stop, founding hotels where funds run out and joining hotels whose tax it
// cannot pay.
VoyageResult simulate_voyage(int n, double horizon, const ModelParams& params, Rng& rng);
VoyageResult simulate_voyage(int n, double horizon, const ModelParams& params, std::uint64_t seed);

FeatureAllocation ibp_sample(int n, double gamma, double theta, double alpha, Rng& rng);
FeatureAllocation ibp_sample(int n, double gamma, double theta, double alpha, std::uint64_t seed);

// Poisson mean of new dishes for customer m + 1 (m earlier customers).
double ibp_new_dish_rate(int m, double gamma, double theta, double alpha);

// Probability of a founding-ordered incidence matrix under each sequential law.
double voyage_pattern_log_prob(const IncidenceMatrix& z, const ModelParams& params, double horizon = 1.0);
double ibp_pattern_log_prob(const IncidenceMatrix& z, double gamma, double theta, double alpha);

// Every founding-ordered matrix on n rows with at most max_new new columns per row.
std::vector<IncidenceMatrix> enumerate_incidence_patterns(int n, int max_new);

// (nu, rho, beta) reproducing the three-parameter buffet at unit horizon.
ModelParams voyage_params_for_ibp(double gamma, double theta, double alpha);

struct SampleMoments {
  double mean = 0.0;
  double se = 0.0;
};

struct VoyageIbpComparison {
  int n = 0;
  int reps = 0;
  SampleMoments voyage_features;
  SampleMoments ibp_features;
  SampleMoments voyage_shared;  // features with at least two members
  SampleMoments ibp_shared;
  SampleMoments voyage_first;   // K_1
  SampleMoments ibp_first;
  double max_z = 0.0;           // largest two-sample z score among the above
  double exact_max_abs_diff = 0.0;  // over patterns with n <= 3
  long exact_patterns = 0;
};

VoyageIbpComparison voyage_ibp_distance(int n, const ModelParams& params, double gamma, double theta, int reps,
                                        std::uint64_t seed);

}  // namespace pilgrim
