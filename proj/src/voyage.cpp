#include "pilgrim/voyage.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "pilgrim/monopoly.hpp"

namespace pilgrim {

namespace {

double log_poisson(long k, double mean) {
  if (mean == 0.0) return k == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  return k * std::log(mean) - mean - std::lgamma(static_cast<double>(k) + 1.0);
}

// founder row of each column; throws unless columns are grouped by founder
std::vector<int> founders(const IncidenceMatrix& z) {
  const std::size_t cols = z.empty() ? 0 : z.front().size();
  std::vector<int> f(cols, -1);
  for (std::size_t c = 0; c < cols; ++c) {
    for (std::size_t r = 0; r < z.size(); ++r) {
      if (z[r].size() != cols) throw std::invalid_argument("ragged incidence matrix");
      if (z[r][c]) {
        f[c] = static_cast<int>(r);
        break;
      }
    }
    if (f[c] < 0) throw std::invalid_argument("incidence column without members");
    if (c > 0 && f[c] < f[c - 1]) throw std::invalid_argument("columns must be in founding order");
  }
  return f;
}

template <class NewRate, class Join>
double sequential_log_prob(const IncidenceMatrix& z, NewRate new_rate, Join join) {
  const auto f = founders(z);
  const std::size_t cols = f.size();
  double lp = 0.0;
  std::vector<long> count(cols, 0);
  for (std::size_t r = 0; r < z.size(); ++r) {
    const int m = static_cast<int>(r);
    long fresh = 0;
    for (std::size_t c = 0; c < cols; ++c) {
      if (f[c] == m) {
        ++fresh;
      } else if (f[c] < m) {
        const double p = join(m, count[c]);
        lp += std::log(z[r][c] ? p : 1.0 - p);
      }
    }
    lp += log_poisson(fresh, new_rate(m));
    for (std::size_t c = 0; c < cols; ++c) count[c] += z[r][c] ? 1 : 0;
  }
  return lp;
}

SampleMoments moments(const std::vector<double>& x) {
  SampleMoments s;
  if (x.empty()) return s;
  double sum = 0.0;
  for (double v : x) sum += v;
  s.mean = sum / static_cast<double>(x.size());
  double ss = 0.0;
  for (double v : x) ss += (v - s.mean) * (v - s.mean);
  if (x.size() > 1) s.se = std::sqrt(ss / static_cast<double>(x.size() - 1) / static_cast<double>(x.size()));
  return s;
}

double two_sample_z(const SampleMoments& a, const SampleMoments& b) {
  const double se = std::hypot(a.se, b.se);
  if (se == 0.0) return a.mean == b.mean ? 0.0 : std::numeric_limits<double>::infinity();
  return std::abs(a.mean - b.mean) / se;
}

}  // namespace

FeatureAllocation::FeatureAllocation(int n, std::vector<Feature> features) : n_(n), features_(std::move(features)) {
  for (auto& f : features_) {
    if (f.members.empty()) throw std::invalid_argument("features must be non-empty");
    std::sort(f.members.begin(), f.members.end());
    if (f.members.front() < 1 || f.members.back() > n) throw std::invalid_argument("feature member out of range");
    if (f.founder != f.members.front()) throw std::invalid_argument("founder must be the smallest member");
  }
}

IncidenceMatrix FeatureAllocation::incidence() const {
  IncidenceMatrix z(static_cast<std::size_t>(n_), std::vector<char>(features_.size(), 0));
  for (std::size_t c = 0; c < features_.size(); ++c) {
    for (int m : features_[c].members) z[static_cast<std::size_t>(m - 1)][c] = 1;
  }
  return z;
}

int FeatureAllocation::new_features(int i) const {
  return static_cast<int>(std::count_if(features_.begin(), features_.end(), [i](const Feature& f) { return f.founder == i; }));
}

VoyageResult simulate_voyage(int n, double horizon, const ModelParams& params, Rng& rng) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw std::invalid_argument("horizon must be positive");
  struct Stop {
    double position;
    long occupancy;
    std::size_t feature;
  };
  std::vector<Stop> hotels;  // sorted by position
  std::vector<Feature> features;
  VoyageResult out;
  out.times.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const long m = i;  // earlier pilgrims, all of whom reached the horizon
    const double rate = toll_rate(params, m);
    std::vector<double> founded;
    std::vector<std::size_t> joined;
    double pos = 0.0;
    double funds = draw_exponential(rng);
    std::size_t h = 0;
    while (true) {
      const double next = h < hotels.size() ? hotels[h].position : horizon;
      const double cost = (next - pos) * rate;
      if (funds < cost) {
        pos += funds / rate;
        founded.push_back(pos);
        funds = draw_exponential(rng);
        continue;
      }
      funds -= cost;
      pos = next;
      if (h == hotels.size()) break;
      const double tax = hotel_tax(params, m - hotels[h].occupancy, hotels[h].occupancy);
      if (funds <= tax) {
        joined.push_back(h);
        funds = draw_exponential(rng);
      } else {
        funds -= tax;
      }
      ++h;
    }
    auto& mine = out.times[static_cast<std::size_t>(i)];
    for (std::size_t j : joined) {
      ++hotels[j].occupancy;
      features[hotels[j].feature].members.push_back(i + 1);
      mine.push_back(hotels[j].position);
    }
    for (double p : founded) {
      features.push_back({{i + 1}, i + 1, p});
      const Stop s{p, 1, features.size() - 1};
      hotels.insert(std::upper_bound(hotels.begin(), hotels.end(), p,
                                     [](double x, const Stop& st) { return x < st.position; }),
                    s);
      mine.push_back(p);
    }
    std::sort(mine.begin(), mine.end());
  }
  out.allocation = FeatureAllocation(n, std::move(features));
  return out;
}

VoyageResult simulate_voyage(int n, double horizon, const ModelParams& params, std::uint64_t seed) {
  Rng rng = make_stream(seed, 0);
  return simulate_voyage(n, horizon, params, rng);
}

double ibp_new_dish_rate(int m, double gamma, double theta, double alpha) {
  return gamma * std::exp(std::lgamma(theta + 1.0) - std::lgamma(theta + m + 1.0) + std::lgamma(theta + alpha + m) -
                          std::lgamma(theta + alpha));
}

FeatureAllocation ibp_sample(int n, double gamma, double theta, double alpha, Rng& rng) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  if (!(gamma > 0.0) || !(theta > 0.0) || !(alpha >= 0.0 && alpha < 1.0))
    throw std::invalid_argument("buffet needs gamma > 0, theta > 0, 0 <= alpha < 1");
  std::vector<Feature> dishes;
  for (int m = 0; m < n; ++m) {
    for (auto& d : dishes) {
      const double p = (static_cast<double>(d.members.size()) - alpha) / (theta + m);
      if (draw_uniform(rng) < p) d.members.push_back(m + 1);
    }
    const long fresh = std::poisson_distribution<long>(ibp_new_dish_rate(m, gamma, theta, alpha))(rng);
    for (long j = 0; j < fresh; ++j) dishes.push_back({{m + 1}, m + 1, std::nullopt});
  }
  return FeatureAllocation(n, std::move(dishes));
}

FeatureAllocation ibp_sample(int n, double gamma, double theta, double alpha, std::uint64_t seed) {
  Rng rng = make_stream(seed, 0);
  return ibp_sample(n, gamma, theta, alpha, rng);
}

double voyage_pattern_log_prob(const IncidenceMatrix& z, const ModelParams& params, double horizon) {
  return sequential_log_prob(
      z, [&](int m) { return toll_rate(params, m) * horizon; },
      [&](int m, long d) { return -std::expm1(-hotel_tax(params, m - d, d)); });
}

double ibp_pattern_log_prob(const IncidenceMatrix& z, double gamma, double theta, double alpha) {
  return sequential_log_prob(
      z, [&](int m) { return ibp_new_dish_rate(m, gamma, theta, alpha); },
      [&](int m, long d) { return (static_cast<double>(d) - alpha) / (theta + m); });
}

std::vector<IncidenceMatrix> enumerate_incidence_patterns(int n, int max_new) {
  if (n < 1 || max_new < 0) throw std::invalid_argument("pattern enumeration needs n >= 1, max_new >= 0");
  std::vector<IncidenceMatrix> frontier{IncidenceMatrix{}};
  for (int r = 0; r < n; ++r) {
    std::vector<IncidenceMatrix> next;
    for (const auto& z : frontier) {
      const std::size_t cols = z.empty() ? 0 : z.front().size();
      if (cols > 20) throw std::invalid_argument("pattern enumeration too large");
      for (unsigned long mask = 0; mask < (1UL << cols); ++mask) {
        for (int fresh = 0; fresh <= max_new; ++fresh) {
          IncidenceMatrix y = z;
          std::vector<char> row(cols + static_cast<std::size_t>(fresh), 0);
          for (std::size_t c = 0; c < cols; ++c) row[c] = (mask >> c) & 1UL ? 1 : 0;
          for (std::size_t c = cols; c < row.size(); ++c) row[c] = 1;
          for (auto& old : y) old.resize(row.size(), 0);
          y.push_back(std::move(row));
          next.push_back(std::move(y));
        }
      }
    }
    frontier = std::move(next);
  }
  return frontier;
}

ModelParams voyage_params_for_ibp(double gamma, double theta, double alpha) {
  if (!(gamma > 0.0) || !(theta > 0.0) || !(alpha >= 0.0 && alpha < 1.0))
    throw std::invalid_argument("buffet needs gamma > 0, theta > 0, 0 <= alpha < 1");
  const double nu = gamma * std::exp(std::lgamma(theta + 1.0) - std::lgamma(theta + alpha) - std::lgamma(1.0 - alpha));
  return ModelParams(theta + alpha, -alpha, nu);
}

VoyageIbpComparison voyage_ibp_distance(int n, const ModelParams& params, double gamma, double theta, int reps,
                                        std::uint64_t seed) {
  if (reps < 2) throw std::invalid_argument("need at least two replicates");
  struct Stat {
    double k = 0, shared = 0, first = 0;
  };
  auto summarize = [](const FeatureAllocation& a) {
    Stat s;
    s.k = a.k();
    s.first = a.new_features(1);
    for (const auto& f : a.features()) s.shared += f.members.size() >= 2 ? 1 : 0;
    return s;
  };
  const auto voy = run_replicates<Stat>(
      reps, seed, [&](Rng& rng, int) { return summarize(simulate_voyage(n, 1.0, params, rng).allocation); });
  const auto ibp = run_replicates<Stat>(
      reps, splitmix64(seed), [&](Rng& rng, int) { return summarize(ibp_sample(n, gamma, theta, 0.0, rng)); });
  auto column = [](const std::vector<Stat>& v, double Stat::*f) {
    std::vector<double> x;
    x.reserve(v.size());
    for (const auto& s : v) x.push_back(s.*f);
    return moments(x);
  };
  VoyageIbpComparison c;
  c.n = n;
  c.reps = reps;
  c.voyage_features = column(voy, &Stat::k);
  c.ibp_features = column(ibp, &Stat::k);
  c.voyage_shared = column(voy, &Stat::shared);
  c.ibp_shared = column(ibp, &Stat::shared);
  c.voyage_first = column(voy, &Stat::first);
  c.ibp_first = column(ibp, &Stat::first);
  c.max_z = std::max({two_sample_z(c.voyage_features, c.ibp_features), two_sample_z(c.voyage_shared, c.ibp_shared),
                      two_sample_z(c.voyage_first, c.ibp_first)});
  for (const auto& z : enumerate_incidence_patterns(std::min(n, 3), 2)) {
    const double a = std::exp(voyage_pattern_log_prob(z, params));
    const double b = std::exp(ibp_pattern_log_prob(z, gamma, theta, 0.0));
    c.exact_max_abs_diff = std::max(c.exact_max_abs_diff, std::abs(a - b));
    ++c.exact_patterns;
  }
  return c;
}

}  // namespace pilgrim
