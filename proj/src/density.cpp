#include "pilgrim/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace pilgrim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

double log_density_pilgrim(const EventSequence& t, const ModelParams& params) {
  if (!params.harmonic()) throw std::invalid_argument("log_density_pilgrim needs beta = 0");
  if (t.empty()) return 0.0;
  const TieSummary ties = t.ties();
  const double rho = params.rho();
  const long n = t.size();
  std::vector<double> zeta(static_cast<std::size_t>(n + 1), 0.0);
  for (long m = 0; m < n; ++m) zeta[m + 1] = zeta[m] + 1.0 / (rho + m);
  double toll = 0.0;
  double prev = 0.0;
  long risk = n;
  double lg = 0.0;
  for (long r = 0; r < ties.size(); ++r) {
    toll += zeta[risk] * (ties.times[r] - prev);
    lg += std::lgamma(static_cast<double>(ties.occupancy[r]));
    prev = ties.times[r];
    risk = ties.risk_after[r];
  }
  return -params.nu() * toll + static_cast<double>(ties.size()) * std::log(params.nu()) + lg - log_rising(rho, static_cast<int>(n));
}

double hazard_atom(const CharacteristicExponent& e, long r_after, long d) {
  const SignedLog here = forward_difference(e, r_after, d);
  const SignedLog next = forward_difference(e, r_after + 1, d);
  if (here.sign == 0) return kInf;
  if (next.sign == 0) return kInf;
  return here.log_abs - next.log_abs;
}

double log_density_general(const EventSequence& t, const CharacteristicExponent& e) {
  if (t.empty()) return 0.0;
  const TieSummary ties = t.ties();
  double toll = 0.0;
  double prev = 0.0;
  long risk = t.size();
  double logprod = 0.0;
  for (long r = 0; r < ties.size(); ++r) {
    toll += e.at_integer(risk).value() * (ties.times[r] - prev);
    const long d = ties.occupancy[r];
    const SignedLog diff = forward_difference(e, ties.risk_after[r], d);
    if (diff.sign == 0) return -kInf;
    if (diff.sign != (d % 2 == 1 ? 1 : -1)) throw std::domain_error("forward difference has the wrong sign for an exponent");
    logprod += diff.log_abs;
    prev = ties.times[r];
    risk = ties.risk_after[r];
  }
  return -toll + logprod;
}

PredictiveCurve conditional_hazard(const EventSequence& history, const CharacteristicExponent& e) {
  const TieSummary ties = history.ties();
  PredictiveCurve c;
  double prev = 0.0;
  long risk = history.size();
  for (long r = 0; r < ties.size(); ++r) {
    c.segments.push_back({prev, ties.times[r], forward_difference(e, risk, 1).value()});
    c.atoms.push_back({ties.times[r], hazard_atom(e, ties.risk_after[r], ties.occupancy[r])});
    prev = ties.times[r];
    risk = ties.risk_after[r];
  }
  c.segments.push_back({prev, kInf, forward_difference(e, risk, 1).value()});
  return c;
}

double voyage_log_density(const VoyageTimes& times, double horizon, const ModelParams& params) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw std::invalid_argument("horizon must be positive");
  const double rho = params.rho();
  const double beta = params.beta();
  std::map<double, long> occupancy;  // hotel position -> occupants so far
  double logp = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const auto m = static_cast<long>(i);  // earlier pilgrims
    const auto& mine = times[i];
    for (std::size_t j = 0; j < mine.size(); ++j) {
      if (!(mine[j] > 0.0) || mine[j] > horizon) throw std::invalid_argument("voyage times must lie in (0, horizon]");
      if (j > 0 && !(mine[j] > mine[j - 1])) throw std::invalid_argument("voyage times must increase per pilgrim");
    }
    const double rate = toll_rate(params, m);
    logp -= rate * horizon;
    std::vector<double> founded;
    for (double t : mine) {
      if (occupancy.count(t) == 0) founded.push_back(t);
    }
    for (auto& [pos, d] : occupancy) {
      const bool stays = std::binary_search(mine.begin(), mine.end(), pos);
      const double denom = static_cast<double>(m) + rho + beta;
      if (stays) {
        logp += std::log((static_cast<double>(d) + beta) / denom);
      } else {
        logp += std::log((static_cast<double>(m - d) + rho) / denom);
      }
    }
    logp += static_cast<double>(founded.size()) * std::log(rate);
    for (auto& [pos, d] : occupancy) {
      if (std::binary_search(mine.begin(), mine.end(), pos)) ++d;
    }
    for (double t : founded) occupancy.emplace(t, 1);
  }
  return logp;
}

}  // namespace pilgrim
