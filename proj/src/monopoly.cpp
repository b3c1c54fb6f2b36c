#include "pilgrim/monopoly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pilgrim {

namespace {

double unit_rate(const ModelParams& p, long m) {
  const long double x = static_cast<long double>(p.rho()) + m;
  if (p.harmonic()) return static_cast<double>(1.0L / x);
  const long double b = p.beta();
  return static_cast<double>(std::exp(std::lgamma(x) + std::lgamma(b + 1) - std::lgamma(x + b + 1)));
}

}  // namespace

double toll_rate(const ModelParams& params, long r) {
  if (r < 0) throw std::invalid_argument("risk count must be non-negative");
  return params.nu() * unit_rate(params, r);
}

double hotel_tax(const ModelParams& params, long r_after, long d) {
  if (r_after < 0 || d < 1) throw std::invalid_argument("hotel tax needs r >= 0 and d >= 1");
  const double up = static_cast<double>(r_after + d) + params.rho() + params.beta();
  const double down = static_cast<double>(r_after) + params.rho();
  return std::log(up / down);
}

HotelLedger::HotelLedger(const ModelParams& params, bool keep_records)
    : params_(params), keep_records_(keep_records) {
  zeta_.push_back(0.0);
  grow(0);
}

void HotelLedger::grow(long m) {
  for (long i = static_cast<long>(base_rate_.size()); i <= m; ++i) {
    base_rate_.push_back(unit_rate(params_, i));
    log_up_.push_back(i == 0 ? std::numeric_limits<double>::quiet_NaN()
                             : std::log(static_cast<double>(i) + params_.rho() + params_.beta()));
    log_down_.push_back(std::log(static_cast<double>(i) + params_.rho()));
    zeta_.push_back(zeta_.back() + base_rate_.back());
  }
}

double HotelLedger::toll_rate(long r) const { return params_.nu() * base_rate_.at(static_cast<std::size_t>(r)); }

double HotelLedger::tax(long r_after, long d) const {
  return log_up_.at(static_cast<std::size_t>(r_after + d)) - log_down_.at(static_cast<std::size_t>(r_after));
}

double HotelLedger::zeta(long r) const { return params_.nu() * zeta_.at(static_cast<std::size_t>(r)); }

double HotelLedger::taxes_and_forfeits() const noexcept {
  double s = 0.0;
  for (const auto& h : hotels_) s += h.wealth();
  return s;
}

double HotelLedger::advance(double funds) {
  if (!(funds > 0.0) || !std::isfinite(funds)) throw std::invalid_argument("funds must be positive and finite");
  grow(n_ + 1);
  const double nu = params_.nu();
  double remaining = funds;
  double pos = 0.0;
  long risk = n_;
  PilgrimRecord rec;
  rec.pilgrim = n_ + 1;
  rec.funds = funds;

  auto stay = [&](Hotel& h, double forfeit) {
    ++h.occupancy;
    h.forfeits += forfeit;
    rec.forfeit = forfeit;
    rec.time = h.position;
    rec.hotel = h.founding;
  };

  std::size_t i = 0;
  bool done = false;
  for (; i < hotels_.size(); ++i) {
    Hotel& h = hotels_[i];
    const double rate = nu * base_rate_[static_cast<std::size_t>(risk)];
    const double cost = (h.position - pos) * rate;
    if (remaining < cost) {
      const double dest = pos + remaining / rate;
      if (dest >= h.position) {
        // rounding carried the pilgrim onto the hotel
        rec.toll_paid += remaining;
        stay(h, 0.0);
        done = true;
      }
      break;
    }
    remaining -= cost;
    rec.toll_paid += cost;
    const long after = risk - h.occupancy;
    const double t = log_up_[static_cast<std::size_t>(risk)] - log_down_[static_cast<std::size_t>(after)];
    if (remaining <= t) {
      stay(h, remaining);
      done = true;
      break;
    }
    remaining -= t;
    rec.tax_paid += t;
    h.taxes += t;
    pos = h.position;
    risk = after;
  }
  if (!done) {
    const double rate = nu * base_rate_[static_cast<std::size_t>(risk)];
    double dest = pos + remaining / rate;
    if (!(dest > pos)) dest = std::nextafter(pos, std::numeric_limits<double>::infinity());
    rec.toll_paid += remaining;
    Hotel h;
    h.position = dest;
    h.occupancy = 1;
    h.founder = n_ + 1;
    h.founding = hotel_count() + 1;
    hotels_.insert(hotels_.begin() + static_cast<std::ptrdiff_t>(i), h);
    rec.time = dest;
    rec.hotel = h.founding;
    rec.founded = true;
  }
  ++n_;
  funds_total_ += funds;
  tolls_total_ += rec.toll_paid;
  if (keep_records_) records_.push_back(rec);
  return rec.time;
}

double advance_one_pilgrim(HotelLedger& ledger, double funds) { return ledger.advance(funds); }

Simulation simulate_from_funds(std::span<const double> funds, const ModelParams& params) {
  if (funds.empty()) throw std::invalid_argument("funds sequence is empty");
  HotelLedger ledger(params);
  std::vector<double> times;
  times.reserve(funds.size());
  for (double x : funds) times.push_back(ledger.advance(x));
  return {EventSequence(std::move(times)), std::move(ledger)};
}

Simulation simulate(long n, const ModelParams& params, std::uint64_t seed) {
  Rng rng = make_stream(seed, 0);
  return simulate(n, params, rng, true);
}

Simulation simulate(long n, const ModelParams& params, Rng& rng, bool keep_records) {
  if (n < 1) throw std::invalid_argument("simulate requires n >= 1");
  HotelLedger ledger(params, keep_records);
  std::vector<double> times;
  times.reserve(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) times.push_back(ledger.advance(draw_exponential(rng)));
  return {EventSequence(std::move(times)), std::move(ledger)};
}

std::vector<TrajectoryPoint> simulate_trajectory(std::span<const long> checkpoints, const ModelParams& params,
                                                 Rng& rng) {
  std::vector<TrajectoryPoint> out;
  if (checkpoints.empty()) return out;
  if (!std::is_sorted(checkpoints.begin(), checkpoints.end()) || checkpoints.front() < 1)
    throw std::invalid_argument("checkpoints must be sorted and positive");
  HotelLedger ledger(params, false);
  std::size_t next = 0;
  for (long n = 1; n <= checkpoints.back(); ++n) {
    ledger.advance(draw_exponential(rng));
    while (next < checkpoints.size() && checkpoints[next] == n) {
      out.push_back({n, ledger.hotel_count(), ledger.tolls_paid()});
      ++next;
    }
  }
  return out;
}

std::vector<long> log_checkpoints(long n, int per_decade) {
  if (n < 1 || per_decade < 1) throw std::invalid_argument("checkpoint grid");
  std::vector<long> out;
  const double step = std::log(10.0) / per_decade;
  for (int i = 0;; ++i) {
    const long v = std::lround(std::exp(step * i));
    if (v >= n) break;
    if (out.empty() || v > out.back()) out.push_back(v);
  }
  out.push_back(n);
  return out;
}

double PredictiveCurve::cumulative_hazard(double t) const {
  if (t <= 0.0) return 0.0;
  double h = 0.0;
  for (const auto& s : segments) {
    if (t <= s.start) break;
    h += s.rate * (std::min(t, s.end) - s.start);
  }
  for (const auto& a : atoms) {
    if (a.position <= t) h += a.mass;
  }
  return h;
}

double PredictiveCurve::survival(double t) const { return std::exp(-cumulative_hazard(t)); }

PredictiveCurve predictive_survival(const EventSequence& history, const ModelParams& params) {
  const TieSummary ties = history.ties();
  PredictiveCurve c;
  double prev = 0.0;
  long risk = history.size();
  for (long r = 0; r < ties.size(); ++r) {
    c.segments.push_back({prev, ties.times[r], toll_rate(params, risk)});
    c.atoms.push_back({ties.times[r], hotel_tax(params, ties.risk_after[r], ties.occupancy[r])});
    risk = ties.risk_after[r];
    prev = ties.times[r];
  }
  c.segments.push_back({prev, std::numeric_limits<double>::infinity(), toll_rate(params, risk)});
  return c;
}

double StepCurve::operator()(double t) const {
  const auto it = std::upper_bound(positions.begin(), positions.end(), t);
  if (it == positions.begin()) return 1.0;
  return values[static_cast<std::size_t>(it - positions.begin() - 1)];
}

StepCurve taxes_only_survival(const EventSequence& history, double rho) {
  if (history.empty()) throw std::invalid_argument("history is empty");
  if (!(rho >= 0.0)) throw std::invalid_argument("rho must be non-negative");
  const TieSummary ties = history.ties();
  StepCurve s;
  double v = 1.0;
  for (long r = 0; r < ties.size(); ++r) {
    const double risk = static_cast<double>(ties.risk_after[r]);
    v *= (rho + risk) / (rho + risk + static_cast<double>(ties.occupancy[r]));
    s.positions.push_back(ties.times[r]);
    s.values.push_back(v);
  }
  return s;
}

StepCurve kaplan_meier(const EventSequence& history) {
  if (history.empty()) throw std::invalid_argument("history is empty");
  std::vector<double> sorted = history.values();
  std::sort(sorted.begin(), sorted.end());
  StepCurve s;
  double v = 1.0;
  const long n = history.size();
  for (long i = 0; i < n;) {
    long j = i;
    while (j < n && sorted[j] == sorted[i]) ++j;
    const long at_risk = n - i;
    const long deaths = j - i;
    v *= static_cast<double>(at_risk - deaths) / static_cast<double>(at_risk);
    s.positions.push_back(sorted[i]);
    s.values.push_back(v);
    i = j;
  }
  return s;
}

std::vector<WealthRow> wealth_report(const HotelLedger& ledger, HotelOrder order) {
  std::vector<Hotel> hs = ledger.hotels();
  if (order == HotelOrder::kTemporal) {
    std::sort(hs.begin(), hs.end(), [](const Hotel& a, const Hotel& b) { return a.founding < b.founding; });
  }
  std::vector<WealthRow> rows;
  rows.reserve(hs.size());
  for (std::size_t i = 0; i < hs.size(); ++i) {
    const auto& h = hs[i];
    rows.push_back({static_cast<long>(i + 1), h.founding, h.position, h.occupancy, h.wealth(),
                    h.wealth() / static_cast<double>(h.occupancy)});
  }
  return rows;
}

double toll_total(const HotelLedger& ledger) {
  double z = 0.0;
  double prev = 0.0;
  long risk = ledger.pilgrims();
  for (const auto& h : ledger.hotels()) {
    z += ledger.zeta(risk) * (h.position - prev);
    risk -= h.occupancy;
    prev = h.position;
  }
  return z;
}

}  // namespace pilgrim
