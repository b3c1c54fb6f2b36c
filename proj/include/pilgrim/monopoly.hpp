#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "pilgrim/events.hpp"
#include "pilgrim/params.hpp"
#include "pilgrim/rng.hpp"

namespace pilgrim {

struct Hotel {
  double position = 0.0;
  long occupancy = 0;
  long founder = 0;     // 1-based pilgrim index
  long founding = 0;    // 1-based order of establishment
  double taxes = 0.0;   // collected from passers-by
  double forfeits = 0.0;
  double wealth() const noexcept { return taxes + forfeits; }
};

struct PilgrimRecord {
  long pilgrim = 0;  // 1-based
  double funds = 0.0;
  double time = 0.0;
  long hotel = 0;  // founding order of the destination hotel
  double toll_paid = 0.0;
  double tax_paid = 0.0;
  double forfeit = 0.0;
  bool founded = false;
};

// State of the road after n pilgrims: hotels in spatial order and the money trail.
// Toll per mile with R travellers beyond s is nu * B(rho + R, beta + 1), which is
// nu / (rho + R) for beta = 0. The tax at a hotel holding d with R beyond is
// log((R + d + rho + beta) / (R + rho)).
class HotelLedger {
 public:
  explicit HotelLedger(const ModelParams& params, bool keep_records = true);

  const ModelParams& params() const noexcept { return params_; }
  long pilgrims() const noexcept { return n_; }
  long hotel_count() const noexcept { return static_cast<long>(hotels_.size()); }
  const std::vector<Hotel>& hotels() const noexcept { return hotels_; }
  const std::vector<PilgrimRecord>& records() const noexcept { return records_; }
  bool keeps_records() const noexcept { return keep_records_; }

  // Rate tables cover r <= pilgrims().
  // per-mile toll when r earlier travellers went further
  double toll_rate(long r) const;
  double tax(long r_after, long d) const;
  // zeta(r) = sum of toll rates 0..r-1
  double zeta(long r) const;

  double funds_total() const noexcept { return funds_total_; }
  double tolls_paid() const noexcept { return tolls_total_; }
  double taxes_and_forfeits() const noexcept;

  // Walks one pilgrim with the given funds and returns the destination.
  double advance(double funds);

 private:
  void grow(long m);

  ModelParams params_;
  bool keep_records_;
  long n_ = 0;
  std::vector<Hotel> hotels_;
  std::vector<PilgrimRecord> records_;
  std::vector<double> base_rate_;  // B(rho + m, beta + 1)
  std::vector<double> log_up_;     // log(m + rho + beta)
  std::vector<double> log_down_;   // log(m + rho)
  std::vector<double> zeta_;       // prefix sums of base_rate_, one longer
  double funds_total_ = 0.0;
  double tolls_total_ = 0.0;
};

double advance_one_pilgrim(HotelLedger& ledger, double funds);

// Untabulated versions of the posted schedule.
double toll_rate(const ModelParams& params, long r);
double hotel_tax(const ModelParams& params, long r_after, long d);

struct Simulation {
  EventSequence times;
  HotelLedger ledger;
};

Simulation simulate_from_funds(std::span<const double> funds, const ModelParams& params);
Simulation simulate(long n, const ModelParams& params, std::uint64_t seed);
Simulation simulate(long n, const ModelParams& params, Rng& rng, bool keep_records = true);

struct TrajectoryPoint {
  long n = 0;
  long hotels = 0;
  double tolls = 0.0;
};

// Hotel count and cumulative tolls after each checkpoint (sorted, positive).
std::vector<TrajectoryPoint> simulate_trajectory(std::span<const long> checkpoints, const ModelParams& params,
                                                 Rng& rng);

// Checkpoints 1..n spaced evenly in log n, always including n.
std::vector<long> log_checkpoints(long n, int per_decade = 20);

struct HazardSegment {
  double start = 0.0;
  double end = std::numeric_limits<double>::infinity();
  double rate = 0.0;
};

struct HazardAtom {
  double position = 0.0;
  double mass = 0.0;  // jump in cumulative hazard
};

// Conditional law of the next event: continuous hazard plus atoms.
struct PredictiveCurve {
  std::vector<HazardSegment> segments;
  std::vector<HazardAtom> atoms;

  // right-continuous: atoms at t are included
  double cumulative_hazard(double t) const;
  double survival(double t) const;
};

PredictiveCurve predictive_survival(const EventSequence& history, const ModelParams& params);

struct StepCurve {
  std::vector<double> positions;
  std::vector<double> values;  // value on [positions[i], positions[i+1])
  double operator()(double t) const;
};

// Product over hotels up to t of (rho + R) / (rho + R + d).
StepCurve taxes_only_survival(const EventSequence& history, double rho);
StepCurve kaplan_meier(const EventSequence& history);

enum class HotelOrder { kTemporal, kSpatial };

struct WealthRow {
  long index = 0;     // 1-based position in the requested order
  long founding = 0;  // 1-based order of establishment
  double position = 0.0;
  long occupancy = 0;
  double wealth = 0.0;
  double per_occupant = 0.0;
};

std::vector<WealthRow> wealth_report(const HotelLedger& ledger, HotelOrder order);

// Integral of zeta(R(s)) over the road.
double toll_total(const HotelLedger& ledger);

}  // namespace pilgrim
