#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "pilgrim/exponent.hpp"
#include "pilgrim/monopoly.hpp"
#include "pilgrim/partitions.hpp"
#include "pilgrim/stats.hpp"

using namespace pilgrim;

namespace {

const std::vector<double> kWorkedFunds{0.36, 0.25, 0.36, 2.24, 0.40, 0.03, 1.17, 1.68, 3.31, 1.24, 0.35, 0.50};
const std::vector<double> kWorkedTimes{0.36, 0.36, 0.36, 1.12, 0.36, 0.18, 0.36, 0.85, 1.89, 0.85, 0.36, 0.36};

bool within_3se(double observed, double p, long trials) {
  return std::abs(observed - p) <= 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

// label partition of the first three times: 0 = all distinct, 1 = {1,2}, 2 = {1,3}, 3 = {2,3}, 4 = all tied
int tie_pattern(const EventSequence& t, int a, int b, int c) {
  const bool ab = t[a] == t[b], ac = t[a] == t[c], bc = t[b] == t[c];
  if (ab && ac) return 4;
  if (ab) return 1;
  if (ac) return 2;
  if (bc) return 3;
  return 0;
}

}  // namespace

TEST_CASE("advance_one_pilgrim hand traces") {
  HotelLedger ledger(ModelParams(1.0));
  CHECK(advance_one_pilgrim(ledger, 0.36) == doctest::Approx(0.36));
  CHECK(ledger.hotel_count() == 1);

  CHECK(advance_one_pilgrim(ledger, 0.25) == 0.36);
  const auto& r = ledger.records().back();
  CHECK(r.toll_paid == doctest::Approx(0.18));
  CHECK(r.forfeit == doctest::Approx(0.07));
  CHECK(r.tax_paid == 0.0);
  CHECK(ledger.hotels().front().occupancy == 2);

  CHECK_THROWS_AS(advance_one_pilgrim(ledger, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(advance_one_pilgrim(ledger, -1.0), std::invalid_argument);
}

TEST_CASE("worked twelve-pilgrim example") {
  const auto sim = simulate_from_funds(kWorkedFunds, ModelParams(1.0));
  REQUIRE(sim.times.size() == 12);
  for (long i = 0; i < 12; ++i) {
    CHECK(std::round(sim.times[i] * 100.0) / 100.0 == doctest::Approx(kWorkedTimes[static_cast<std::size_t>(i)]));
  }
  // the sixth pilgrim founds a hotel at 6 * 0.03 before the first hotel
  CHECK(sim.times[5] == doctest::Approx(0.18).epsilon(1e-12));
  CHECK(sim.ledger.records()[5].founded);
}

TEST_CASE("scaling laws of the funds to times map") {
  for (double rho : {0.5, 1.0, 7.0}) {
    const auto one = simulate_from_funds(std::vector<double>{1.3}, ModelParams(rho, 0.0, 2.0));
    CHECK(one.times[0] == doctest::Approx(rho * 1.3 / 2.0).epsilon(1e-14));
    const auto a = simulate_from_funds(kWorkedFunds, ModelParams(rho, 0.0, 1.0));
    const auto b = simulate_from_funds(kWorkedFunds, ModelParams(rho, 0.0, 2.0));
    for (long i = 0; i < a.times.size(); ++i) CHECK(b.times[i] * 2.0 == doctest::Approx(a.times[i]).epsilon(1e-13));
  }
}

TEST_CASE("money conservation and toll integral") {
  Rng rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    const double rho = 0.1 + 10.0 * draw_uniform(rng);
    const double beta = -0.9 + 3.0 * draw_uniform(rng);
    const double nu = 0.2 + 3.0 * draw_uniform(rng);
    const long n = 1 + static_cast<long>(draw_uniform(rng) * 300);
    const auto sim = simulate(n, ModelParams(rho, beta, nu), rng);
    const auto& L = sim.ledger;
    const double total = L.funds_total();
    CHECK(std::abs(total - L.tolls_paid() - L.taxes_and_forfeits()) <= 1e-9 * total);
    CHECK(std::abs(toll_total(L) - L.tolls_paid()) <= 1e-9 * total);
    long occ = 0;
    double wealth = 0.0;
    for (const auto& h : L.hotels()) {
      occ += h.occupancy;
      wealth += h.wealth();
    }
    CHECK(occ == n);
    CHECK(wealth == doctest::Approx(L.taxes_and_forfeits()).epsilon(1e-12));
  }
}

TEST_CASE("ledger structure") {
  const auto sim = simulate(500, ModelParams(2.0), 5u);
  const auto& hotels = sim.ledger.hotels();
  for (std::size_t i = 1; i < hotels.size(); ++i) CHECK(hotels[i - 1].position < hotels[i].position);
  const auto ties = sim.times.ties();
  CHECK(ties.risk_after.back() == 0);
  for (std::size_t i = 1; i < ties.risk_after.size(); ++i) CHECK(ties.risk_after[i] <= ties.risk_after[i - 1]);
  for (std::size_t i = 0; i < hotels.size(); ++i) CHECK(hotels[i].occupancy == ties.occupancy[i]);
}

TEST_CASE("single pilgrim and a tie pay everything to the first hotel") {
  const auto one = simulate_from_funds(std::vector<double>{0.8}, ModelParams(1.5));
  CHECK(toll_total(one.ledger) == doctest::Approx(0.8).epsilon(1e-14));
  const auto w = wealth_report(one.ledger, HotelOrder::kTemporal);
  REQUIRE(w.size() == 1);
  CHECK(w[0].wealth == 0.0);

  const auto two = simulate_from_funds(std::vector<double>{0.36, 0.25}, ModelParams(1.0));
  const auto w2 = wealth_report(two.ledger, HotelOrder::kSpatial);
  REQUIRE(w2.size() == 1);
  const auto& r = two.ledger.records()[1];
  CHECK(w2[0].wealth == doctest::Approx(0.25 - r.toll_paid).epsilon(1e-14));
  CHECK(w2[0].per_occupant == doctest::Approx(w2[0].wealth / 2.0));
}

TEST_CASE("wealth report orderings") {
  const auto sim = simulate(300, ModelParams(4.0), 11u);
  const auto t = wealth_report(sim.ledger, HotelOrder::kTemporal);
  const auto s = wealth_report(sim.ledger, HotelOrder::kSpatial);
  REQUIRE(t.size() == s.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    CHECK(t[i].founding == static_cast<long>(i + 1));
    CHECK(t[i].index == static_cast<long>(i + 1));
    if (i > 0) CHECK(s[i - 1].position < s[i].position);
  }
}

TEST_CASE("determinism") {
  const auto a = simulate(400, ModelParams(1.0, 0.5, 2.0), 123u);
  const auto b = simulate(400, ModelParams(1.0, 0.5, 2.0), 123u);
  CHECK(a.times.values() == b.times.values());
  const auto c = simulate(400, ModelParams(1.0, 0.5, 2.0), 124u);
  CHECK(a.times.values() != c.times.values());
}

TEST_CASE("Monte Carlo laws of small samples") {
  constexpr int kReps = 100000;
  constexpr std::uint64_t kSeed = 20261015;

  SUBCASE("first time has mean rho / nu") {
    const ModelParams p(1.0);
    const auto t = run_replicates<double>(kReps, kSeed, [&](Rng& rng, int) { return simulate(1, p, rng, false).times[0]; });
    const auto ms = mean_se(t);
    CHECK(std::abs(ms.mean - 1.0) < 3.0 * ms.se);
  }

  SUBCASE("tie frequencies at n = 2") {
    for (double beta : {0.0, 1.0}) {
      const ModelParams p(1.0, beta);
      const auto ties = run_replicates<int>(kReps, kSeed, [&](Rng& rng, int) {
        const auto s = simulate(2, p, rng, false);
        return s.times[0] == s.times[1] ? 1 : 0;
      });
      const double freq = std::accumulate(ties.begin(), ties.end(), 0.0) / kReps;
      CHECK(within_3se(freq, (1.0 + beta) / (3.0 + beta), kReps));
    }
  }

  SUBCASE("exchangeability of tie patterns at n = 3") {
    for (double rho : {0.5, 1.0, 4.0}) {
      for (double beta : {0.0, 1.0}) {
        const ModelParams p(rho, beta);
        const auto pats = run_replicates<std::pair<int, int>>(kReps, kSeed, [&](Rng& rng, int) {
          const auto s = simulate(3, p, rng, false);
          return std::pair{tie_pattern(s.times, 0, 1, 2), tie_pattern(s.times, 2, 1, 0)};
        });
        std::array<double, 5> id{}, sw{};
        for (const auto& [a, b] : pats) {
          id[a] += 1.0;
          sw[b] += 1.0;
        }
        for (int k = 0; k < 5; ++k) {
          // pattern k under the swap is another cell of the same multinomial sample
          const double pa = id[k] / kReps, pb = sw[k] / kReps;
          const double var = (k == 0 || k == 4) ? 0.0 : (pa + pb - (pa - pb) * (pa - pb)) / kReps;
          CHECK(std::abs(pa - pb) <= 3.0 * std::sqrt(var) + 1e-12);
        }
      }
    }
  }

  SUBCASE("size of the hotel nearest the origin matches the splitting rule at n = 4") {
    for (double rho : {1.0, 4.0}) {
      for (double beta : {0.0, 0.5, 1.0}) {
        const ModelParams p(rho, beta);
        const SplittingRule rule(p, 4);
        const auto sizes = run_replicates<long>(kReps, kSeed, [&](Rng& rng, int) {
          return simulate(4, p, rng, false).ledger.hotels().front().occupancy;
        });
        for (long d = 1; d <= 4; ++d) {
          const double f = static_cast<double>(std::count(sizes.begin(), sizes.end(), d)) / kReps;
          CHECK(within_3se(f, std::exp(rule.log_first_block(4, d)), kReps));
        }
      }
    }
  }

  SUBCASE("every marginal is exponential") {
    for (double beta : {0.0, 0.5}) {
      const ModelParams p(2.0, beta, 1.5);
      const double mean = 1.0 / toll_rate(p, 0);
      const auto runs = run_replicates<std::vector<double>>(kReps, kSeed, [&](Rng& rng, int) {
        return simulate(4, p, rng, false).times.values();
      });
      for (int i = 0; i < 4; ++i) {
        std::vector<double> col;
        for (const auto& r : runs) col.push_back(r[static_cast<std::size_t>(i)]);
        const auto ks = ks_exponential(col, mean);
        CHECK_MESSAGE(ks.pass, "T_" << i + 1 << " KS " << ks.statistic << " vs " << ks.critical_1pct);
      }
    }
    CHECK(1.0 / toll_rate(ModelParams(2.0, 0.0, 1.5), 0) == doctest::Approx(2.0 / 1.5));
  }
}

TEST_CASE("predictive survival") {
  SUBCASE("empty history is exponential") {
    const auto c = predictive_survival(EventSequence{}, ModelParams(2.5));
    for (double t : {0.0, 0.4, 3.0}) CHECK(c.survival(t) == doctest::Approx(std::exp(-t / 2.5)).epsilon(1e-14));
  }

  SUBCASE("one hotel") {
    const auto c = predictive_survival(EventSequence({0.7}), ModelParams(1.0));
    CHECK(c.survival(0.7) == doctest::Approx(std::exp(-0.35) / 2.0).epsilon(1e-14));
    CHECK(c.survival(0.6999999) > 0.7);
    REQUIRE(c.atoms.size() == 1);
    CHECK(c.atoms[0].mass == doctest::Approx(std::log(2.0)));
  }

  SUBCASE("atoms are log toll-rate ratios at beta = 0") {
    const auto sim = simulate(60, ModelParams(3.0), 8u);
    const auto c = predictive_survival(sim.times, ModelParams(3.0));
    const auto ties = sim.times.ties();
    REQUIRE(c.atoms.size() == ties.times.size());
    for (std::size_t i = 0; i < c.atoms.size(); ++i) {
      const double R = static_cast<double>(ties.risk_after[i]), d = static_cast<double>(ties.occupancy[i]);
      CHECK(c.atoms[i].mass == doctest::Approx(std::log((3.0 + R + d) / (3.0 + R))).epsilon(1e-13));
    }
  }

  SUBCASE("survival is non-increasing from one") {
    const auto sim = simulate(80, ModelParams(1.0, -0.3), 9u);
    const auto c = predictive_survival(sim.times, ModelParams(1.0, -0.3));
    CHECK(c.survival(0.0) == 1.0);
    double prev = 1.0;
    for (double t = 0.0; t < 6.0; t += 0.01) {
      const double s = c.survival(t);
      CHECK(s <= prev);
      prev = s;
    }
  }

  SUBCASE("matches the walk of the next pilgrim") {
    for (double beta : {0.0, 0.7}) {
      const ModelParams p(1.5, beta);
      const auto base = simulate(12, p, 21u);
      const auto c = predictive_survival(base.times, p);
      const std::vector<double> grid{0.2, 0.8, 1.5, 3.0};
      constexpr int reps = 40000;
      const auto dest = run_replicates<double>(reps, 22, [&](Rng& rng, int) {
        HotelLedger copy = base.ledger;
        return advance_one_pilgrim(copy, draw_exponential(rng));
      });
      for (double t : grid) {
        const double f = static_cast<double>(std::count_if(dest.begin(), dest.end(), [&](double x) { return x > t; })) / reps;
        CHECK(within_3se(f, c.survival(t), reps));
      }
    }
  }
}

TEST_CASE("taxes-only survival and Kaplan-Meier") {
  const EventSequence h({0.5, 1.0, 1.5, 2.0, 3.0});
  const auto km = kaplan_meier(h);
  const auto s0 = taxes_only_survival(h, 0.0);
  CHECK(km(0.1) == 1.0);
  for (int i = 1; i <= 5; ++i) {
    const double t = h[i - 1] + 1e-9;
    CHECK(s0(t) == doctest::Approx((5.0 - i) / 5.0));
    CHECK(km(t) == doctest::Approx((5.0 - i) / 5.0));
  }
  const EventSequence tied({1.0, 1.0, 2.0, 3.0, 3.0, 3.0});
  const auto kt = kaplan_meier(tied);
  const auto st = taxes_only_survival(tied, 0.0);
  for (double t : {0.5, 1.0, 1.7, 2.0, 2.5, 3.0, 4.0}) CHECK(st(t) == doctest::Approx(kt(t)).epsilon(1e-15));
  CHECK(kt(1.0) == doctest::Approx(4.0 / 6.0));

  const auto sim = simulate(50, ModelParams(1.0), 31u);
  const auto k50 = kaplan_meier(sim.times);
  const auto s_small = taxes_only_survival(sim.times, 1e-6);
  double sup = 0.0;
  for (double t : sim.times.values()) sup = std::max(sup, std::abs(k50(t) - s_small(t)));
  CHECK(sup < 1e-4);
  CHECK_THROWS(taxes_only_survival(h, -0.1));
}

TEST_CASE("trajectories and checkpoints") {
  const auto cps = log_checkpoints(1000, 10);
  CHECK(cps.front() == 1);
  CHECK(cps.back() == 1000);
  CHECK(std::is_sorted(cps.begin(), cps.end()));
  CHECK(std::adjacent_find(cps.begin(), cps.end()) == cps.end());

  Rng a(17), b(17);
  const ModelParams p(2.0);
  const auto tr = simulate_trajectory(cps, p, a);
  const auto full = simulate(1000, p, b, false);
  CHECK(tr.back().hotels == full.ledger.hotel_count());
  CHECK(tr.back().tolls == doctest::Approx(full.ledger.tolls_paid()).epsilon(1e-12));
  for (std::size_t i = 1; i < tr.size(); ++i) CHECK(tr[i].hotels >= tr[i - 1].hotels);
}
