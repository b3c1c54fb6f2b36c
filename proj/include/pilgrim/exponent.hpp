#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pilgrim/numeric.hpp"
#include "pilgrim/params.hpp"

namespace pilgrim {

enum class ExponentFamily { kPilgrim, kGamma, kGeneralized, kIid };

std::string to_string(ExponentFamily f);

// zeta(t) = -log E exp(-t X) for the random measure behind a neutral-to-the-right
// survival process. Only the discrete values zeta(n) enter the combinatorics.
class CharacteristicExponent {
 public:
  static CharacteristicExponent pilgrim(double rho, double nu = 1.0);
  static CharacteristicExponent gamma(double rho, double nu = 1.0);
  static CharacteristicExponent generalized(const ModelParams& p);
  static CharacteristicExponent iid(double lambda);
  // pilgrim when beta == 0, generalized otherwise
  static CharacteristicExponent from_params(const ModelParams& p);

  ExponentFamily family() const noexcept { return family_; }
  double rho() const noexcept { return rho_; }
  double beta() const noexcept { return beta_; }
  double nu() const noexcept { return nu_; }
  double lambda() const noexcept { return nu_; }

  // true when forward differences have the Gamma-ratio closed form
  bool has_closed_form() const noexcept {
    return family_ == ExponentFamily::kPilgrim || family_ == ExponentFamily::kGeneralized;
  }

  // zeta(n) to roughly 30 significant digits, for use in alternating sums.
  Compensated at_integer(long n) const;
  // zeta(m+1) - zeta(m)
  double increment(long m) const;

 private:
  CharacteristicExponent(ExponentFamily f, double rho, double beta, double nu)
      : family_(f), rho_(rho), beta_(beta), nu_(nu) {}

  ExponentFamily family_;
  double rho_;
  double beta_;
  double nu_;  // doubles as lambda for the iid family
};

double zeta_continuous(const CharacteristicExponent& e, double t);

// Normalizing constant of the splitting rule, summed over d in log-gamma space.
double zeta_discrete(const ModelParams& p, long n);

// (Delta^d zeta)(r). Closed form where available, compensated alternating sum otherwise.
SignedLog forward_difference(const CharacteristicExponent& e, long r, long d);

// Always the alternating sum over compensated zeta values; a cross-check route.
SignedLog alternating_forward_difference(const CharacteristicExponent& e, long r, long d);

// Triangle of differences (Delta^j zeta)(r + i) for j + i <= d.
class ForwardDifferenceTable {
 public:
  ForwardDifferenceTable(const CharacteristicExponent& e, long origin, long order);

  long origin() const noexcept { return origin_; }
  long order() const noexcept { return order_; }
  const SignedLog& at(long j, long i) const;

 private:
  long origin_;
  long order_;
  std::vector<std::vector<SignedLog>> rows_;
};

// A discrete sequence zeta_0 = 0, zeta_1, ..., zeta_N.
class CharacteristicIndex {
 public:
  static CharacteristicIndex from_exponent(const CharacteristicExponent& e, long n_max);
  // values[i] is zeta_{i+1}
  static CharacteristicIndex from_values(std::span<const double> values);
  static CharacteristicIndex from_values(std::span<const long double> values);

  long size() const noexcept { return static_cast<long>(values_.size()) - 1; }
  double operator[](long n) const { return values_.at(static_cast<std::size_t>(n)).value(); }
  Compensated exact(long n) const { return values_.at(static_cast<std::size_t>(n)); }
  // alternating sum; needs r + d <= size()
  Compensated difference(long r, long d) const;
  // sum of |C(d,j) zeta(r+j)|, the scale against which a difference is judged zero
  double difference_scale(long r, long d) const;

 private:
  explicit CharacteristicIndex(std::vector<Compensated> v) : values_(std::move(v)) {}
  std::vector<Compensated> values_;
};

struct ContinuityCase {
  long r = 0;
  long d = 0;
  double violation = 0.0;
};

struct ContinuityReport {
  long n_max = 0;
  double max_violation = 0.0;
  long worst_r = -1;
  long worst_d = -1;
  long cases_checked = 0;
  std::vector<ContinuityCase> violations;  // cases above tol
  std::vector<ContinuityCase> degenerate;  // 0/0 ratios
  bool passed() const noexcept { return violations.empty(); }
};

// Tests dzeta(r+d)/dzeta(r) == Delta^d zeta(r+1) / Delta^d zeta(r) for d >= 2, r+d+1 <= N.
ContinuityReport continuity_check(const CharacteristicIndex& index, double tol);

// Builds zeta_1..zeta_N from zeta_1 and zeta_2 = zeta_1 (1 + c) by solving the
// continuity condition for each successive value.
std::vector<long double> index_from_continuity(double zeta1, double c, long n_max);

double levy_density(const CharacteristicExponent& e, double z);

// q(r, d): probability that exactly a given d of r + d units at risk fail together.
double splitting_prob(const ModelParams& p, long r, long d);
double splitting_prob(const CharacteristicExponent& e, long r, long d);

// Precomputed splitting rule for all r + d <= n_max.
class SplittingRule {
 public:
  SplittingRule(const ModelParams& p, long n_max);

  long n_max() const noexcept { return n_max_; }
  const ModelParams& params() const noexcept { return params_; }
  double log_prob(long r, long d) const;
  double prob(long r, long d) const { return std::exp(log_prob(r, d)); }
  // zeta_m at nu = 1
  double zeta(long m) const { return static_cast<double>(zeta_.at(static_cast<std::size_t>(m))); }
  // log of C(n, d) q(n - d, d): the law of the size of the earliest block among n
  double log_first_block(long n, long d) const;

 private:
  ModelParams params_;
  long n_max_;
  std::vector<double> lg_rho_;   // lgamma(r + rho)
  std::vector<double> lg_beta_;  // lgamma(d + beta)
  std::vector<double> lg_sum_;   // lgamma(m + rho + beta)
  std::vector<long double> zeta_;
  std::vector<double> log_zeta_;
};

}  // namespace pilgrim
