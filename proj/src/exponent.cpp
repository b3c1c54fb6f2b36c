#include "pilgrim/exponent.hpp"

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/polygamma.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pilgrim {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_nonnegative(long v, const char* what) {
  if (v < 0) throw std::invalid_argument(std::string(what) + " must be non-negative");
}

// Exact binomial coefficients as doubles; exact while C(d, j) < 2^53 (d <= 56).
std::vector<double> binomial_row(long d) {
  if (d > 56) throw std::invalid_argument("alternating sums limited to order 56");
  std::vector<double> row(static_cast<std::size_t>(d + 1), 1.0);
  for (long j = 1; j <= d; ++j) row[j] = row[j - 1] * static_cast<double>(d - j + 1) / static_cast<double>(j);
  for (auto& c : row) c = std::round(c);
  return row;
}

Compensated alternating_sum(std::span<const Compensated> z, long d) {
  const auto c = binomial_row(d);
  Compensated acc;
  for (long j = 0; j <= d; ++j) {
    const Compensated term = z[static_cast<std::size_t>(j)] * c[j];
    acc += ((d - j) % 2 == 0) ? term : -term;
  }
  return acc;
}

// zeta(r), ..., zeta(r + count - 1)
std::vector<Compensated> integer_values(const CharacteristicExponent& e, long r, long count) {
  std::vector<Compensated> out;
  out.reserve(static_cast<std::size_t>(count));
  if (e.family() == ExponentFamily::kGamma || e.family() == ExponentFamily::kIid) {
    for (long i = 0; i < count; ++i) out.push_back(e.at_integer(r + i));
    return out;
  }
  // running sums of unit-nu increments, scaled once at the end
  const auto unit = e.family() == ExponentFamily::kPilgrim
                        ? CharacteristicExponent::pilgrim(e.rho(), 1.0)
                        : CharacteristicExponent::generalized(ModelParams(e.rho(), e.beta(), 1.0));
  Compensated acc = unit.at_integer(r);
  if (unit.family() == ExponentFamily::kPilgrim) {
    for (long i = 0; i < count; ++i) {
      out.push_back(acc * e.nu());
      acc += Compensated(1.0) / two_sum(e.rho(), static_cast<double>(r + i));
    }
    return out;
  }
  // increments follow inc(m + 1) = inc(m) (m + rho) / (m + 1 + rho + beta); running the
  // ratio in double-double keeps high-order differences accurate, and the rounding of
  // the first increment only rescales them all
  const Compensated rho_beta = two_sum(e.rho(), e.beta());
  Compensated inc = from_long_double(static_cast<long double>(unit.increment(r)));
  for (long i = 0; i < count; ++i) {
    out.push_back(acc * e.nu());
    acc += inc;
    const double m = static_cast<double>(r + i);
    inc = inc * two_sum(e.rho(), m) / (rho_beta + Compensated(m + 1.0));
  }
  return out;
}

long double generalized_increment_ld(double rho, double beta, long m) {
  const long double x = static_cast<long double>(rho) + m;
  return std::exp(std::lgamma(x) + std::lgamma(static_cast<long double>(beta) + 1) -
                  std::lgamma(x + beta + 1));
}

// lgamma(x + beta) - lgamma(x)
double log_gamma_shift(double x, double beta) { return std::lgamma(x + beta) - std::lgamma(x); }

double generalized_zeta(double rho, double beta, double nu, double t) {
  if (t == 0.0) return 0.0;
  if (beta == 0.0) return nu * (boost::math::digamma(rho + t) - boost::math::digamma(rho));
  double delta;
  if (std::abs(beta) < 1e-3) {
    // Taylor series in beta of the difference of log-gamma shifts
    using boost::math::digamma;
    using boost::math::polygamma;
    delta = 0.0;
    double bk = 1.0;
    double fact = 1.0;
    for (int k = 1; k <= 8; ++k) {
      bk *= beta;
      fact *= k;
      const double diff = k == 1 ? digamma(rho + t) - digamma(rho)
                                 : polygamma(k - 1, rho + t) - polygamma(k - 1, rho);
      delta += bk / fact * diff;
    }
  } else {
    delta = log_gamma_shift(rho + t, beta) - log_gamma_shift(rho, beta);
  }
  return nu * std::tgamma(1.0 + beta) * std::exp(-log_gamma_shift(rho + t, beta)) * (std::expm1(delta) / beta);
}

}  // namespace

std::string to_string(ExponentFamily f) {
  switch (f) {
    case ExponentFamily::kPilgrim: return "pilgrim";
    case ExponentFamily::kGamma: return "gamma";
    case ExponentFamily::kGeneralized: return "generalized";
    case ExponentFamily::kIid: return "iid";
  }
  return "unknown";
}

CharacteristicExponent CharacteristicExponent::pilgrim(double rho, double nu) {
  const ModelParams p(rho, 0.0, nu);
  return {ExponentFamily::kPilgrim, p.rho(), 0.0, p.nu()};
}

CharacteristicExponent CharacteristicExponent::gamma(double rho, double nu) {
  const ModelParams p(rho, 0.0, nu);
  return {ExponentFamily::kGamma, p.rho(), 0.0, p.nu()};
}

CharacteristicExponent CharacteristicExponent::generalized(const ModelParams& p) {
  return {ExponentFamily::kGeneralized, p.rho(), p.beta(), p.nu()};
}

CharacteristicExponent CharacteristicExponent::iid(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("lambda must be positive");
  return {ExponentFamily::kIid, 1.0, 0.0, lambda};
}

CharacteristicExponent CharacteristicExponent::from_params(const ModelParams& p) {
  return p.harmonic() ? pilgrim(p.rho(), p.nu()) : generalized(p);
}

Compensated CharacteristicExponent::at_integer(long n) const {
  require_nonnegative(n, "n");
  switch (family_) {
    case ExponentFamily::kPilgrim: {
      Compensated acc;
      for (long m = 0; m < n; ++m) acc += Compensated(1.0) / two_sum(rho_, static_cast<double>(m));
      return acc * nu_;
    }
    case ExponentFamily::kGeneralized: {
      long double acc = 0;
      long double err = 0;
      for (long m = 0; m < n; ++m) {
        // Kahan summation in extended precision
        const long double y = generalized_increment_ld(rho_, beta_, m) - err;
        const long double t = acc + y;
        err = (t - acc) - y;
        acc = t;
      }
      return from_long_double(acc) * nu_;
    }
    case ExponentFamily::kGamma:
      return from_long_double(std::log1p(static_cast<long double>(n) / rho_)) * nu_;
    case ExponentFamily::kIid:
      return two_prod(nu_, static_cast<double>(n));
  }
  return {};
}

double CharacteristicExponent::increment(long m) const {
  require_nonnegative(m, "m");
  switch (family_) {
    case ExponentFamily::kPilgrim: return nu_ / (rho_ + static_cast<double>(m));
    case ExponentFamily::kGeneralized:
      return nu_ * static_cast<double>(generalized_increment_ld(rho_, beta_, m));
    case ExponentFamily::kGamma: return nu_ * std::log1p(1.0 / (rho_ + static_cast<double>(m)));
    case ExponentFamily::kIid: return nu_;
  }
  return 0.0;
}

double zeta_continuous(const CharacteristicExponent& e, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("zeta requires t >= 0");
  switch (e.family()) {
    case ExponentFamily::kPilgrim:
      if (t == 0.0) return 0.0;
      return e.nu() * (boost::math::digamma(e.rho() + t) - boost::math::digamma(e.rho()));
    case ExponentFamily::kGamma: return e.nu() * std::log1p(t / e.rho());
    case ExponentFamily::kGeneralized: return generalized_zeta(e.rho(), e.beta(), e.nu(), t);
    case ExponentFamily::kIid: return e.lambda() * t;
  }
  return 0.0;
}

double zeta_discrete(const ModelParams& p, long n) {
  if (n < 1) throw std::invalid_argument("zeta_discrete requires n >= 1");
  const long double rho = p.rho();
  const long double beta = p.beta();
  const long double lg_n = std::lgamma(static_cast<long double>(n) + 1);
  const long double lg_den = std::lgamma(static_cast<long double>(n) + rho + beta);
  std::vector<long double> terms;
  terms.reserve(static_cast<std::size_t>(n));
  long double mx = -std::numeric_limits<long double>::infinity();
  for (long d = 1; d <= n; ++d) {
    const long double t = lg_n - std::lgamma(static_cast<long double>(d) + 1) -
                          std::lgamma(static_cast<long double>(n - d) + 1) +
                          std::lgamma(static_cast<long double>(n - d) + rho) +
                          std::lgamma(static_cast<long double>(d) + beta) - lg_den;
    terms.push_back(t);
    mx = std::max(mx, t);
  }
  long double s = 0;
  for (auto t : terms) s += std::exp(t - mx);
  return p.nu() * static_cast<double>(std::exp(mx + std::log(s)));
}

SignedLog forward_difference(const CharacteristicExponent& e, long r, long d) {
  require_nonnegative(r, "r");
  require_nonnegative(d, "d");
  if (d == 0) return SignedLog::from_compensated(e.at_integer(r));
  if (e.has_closed_form()) {
    const double log_abs = std::log(e.nu()) + std::lgamma(r + e.rho()) + std::lgamma(d + e.beta()) -
                           std::lgamma(r + d + e.rho() + e.beta());
    return {d % 2 == 1 ? 1 : -1, log_abs};
  }
  if (e.family() == ExponentFamily::kIid) {
    if (d == 1) return SignedLog::from_value(e.lambda());
    return {};
  }
  return alternating_forward_difference(e, r, d);
}

SignedLog alternating_forward_difference(const CharacteristicExponent& e, long r, long d) {
  require_nonnegative(r, "r");
  require_nonnegative(d, "d");
  const auto z = integer_values(e, r, d + 1);
  return SignedLog::from_compensated(alternating_sum(z, d));
}

ForwardDifferenceTable::ForwardDifferenceTable(const CharacteristicExponent& e, long origin, long order)
    : origin_(origin), order_(order) {
  require_nonnegative(origin, "origin");
  require_nonnegative(order, "order");
  const auto base = integer_values(e, origin, order + 1);
  std::vector<Compensated> row(base.begin(), base.end());
  for (long j = 0; j <= order; ++j) {
    std::vector<SignedLog> out;
    for (long i = 0; i + j <= order; ++i) {
      out.push_back(j > 0 && e.has_closed_form() ? forward_difference(e, origin + i, j)
                                                 : SignedLog::from_compensated(row[static_cast<std::size_t>(i)]));
    }
    rows_.push_back(std::move(out));
    for (std::size_t i = 0; i + 1 < row.size(); ++i) row[i] = row[i + 1] - row[i];
    if (!row.empty()) row.pop_back();
  }
}

const SignedLog& ForwardDifferenceTable::at(long j, long i) const {
  if (j < 0 || i < 0 || j + i > order_) throw std::out_of_range("difference table index");
  return rows_[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
}

CharacteristicIndex CharacteristicIndex::from_exponent(const CharacteristicExponent& e, long n_max) {
  require_nonnegative(n_max, "n_max");
  return CharacteristicIndex(integer_values(e, 0, n_max + 1));
}

CharacteristicIndex CharacteristicIndex::from_values(std::span<const double> values) {
  std::vector<Compensated> v{Compensated(0.0)};
  for (double x : values) {
    if (!std::isfinite(x)) throw std::invalid_argument("index values must be finite");
    v.emplace_back(x);
  }
  return CharacteristicIndex(std::move(v));
}

CharacteristicIndex CharacteristicIndex::from_values(std::span<const long double> values) {
  std::vector<Compensated> v{Compensated(0.0)};
  for (long double x : values) {
    if (!std::isfinite(x)) throw std::invalid_argument("index values must be finite");
    v.push_back(from_long_double(x));
  }
  return CharacteristicIndex(std::move(v));
}

Compensated CharacteristicIndex::difference(long r, long d) const {
  require_nonnegative(r, "r");
  require_nonnegative(d, "d");
  if (r + d > size()) throw std::out_of_range("difference beyond end of index");
  return alternating_sum(std::span(values_).subspan(static_cast<std::size_t>(r), static_cast<std::size_t>(d + 1)), d);
}

double CharacteristicIndex::difference_scale(long r, long d) const {
  const auto c = binomial_row(d);
  double s = 0.0;
  for (long j = 0; j <= d; ++j) s += c[j] * std::abs(values_.at(static_cast<std::size_t>(r + j)).value());
  return s;
}

ContinuityReport continuity_check(const CharacteristicIndex& index, double tol) {
  const long n = index.size();
  if (n < 3) throw std::invalid_argument("continuity check needs at least zeta_1..zeta_3");
  constexpr double kZero = 1e-13;
  ContinuityReport rep;
  rep.n_max = n;
  for (long d = 2; d + 1 <= n; ++d) {
    for (long r = 0; r + d + 1 <= n; ++r) {
      ++rep.cases_checked;
      const Compensated a = index.difference(r, d);
      const Compensated b = index.difference(r + 1, d);
      const Compensated c = index.difference(r, 1);
      const Compensated e = index.difference(r + d, 1);
      const bool a_zero = std::abs(a.value()) <= kZero * index.difference_scale(r, d);
      const bool c_zero = std::abs(c.value()) <= kZero * index.difference_scale(r, 1);
      if (a_zero || c_zero) {
        rep.degenerate.push_back({r, d, 0.0});
        continue;
      }
      const double v = std::abs((e / c).value() - (b / a).value());
      if (v > rep.max_violation || rep.worst_r < 0) {
        rep.max_violation = std::max(rep.max_violation, v);
        rep.worst_r = r;
        rep.worst_d = d;
      }
      if (!(v <= tol)) rep.violations.push_back({r, d, v});
    }
  }
  return rep;
}

std::vector<long double> index_from_continuity(double zeta1, double c, long n_max) {
  if (!(zeta1 > 0.0) || !std::isfinite(zeta1)) throw std::invalid_argument("zeta1 must be positive");
  if (!(c >= 0.0 && c <= 1.0)) throw std::invalid_argument("c must lie in [0, 1]");
  if (n_max < 1) throw std::invalid_argument("n_max must be positive");
  // z[m] = zeta_m with z[0] = 0
  std::vector<long double> z{0.0L, zeta1};
  if (n_max >= 2) z.push_back(static_cast<long double>(zeta1) * (1.0L + c));
  auto diff = [&z](long r, long d) {
    long double acc = 0;
    long double binom = 1;
    for (long j = 0; j <= d; ++j) {
      acc += (((d - j) % 2 == 0) ? 1 : -1) * binom * z[static_cast<std::size_t>(r + j)];
      binom = binom * (d - j) / (j + 1);
    }
    return acc;
  };
  for (long n = 2; n < n_max; ++n) {
    bool solved = false;
    for (long d = 2; d <= n && !solved; ++d) {
      const long r = n - d;
      const long double a = diff(r, d);
      const long double b = diff(r, 1);
      // Delta^d zeta(r+1) = x + s, where x = zeta_{n+1}
      long double s = 0;
      long double binom = 1;
      for (long j = 0; j < d; ++j) {
        s += (((d - j) % 2 == 0) ? 1 : -1) * binom * z[static_cast<std::size_t>(r + 1 + j)];
        binom = binom * (d - j) / (j + 1);
      }
      const long double coef = a - b;
      const long double scale = std::abs(a) + std::abs(b);
      if (scale == 0 || std::abs(coef) <= 1e-15L * scale) continue;
      z.push_back((z[static_cast<std::size_t>(n)] * a + s * b) / coef);
      solved = true;
    }
    if (!solved) {
      // every condition reads 0 = 0; a vanished increment stays vanished
      if (z[static_cast<std::size_t>(n)] - z[static_cast<std::size_t>(n - 1)] == 0) {
        z.push_back(z[static_cast<std::size_t>(n)]);
      } else {
        throw std::runtime_error("singular continuity step at n = " + std::to_string(n));
      }
    }
  }
  return {z.begin() + 1, z.end()};
}

double levy_density(const CharacteristicExponent& e, double z) {
  if (!(z > 0.0)) throw std::invalid_argument("levy density requires z > 0");
  switch (e.family()) {
    case ExponentFamily::kPilgrim: return e.nu() * std::exp(-e.rho() * z) / -std::expm1(-z);
    case ExponentFamily::kGamma: return e.nu() * std::exp(-e.rho() * z) / z;
    case ExponentFamily::kGeneralized:
      return e.nu() * std::exp(-e.rho() * z + (e.beta() - 1.0) * std::log(-std::expm1(-z)));
    case ExponentFamily::kIid: throw std::invalid_argument("iid exponent has no Levy density");
  }
  return 0.0;
}

double splitting_prob(const ModelParams& p, long r, long d) {
  require_nonnegative(r, "r");
  if (d < 1) throw std::invalid_argument("splitting_prob requires d >= 1");
  const ModelParams unit(p.rho(), p.beta(), 1.0);
  const auto e = CharacteristicExponent::from_params(unit);
  const double log_num = std::lgamma(r + p.rho()) + std::lgamma(d + p.beta()) - std::lgamma(r + d + p.rho() + p.beta());
  return std::exp(log_num - std::log(e.at_integer(r + d).value()));
}

double splitting_prob(const CharacteristicExponent& e, long r, long d) {
  require_nonnegative(r, "r");
  if (d < 1) throw std::invalid_argument("splitting_prob requires d >= 1");
  const SignedLog num = forward_difference(e, r, d);
  if (num.sign == 0) return 0.0;
  return std::exp(num.log_abs - std::log(e.at_integer(r + d).value()));
}

SplittingRule::SplittingRule(const ModelParams& p, long n_max) : params_(p), n_max_(n_max) {
  if (n_max < 1) throw std::invalid_argument("splitting rule needs n_max >= 1");
  const auto n = static_cast<std::size_t>(n_max + 1);
  lg_rho_.resize(n);
  lg_beta_.resize(n);
  lg_sum_.resize(n);
  zeta_.assign(n, 0.0L);
  log_zeta_.assign(n, kNegInf);
  const long double lg_b1 = std::lgamma(static_cast<long double>(p.beta()) + 1);
  long double acc = 0;
  for (std::size_t m = 0; m < n; ++m) {
    const double x = static_cast<double>(m);
    lg_rho_[m] = std::lgamma(x + p.rho());
    lg_beta_[m] = m == 0 ? kNegInf : std::lgamma(x + p.beta());
    lg_sum_[m] = std::lgamma(x + p.rho() + p.beta());
    zeta_[m] = acc;
    if (m > 0) log_zeta_[m] = static_cast<double>(std::log(acc));
    const long double xr = static_cast<long double>(p.rho()) + x;
    acc += p.harmonic() ? 1.0L / xr : std::exp(std::lgamma(xr) + lg_b1 - std::lgamma(xr + p.beta() + 1));
  }
}

double SplittingRule::log_prob(long r, long d) const {
  if (r < 0 || d < 1 || r + d > n_max_) throw std::out_of_range("splitting rule index");
  return lg_rho_[r] + lg_beta_[d] - lg_sum_[r + d] - log_zeta_[r + d];
}

double SplittingRule::log_first_block(long n, long d) const {
  return log_binomial(static_cast<int>(n), static_cast<int>(d)) + log_prob(n - d, d);
}

}  // namespace pilgrim
