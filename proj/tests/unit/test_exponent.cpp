#include <doctest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/digamma.hpp>

#include <cmath>
#include <stdexcept>

#include "pilgrim/exponent.hpp"

using namespace pilgrim;

namespace {

// zeta(t) = int (1 - e^{-tz}) w(z) dz by quadrature; independent of the closed forms.
double zeta_by_quadrature(const CharacteristicExponent& e, double t) {
  boost::math::quadrature::exp_sinh<double> integrator;
  return integrator.integrate([&](double z) { return -std::expm1(-t * z) * levy_density(e, z); }, 1e-12);
}

double harmonic(double rho, long n) {
  double s = 0.0;
  for (long j = 0; j < n; ++j) s += 1.0 / (rho + j);
  return s;
}

// (Delta^d zeta)(r) by direct long double summation
long double direct_difference(const CharacteristicExponent& e, long r, long d) {
  long double s = 0.0L;
  long double c = 1.0L;
  for (long j = 0; j <= d; ++j) {
    const long double z = e.at_integer(r + j).hi + static_cast<long double>(e.at_integer(r + j).lo);
    s += ((d - j) % 2 == 0 ? 1.0L : -1.0L) * c * z;
    c = c * static_cast<long double>(d - j) / static_cast<long double>(j + 1);
  }
  return s;
}

const double kRhos[] = {0.5, 1.0, 4.0};
const double kBetas[] = {-0.5, 0.0, 1.0};

}  // namespace

TEST_CASE("model parameters are validated") {
  CHECK_THROWS_AS(ModelParams(0.0), std::invalid_argument);
  CHECK_THROWS_AS(ModelParams(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(ModelParams(1.0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(ModelParams(1.0, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ModelParams(std::nan(""), 0.0, 1.0), std::invalid_argument);
  CHECK_NOTHROW(ModelParams(1.0, -0.999, 3.0));
}

TEST_CASE("zeta_continuous worked values") {
  const auto p = CharacteristicExponent::pilgrim(1.0);
  CHECK(zeta_continuous(p, 0.0) == 0.0);
  CHECK(zeta_continuous(p, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(zeta_continuous(CharacteristicExponent::gamma(1.0), 1.0) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(zeta_continuous(CharacteristicExponent::iid(2.5), 3.0) == doctest::Approx(7.5));
  CHECK_THROWS_AS(zeta_continuous(p, -1.0), std::invalid_argument);
}

TEST_CASE("zeta_continuous agrees with the Levy integral") {
  for (double rho : kRhos) {
    for (double beta : {-0.5, -1e-4, 0.0, 5e-4, 0.3, 1.0, 2.5}) {
      const auto e = CharacteristicExponent::generalized(ModelParams(rho, beta, 1.7));
      for (double t : {0.3, 1.0, 2.5, 7.0}) {
        const double q = zeta_by_quadrature(e, t);
        CHECK(zeta_continuous(e, t) == doctest::Approx(q).epsilon(1e-9));
      }
    }
    const auto g = CharacteristicExponent::gamma(rho, 0.8);
    CHECK(zeta_continuous(g, 3.0) == doctest::Approx(zeta_by_quadrature(g, 3.0)).epsilon(1e-9));
  }
}

TEST_CASE("zeta is increasing with the holding-time bound") {
  const CharacteristicExponent families[] = {
      CharacteristicExponent::pilgrim(1.3, 2.0), CharacteristicExponent::gamma(0.7),
      CharacteristicExponent::generalized(ModelParams(2.0, -0.6)), CharacteristicExponent::generalized(ModelParams(0.5, 1.5)),
      CharacteristicExponent::iid(1.0)};
  for (const auto& e : families) {
    CHECK(e.at_integer(0).value() == 0.0);
    for (long n = 1; n <= 30; ++n) {
      const double a = e.at_integer(n).value();
      const double b = e.at_integer(n + 1).value();
      CHECK(b > a);
      CHECK(b <= (1.0 + 1.0 / n) * a * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("zeta_discrete matches worked values and the harmonic sum") {
  CHECK(zeta_discrete(ModelParams(1.0), 1) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(zeta_discrete(ModelParams(1.0), 2) == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(zeta_discrete(ModelParams(2.0), 3) ==
        doctest::Approx(boost::math::digamma(5.0) - boost::math::digamma(2.0)).epsilon(1e-14));
  for (double rho : kRhos) {
    for (long n : {1L, 5L, 40L, 300L}) {
      CHECK(std::abs(zeta_discrete(ModelParams(rho), n) / harmonic(rho, n) - 1.0) < 1e-12);
    }
    for (double beta : kBetas) {
      const ModelParams p(rho, beta, 2.0);
      const auto e = CharacteristicExponent::generalized(p);
      for (long n : {1L, 7L, 29L}) CHECK(zeta_discrete(p, n) == doctest::Approx(e.at_integer(n).value()).epsilon(1e-12));
    }
  }
}

TEST_CASE("forward differences") {
  const auto p = CharacteristicExponent::pilgrim(1.0);
  CHECK(forward_difference(p, 0, 1).value() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(forward_difference(p, 1, 1).value() == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(forward_difference(p, 5, 0).value() == doctest::Approx(harmonic(1.0, 5)).epsilon(1e-14));
  CHECK(forward_difference(CharacteristicExponent::gamma(1.0), 5, 0).value() ==
        doctest::Approx(std::log(6.0)).epsilon(1e-14));

  SUBCASE("sign pattern and closed form") {
    for (double rho : kRhos) {
      const auto e = CharacteristicExponent::pilgrim(rho, 1.5);
      for (long r = 0; r <= 20; ++r) {
        for (long d = 1; d <= 15; ++d) {
          const auto f = forward_difference(e, r, d);
          CHECK(f.sign == (d % 2 == 1 ? 1 : -1));
          const double closed = 1.5 * std::exp(std::lgamma(d) + std::lgamma(r + rho) - std::lgamma(r + d + rho));
          CHECK(std::abs(std::exp(f.log_abs) / closed - 1.0) < 1e-12);
          const auto alt = alternating_forward_difference(e, r, d);
          CHECK(alt.sign == f.sign);
          CHECK(std::abs(std::exp(alt.log_abs - f.log_abs) - 1.0) < 1e-8);
        }
      }
    }
  }

  SUBCASE("direct summation oracle for small orders") {
    for (const auto& e : {CharacteristicExponent::gamma(2.0), CharacteristicExponent::generalized(ModelParams(1.0, 0.5))}) {
      for (long r = 0; r <= 5; ++r) {
        for (long d = 1; d <= 5; ++d) {
          const double direct = static_cast<double>(direct_difference(e, r, d));
          CHECK(forward_difference(e, r, d).value() == doctest::Approx(direct).epsilon(1e-10));
        }
      }
    }
  }

  SUBCASE("iid differences vanish beyond the first") {
    const auto e = CharacteristicExponent::iid(2.0);
    CHECK(forward_difference(e, 3, 1).value() == doctest::Approx(2.0));
    for (long d = 2; d <= 6; ++d) CHECK(forward_difference(e, 3, d).sign == 0);
  }

  SUBCASE("table entries") {
    const auto e = CharacteristicExponent::pilgrim(2.0);
    const ForwardDifferenceTable t(e, 3, 4);
    CHECK(t.at(0, 2).value() == doctest::Approx(e.at_integer(5).value()));
    CHECK(t.at(3, 1).value() == doctest::Approx(forward_difference(e, 4, 3).value()).epsilon(1e-12));
  }

  SUBCASE("generalized integer values and high-order alternating sums") {
    for (double rho : kRhos) {
      for (double beta : {-0.5, 0.3, 1.0}) {
        const auto e = CharacteristicExponent::generalized(ModelParams(rho, beta, 1.3));
        const ForwardDifferenceTable t(e, 2, 20);
        for (long i = 0; i <= 20; ++i) {
          CHECK(t.at(0, i).value() == doctest::Approx(zeta_continuous(e, 2.0 + i)).epsilon(1e-13));
        }
        for (long r = 0; r <= 20; ++r) {
          for (long d = 1; d <= 15; ++d) {
            const auto f = forward_difference(e, r, d);
            const auto alt = alternating_forward_difference(e, r, d);
            CHECK(alt.sign == f.sign);
            CHECK(std::abs(std::expm1(alt.log_abs - f.log_abs)) < 1e-8);
          }
        }
      }
    }
  }
}

TEST_CASE("splitting probabilities") {
  CHECK(splitting_prob(ModelParams(1.0), 1, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(splitting_prob(ModelParams(1.0), 0, 2) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK_THROWS(splitting_prob(ModelParams(1.0), 0, 0));

  SUBCASE("beta = 1 form") {
    for (double rho : kRhos) {
      for (long r = 0; r <= 6; ++r) {
        for (long d = 1; d <= 6; ++d) {
          const double expected =
              rho * std::exp(std::lgamma(r + rho) + std::lgamma(d) - std::lgamma(r + d + rho)) * d / (r + d);
          CHECK(splitting_prob(ModelParams(rho, 1.0), r, d) == doctest::Approx(expected).epsilon(1e-12));
        }
      }
    }
  }

  SUBCASE("binomial normalization") {
    for (double rho : kRhos) {
      for (double beta : {-0.5, 0.0, 1.0, 3.0}) {
        const ModelParams p(rho, beta);
        const SplittingRule rule(p, 30);
        for (long n = 1; n <= 30; ++n) {
          double s = 0.0;
          for (long d = 1; d <= n; ++d) s += std::exp(rule.log_first_block(n, d));
          CHECK(std::abs(s - 1.0) < 1e-10);
          CHECK(rule.prob(n - 1, 1) == doctest::Approx(splitting_prob(p, n - 1, 1)).epsilon(1e-12));
        }
      }
    }
  }

  SUBCASE("nu invariance") {
    for (long r = 0; r <= 5; ++r) {
      for (long d = 1; d <= 5; ++d) {
        const double a = splitting_prob(ModelParams(1.5, 0.5, 0.5), r, d);
        CHECK(a == splitting_prob(ModelParams(1.5, 0.5, 1.0), r, d));
        CHECK(a == splitting_prob(ModelParams(1.5, 0.5, 2.0), r, d));
      }
    }
  }

  SUBCASE("index recursion zeta_{n+1} (1 - q(n,1)) = zeta_n") {
    for (const auto& e : {CharacteristicExponent::pilgrim(0.5), CharacteristicExponent::gamma(1.0),
                          CharacteristicExponent::generalized(ModelParams(3.0, -0.4)), CharacteristicExponent::iid(1.0)}) {
      for (long n = 1; n <= 30; ++n) {
        const double lhs = e.at_integer(n + 1).value() * (1.0 - splitting_prob(e, n, 1));
        CHECK(std::abs(lhs / e.at_integer(n).value() - 1.0) < 1e-10);
      }
    }
  }

  SUBCASE("iid ties have probability zero") {
    const auto e = CharacteristicExponent::iid(1.0);
    for (long r = 0; r <= 8; ++r) {
      for (long d = 2; d <= 6; ++d) CHECK(std::abs(splitting_prob(e, r, d)) < 1e-12);
    }
  }
}

TEST_CASE("continuity characterization") {
  const auto pil = continuity_check(CharacteristicIndex::from_exponent(CharacteristicExponent::pilgrim(1.0), 20), 1e-10);
  CHECK(pil.passed());
  CHECK(pil.max_violation < 1e-10);
  CHECK(pil.degenerate.empty());

  const auto gam = continuity_check(CharacteristicIndex::from_exponent(CharacteristicExponent::gamma(1.0), 20), 1e-10);
  CHECK_FALSE(gam.passed());
  CHECK(gam.max_violation > 1e-3);

  const auto iid = continuity_check(CharacteristicIndex::from_exponent(CharacteristicExponent::iid(1.0), 20), 1e-10);
  CHECK(iid.violations.empty());
  CHECK(static_cast<long>(iid.degenerate.size()) == iid.cases_checked);

  CHECK_THROWS_AS(continuity_check(CharacteristicIndex::from_exponent(CharacteristicExponent::pilgrim(1.0), 2), 1e-10),
                  std::invalid_argument);

  SUBCASE("gamma violation at r = 0, d = 2 by hand") {
    // dzeta(2)/dzeta(0) against Delta^2 zeta(1) / Delta^2 zeta(0) with zeta_n = log(1 + n)
    const double l2 = std::log(2.0), l3 = std::log(3.0), l4 = std::log(4.0);
    const double lhs = (l3 - l2) / l2;
    const double rhs = (l4 - 2 * l3 + l2) / (l3 - 2 * l2);
    CHECK(std::abs(lhs - rhs) > 1e-3);
  }
}

TEST_CASE("index_from_continuity") {
  const auto half = index_from_continuity(1.0, 0.5, 4);
  CHECK(static_cast<double>(half[0]) == doctest::Approx(1.0));
  CHECK(static_cast<double>(half[1]) == doctest::Approx(1.5));
  CHECK(static_cast<double>(half[2]) == doctest::Approx(1.5 + 1.0 / 3.0).epsilon(1e-14));
  CHECK(static_cast<double>(half[3]) == doctest::Approx(1.5 + 1.0 / 3.0 + 0.25).epsilon(1e-14));

  const auto one = index_from_continuity(1.0, 1.0, 4);
  for (int i = 0; i < 4; ++i) CHECK(static_cast<double>(one[i]) == doctest::Approx(i + 1.0));
  const auto zero = index_from_continuity(1.0, 0.0, 4);
  for (int i = 0; i < 4; ++i) CHECK(static_cast<double>(zero[i]) == doctest::Approx(1.0));

  for (double rho : {0.25, 1.0, 3.0, 9.0}) {
    const auto z = index_from_continuity(1.0 / rho, rho / (1.0 + rho), 25);
    for (long n = 1; n <= 25; ++n) CHECK(std::abs(static_cast<double>(z[n - 1]) / harmonic(rho, n) - 1.0) < 1e-8);
  }
  CHECK_THROWS_AS(index_from_continuity(1.0, 1.5, 4), std::invalid_argument);
}

TEST_CASE("Levy densities") {
  const auto p = CharacteristicExponent::pilgrim(1.0);
  const auto g = CharacteristicExponent::gamma(1.0);
  CHECK(levy_density(p, 1.0) == doctest::Approx(std::exp(-1.0) / (1.0 - std::exp(-1.0))).epsilon(1e-14));
  CHECK(levy_density(p, 60.0) < 1e-25);
  CHECK(levy_density(p, 1e-7) / levy_density(g, 1e-7) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(levy_density(p, 2.0) < levy_density(p, 1.0));
  CHECK_THROWS_AS(levy_density(p, 0.0), std::invalid_argument);
  CHECK_THROWS(levy_density(CharacteristicExponent::iid(1.0), 1.0));
}
