#include <cmath>
#include <random>

#include "doctest.h"
#include "nfcf/constants.hpp"
#include "nfcf/error.hpp"

using namespace nfcf;

namespace {

FieldPtr qsqrt14() { return NumberField::create(QPoly::from_ints({-14, 0, 1})); }
FieldPtr rationals() { return NumberField::create(QPoly::from_ints({0, 1})); }

struct Row {
  std::vector<long> poly;
  long M;
};

// Minimal polynomials (constant term first) and the published M column.
const std::vector<Row> kTable1{
    {{1, -2, -1, 1}, 11},  {{-1, -3, 0, 1}, 18},   {{1, -3, -1, 1}, 33},     {{1, -6, -1, 1}, 219},
    {{-1, 2, 0, -1, 1}, 21}, {{-1, -1, 0, 0, 1}, 22}, {{-1, 1, 1, -1, 1}, 26},
};

Interval iv(double x) { return Interval::from_double(x); }

}  // namespace

TEST_CASE("theta") {
  CHECK(theta(Interval(0L, kDefaultPrecision)).contains(1));
  CHECK(theta(Interval(mpq_class(3, 2), kDefaultPrecision)).contains(2));
  CHECK(theta(Interval(mpq_class(7, 5), kDefaultPrecision)).mid_double() ==
        doctest::Approx((1.4 + std::sqrt(5.96)) / 2));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-50, 50);
  for (int i = 0; i < 1000; ++i) {
    const Interval x = iv(u(rng));
    const Interval t = theta(x);
    CHECK(x.abs().certainly_le(t));
    CHECK(t.certainly_le(x.abs() + Interval(1L, kDefaultPrecision)));
  }
}

TEST_CASE("Minkowski and ideal bounds") {
  auto k = qsqrt14();
  CHECK(minkowski_bound(*k).mid_double() == doctest::Approx(0.5 * std::sqrt(56.0)));
  CHECK(minkowski_bound(*rationals()).contains(1));
  auto c1 = NumberField::create(QPoly::from_ints({1, -2, -1, 1}));
  CHECK(minkowski_bound(*c1).mid_double() == doctest::Approx(6.0 / 27 * 7));
  CHECK(c_ideal(FractionalIdeal::unit(k)).mid_double() == doctest::Approx(std::sqrt(56.0)));
  CHECK(c_ideal(FractionalIdeal::unit(rationals())).contains(1));
  auto p5 = primes_above(k, 5)[0];
  CHECK(c_ideal(p5.ideal).mid_double() == doctest::Approx(5 * std::sqrt(56.0)));
  auto q4 = NumberField::create(QPoly::from_ints({-1, -1, 0, 0, 1}));
  CHECK(minkowski_bound(*q4).mid_double() == doctest::Approx(24.0 / 256 * 4 / M_PI * std::sqrt(283.0)));
}

TEST_CASE("c(K) and M") {
  auto k = qsqrt14();
  CHECK(*c_field_exact(*k) == 28);
  CHECK(choose_M(*k) == 28);
  auto c2 = NumberField::create(QPoly::from_ints({-1, -3, 0, 1}));
  CHECK(*c_field_exact(*c2) == 18);
  CHECK(choose_M(*c2) == 18);
  auto q4 = NumberField::create(QPoly::from_ints({-1, -1, 0, 0, 1}));
  CHECK_FALSE(c_field_exact(*q4));
  CHECK(c_field(*q4).mid_double() == doctest::Approx(283 * 8 / (M_PI * M_PI) * 24 / 256));
  for (const auto& row : kTable1) {
    auto f = NumberField::create(QPoly::from_ints(row.poly));
    CHECK(choose_M(*f) == row.M);
  }
  CHECK(choose_M(*rationals()) == 1);
}

TEST_CASE("epsilon") {
  auto k = qsqrt14();
  auto eps = epsilon_for(FractionalIdeal::unit(k), 28);
  CHECK(std::fabs(eps.mid_double() - std::pow(14.0, -0.25)) < 1e-7);
  CHECK(std::fabs(eps.mid_double() - 0.516973) < 5e-7);
  CHECK(epsilon_for(FractionalIdeal::unit(rationals()), 2).contains(mpq_class(1, 2)));
  CHECK(epsilon_for(FractionalIdeal::unit(k), 100000).certainly_lt(eps));
  try {
    epsilon_for(FractionalIdeal::unit(k), 7);
    FAIL("expected EpsilonNotLessThanOne");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::EpsilonNotLessThanOne);
  }
}

TEST_CASE("c(M,K) and epsilon prime") {
  auto k = qsqrt14();
  auto us = UnitSystem::make(k, {NFElement(k, {15, 4})});
  auto rep = compute_constants(us);
  CHECK(rep.M == 28);
  CHECK(rep.warnings.empty());
  CHECK(std::fabs(rep.c_mk.mid_double() / 48896 - 1) < 0.005);
  CHECK(rep.c_mk.width() < 1e-6);

  ConstantsOptions bed;
  bed.M = mpz_class(2);
  bed.epsilon = mpq_class(31, 32);
  auto rb = compute_constants(us, bed);
  CHECK(std::fabs(rb.c_mk.mid_double() / 119008 - 1) < 0.005);

  const mpz_class top = rep.c_mk.ceil_hi();
  CHECK(epsilon_prime(top, 28, 2, rep.epsilon, rep.t0).certainly_lt(Interval(1L, kDefaultPrecision)));
  CHECK(epsilon_prime(top - 2, 28, 2, rep.epsilon, rep.t0).certainly_gt(Interval(1L, kDefaultPrecision)));
  Interval prev = epsilon_prime(2, 28, 2, rep.epsilon, rep.t0);
  for (long q = 10; q < 10000000; q *= 7) {
    Interval cur = epsilon_prime(q, 28, 2, rep.epsilon, rep.t0);
    CHECK(cur.certainly_lt(prev));
    prev = cur;
  }
  mpz_class huge;
  mpz_ui_pow_ui(huge.get_mpz_t(), 10, 60);
  CHECK(std::fabs(epsilon_prime(huge, 28, 2, rep.epsilon, rep.t0).mid_double() - 1 / std::sqrt(14.0)) < 1e-9);

  // ε′(q) < 1 exactly when q > c(M,K), on a grid around the threshold
  for (long off = -30; off <= 30; off += 3) {
    const mpz_class q = top + off;
    const Interval e = epsilon_prime(q, 28, 2, rep.epsilon, rep.t0);
    if (Interval(q, kDefaultPrecision).certainly_gt(rep.c_mk)) CHECK(e.certainly_lt(Interval(1L, kDefaultPrecision)));
    if (Interval(q, kDefaultPrecision).certainly_lt(rep.c_mk)) CHECK(e.certainly_gt(Interval(1L, kDefaultPrecision)));
  }

  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> ue(0.05, 0.95), ut(1.0, 30.0);
  std::uniform_int_distribution<int> ud(1, 6), um(1, 300);
  for (int i = 0; i < 200; ++i) {
    const int d = ud(rng);
    const mpz_class M = um(rng);
    const Interval c = c_MK(M, d, iv(ue(rng)), iv(ut(rng)));
    mpz_class md;
    mpz_pow_ui(md.get_mpz_t(), M.get_mpz_t(), static_cast<unsigned long>(d));
    CHECK(c.certainly_gt(Interval(md, kDefaultPrecision)));
  }
}

TEST_CASE("M override below c(K)") {
  auto k = qsqrt14();
  auto us = UnitSystem::make(k, {NFElement(k, {15, 4})});
  ConstantsOptions o;
  o.M = mpz_class(20);
  auto rep = compute_constants(us, o);
  CHECK(rep.warnings.size() == 1);
  o.M = mpz_class(7);
  try {
    compute_constants(us, o);
    FAIL("expected EpsilonNotLessThanOne");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::EpsilonNotLessThanOne);
  }
}

TEST_CASE("C alpha") {
  auto q = rationals();
  auto p = primes_above(q, 5)[0];
  auto a = NFElement::rational(q, mpq_class(7, 3));
  CHECK(c_alpha(a, a, p) == 25);
  auto c = height_constant(a, NFElement::rational(q, -1), p);
  CHECK(c.mid_double() == doctest::Approx(3 * std::sqrt(100.0 / 9 + 1)));
  CHECK(c_alpha(a, NFElement::rational(q, -1), p) == 2025);
  CHECK(c_alpha(NFElement::rational(q, mpq_class(107, 3)), NFElement::rational(q, -1), p) >
        c_alpha(a, NFElement::rational(q, -1), p));
  auto k = qsqrt14();
  auto pk = primes_above(k, 5)[0];
  auto x = NFElement(k, {mpq_class(1, 3), 2});
  CHECK(c_alpha(x, x - pk.gen2 * mpq_class(1, 7), pk) > 0);
}

TEST_CASE("T0 with unit weight at complex places") {
  // totally real: identical to t0
  auto k = qsqrt14();
  auto us = UnitSystem::make(k, {NFElement(k, {15, 4})});
  CHECK(t0_complex_weight_one(us).mid_double() == doctest::Approx(t0(us).mid_double()).epsilon(1e-15));

  // x^4 - x - 1: units -x, x^3 - x - 1; rho = (0.32228 + 0.91237)/2 by hand
  auto q4 = NumberField::create(QPoly::from_ints({-1, -1, 0, 0, 1}));
  auto u4 = UnitSystem::make(q4, {NFElement(q4, {0, -1, 0, 0}), NFElement(q4, {-1, -1, 0, 1})});
  const double rho = std::log(t0_complex_weight_one(u4).mid_double());
  CHECK(rho == doctest::Approx((0.3222846159710301 + 0.912369501930994) / 2).epsilon(1e-12));
  CHECK(t0_complex_weight_one(u4).certainly_le(t0(u4)));
  const auto M = choose_M(*q4);
  const auto c = c_MK(M, 4, epsilon_for(FractionalIdeal::unit(q4), M), t0_complex_weight_one(u4));
  CHECK(c.mid_double() == doctest::Approx(187169288265.0).epsilon(1e-9));
}
