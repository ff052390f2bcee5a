#include <cmath>
#include <random>

#include "doctest.h"
#include "nfcf/error.hpp"
#include "nfcf/geometry.hpp"

using namespace nfcf;

namespace {

FieldPtr qsqrt14() { return NumberField::create(QPoly::from_ints({-14, 0, 1})); }

UnitSystem units14(const FieldPtr& k) { return UnitSystem::make(k, {NFElement(k, {15, 4})}); }

FieldPtr quartic() { return NumberField::create(QPoly::from_ints({-1, -1, 0, 0, 1})); }

UnitSystem quartic_units(const FieldPtr& k) {
  return UnitSystem::make(k, {NFElement(k, {0, -1, 0, 0}), NFElement(k, {-1, -1, 0, 1})});
}

Interval scalar(long v) { return Interval(v, kDefaultPrecision); }

}  // namespace

TEST_CASE("log embedding") {
  auto k = qsqrt14();
  auto l = log_embedding(NFElement(k, {15, 4}));
  REQUIRE(l.size() == 2);
  CHECK(l[1].mid_double() == doctest::Approx(std::log(15 + 4 * std::sqrt(14.0))));
  CHECK(l[0].mid_double() == doctest::Approx(-std::log(15 + 4 * std::sqrt(14.0))));
  CHECK((l[0] + l[1]).contains(0));
  for (const auto& x : log_embedding(NFElement::one(k))) CHECK(x.contains(0));
  CHECK_THROWS_AS(log_embedding(NFElement::zero(k)), Error);

  auto q4 = quartic();
  auto us = quartic_units(q4);
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> ex(-3, 3);
  for (int t = 0; t < 20; ++t) {
    auto u = us.units[0].pow(ex(rng)) * us.units[1].pow(ex(rng));
    auto v = us.units[0].pow(ex(rng)) * us.units[1].pow(ex(rng));
    auto lu = log_embedding(u), lv = log_embedding(v), luv = log_embedding(u * v);
    Interval trace(0L, kDefaultPrecision);
    for (size_t i = 0; i < lu.size(); ++i) {
      CHECK((lu[i] + lv[i] - luv[i]).contains(0));
      trace += luv[i];
    }
    CHECK(trace.contains(0));
    CHECK(trace.width() < std::ldexp(1.0, -kDefaultPrecision / 2));
  }
}

TEST_CASE("covering radius and T0") {
  auto k = qsqrt14();
  auto lat = log_lattice(units14(k));
  CHECK(lat.rho_upper.lo_double() >= 1.6999);
  CHECK(lat.rho_upper.hi_double() <= 1.7001);
  CHECK(lat.t0.lo_double() >= 5.47);
  CHECK(lat.t0.hi_double() <= 5.48);
  // rank one: half the sup norm exactly
  CHECK(lat.rho_upper.mid_double() == doctest::Approx(std::log(15 + 4 * std::sqrt(14.0)) / 2));

  CHECK(covering_radius_upper({{scalar(2), scalar(-2)}}).contains(1));
  CHECK(covering_radius_upper({{scalar(1), scalar(0)}, {scalar(0), scalar(1)}}).contains(1));
  try {
    covering_radius_upper({{scalar(1), scalar(-1)}, {scalar(2), scalar(-2)}});
    FAIL("expected DependentBasis");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DependentBasis);
  }
  auto q = NumberField::create(QPoly::from_ints({0, 1}));
  CHECK(t0(UnitSystem::make(q, {})).contains(1));
  // monotone in rho
  CHECK(covering_radius_upper({{scalar(3), scalar(-3)}}).exp().certainly_gt(
      covering_radius_upper({{scalar(2), scalar(-2)}}).exp()));
}

TEST_CASE("unit system validation") {
  auto k = qsqrt14();
  CHECK_THROWS_AS(UnitSystem::make(k, {NFElement(k, {3, 1})}), Error);
  CHECK_THROWS_AS(UnitSystem::make(k, {}), Error);
  auto q4 = quartic();
  auto us = quartic_units(q4);
  CHECK(us.rank() == 2);
  try {
    UnitSystem::make(q4, {us.units[0], us.units[0].pow(2)});
    FAIL("expected DependentBasis");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DependentBasis);
  }
}

TEST_CASE("unit reduction") {
  auto k = qsqrt14();
  auto us = units14(k);
  auto eps = NFElement(k, {15, 4});
  auto r = unit_reduce(eps.pow(3), us);
  CHECK(abs(r.norm()) == 1);
  CHECK((r == NFElement::one(k) || r == NFElement::rational(k, -1)));
  auto s = NFElement(k, {0, 1});
  CHECK(unit_reduce(s, us) == s);
  CHECK(unit_reduce(NFElement::one(k), us).is_one());

  std::mt19937_64 rng(17);
  std::uniform_int_distribution<long> c(-40, 40);
  std::uniform_int_distribution<int> e(-4, 4);
  auto lat = log_lattice(us);
  for (int t = 0; t < 50; ++t) {
    NFElement a(k, {c(rng), c(rng)});
    if (a.is_zero()) continue;
    a *= eps.pow(e(rng));
    auto red = unit_reduce_with_exponents(a, us);
    CHECK(abs(red.value.norm()) == abs(a.norm()));
    CHECK(abs((red.value / a).norm()) == 1);
    auto bound = lat.t0 * Interval(abs(a.norm()), kDefaultPrecision).root(2);
    for (const auto& z : red.value.embeddings()) CHECK(z.abs().certainly_le(bound));
  }

  auto q4 = quartic();
  auto qus = quartic_units(q4);
  auto qlat = log_lattice(qus);
  for (int t = 0; t < 30; ++t) {
    NFElement a(q4, {c(rng), c(rng), c(rng), c(rng)});
    if (a.is_zero()) continue;
    a *= qus.units[0].pow(e(rng)) * qus.units[1].pow(e(rng));
    auto red = unit_reduce(a, qus);
    CHECK(abs(red.norm()) == abs(a.norm()));
    auto bound = qlat.t0 * Interval(abs(a.norm()), kDefaultPrecision).root(4);
    for (const auto& z : red.embeddings()) CHECK(z.abs().certainly_le(bound));
  }
}

TEST_CASE("real quadratic fundamental unit") {
  auto k = qsqrt14();
  CHECK(quadratic_fundamental_unit(k) == NFElement(k, {15, 4}));
  auto k2 = NumberField::create(QPoly::from_ints({-2, 0, 1}));
  CHECK(quadratic_fundamental_unit(k2) == NFElement(k2, {1, 1}));
  auto k5 = NumberField::create(QPoly::from_ints({-1, -1, 1}));
  auto u = quadratic_fundamental_unit(k5);
  CHECK(abs(u.norm()) == 1);
  double big = 0;
  for (double v : u.abs_embeddings_double()) big = std::max(big, v);
  CHECK(big == doctest::Approx((1 + std::sqrt(5.0)) / 2));
  auto k94 = NumberField::create(QPoly::from_ints({-94, 0, 1}));
  auto u94 = quadratic_fundamental_unit(k94);
  CHECK(u94 == NFElement(k94, {2143295, 221064}));
  CHECK_THROWS_AS(quadratic_fundamental_unit(NumberField::create(QPoly::from_ints({1, 0, 1}))), Error);
}

TEST_CASE("LLL") {
  auto k = qsqrt14();
  // a skewed basis of Z[√14]
  std::vector<NFElement> b{NFElement(k, {1, 0}), NFElement(k, {37, 1})};
  auto red = lll_reduce(b);
  double longest = 0;
  for (const auto& x : red) {
    double n2 = 0;
    for (double v : x.abs_embeddings_double()) n2 += v * v;
    longest = std::max(longest, n2);
  }
  CHECK(longest <= 29.0);
  mpq_class det = red[0].coords()[0] * red[1].coords()[1] - red[0].coords()[1] * red[1].coords()[0];
  CHECK(abs(det) == 1);
}
