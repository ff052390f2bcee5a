#include <cmath>
#include <random>

#include "doctest.h"
#include "nfcf/cfengine.hpp"
#include "nfcf/error.hpp"

using namespace nfcf;

namespace {

FieldPtr rationals() { return NumberField::create(QPoly::from_ints({0, 1})); }

NFElement rat(const FieldPtr& q, long n, long d = 1) {
  mpq_class x(n, d);
  x.canonicalize();
  return NFElement::rational(q, x);
}

long vp(const mpq_class& x, long p) {
  long v = 0;
  mpz_class n = abs(x.get_num()), d = x.get_den();
  while (n != 0 && n % p == 0) { n /= p; ++v; }
  while (d % p == 0) { d /= p; --v; }
  return v;
}

// Brute force: the unique c/p^k with |c| < p^{k+1}/2 and v_p(x − c/p^k) ≥ 1.
mpq_class browkin_oracle(const mpq_class& x, long p) {
  if (x == 0) return 0;
  const long k = std::max(0L, -vp(x, p));
  long pk = 1;
  for (long i = 0; i < k; ++i) pk *= p;
  const long half = pk * p / 2;
  for (long c = -half; c <= half; ++c) {
    mpq_class s(c, pk);
    s.canonicalize();
    if (x == s || vp(x - s, p) >= 1) return s;
  }
  return 12345;
}

// Nonnegative digits; a classical floor with periodic expansions.
class NonnegativeDigits : public FloorFunction {
 public:
  NonnegativeDigits(FieldPtr q, long p) : q_(std::move(q)), p_(p) {}
  NFElement operator()(const NFElement& eta) const override {
    const mpq_class& x = eta.rational_value();
    if (x == 0) return eta;
    const long k = std::max(0L, -vp(x, p_));
    mpz_class pk, mod;
    mpz_ui_pow_ui(pk.get_mpz_t(), static_cast<unsigned long>(p_), static_cast<unsigned long>(k));
    mod = pk * p_;
    const mpq_class y = x * mpq_class(pk);
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), y.get_den_mpz_t(), mod.get_mpz_t());
    mpz_class r = (y.get_num() * inv) % mod;
    if (r < 0) r += mod;
    mpq_class s(r, pk);
    s.canonicalize();
    return NFElement::rational(q_, s);
  }
  std::string name() const override { return "nonneg"; }

 private:
  FieldPtr q_;
  long p_;
};

}  // namespace

TEST_CASE("Browkin floor") {
  auto q = rationals();
  BrowkinFloor s(q, 5);
  CHECK(s(rat(q, 7, 3)) == rat(q, -1));
  CHECK(s(rat(q, 3, 10)) == rat(q, -11, 5));
  CHECK(s(rat(q, 0)).is_zero());
  try {
    BrowkinFloor bad(q, 2);
    FAIL("expected EvenPrime");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::EvenPrime);
  }
  CHECK_THROWS_AS(browkin_type(9), Error);
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> num(-2000, 2000), den(1, 200);
  for (long p : {3L, 5L, 7L}) {
    BrowkinFloor sp(q, p);
    for (int t = 0; t < 100; ++t) {
      mpq_class x(num(rng), den(rng));
      x.canonicalize();
      if (vp(x, p) < -2) continue;
      CHECK(sp(NFElement::rational(q, x)).rational_value() == browkin_oracle(x, p));
    }
  }
}

TEST_CASE("evaluate and continuants") {
  auto q = rationals();
  CHECK(evaluate_cf({rat(q, 1), rat(q, 2), rat(q, 3)}) == rat(q, 10, 7));
  CHECK(evaluate_cf({rat(q, 4, 3)}) == rat(q, 4, 3));
  CHECK(evaluate_cf({rat(q, -1), rat(q, -11, 5), rat(q, 2, 5)}) == rat(q, 7, 3));
  try {
    evaluate_cf({rat(q, 1), rat(q, 0)});
    FAIL("expected ZeroDenominator");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ZeroDenominator);
  }
  auto c = continuants({rat(q, 1), rat(q, 2), rat(q, 3)});
  CHECK(c.A.back() == rat(q, 10));
  CHECK(c.B.back() == rat(q, 7));
  CHECK(continuant_determinant_holds(c));
}

TEST_CASE("expansion over Q") {
  auto type = browkin_type(5);
  auto q = type.field;
  auto e = expand(rat(q, 7, 3), type);
  REQUIRE(e.status == CFStatus::Finite);
  CHECK(e.length() == 3);
  CHECK(e.quotients == std::vector<NFElement>{rat(q, -1), rat(q, -11, 5), rat(q, 2, 5)});
  CHECK(evaluate_cf(e.quotients) == rat(q, 7, 3));
  CHECK(check_expansion_invariants(e, type).ok());
  auto hc = check_height_chain(e);
  CHECK(hc.ok());
  CHECK(hc.checked == 2);
  CHECK(e.height_constant.mid_double() == doctest::Approx(3 * std::sqrt(100.0 / 9 + 1)));

  auto two = expand(rat(q, 2), type);
  CHECK(two.status == CFStatus::Finite);
  CHECK(two.quotients == std::vector<NFElement>{rat(q, 2)});
  auto zero = expand(rat(q, 0), type);
  CHECK(zero.status == CFStatus::Finite);
  CHECK(zero.length() == 1);

  auto trunc = expand(rat(q, 1234567, 89), type, 2);
  CHECK(trunc.status == CFStatus::Truncated);
  CHECK(trunc.length() == 2);
}

TEST_CASE("nu") {
  auto q = rationals();
  auto p = primes_above(q, 5)[0];
  CHECK(nu_term(rat(q, 7, 5), p).mid_double() == doctest::Approx(0.38413).epsilon(1e-4));
  CHECK(nu_term(rat(q, -11, 5), p).mid_double() == doctest::Approx((2.2 + std::sqrt(8.84)) / 10));
  CHECK(nu_term(rat(q, 1, 25), p).mid_double() ==
        doctest::Approx((0.04 + std::sqrt(0.0016 + 4)) / 2 / 25));
  // a prime-to-5 denominator contributes its norm
  CHECK(nu_term(rat(q, 1, 15), p).mid_double() ==
        doctest::Approx(3.0 / 5 * (1.0 / 15 + std::sqrt(1.0 / 225 + 4)) / 2));
  try {
    nu_term(rat(q, 1, 3), p);
    FAIL("expected NotAdmissible");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NotAdmissible);
  }
}

TEST_CASE("representative floor over Q") {
  auto q = rationals();
  auto p = primes_above(q, 5)[0];
  RepresentativeParams params;
  params.gamma = rat(q, 5);
  params.M = 2;
  params.epsilon = Interval(mpq_class(1, 2), kDefaultPrecision);
  RepresentativeFloor s(p, params);
  CHECK(s(rat(q, 1, 3)) == rat(q, 2));
  CHECK(s(rat(q, 1, 2)) == rat(q, -2));
  CHECK(s(rat(q, 10, 7)).is_zero());
  auto c = s.choose(rat(q, 1, 3));
  CHECK(c.j == 1);
  CHECK(c.tau.is_zero());
  params.gamma = rat(q, 3);
  CHECK_THROWS_AS(RepresentativeFloor(p, params), Error);
}

TEST_CASE("axioms and negative control") {
  auto type = browkin_type(5);
  std::mt19937_64 rng(3);
  auto samples = sample_elements(type.field, 5, 100, rng, 10000, 3);
  auto rep = verify_floor_axioms(type, samples, rng);
  CHECK(rep.ok());
  CHECK(rep.samples == 100);

  TypeSpec bad = type;
  bad.floor = std::make_shared<ShiftedFloor>(type.floor, NFElement::one(type.field));
  auto brep = verify_floor_axioms(bad, samples, rng);
  CHECK(brep.failures[0] == 100);
  CHECK(brep.failures[2] == 1);
}

TEST_CASE("type criterion over Q") {
  std::mt19937_64 rng(21);
  for (long p : {3L, 5L, 7L}) {
    auto type = browkin_type(p);
    auto samples = sample_elements(type.field, p, 50, rng, 10000, 2);
    auto r = verify_type_criterion(type, samples, 1000);
    CHECK(r.ok());
    CHECK(r.finite == 50);
    REQUIRE(r.nu_sup);
    CHECK(r.nu_sup->certainly_lt(Interval(1L, kDefaultPrecision)));
  }
}

TEST_CASE("periodic detection") {
  auto q = rationals();
  TypeSpec type = browkin_type(q, 5);
  type.floor = std::make_shared<NonnegativeDigits>(q, 5);
  std::mt19937_64 rng(8);
  size_t periodic = 0;
  for (const auto& x : sample_elements(q, 5, 60, rng, 200, 2)) {
    auto e = expand(x, type, 500);
    if (e.status == CFStatus::Periodic) {
      ++periodic;
      CHECK(check_expansion_invariants(e, type).ok());
      // replay from the repeat point
      auto again = expand(e.complete[e.preperiod], type, e.period + 1);
      for (size_t i = 0; i < e.period; ++i) CHECK(again.quotients[i] == e.quotients[e.preperiod + i]);
    }
  }
  CHECK(periodic > 0);
  auto neg = expand(rat(q, -1), type, 100);
  CHECK(neg.status == CFStatus::Periodic);
}

TEST_CASE("representative floor over Q(sqrt 14)") {
  auto k = NumberField::create(QPoly::from_ints({-14, 0, 1}));
  auto us = UnitSystem::make(k, {NFElement(k, {15, 4})});
  auto constants = compute_constants(us);
  // first split prime above c(M,K) ≈ 48896
  long p = 48897;
  while (!(is_prime_u64(static_cast<std::uint64_t>(p)) && powmod(14 % p, (p - 1) / 2, p) == 1)) ++p;
  auto prime = primes_above(k, p)[0];
  auto type = representative_type(us, prime, constants);
  CHECK(type.warnings.empty());
  REQUIRE(type.nu_bound);
  CHECK(type.nu_bound->certainly_lt(Interval(1L, kDefaultPrecision)));
  std::mt19937_64 rng(5);
  auto samples = sample_elements(k, p, 30, rng, 1000, 2);
  CHECK(verify_floor_axioms(type, samples, rng).ok());
  auto r = verify_type_criterion(type, std::vector<NFElement>(samples.begin(), samples.begin() + 10));
  CHECK(r.ok());
  CHECK(r.finite == 10);
  for (const auto& d : r.details) MESSAGE(d);

  // a small prime draws a warning
  auto small = representative_type(us, primes_above(k, 5)[0], constants);
  CHECK(small.warnings.size() == 2);
}
