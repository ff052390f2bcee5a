#include <numeric>
#include <random>

#include "doctest.h"
#include "nfcf/divchain.hpp"
#include "nfcf/error.hpp"

using namespace nfcf;

namespace {

FieldPtr rationals() { return NumberField::create(QPoly::from_ints({0, 1})); }
FieldPtr cubic() { return NumberField::create(QPoly::from_ints({1, 1, 0, 1})); }

NFElement rat(const FieldPtr& q, long n, long d = 1) {
  mpq_class x(n, d);
  x.canonicalize();
  return NFElement::rational(q, x);
}

DivisionChain reference_chain() {
  auto k = cubic();
  SIntegerRing ring(k, primes_above(k, 5));
  auto e = [&](QVec c) { return NFElement(k, std::move(c)); };
  return {ring,
          rat(k, 7),
          rat(k, 3),
          {{rat(k, -1), rat(k, 10)},
           {e({mpq_class(1, 5), mpq_class(-1, 5), 0}), e({1, 2, 0})},
           {e({-15, 6, -12}), rat(k, 1)},
           {e({1, 2, 0}), rat(k, 0)}}};
}

// Classical Euclid over ℤ with floor quotients.
std::vector<NFElement> euclid(const FieldPtr& q, long a, long b) {
  std::vector<NFElement> out;
  while (b != 0) {
    long qq = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --qq;
    out.push_back(rat(q, qq));
    const long r = a - qq * b;
    a = b;
    b = r;
  }
  return out;
}

}  // namespace

TEST_CASE("verify chain") {
  auto q = rationals();
  SIntegerRing z(q, {});
  DivisionChain simple{z, rat(q, 6), rat(q, 3), {{rat(q, 2), rat(q, 0)}}};
  CHECK(verify_chain(simple).valid);
  CHECK(simple.terminating());

  auto pc = reference_chain();
  auto rep = verify_chain(pc);
  CHECK(rep.valid);
  CHECK(pc.terminating());
  CHECK(evaluate_cf(chain_to_cf(pc)) == rat(pc.a.field(), 7, 3));
  CHECK(continuant_determinant_holds(continuants(chain_to_cf(pc))));

  // over O_K alone the quotient (1 − z)/5 is not integral
  DivisionChain no_s = pc;
  no_s.ring = SIntegerRing(pc.a.field(), {});
  auto r0 = verify_chain(no_s);
  CHECK_FALSE(r0.valid);
  CHECK(*r0.failing_step == 2);

  for (size_t i = 0; i < pc.steps.size(); ++i) {
    DivisionChain bad = pc;
    bad.steps[i].r += rat(pc.a.field(), 1);
    auto br = verify_chain(bad);
    CHECK_FALSE(br.valid);
    REQUIRE(br.failing_step);
    CHECK(*br.failing_step == i + 1);
  }
  DivisionChain badq = pc;
  badq.steps[2].q = badq.steps[2].q + NFElement::generator(pc.a.field());
  CHECK(*verify_chain(badq).failing_step == 3);
}

TEST_CASE("chain and continued fraction conversion") {
  auto pc = reference_chain();
  auto again = cf_to_chain(pc.ring, pc.a, pc.b, chain_to_cf(pc));
  REQUIRE(again.steps.size() == pc.steps.size());
  for (size_t i = 0; i < pc.steps.size(); ++i) {
    CHECK(again.steps[i].q == pc.steps[i].q);
    CHECK(again.steps[i].r == pc.steps[i].r);
  }
  auto q = rationals();
  SIntegerRing z(q, {});
  auto single = cf_to_chain(z, rat(q, 12), rat(q, 4), {rat(q, 3)});
  CHECK(single.terminating());
  CHECK(verify_chain(single).valid);

  std::mt19937_64 rng(4);
  std::uniform_int_distribution<long> u(-5000, 5000);
  int tested = 0;
  while (tested < 200) {
    long a = u(rng), b = u(rng);
    if (b == 0) continue;
    auto quot = euclid(q, a, b);
    if (quot.size() > 10) continue;
    ++tested;
    auto c = cf_to_chain(z, rat(q, a), rat(q, b), quot);
    CHECK(c.terminating());
    CHECK(verify_chain(c).valid);
    CHECK(chain_to_cf(c) == quot);
    CHECK(continuant_determinant_holds(continuants(quot)));
    // last nonzero remainder is ±gcd
    const NFElement last = c.steps.size() >= 2 ? c.steps[c.steps.size() - 2].r : c.b;
    CHECK(abs(last.rational_value()) == std::gcd(a, b));
  }
  CHECK_THROWS_AS(cf_to_chain(z, rat(q, 1), rat(q, 0), {rat(q, 1)}), Error);
}

TEST_CASE("class obstruction") {
  auto q = rationals();
  SIntegerRing z(q, {});
  ClassData trivial;
  CHECK(class_obstruction(rat(q, 4), rat(q, 6), z, &trivial));

  auto k = NumberField::create(QPoly::from_ints({5, 0, 1}));
  auto two = NFElement::rational(k, 2), w = NFElement(k, {1, 1});
  auto p2 = FractionalIdeal::from_generators(k, {two, w});
  ClassData data;
  data.class_number = 2;
  data.group = {2};
  data.reps = {{p2, {1}}};
  SIntegerRing ok(k, {});
  CHECK_FALSE(class_obstruction(two, w, ok, &data));
  CHECK(class_obstruction(NFElement::rational(k, 3), NFElement::one(k), ok, &data));
  CHECK(class_of(p2 * p2, data) == std::vector<long>{0});
  CHECK(class_of(primes_above(k, 3)[0].ideal, data) == std::vector<long>{1});
  SIntegerRing s2(k, primes_above(k, 2));
  CHECK(class_obstruction(two, w, s2, &data));
  try {
    class_obstruction(two, w, ok, nullptr);
    FAIL("expected MissingClassData");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::MissingClassData);
  }
}

TEST_CASE("CLW over Q") {
  auto q = rationals();
  auto units = UnitSystem::make(q, {});
  SIntegerRing ring(q, primes_above(q, 5));
  auto one = clw_expand(rat(q, 1), rat(q, 1), ring, units);
  CHECK(one.length() == 1);
  CHECK(verify_chain(one).valid);
  auto c = clw_expand(rat(q, 7), rat(q, 3), ring, units);
  CHECK(c.terminating());
  CHECK(c.length() <= 5);
  CHECK(verify_chain(c).valid);
  try {
    clw_expand(rat(q, 6), rat(q, 4), ring, units);
    FAIL("expected NotCoprime");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NotCoprime);
  }
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<long> u(-500, 500);
  int done = 0, exhausted = 0;
  while (done + exhausted < 30) {
    long a = u(rng), b = u(rng);
    if (b == 0 || std::gcd(a, b) != 1) continue;
    try {
      auto ch = clw_expand(rat(q, a), rat(q, b), ring, units);
      ++done;
      CHECK(ch.terminating());
      CHECK(ch.length() <= 5);
      CHECK(verify_chain(ch).valid);
      CHECK(continuant_determinant_holds(continuants(chain_to_cf(ch))));
    } catch (const Error& e) {
      CHECK(e.code() == Errc::SearchExhausted);
      ++exhausted;
    }
  }
  CHECK(exhausted <= 1);
}

TEST_CASE("CLW in the cubic field") {
  auto k = cubic();
  auto units = UnitSystem::make(k, {NFElement::generator(k)});
  SIntegerRing ring(k, primes_above(k, 5));
  auto c = clw_expand(rat(k, 7), rat(k, 3), ring, units, rat(k, 5));
  CHECK(c.terminating());
  CHECK(c.length() <= 5);
  CHECK(verify_chain(c).valid);
  CHECK(evaluate_cf(chain_to_cf(c)) == rat(k, 7, 3));
  auto z = NFElement::generator(k);
  auto c2 = clw_expand(z * z + rat(k, 3), z * rat(k, 2) - rat(k, 7), ring, units, rat(k, 5));
  CHECK(verify_chain(c2).valid);
  CHECK(c2.terminating());
}
