#include "nfcf/interval.hpp"

#include <algorithm>
#include <cstdio>
#include <vector>

#include "nfcf/error.hpp"

namespace nfcf {

namespace {

long prec_of(const Interval& a, const Interval& b) { return std::max(a.precision(), b.precision()); }

std::string endpoint_string(mpfr_srcptr x, int digits, mpfr_rnd_t rnd) {
  char* buf = nullptr;
  const char* fmt = rnd == MPFR_RNDD ? "%.*RDg" : "%.*RUg";
  if (mpfr_asprintf(&buf, fmt, digits, x) < 0) return "nan";
  std::string out(buf);
  mpfr_free_str(buf);
  return out;
}

}  // namespace

Interval::Interval(long prec) {
  mpfr_init2(lo_, prec);
  mpfr_init2(hi_, prec);
  mpfr_set_zero(lo_, 1);
  mpfr_set_zero(hi_, 1);
}

Interval::Interval(long value, long prec) {
  mpfr_init2(lo_, prec);
  mpfr_init2(hi_, prec);
  mpfr_set_si(lo_, value, MPFR_RNDD);
  mpfr_set_si(hi_, value, MPFR_RNDU);
}

Interval::Interval(const mpz_class& value, long prec) {
  mpfr_init2(lo_, prec);
  mpfr_init2(hi_, prec);
  mpfr_set_z(lo_, value.get_mpz_t(), MPFR_RNDD);
  mpfr_set_z(hi_, value.get_mpz_t(), MPFR_RNDU);
}

Interval::Interval(const mpq_class& value, long prec) {
  mpfr_init2(lo_, prec);
  mpfr_init2(hi_, prec);
  mpfr_set_q(lo_, value.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(hi_, value.get_mpq_t(), MPFR_RNDU);
}

Interval::Interval(const Interval& other) {
  mpfr_init2(lo_, mpfr_get_prec(other.lo_));
  mpfr_init2(hi_, mpfr_get_prec(other.hi_));
  mpfr_set(lo_, other.lo_, MPFR_RNDD);
  mpfr_set(hi_, other.hi_, MPFR_RNDU);
}

Interval::Interval(Interval&& other) noexcept {
  mpfr_init2(lo_, mpfr_get_prec(other.lo_));
  mpfr_init2(hi_, mpfr_get_prec(other.hi_));
  mpfr_swap(lo_, other.lo_);
  mpfr_swap(hi_, other.hi_);
}

Interval& Interval::operator=(const Interval& other) {
  if (this != &other) {
    mpfr_set_prec(lo_, mpfr_get_prec(other.lo_));
    mpfr_set_prec(hi_, mpfr_get_prec(other.hi_));
    mpfr_set(lo_, other.lo_, MPFR_RNDD);
    mpfr_set(hi_, other.hi_, MPFR_RNDU);
  }
  return *this;
}

Interval& Interval::operator=(Interval&& other) noexcept {
  mpfr_swap(lo_, other.lo_);
  mpfr_swap(hi_, other.hi_);
  return *this;
}

Interval::~Interval() {
  mpfr_clear(lo_);
  mpfr_clear(hi_);
}

Interval Interval::from_double(double value, long prec) {
  Interval r(std::max(prec, 53L));
  mpfr_set_d(r.lo_, value, MPFR_RNDD);
  mpfr_set_d(r.hi_, value, MPFR_RNDU);
  return r;
}

Interval Interval::from_bounds(const mpq_class& lo, const mpq_class& hi, long prec) {
  Interval r(prec);
  mpfr_set_q(r.lo_, lo.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(r.hi_, hi.get_mpq_t(), MPFR_RNDU);
  return r;
}

Interval Interval::pi(long prec) {
  Interval r(prec);
  mpfr_const_pi(r.lo_, MPFR_RNDD);
  mpfr_const_pi(r.hi_, MPFR_RNDU);
  return r;
}

double Interval::mid_double() const {
  return 0.5 * (mpfr_get_d(lo_, MPFR_RNDN) + mpfr_get_d(hi_, MPFR_RNDN));
}

double Interval::width() const {
  mpfr_t w;
  mpfr_init2(w, precision());
  mpfr_sub(w, hi_, lo_, MPFR_RNDU);
  const double out = mpfr_get_d(w, MPFR_RNDU);
  mpfr_clear(w);
  return out;
}

std::string Interval::lo_string(int digits) const { return endpoint_string(lo_, digits, MPFR_RNDD); }
std::string Interval::hi_string(int digits) const { return endpoint_string(hi_, digits, MPFR_RNDU); }

bool Interval::contains_zero() const { return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0; }

bool Interval::contains(const mpq_class& q) const {
  return mpfr_cmp_q(lo_, q.get_mpq_t()) <= 0 && mpfr_cmp_q(hi_, q.get_mpq_t()) >= 0;
}

bool Interval::subset_of(const Interval& outer) const {
  return mpfr_greaterequal_p(lo_, outer.lo_) && mpfr_lessequal_p(hi_, outer.hi_);
}

Interval Interval::operator-() const {
  Interval r(precision());
  mpfr_neg(r.lo_, hi_, MPFR_RNDD);
  mpfr_neg(r.hi_, lo_, MPFR_RNDU);
  return r;
}

Interval& Interval::operator+=(const Interval& rhs) {
  const long p = prec_of(*this, rhs);
  if (p > precision()) {
    mpfr_prec_round(lo_, p, MPFR_RNDD);
    mpfr_prec_round(hi_, p, MPFR_RNDU);
  }
  mpfr_add(lo_, lo_, rhs.lo_, MPFR_RNDD);
  mpfr_add(hi_, hi_, rhs.hi_, MPFR_RNDU);
  return *this;
}

Interval& Interval::operator-=(const Interval& rhs) {
  const long p = prec_of(*this, rhs);
  if (p > precision()) {
    mpfr_prec_round(lo_, p, MPFR_RNDD);
    mpfr_prec_round(hi_, p, MPFR_RNDU);
  }
  mpfr_sub(lo_, lo_, rhs.hi_, MPFR_RNDD);
  mpfr_sub(hi_, hi_, rhs.lo_, MPFR_RNDU);
  return *this;
}

Interval& Interval::operator*=(const Interval& rhs) {
  const long p = prec_of(*this, rhs);
  mpfr_t t;
  mpfr_init2(t, p);
  Interval r(p);
  mpfr_set_inf(r.lo_, 1);
  mpfr_set_inf(r.hi_, -1);
  mpfr_srcptr as[2] = {lo_, hi_};
  mpfr_srcptr bs[2] = {rhs.lo_, rhs.hi_};
  for (auto a : as) {
    for (auto b : bs) {
      mpfr_mul(t, a, b, MPFR_RNDD);
      if (mpfr_less_p(t, r.lo_)) mpfr_set(r.lo_, t, MPFR_RNDD);
      mpfr_mul(t, a, b, MPFR_RNDU);
      if (mpfr_greater_p(t, r.hi_)) mpfr_set(r.hi_, t, MPFR_RNDU);
    }
  }
  mpfr_clear(t);
  *this = std::move(r);
  return *this;
}

Interval& Interval::operator/=(const Interval& rhs) {
  if (rhs.contains_zero()) throw Error(Errc::DivideByZero, "interval divisor contains zero");
  const long p = prec_of(*this, rhs);
  mpfr_t t;
  mpfr_init2(t, p);
  Interval r(p);
  mpfr_set_inf(r.lo_, 1);
  mpfr_set_inf(r.hi_, -1);
  mpfr_srcptr as[2] = {lo_, hi_};
  mpfr_srcptr bs[2] = {rhs.lo_, rhs.hi_};
  for (auto a : as) {
    for (auto b : bs) {
      mpfr_div(t, a, b, MPFR_RNDD);
      if (mpfr_less_p(t, r.lo_)) mpfr_set(r.lo_, t, MPFR_RNDD);
      mpfr_div(t, a, b, MPFR_RNDU);
      if (mpfr_greater_p(t, r.hi_)) mpfr_set(r.hi_, t, MPFR_RNDU);
    }
  }
  mpfr_clear(t);
  *this = std::move(r);
  return *this;
}

Interval Interval::abs() const {
  if (mpfr_sgn(lo_) >= 0) return *this;
  if (mpfr_sgn(hi_) <= 0) return -*this;
  Interval r(precision());
  mpfr_set_zero(r.lo_, 1);
  mpfr_neg(r.hi_, lo_, MPFR_RNDU);
  if (mpfr_greater_p(hi_, r.hi_)) mpfr_set(r.hi_, hi_, MPFR_RNDU);
  return r;
}

Interval Interval::sqr() const {
  const Interval a = abs();
  Interval r(precision());
  mpfr_sqr(r.lo_, a.lo_, MPFR_RNDD);
  mpfr_sqr(r.hi_, a.hi_, MPFR_RNDU);
  return r;
}

Interval Interval::sqrt() const {
  if (mpfr_sgn(hi_) < 0) throw Error(Errc::InvalidInput, "sqrt of a negative interval");
  Interval r(precision());
  if (mpfr_sgn(lo_) <= 0) {
    mpfr_set_zero(r.lo_, 1);
  } else {
    mpfr_sqrt(r.lo_, lo_, MPFR_RNDD);
  }
  mpfr_sqrt(r.hi_, hi_, MPFR_RNDU);
  return r;
}

Interval Interval::exp() const {
  Interval r(precision());
  mpfr_exp(r.lo_, lo_, MPFR_RNDD);
  mpfr_exp(r.hi_, hi_, MPFR_RNDU);
  return r;
}

Interval Interval::log() const {
  if (mpfr_sgn(lo_) <= 0) throw Error(Errc::InvalidInput, "log of an interval not bounded away from 0");
  Interval r(precision());
  mpfr_log(r.lo_, lo_, MPFR_RNDD);
  mpfr_log(r.hi_, hi_, MPFR_RNDU);
  return r;
}

Interval Interval::pow(unsigned long n) const {
  if (n == 0) return Interval(1L, precision());
  Interval r(precision());
  if (n % 2 == 0) {
    const Interval a = abs();
    mpfr_pow_ui(r.lo_, a.lo_, n, MPFR_RNDD);
    mpfr_pow_ui(r.hi_, a.hi_, n, MPFR_RNDU);
  } else {
    mpfr_pow_ui(r.lo_, lo_, n, MPFR_RNDD);
    mpfr_pow_ui(r.hi_, hi_, n, MPFR_RNDU);
  }
  return r;
}

Interval Interval::root(unsigned long n) const {
  if (n == 1) return *this;
  if (mpfr_sgn(hi_) < 0) throw Error(Errc::InvalidInput, "root of a negative interval");
  Interval r(precision());
  if (mpfr_sgn(lo_) <= 0) {
    mpfr_set_zero(r.lo_, 1);
  } else {
    mpfr_rootn_ui(r.lo_, lo_, n, MPFR_RNDD);
  }
  mpfr_rootn_ui(r.hi_, hi_, n, MPFR_RNDU);
  return r;
}

Interval Interval::max(const Interval& a, const Interval& b) {
  Interval r(prec_of(a, b));
  mpfr_max(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_max(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
  return r;
}

Interval Interval::min(const Interval& a, const Interval& b) {
  Interval r(prec_of(a, b));
  mpfr_min(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_min(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
  return r;
}

Interval Interval::hull(const Interval& a, const Interval& b) {
  Interval r(prec_of(a, b));
  mpfr_min(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_max(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
  return r;
}

mpz_class Interval::ceil_hi() const {
  mpz_class out;
  mpfr_get_z(out.get_mpz_t(), hi_, MPFR_RNDU);
  return out;
}

bool ComplexInterval::is_real() const {
  return mpfr_zero_p(im.lo()) && mpfr_zero_p(im.hi());
}

ComplexInterval& ComplexInterval::operator+=(const ComplexInterval& rhs) {
  re += rhs.re;
  im += rhs.im;
  return *this;
}

ComplexInterval& ComplexInterval::operator-=(const ComplexInterval& rhs) {
  re -= rhs.re;
  im -= rhs.im;
  return *this;
}

ComplexInterval& ComplexInterval::operator*=(const ComplexInterval& rhs) {
  if (is_real() && rhs.is_real()) {
    re *= rhs.re;
    return *this;
  }
  Interval r = re * rhs.re - im * rhs.im;
  Interval i = re * rhs.im + im * rhs.re;
  re = std::move(r);
  im = std::move(i);
  return *this;
}

Interval ComplexInterval::abs_sqr() const {
  if (is_real()) return re.sqr();
  return re.sqr() + im.sqr();
}

Interval ComplexInterval::abs() const {
  if (is_real()) return re.abs();
  return abs_sqr().sqrt();
}

}  // namespace nfcf
