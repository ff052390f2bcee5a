#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <string>

namespace nfcf {

inline constexpr long kDefaultPrecision = 128;

/// Closed real interval [lo, hi] with MPFR endpoints rounded outward.
///
/// Every operation returns an enclosure of the exact result set, so a
/// comparison reported as "certain" holds for the true real numbers.
class Interval {
 public:
  explicit Interval(long prec = kDefaultPrecision);
  Interval(long value, long prec);
  Interval(const mpz_class& value, long prec);
  Interval(const mpq_class& value, long prec);
  Interval(const Interval& other);
  Interval(Interval&& other) noexcept;
  Interval& operator=(const Interval& other);
  Interval& operator=(Interval&& other) noexcept;
  ~Interval();

  static Interval from_double(double value, long prec = kDefaultPrecision);
  /// Hull of [lo, hi] given as exact rationals.
  static Interval from_bounds(const mpq_class& lo, const mpq_class& hi, long prec);
  static Interval pi(long prec);

  long precision() const { return static_cast<long>(mpfr_get_prec(lo_)); }
  mpfr_srcptr lo() const { return lo_; }
  mpfr_srcptr hi() const { return hi_; }

  double lo_double() const { return mpfr_get_d(lo_, MPFR_RNDD); }
  double hi_double() const { return mpfr_get_d(hi_, MPFR_RNDU); }
  double mid_double() const;
  /// hi - lo, rounded up.
  double width() const;

  /// Decimal rendering of an endpoint; lo rounds down, hi rounds up.
  std::string lo_string(int digits = 20) const;
  std::string hi_string(int digits = 20) const;

  bool contains_zero() const;
  bool contains(const mpq_class& q) const;
  bool subset_of(const Interval& outer) const;
  bool certainly_positive() const { return mpfr_sgn(lo_) > 0; }
  bool certainly_negative() const { return mpfr_sgn(hi_) < 0; }
  /// True iff every point of *this is < every point of other.
  bool certainly_lt(const Interval& other) const { return mpfr_less_p(hi_, other.lo_) != 0; }
  bool certainly_le(const Interval& other) const { return mpfr_lessequal_p(hi_, other.lo_) != 0; }
  bool certainly_gt(const Interval& other) const { return other.certainly_lt(*this); }

  Interval operator-() const;
  Interval& operator+=(const Interval& rhs);
  Interval& operator-=(const Interval& rhs);
  Interval& operator*=(const Interval& rhs);
  Interval& operator/=(const Interval& rhs);

  friend Interval operator+(Interval a, const Interval& b) { return a += b; }
  friend Interval operator-(Interval a, const Interval& b) { return a -= b; }
  friend Interval operator*(Interval a, const Interval& b) { return a *= b; }
  friend Interval operator/(Interval a, const Interval& b) { return a /= b; }

  Interval abs() const;
  Interval sqr() const;
  Interval sqrt() const;
  Interval exp() const;
  /// Natural log; throws if the interval is not strictly positive.
  Interval log() const;
  Interval pow(unsigned long n) const;
  /// Positive real n-th root of a nonnegative interval.
  Interval root(unsigned long n) const;

  static Interval max(const Interval& a, const Interval& b);
  static Interval min(const Interval& a, const Interval& b);
  static Interval hull(const Interval& a, const Interval& b);

  /// Smallest integer >= hi.
  mpz_class ceil_hi() const;

 private:
  mpfr_t lo_;
  mpfr_t hi_;
};

/// Rectangle in the complex plane; arithmetic is the naive rectangular
/// enclosure.
struct ComplexInterval {
  Interval re;
  Interval im;

  explicit ComplexInterval(long prec = kDefaultPrecision) : re(prec), im(prec) {}
  ComplexInterval(Interval r, Interval i) : re(std::move(r)), im(std::move(i)) {}

  long precision() const { return re.precision(); }
  bool is_real() const;

  ComplexInterval& operator+=(const ComplexInterval& rhs);
  ComplexInterval& operator-=(const ComplexInterval& rhs);
  ComplexInterval& operator*=(const ComplexInterval& rhs);
  friend ComplexInterval operator+(ComplexInterval a, const ComplexInterval& b) { return a += b; }
  friend ComplexInterval operator-(ComplexInterval a, const ComplexInterval& b) { return a -= b; }
  friend ComplexInterval operator*(ComplexInterval a, const ComplexInterval& b) { return a *= b; }

  ComplexInterval conj() const { return {re, -im}; }
  Interval abs() const;
  Interval abs_sqr() const;
};

}  // namespace nfcf
