#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace nfcf {

/// Dense univariate polynomial over ℚ, coefficients constant term first.
/// The zero polynomial has no coefficients and degree -1.
class QPoly {
 public:
  QPoly() = default;
  explicit QPoly(std::vector<mpq_class> coeffs);
  static QPoly from_ints(const std::vector<long>& coeffs);
  static QPoly from_mpz(const std::vector<mpz_class>& coeffs);
  static QPoly monomial(const mpq_class& c, int degree);
  static QPoly constant(const mpq_class& c) { return monomial(c, 0); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<mpq_class>& coeffs() const { return c_; }
  /// Coefficient of x^i (zero past the degree).
  mpq_class coeff(int i) const;
  const mpq_class& lead() const { return c_.back(); }

  QPoly operator-() const;
  QPoly& operator+=(const QPoly& rhs);
  QPoly& operator-=(const QPoly& rhs);
  QPoly& operator*=(const mpq_class& s);
  friend QPoly operator+(QPoly a, const QPoly& b) { return a += b; }
  friend QPoly operator-(QPoly a, const QPoly& b) { return a -= b; }
  friend QPoly operator*(const QPoly& a, const QPoly& b);
  friend QPoly operator*(QPoly a, const mpq_class& s) { return a *= s; }
  friend bool operator==(const QPoly& a, const QPoly& b) { return a.c_ == b.c_; }
  friend bool operator!=(const QPoly& a, const QPoly& b) { return !(a == b); }

  /// Euclidean division; throws DivideByZero on a zero divisor.
  std::pair<QPoly, QPoly> divmod(const QPoly& divisor) const;
  QPoly operator%(const QPoly& divisor) const { return divmod(divisor).second; }

  QPoly derivative() const;
  QPoly monic() const;
  mpq_class eval(const mpq_class& x) const;

  /// True when every coefficient is an integer.
  bool is_integral() const;
  /// Integer coefficients when is_integral().
  std::vector<mpz_class> to_mpz() const;

  std::string to_string(const std::string& var = "x") const;

 private:
  void trim();
  std::vector<mpq_class> c_;
};

/// Monic gcd (zero if both inputs are zero).
QPoly gcd(const QPoly& a, const QPoly& b);

/// Extended gcd: returns (g, s, t) with s·a + t·b = g, g monic.
struct QXgcd {
  QPoly g, s, t;
};
QXgcd xgcd(const QPoly& a, const QPoly& b);

/// Resultant Res(a, b) = lc(a)^deg(b) ∏_{a(r)=0} b(r).
mpq_class resultant(const QPoly& a, const QPoly& b);

/// disc(f) = (-1)^{n(n-1)/2} Res(f, f') / lc(f).
mpq_class discriminant(const QPoly& f);

/// Sturm-sequence count of distinct real roots of a nonzero polynomial.
int count_real_roots(const QPoly& f);

/// Polynomial over ℤ/pℤ for a prime p < 2^62; coefficients in [0, p).
class FpPoly {
 public:
  FpPoly() = default;
  FpPoly(std::uint64_t p, std::vector<std::uint64_t> coeffs);
  static FpPoly from_qpoly(std::uint64_t p, const QPoly& f);
  static FpPoly monomial(std::uint64_t p, std::uint64_t c, int degree);

  std::uint64_t prime() const { return p_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<std::uint64_t>& coeffs() const { return c_; }
  std::uint64_t coeff(int i) const { return i < static_cast<int>(c_.size()) ? c_[i] : 0; }
  std::uint64_t lead() const { return c_.back(); }

  FpPoly& operator+=(const FpPoly& rhs);
  FpPoly& operator-=(const FpPoly& rhs);
  friend FpPoly operator+(FpPoly a, const FpPoly& b) { return a += b; }
  friend FpPoly operator-(FpPoly a, const FpPoly& b) { return a -= b; }
  friend FpPoly operator*(const FpPoly& a, const FpPoly& b);
  friend bool operator==(const FpPoly& a, const FpPoly& b) { return a.p_ == b.p_ && a.c_ == b.c_; }
  friend bool operator<(const FpPoly& a, const FpPoly& b);

  std::pair<FpPoly, FpPoly> divmod(const FpPoly& divisor) const;
  FpPoly operator%(const FpPoly& divisor) const { return divmod(divisor).second; }
  FpPoly monic() const;
  FpPoly derivative() const;
  FpPoly scaled(std::uint64_t s) const;

  /// Balanced lift to ℚ[x]: coefficients in (-p/2, p/2].
  QPoly lift_balanced() const;

 private:
  void trim();
  std::uint64_t p_ = 2;
  std::vector<std::uint64_t> c_;
};

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p);
std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p);
std::uint64_t invmod(std::uint64_t a, std::uint64_t p);
/// Deterministic Miller–Rabin for 64-bit inputs.
bool is_prime_u64(std::uint64_t n);

FpPoly gcd(const FpPoly& a, const FpPoly& b);
/// base^e mod modulus, e arbitrary precision.
FpPoly powmod(const FpPoly& base, const mpz_class& e, const FpPoly& modulus);

/// Factorization of a nonzero polynomial into monic irreducibles with
/// multiplicities, sorted by (degree, coefficients). The leading
/// coefficient is dropped.
std::vector<std::pair<FpPoly, int>> factor(const FpPoly& f);

/// Irreducibility over ℚ of a monic integer polynomial of degree ≤ 8.
bool is_irreducible_over_q(const QPoly& f);

}  // namespace nfcf
