#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nfcf/geometry.hpp"
#include "nfcf/number_field.hpp"
#include "nfcf/zmatrix.hpp"

namespace nfcf {

/// Nonzero fractional ideal (1/denom)·L, where L ⊆ O_K is the row lattice of
/// `hnf` in integral-basis coordinates. Normalized so that the content of
/// hnf is coprime to denom; two ideals are equal iff their data are equal.
class FractionalIdeal {
 public:
  FractionalIdeal() = default;
  static FractionalIdeal unit(const FieldPtr& field);
  static FractionalIdeal principal(const NFElement& x);
  static FractionalIdeal from_generators(const FieldPtr& field, const std::vector<NFElement>& gens);
  /// rows: any integer generating set of a full-rank sublattice of O_K.
  static FractionalIdeal from_lattice(const FieldPtr& field, const ZMat& rows, const mpz_class& denom);

  const FieldPtr& field() const { return field_; }
  const ZMat& hnf() const { return h_; }
  const mpz_class& denom() const { return den_; }

  mpq_class norm() const;
  bool is_integral() const { return den_ == 1; }
  bool is_unit() const;
  bool contains(const NFElement& x) const;
  /// ℤ-basis (the HNF rows divided by denom).
  std::vector<NFElement> basis() const;
  /// Smallest positive integer in an integral ideal.
  mpz_class min_integer() const;

  FractionalIdeal operator*(const FractionalIdeal& other) const;
  FractionalIdeal operator+(const FractionalIdeal& other) const;
  FractionalIdeal intersect(const FractionalIdeal& other) const;
  FractionalIdeal inverse() const;
  FractionalIdeal pow(long e) const;
  friend bool operator==(const FractionalIdeal& a, const FractionalIdeal& b) {
    return a.h_ == b.h_ && a.den_ == b.den_;
  }
  friend bool operator!=(const FractionalIdeal& a, const FractionalIdeal& b) { return !(a == b); }

  std::string to_string() const;

 private:
  FieldPtr field_;
  ZMat h_;
  mpz_class den_ = 1;
};

/// 𝔡(x) = O_K ∩ x^{-1}O_K, the denominator ideal (x ≠ 0); O_K for x = 0.
FractionalIdeal denominator_ideal(const NFElement& x);

/// Prime 𝔓 = (p, gen2) above a rational prime p.
struct PrimeIdeal {
  FieldPtr field;
  mpz_class p;
  NFElement gen2;
  int e = 1;
  int f = 1;
  mpz_class norm;
  FractionalIdeal ideal;
  /// β ∈ O_K with β𝔓 ⊆ pO_K and β ∉ pO_K; drives valuations.
  NFElement anti_uniformizer;
  /// Position among primes_above(p) (sorted by residue factor).
  int index = 0;

  std::string to_string() const;
  friend bool operator==(const PrimeIdeal& a, const PrimeIdeal& b) {
    return a.p == b.p && a.ideal == b.ideal;
  }
};

/// Dedekind–Kummer factorization of pO_K. Throws IndexDivisor when p
/// divides [O_K : ℤ[α]], InvalidInput when p is not a prime below 2^62.
std::vector<PrimeIdeal> primes_above(const FieldPtr& field, const mpz_class& p);

/// v_𝔓(x); throws ZeroValuation for x = 0.
long valuation(const NFElement& x, const PrimeIdeal& prime);
/// v_𝔓(I) for a nonzero fractional ideal.
long valuation(const FractionalIdeal& ideal, const PrimeIdeal& prime);

/// Representative of x mod I with integral-basis coordinates reduced, from
/// the last coordinate to the first, into [−h_ii/2, h_ii/2) using the HNF
/// rows of the integral ideal I. Throws NotIntegralAtI when x has a
/// denominator at some prime dividing I.
NFElement canonical_residue(const NFElement& x, const FractionalIdeal& ideal);

/// α′ with v_𝔓(η − α′) ≥ 1 and v_𝔔(α′) ≥ 0 for every 𝔔 ≠ 𝔓, depending only
/// on η mod 𝔓O_𝔓. With a generator γ of 𝔓 the lift has the form
/// γ^{−k}·(integral); without one, β/p (valuation −1 at 𝔓, integral
/// elsewhere) replaces 1/γ.
NFElement canonical_lift(const NFElement& eta, const PrimeIdeal& prime,
                         const std::optional<NFElement>& gamma = std::nullopt);

/// Generator γ of a principal integral ideal found by bounded search over an
/// LLL-reduced basis (shells of increasing sup-norm, lexicographic inside a
/// shell), then unit-reduced. Throws SearchExhausted.
NFElement principal_generator(const FractionalIdeal& ideal, const UnitSystem* units, long search_bound);
NFElement principal_generator(const PrimeIdeal& prime, const UnitSystem& units, long search_bound = 12);

/// Generator when one is found within the bound, nullopt otherwise.
std::optional<NFElement> find_generator(const FractionalIdeal& ideal, long search_bound);

/// O_S for a finite set S of primes.
class SIntegerRing {
 public:
  SIntegerRing(FieldPtr field, std::vector<PrimeIdeal> primes);
  const FieldPtr& field() const { return field_; }
  const std::vector<PrimeIdeal>& primes() const { return s_; }

  bool contains(const NFElement& x) const;
  /// |N(x)| with the S-part removed: the norm of xO_S.
  mpq_class s_norm(const NFElement& x) const;
  bool is_unit(const NFElement& x) const;
  /// x ∈ O_S and xO_S is a prime ideal outside S; returns that prime.
  std::optional<PrimeIdeal> prime_of(const NFElement& x) const;
  /// Norm of (a, b)O_S.
  mpq_class s_norm(const FractionalIdeal& ideal) const;
  bool in_s(const PrimeIdeal& prime) const;

 private:
  FieldPtr field_;
  std::vector<PrimeIdeal> s_;
};

}  // namespace nfcf
