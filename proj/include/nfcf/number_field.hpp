#pragma once

#include <gmpxx.h>

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "nfcf/interval.hpp"
#include "nfcf/poly.hpp"
#include "nfcf/zmatrix.hpp"

namespace nfcf {

class NumberField;
using FieldPtr = std::shared_ptr<const NumberField>;

/// K = ℚ[x]/(f) for a monic irreducible integer polynomial f of degree 1..8.
///
/// Embedding order: real roots ascending, then for each conjugate pair the
/// root with positive imaginary part followed by its conjugate, pairs sorted
/// by (real part, imaginary part).
class NumberField {
 public:
  /// integral_basis rows are the basis elements in power-basis coordinates;
  /// the first row must be 1. Omitted means ℤ[α].
  static FieldPtr create(const QPoly& min_poly, std::optional<QMat> integral_basis = std::nullopt,
                         std::optional<mpz_class> field_disc = std::nullopt);

  int degree() const { return d_; }
  int r1() const { return r1_; }
  int r2() const { return r2_; }
  /// Number of archimedean places r1 + r2.
  int places() const { return r1_ + r2_; }
  int unit_rank() const { return r1_ + r2_ - 1; }
  const QPoly& min_poly() const { return f_; }
  const mpz_class& disc() const { return disc_; }
  mpz_class abs_disc() const { return abs(disc_); }
  const mpq_class& poly_disc() const { return poly_disc_; }
  bool power_basis() const { return power_basis_; }
  const QMat& integral_basis() const { return basis_; }
  const QMat& integral_basis_inv() const { return basis_inv_; }

  /// Reduction of x^k for d ≤ k ≤ 2d−2 in power-basis coordinates.
  const std::vector<QVec>& reduction_table() const { return reduce_; }
  /// Trace of α^k for 0 ≤ k < d.
  const std::vector<mpq_class>& power_traces() const { return power_traces_; }

  /// Certified enclosures of the d roots in embedding order, each with
  /// radius below 2^-prec (relative to max(1, |root|)).
  std::vector<ComplexInterval> roots(long prec) const;

  /// Real embeddings contribute weight 1, complex embeddings appear twice
  /// in the list of d embeddings; this is the index of the place of
  /// embedding i.
  int place_of_embedding(int i) const;
  bool embedding_is_real(int i) const { return i < r1_; }

 private:
  NumberField() = default;

  struct Approx {
    mpq_class re, im, radius;
    bool real = false;
  };
  std::vector<Approx> isolate(long work_bits) const;

  QPoly f_;
  int d_ = 0;
  int r1_ = 0;
  int r2_ = 0;
  mpz_class disc_;
  mpq_class poly_disc_;
  bool power_basis_ = true;
  QMat basis_;
  QMat basis_inv_;
  std::vector<QVec> reduce_;
  std::vector<mpq_class> power_traces_;

  mutable std::mutex cache_mu_;
  mutable std::map<long, std::vector<ComplexInterval>> root_cache_;
};

/// Element of K in power-basis coordinates.
class NFElement {
 public:
  NFElement() = default;
  NFElement(FieldPtr field, QVec coords);
  static NFElement zero(const FieldPtr& field);
  static NFElement one(const FieldPtr& field);
  static NFElement rational(const FieldPtr& field, const mpq_class& value);
  /// The class of x, i.e. α.
  static NFElement generator(const FieldPtr& field);
  static NFElement from_ib(const FieldPtr& field, const QVec& ib_coords);

  const FieldPtr& field() const { return field_; }
  const QVec& coords() const { return c_; }
  int degree() const { return static_cast<int>(c_.size()); }

  bool is_zero() const;
  bool is_one() const;
  bool is_rational() const;
  /// Constant coordinate; meaningful when is_rational().
  const mpq_class& rational_value() const { return c_[0]; }

  NFElement operator-() const;
  NFElement& operator+=(const NFElement& rhs);
  NFElement& operator-=(const NFElement& rhs);
  NFElement& operator*=(const NFElement& rhs);
  NFElement& operator*=(const mpq_class& s);
  friend NFElement operator+(NFElement a, const NFElement& b) { return a += b; }
  friend NFElement operator-(NFElement a, const NFElement& b) { return a -= b; }
  friend NFElement operator*(NFElement a, const NFElement& b) { return a *= b; }
  friend NFElement operator*(NFElement a, const mpq_class& s) { return a *= s; }
  friend NFElement operator/(const NFElement& a, const NFElement& b) { return a * b.inverse(); }
  friend bool operator==(const NFElement& a, const NFElement& b) { return a.c_ == b.c_; }
  friend bool operator!=(const NFElement& a, const NFElement& b) { return !(a == b); }

  /// Throws DivideByZero for 0.
  NFElement inverse() const;
  /// Integer power; negative exponents invert.
  NFElement pow(long e) const;

  mpq_class norm() const;
  mpq_class trace() const;

  /// Coordinates in the integral basis.
  QVec ib_coords() const;
  bool is_integral() const;
  /// Smallest positive integer m with m·x integral.
  mpz_class denominator() const;

  /// Certified enclosure of σ_i(x).
  ComplexInterval embed(int i, long prec = kDefaultPrecision) const;
  std::vector<ComplexInterval> embeddings(long prec = kDefaultPrecision) const;
  /// Rough double value of |σ_i(x)|, for search heuristics only.
  std::vector<double> abs_embeddings_double() const;

  QPoly as_poly() const;
  /// Human-readable text in the variable `var`.
  std::string to_string(const std::string& var = "x") const;
  /// Canonical serialization of the coordinates (hashable / comparable).
  std::string key() const;

 private:
  FieldPtr field_;
  QVec c_;
};

/// Rows are x·ω_j in integral-basis coordinates (ω = integral basis).
QMat multiplication_matrix(const NFElement& x);

/// N(𝔡(x)) where 𝔡(x) = {b ∈ O_K : b·x ∈ O_K} is the denominator ideal.
mpz_class denominator_ideal_norm(const NFElement& x);

/// H(x)^d = N(𝔡(x)) · ∏_σ max(1, |σ(x)|), split into its exact finite
/// part and a certified archimedean part.
struct HeightPower {
  mpz_class finite;
  Interval archimedean;
  Interval value() const { return Interval(finite, archimedean.precision()) * archimedean; }
};
HeightPower weil_height_pow(const NFElement& x, long prec = kDefaultPrecision);
/// H(x) itself (d-th root of the above).
Interval weil_height(const NFElement& x, long prec = kDefaultPrecision);

/// Parse a coordinate list like "[1, -2/3, 0]" or a bare rational "7/3".
NFElement parse_element(const FieldPtr& field, const std::string& text);

}  // namespace nfcf
