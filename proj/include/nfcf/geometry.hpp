#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "nfcf/interval.hpp"
#include "nfcf/number_field.hpp"

namespace nfcf {

/// Fundamental units (r = r1 + r2 − 1 of them) plus the torsion subgroup.
struct UnitSystem {
  FieldPtr field;
  std::vector<NFElement> units;
  int torsion_order = 2;
  /// Generator of the roots of unity (−1 unless supplied).
  NFElement torsion_generator;

  /// Validates |N(u)| = 1, the rank, log-independence, and the torsion
  /// generator's order. Throws InvalidInput / DependentBasis.
  static UnitSystem make(const FieldPtr& field, std::vector<NFElement> units, int torsion_order = 2,
                         std::optional<NFElement> torsion_generator = std::nullopt);
  int rank() const { return static_cast<int>(units.size()); }
};

/// ℓ(u) = (log|σ_1(u)|, …, log|σ_r1(u)|, 2 log|τ_1(u)|, …); one coordinate per
/// place. Throws ZeroElement for 0.
std::vector<Interval> log_embedding(const NFElement& u, long prec = kDefaultPrecision);

/// ½ Σ_i ‖e_i‖∞ (an upper bound for the sup-norm covering radius). Throws
/// DependentBasis unless some maximal minor is certainly nonzero.
Interval covering_radius_upper(const std::vector<std::vector<Interval>>& basis);

struct LogLattice {
  std::vector<std::vector<Interval>> basis;
  Interval rho_upper;
  Interval t0;
};
LogLattice log_lattice(const UnitSystem& units, long prec = kDefaultPrecision);

/// exp(covering_radius_upper) for the unit lattice.
Interval t0(const UnitSystem& units, long prec = kDefaultPrecision);

struct UnitReduction {
  NFElement value;
  /// value = a · ∏ units[i]^exponents[i].
  std::vector<long> exponents;
};

/// Multiplies a by a unit so that max_σ |σ(ua)| ≤ T0 · |N(a)|^{1/d}, certified.
/// Throws ZeroElement or CertificationFailed.
UnitReduction unit_reduce_with_exponents(const NFElement& a, const UnitSystem& units,
                                         long prec = kDefaultPrecision);
NFElement unit_reduce(const NFElement& a, const UnitSystem& units, long prec = kDefaultPrecision);

/// Fundamental unit of ℤ[α] for a real quadratic field with power basis,
/// from the continued fraction of (σ + √D)/2.
NFElement quadratic_fundamental_unit(const FieldPtr& field);

/// Floating-point embeddings (search heuristics only; never used to decide).
std::vector<std::complex<long double>> approx_embeddings(const NFElement& x);

/// Real vector (σ_1, …, σ_r1, √2 Re τ_1, √2 Im τ_1, …) whose squared length is
/// Σ_σ |σ(x)|².
std::vector<long double> euclidean_embedding(const NFElement& x);

/// LLL with δ = 0.99 on the rows of b; returns U (unimodular) with U·b reduced.
ZMat lll_transform(std::vector<std::vector<long double>> b);

/// LLL-reduced ℤ-basis of the lattice spanned by the given elements under the
/// Euclidean embedding.
std::vector<NFElement> lll_reduce(const std::vector<NFElement>& basis);

}  // namespace nfcf
