#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nfcf/geometry.hpp"
#include "nfcf/ideals.hpp"
#include "nfcf/interval.hpp"

namespace nfcf {

/// θ(x) = (|x| + √(|x|² + 4))/2 for a real magnitude |x|.
Interval theta(const Interval& magnitude);
Interval theta(const ComplexInterval& z);

/// T0 from the log embedding with log|τ| (not 2 log|τ|) at complex places.
/// Also a valid covering bound; it is never larger than t0().
Interval t0_complex_weight_one(const UnitSystem& units, long prec = kDefaultPrecision);

/// d!/d^d · (4/π)^{r2} · √|Δ|.
Interval minkowski_bound(const NumberField& field, long prec = kDefaultPrecision);

/// max((2/π)^{r2} √|Δ| N(𝔄), 1) for an integral ideal 𝔄.
Interval c_ideal(const FractionalIdeal& ideal, long prec = kDefaultPrecision);

/// max(|Δ| (8/π²)^{r2} d!/d^d, 1); exact when r2 = 0.
Interval c_field(const NumberField& field, long prec = kDefaultPrecision);
std::optional<mpq_class> c_field_exact(const NumberField& field);

/// Smallest integer M ≥ c(K).
mpz_class choose_M(const NumberField& field);

/// ε = (√|Δ| N(𝔄) (2/π)^{r2} / M)^{1/d}. Throws EpsilonNotLessThanOne unless
/// ε < 1 is certain.
Interval epsilon_for(const FractionalIdeal& ideal, const mpz_class& M, long prec = kDefaultPrecision);

/// (M / (ε T0 (((1 − ε^d)/(ε^d T0^d) + 1)^{1/d} − 1)))^d.
Interval c_MK(const mpz_class& M, int d, const Interval& epsilon, const Interval& t0);

/// ε^d (1 + T0^d ((1 + M/(ε T0 q^{1/d}))^d − 1)).
Interval epsilon_prime(const mpz_class& q, const mpz_class& M, int d, const Interval& epsilon, const Interval& t0);

/// C = C∞ · C_fin for x = a0 − α: C∞ = ∏_σ √(|σ(x)|² + 1) over all d
/// embeddings, C_fin = ∏_{w ∤ 𝔓} sup(|x|_w, 1)^{d_w}.
Interval height_constant(const NFElement& alpha, const NFElement& a0, const PrimeIdeal& prime,
                         long prec = kDefaultPrecision);

/// C_α = d (2^{d+1} ⌈C⌉ + 1)^{d+1}.
mpz_class c_alpha(const NFElement& alpha, const NFElement& a0, const PrimeIdeal& prime);

struct ConstantsReport {
  std::string field_id;
  mpz_class abs_disc;
  int r1 = 0;
  int r2 = 0;
  Interval minkowski;
  Interval c_field;
  mpz_class M;
  Interval epsilon;
  /// Set when ε was supplied rather than derived.
  std::optional<mpq_class> epsilon_exact;
  Interval rho_upper;
  Interval t0;
  Interval c_mk;
  std::vector<std::pair<mpz_class, Interval>> epsilon_prime_at;
  std::vector<std::string> warnings;
};

struct ConstantsOptions {
  std::optional<mpz_class> M;
  std::optional<mpq_class> epsilon;
  std::vector<mpz_class> epsilon_prime_samples;
  long prec = kDefaultPrecision;
};

/// Everything for 𝔄 = O_K. With an M override below c(K) a warning is
/// recorded; ε ≥ 1 still throws EpsilonNotLessThanOne.
ConstantsReport compute_constants(const UnitSystem& units, const ConstantsOptions& opts = {},
                                  const std::string& field_id = "");

}  // namespace nfcf
