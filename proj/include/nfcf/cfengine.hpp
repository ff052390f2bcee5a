#pragma once

#include <array>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "nfcf/constants.hpp"
#include "nfcf/ideals.hpp"

namespace nfcf {

/// A 𝔓-adic floor s: K → K. Implementations are immutable.
class FloorFunction {
 public:
  virtual ~FloorFunction() = default;
  virtual NFElement operator()(const NFElement& eta) const = 0;
  virtual std::string name() const = 0;
};

/// Balanced p-adic digits over ℚ: s(x) = Σ_{i=−k}^{0} c_i p^i, |c_i| < p/2.
class BrowkinFloor : public FloorFunction {
 public:
  BrowkinFloor(FieldPtr rationals, mpz_class p);
  NFElement operator()(const NFElement& eta) const override;
  std::string name() const override { return "browkin"; }

 private:
  FieldPtr field_;
  mpz_class p_;
};

struct RepresentativeParams {
  /// τ ranges over this integral ideal (O_K by default).
  std::optional<FractionalIdeal> lattice;
  /// γ with γ·lattice = 𝔓.
  NFElement gamma;
  mpz_class M;
  Interval epsilon;
  /// Cube radius around the rounded coordinates.
  int radius = 2;
};

/// s(η) = γ(ξ − τ/j) with ξ = canonical_lift(η)/γ and the first (j, τ), in
/// increasing j and then increasing cube shell, certified to satisfy
/// max_σ |σ(jξ − τ)| < ε.
class RepresentativeFloor : public FloorFunction {
 public:
  RepresentativeFloor(PrimeIdeal prime, RepresentativeParams params);

  struct Choice {
    NFElement value;
    long j = 0;
    NFElement tau;
  };
  Choice choose(const NFElement& eta) const;
  NFElement operator()(const NFElement& eta) const override { return choose(eta).value; }
  std::string name() const override { return "representative"; }
  const RepresentativeParams& params() const { return params_; }

 private:
  PrimeIdeal prime_;
  RepresentativeParams params_;
  bool principal_ = true;
  std::vector<NFElement> basis_;
  QMat basis_inv_;
  double eps_hint_ = 1;
};

/// s(η) + shift: a deliberately broken floor for negative controls.
class ShiftedFloor : public FloorFunction {
 public:
  ShiftedFloor(std::shared_ptr<const FloorFunction> inner, NFElement shift)
      : inner_(std::move(inner)), shift_(std::move(shift)) {}
  NFElement operator()(const NFElement& eta) const override { return (*inner_)(eta) + shift_; }
  std::string name() const override { return inner_->name() + "+shift"; }

 private:
  std::shared_ptr<const FloorFunction> inner_;
  NFElement shift_;
};

/// (K, 𝔓, 𝒯, s).
struct TypeSpec {
  FieldPtr field;
  PrimeIdeal prime;
  std::vector<NFElement> denom_set;
  std::shared_ptr<const FloorFunction> floor;
  /// ν(a_n) ≤ bound is expected for every admissible output when set.
  std::optional<Interval> nu_bound;
  std::vector<std::string> warnings;
};

/// Browkin type over ℚ, 𝒯 = {1}. Throws EvenPrime for p = 2.
TypeSpec browkin_type(const mpz_class& p);
TypeSpec browkin_type(const FieldPtr& rationals, const mpz_class& p);

/// Representative-floor type with 𝒯 = {1..M}. Warns when N(𝔓) ≤ c(M,K)
/// or 𝒯 meets 𝔓; records ε′(N(𝔓)) as the ν bound when N(𝔓) > c(M,K).
TypeSpec representative_type(const PrimeIdeal& prime, RepresentativeParams params,
                             const std::optional<Interval>& c_mk = std::nullopt,
                             const std::optional<Interval>& t0 = std::nullopt);
/// Same, with γ found by principal_generator and M, ε, T0 from the report.
TypeSpec representative_type(const UnitSystem& units, const PrimeIdeal& prime, const ConstantsReport& constants);

/// N(𝔓)^{v(a)} · ∏_σ θ(σ(a)) · ∏_{w ≠ w0} max(|a|_w, 1)^{d_w}. Throws
/// NotAdmissible unless v_𝔓(a) < 0.
Interval nu_term(const NFElement& a, const PrimeIdeal& prime, long prec = kDefaultPrecision);
/// The finite factor ∏_{w ≠ w0} max(|a|_w, 1)^{d_w}, exactly.
mpz_class nu_finite_factor(const NFElement& a, const PrimeIdeal& prime);

enum class CFStatus { Finite, Periodic, Truncated };
std::string to_string(CFStatus s);

struct LedgerEntry {
  HeightPower height;  // H(α_n)^d
  std::optional<Interval> nu;  // ν(a_n), n ≥ 1
  long valuation = 0;  // v_𝔓(α_n)
};

struct CFExpansion {
  NFElement alpha;
  std::vector<NFElement> quotients;
  std::vector<NFElement> complete;
  /// V[0] = V_{−1} = 1, V[n+1] = V_n.
  std::vector<NFElement> V;
  std::vector<LedgerEntry> ledger;
  CFStatus status = CFStatus::Truncated;
  size_t preperiod = 0;
  size_t period = 0;
  size_t cap = 0;
  Interval height_constant;
  mpz_class c_alpha;

  size_t length() const { return quotients.size(); }
};

inline constexpr size_t kHardCap = 10000;

/// Runs α_{n+1} = 1/(α_n − s(α_n)) with exact complete quotients. The cap
/// defaults to min(C_α, kHardCap).
CFExpansion expand(const NFElement& alpha, const TypeSpec& type, std::optional<size_t> cap = std::nullopt,
                   long prec = kDefaultPrecision);

/// A_n, B_n with A_{−1} = 1, A_0 = a_0, B_{−1} = 0, B_0 = 1; index 0 holds n = −1.
struct Continuants {
  std::vector<NFElement> A;
  std::vector<NFElement> B;
};
Continuants continuants(const std::vector<NFElement>& quotients);
/// A_n B_{n−1} − A_{n−1} B_n = ±1 for every n ≥ 0.
bool continuant_determinant_holds(const Continuants& c);

/// [a_0, …, a_n] = A_n/B_n. Throws ZeroDenominator.
NFElement evaluate_cf(const std::vector<NFElement>& quotients);

struct CheckReport {
  size_t checks = 0;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

/// Recurrences, α_{n+1} = −V_{n−1}/V_n, v(V_{n−1}) = −Σ_{j≤n} v(a_j),
/// v(a_n) < 0 for n ≥ 1, round trip for Finite, replay for Periodic and
/// the continuant determinant.
CheckReport check_expansion_invariants(const CFExpansion& e, const TypeSpec& type);

struct HeightChainReport {
  Interval nu_bar;
  size_t checked = 0;
  std::vector<size_t> violations;
  bool ok() const { return violations.empty(); }
};
/// H(α_{n+1})^d ≤ C · ν̄^n for n ≥ 0, with ν̄ the largest ledger ν.
HeightChainReport check_height_chain(const CFExpansion& e);

struct AxiomReport {
  size_t samples = 0;
  /// Failure counts for axioms (i)–(iv).
  std::array<size_t, 4> failures{};
  std::vector<std::string> details;
  bool ok() const { return failures == std::array<size_t, 4>{}; }
};
AxiomReport verify_floor_axioms(const TypeSpec& type, const std::vector<NFElement>& samples, std::mt19937_64& rng);

struct TypeCriterionReport {
  size_t expansions = 0;
  size_t finite = 0;
  size_t periodic = 0;
  size_t truncated = 0;
  std::optional<Interval> nu_sup;
  size_t nu_at_least_one = 0;
  size_t nu_above_bound = 0;
  size_t nu_finite_factor_violations = 0;
  size_t height_violations = 0;
  size_t invariant_failures = 0;
  std::vector<std::string> details;
  bool ok() const;
};
TypeCriterionReport verify_type_criterion(const TypeSpec& type, const std::vector<NFElement>& samples,
                                          std::optional<size_t> cap = std::nullopt);

/// Random elements with coordinates num/den, |num| ≤ range, and extra
/// powers of p (up to max_pow) in the denominator.
std::vector<NFElement> sample_elements(const FieldPtr& field, const mpz_class& p, size_t count, std::mt19937_64& rng,
                                       long range = 1000, int max_pow = 3);

}  // namespace nfcf
