#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nfcf/cfengine.hpp"
#include "nfcf/geometry.hpp"
#include "nfcf/ideals.hpp"

namespace nfcf {

struct ChainStep {
  NFElement q;
  NFElement r;
};

/// a = q_1 b + r_1, b = q_2 r_1 + r_2, …, over O_S.
struct DivisionChain {
  SIntegerRing ring;
  NFElement a;
  NFElement b;
  std::vector<ChainStep> steps;

  bool terminating() const { return !steps.empty() && steps.back().r.is_zero(); }
  size_t length() const { return steps.size(); }
};

struct ChainReport {
  bool valid = true;
  /// 1-based index of the first failing step (0 for a chain-level failure).
  std::optional<size_t> failing_step;
  std::string reason;
};

/// Step identities r_{i−2} = q_i r_{i−1} + r_i (r_{−1} = a, r_0 = b), S-integrality
/// of every entry, and evaluate_cf(q) = a/b when terminating.
ChainReport verify_chain(const DivisionChain& chain);

std::vector<NFElement> chain_to_cf(const DivisionChain& chain);
DivisionChain cf_to_chain(const SIntegerRing& ring, const NFElement& a, const NFElement& b,
                          const std::vector<NFElement>& quotients);

/// Class-group data supplied with a field.
struct ClassData {
  long class_number = 1;
  /// Cyclic factor orders of Cl(K).
  std::vector<long> group;
  /// Integral ideals with their class vectors; the trivial class is implicit.
  std::vector<std::pair<FractionalIdeal, std::vector<long>>> reps;
};

/// Class vector of a fractional ideal, by testing I·R^{−1} for principality
/// against each representative R. Throws SearchExhausted when none matches
/// within the generator search bound.
std::vector<long> class_of(const FractionalIdeal& ideal, const ClassData& data, long search_bound = 8);

/// True iff the class of (a, b) lies in the subgroup generated by the
/// classes of S (a necessary condition for a terminating chain). Throws
/// MissingClassData when h > 1 and no class data is available.
bool class_obstruction(const NFElement& a, const NFElement& b, const SIntegerRing& ring, const ClassData* data,
                       long search_bound = 8);

struct ClwCaps {
  /// Step 1: q_1 = round(a/b · π^t)/π^t + cube neighbors for 0 ≤ t ≤ shift_bound.
  long shift_bound = 6;
  /// Step 2: at most this many candidates p′ = b + k r_1.
  long candidate_bound = 5000;
  /// |e_i| per fundamental unit.
  long unit_exponent_bound = 6;
  /// |e| for the S-unit π.
  long s_unit_exponent_bound = 40;
};

/// Division chain of length ≤ 5 following the auxiliary-prime construction:
/// r_1 with |r_1|_π = 1, a prime p′ ≡ b mod r_1 outside S, and an S-unit u
/// with r_1 ≡ u mod p′. π generates the first prime of S (searched for when
/// not supplied). Throws NotCoprime or SearchExhausted.
DivisionChain clw_expand(const NFElement& a, const NFElement& b, const SIntegerRing& ring, const UnitSystem& units,
                         const std::optional<NFElement>& pi = std::nullopt, const ClwCaps& caps = {});

}  // namespace nfcf
