#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nfcf/divchain.hpp"
#include "nfcf/geometry.hpp"
#include "nfcf/number_field.hpp"

namespace nfcf {

/// A field file: the field plus whatever arithmetic data came with it.
struct FieldSpec {
  std::string name;
  std::string source;
  FieldPtr field;
  /// Present when the file lists `fundamental_units` (possibly empty).
  std::optional<UnitSystem> units;
  /// Present when the file lists `class_number`; h > 1 also needs
  /// `class_group` and `ideal_class_reps`.
  std::optional<ClassData> class_data;
  std::optional<mpz_class> bedocchi_M;
  std::optional<mpq_class> bedocchi_epsilon;
  std::optional<mpz_class> expected_M;
  std::optional<std::string> expected_c_mk;
  std::vector<std::string> warnings;
};

/// Parses and validates a field file. Units go through UnitSystem::make
/// (|N| = 1, rank, independence); class data must be consistent with the
/// class number. Throws InvalidInput with the offending key.
FieldSpec parse_field_spec(const std::string& json_text, const std::string& source = "<string>");

/// Reads a file; the literal "Q" yields the rationals with trivial data.
FieldSpec load_field_spec(const std::string& path);

/// "a/b", "-7" or an integer JSON number.
mpq_class parse_rational(const std::string& text);

}  // namespace nfcf
