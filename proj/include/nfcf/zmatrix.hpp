#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <vector>

namespace nfcf {

using ZVec = std::vector<mpz_class>;
using QVec = std::vector<mpq_class>;
/// Row-major integer matrix: each inner vector is one row (one lattice
/// generator). Lattices in this library are always row lattices.
using ZMat = std::vector<ZVec>;
using QMat = std::vector<QVec>;

struct HnfTransform {
  /// Rows in echelon form; zero rows first, then pivot rows whose pivot
  /// columns increase with the row index.
  ZMat h;
  /// Unimodular with u·a = h.
  ZMat u;
  /// Number of leading zero rows (a basis of the left kernel is u[0..zero_rows)).
  std::size_t zero_rows = 0;
};

/// Hermite normal form with transform. Pivots are found from the last
/// column backwards; entries left of each pivot are reduced into
/// [0, pivot) by the pivot rows of smaller columns.
HnfTransform hnf_with_transform(const ZMat& a, std::size_t cols);

/// Full-rank HNF of a lattice in ℤ^n: lower triangular n×n matrix with
/// positive diagonal and 0 ≤ h[k][i] < h[i][i] for k > i. Throws
/// InvalidInput if the rows do not span a rank-n lattice.
ZMat hnf_square(const ZMat& rows, std::size_t n);

/// Basis of the left kernel {x : x·a = 0}, in HNF.
ZMat left_kernel(const ZMat& a, std::size_t cols);

/// Solve x·h = c for lower-triangular nonsingular h.
QVec solve_lower(const ZMat& h, const QVec& c);

/// Integer row vector x with x·a = c when one exists (a any shape).
std::optional<ZVec> solve_integer(const ZMat& a, const ZVec& c, std::size_t cols);

/// Determinant via fraction-free elimination.
mpz_class det(const ZMat& a);
mpq_class det(const QMat& a);

/// Inverse of a nonsingular rational matrix.
QMat inverse(const QMat& a);

/// Row vector times matrix.
QVec mul(const QVec& x, const QMat& a);
ZVec mul(const ZVec& x, const ZMat& a);

}  // namespace nfcf
