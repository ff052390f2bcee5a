#include "nfcf/zmatrix.hpp"

#include <utility>

#include "nfcf/error.hpp"

namespace nfcf {

namespace {

ZMat identity(std::size_t m) {
  ZMat u(m, ZVec(m, 0));
  for (std::size_t i = 0; i < m; ++i) u[i][i] = 1;
  return u;
}

// row_i <- alpha·row_i + beta·row_j, row_j <- gamma·row_i + delta·row_j
void combine(ZVec& ri, ZVec& rj, const mpz_class& alpha, const mpz_class& beta, const mpz_class& gamma,
             const mpz_class& delta) {
  for (std::size_t k = 0; k < ri.size(); ++k) {
    mpz_class a = alpha * ri[k] + beta * rj[k];
    mpz_class b = gamma * ri[k] + delta * rj[k];
    ri[k] = std::move(a);
    rj[k] = std::move(b);
  }
}

void axpy(ZVec& dst, const mpz_class& q, const ZVec& src) {
  if (q == 0) return;
  for (std::size_t k = 0; k < dst.size(); ++k) dst[k] -= q * src[k];
}

}  // namespace

HnfTransform hnf_with_transform(const ZMat& a, std::size_t cols) {
  const std::size_t m = a.size();
  HnfTransform out;
  out.h = a;
  out.u = identity(m);
  for (auto& row : out.h) {
    if (row.size() != cols) throw Error(Errc::InvalidInput, "ragged matrix in HNF");
  }
  ZMat& h = out.h;
  ZMat& u = out.u;
  // Rows [0, top] are still free; pivot rows accumulate from the bottom.
  std::ptrdiff_t top = static_cast<std::ptrdiff_t>(m) - 1;
  std::vector<std::pair<std::size_t, std::size_t>> pivots;  // (row, col)
  for (std::size_t jj = cols; jj-- > 0 && top >= 0;) {
    const std::size_t t = static_cast<std::size_t>(top);
    // Move some row with a nonzero entry to slot t.
    std::ptrdiff_t found = -1;
    for (std::ptrdiff_t i = top; i >= 0; --i) {
      if (h[static_cast<std::size_t>(i)][jj] != 0) {
        found = i;
        break;
      }
    }
    if (found < 0) continue;
    if (static_cast<std::size_t>(found) != t) {
      std::swap(h[static_cast<std::size_t>(found)], h[t]);
      std::swap(u[static_cast<std::size_t>(found)], u[t]);
    }
    for (std::size_t i = 0; i < t; ++i) {
      if (h[i][jj] == 0) continue;
      mpz_class g, s, v;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), v.get_mpz_t(), h[t][jj].get_mpz_t(), h[i][jj].get_mpz_t());
      const mpz_class at = h[t][jj] / g;
      const mpz_class ai = h[i][jj] / g;
      // new_t = s·row_t + v·row_i ; new_i = at·row_i − ai·row_t
      combine(h[t], h[i], s, v, -ai, at);
      combine(u[t], u[i], s, v, -ai, at);
    }
    if (h[t][jj] < 0) {
      for (auto& x : h[t]) x = -x;
      for (auto& x : u[t]) x = -x;
    }
    pivots.emplace_back(t, jj);
    --top;
  }
  // Reduce entries left of each pivot using pivot rows of smaller columns.
  // pivots are ordered by decreasing column; process small columns last so
  // that reductions never disturb already-reduced columns.
  for (std::size_t pi = 0; pi < pivots.size(); ++pi) {
    const auto [prow, pcol] = pivots[pi];
    for (std::size_t r = prow + 1; r < m; ++r) {
      mpz_class q;
      mpz_fdiv_q(q.get_mpz_t(), h[r][pcol].get_mpz_t(), h[prow][pcol].get_mpz_t());
      axpy(h[r], q, h[prow]);
      axpy(u[r], q, u[prow]);
    }
  }
  out.zero_rows = static_cast<std::size_t>(top + 1);
  return out;
}

ZMat hnf_square(const ZMat& rows, std::size_t n) {
  HnfTransform t = hnf_with_transform(rows, n);
  if (rows.size() - t.zero_rows != n) throw Error(Errc::InvalidInput, "lattice is not of full rank");
  ZMat out(t.h.begin() + static_cast<std::ptrdiff_t>(t.zero_rows), t.h.end());
  for (std::size_t i = 0; i < n; ++i) {
    if (out[i][i] <= 0) throw Error(Errc::InvalidInput, "HNF pivot mismatch");
  }
  return out;
}

ZMat left_kernel(const ZMat& a, std::size_t cols) {
  HnfTransform t = hnf_with_transform(a, cols);
  ZMat k(t.u.begin(), t.u.begin() + static_cast<std::ptrdiff_t>(t.zero_rows));
  if (k.empty()) return k;
  HnfTransform kt = hnf_with_transform(k, a.size());
  return ZMat(kt.h.begin() + static_cast<std::ptrdiff_t>(kt.zero_rows), kt.h.end());
}

QVec solve_lower(const ZMat& h, const QVec& c) {
  const std::size_t n = h.size();
  QVec x(n);
  QVec rest = c;
  for (std::size_t jj = n; jj-- > 0;) {
    if (h[jj][jj] == 0) throw Error(Errc::DivideByZero, "singular triangular system");
    x[jj] = rest[jj] / mpq_class(h[jj][jj]);
    for (std::size_t k = 0; k <= jj; ++k) rest[k] -= x[jj] * h[jj][k];
  }
  return x;
}

std::optional<ZVec> solve_integer(const ZMat& a, const ZVec& c, std::size_t cols) {
  HnfTransform t = hnf_with_transform(a, cols);
  const std::size_t m = a.size();
  ZVec y(m, 0);
  ZVec rest = c;
  std::size_t col = cols;
  for (std::size_t r = m; r-- > t.zero_rows;) {
    std::size_t piv = cols;
    for (std::size_t k = cols; k-- > 0;) {
      if (t.h[r][k] != 0) {
        piv = k;
        break;
      }
    }
    for (std::size_t k = piv + 1; k < col; ++k) {
      if (rest[k] != 0) return std::nullopt;
    }
    if (!mpz_divisible_p(rest[piv].get_mpz_t(), t.h[r][piv].get_mpz_t())) return std::nullopt;
    y[r] = rest[piv] / t.h[r][piv];
    for (std::size_t k = 0; k <= piv; ++k) rest[k] -= y[r] * t.h[r][k];
    col = piv;
  }
  for (std::size_t k = 0; k < col; ++k) {
    if (rest[k] != 0) return std::nullopt;
  }
  return mul(y, t.u);
}

mpz_class det(const ZMat& a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  ZMat m = a;
  mpz_class prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t swap_row = k + 1;
      while (swap_row < n && m[swap_row][k] == 0) ++swap_row;
      if (swap_row == n) return 0;
      std::swap(m[k], m[swap_row]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
      }
    }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

mpq_class det(const QMat& a) {
  const std::size_t n = a.size();
  QMat m = a;
  mpq_class d = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && m[piv][k] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != k) {
      std::swap(m[piv], m[k]);
      d = -d;
    }
    d *= m[k][k];
    for (std::size_t i = k + 1; i < n; ++i) {
      if (m[i][k] == 0) continue;
      const mpq_class f = m[i][k] / m[k][k];
      for (std::size_t j = k; j < n; ++j) m[i][j] -= f * m[k][j];
    }
  }
  return d;
}

QMat inverse(const QMat& a) {
  const std::size_t n = a.size();
  QMat m = a;
  QMat inv(n, QVec(n, 0));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && m[piv][k] == 0) ++piv;
    if (piv == n) throw Error(Errc::DivideByZero, "singular matrix");
    std::swap(m[piv], m[k]);
    std::swap(inv[piv], inv[k]);
    const mpq_class s = 1 / m[k][k];
    for (std::size_t j = 0; j < n; ++j) {
      m[k][j] *= s;
      inv[k][j] *= s;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || m[i][k] == 0) continue;
      const mpq_class f = m[i][k];
      for (std::size_t j = 0; j < n; ++j) {
        m[i][j] -= f * m[k][j];
        inv[i][j] -= f * inv[k][j];
      }
    }
  }
  return inv;
}

QVec mul(const QVec& x, const QMat& a) {
  const std::size_t cols = a.empty() ? 0 : a[0].size();
  QVec out(cols, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (x[i] == 0) continue;
    for (std::size_t j = 0; j < cols; ++j) out[j] += x[i] * a[i][j];
  }
  return out;
}

ZVec mul(const ZVec& x, const ZMat& a) {
  const std::size_t cols = a.empty() ? 0 : a[0].size();
  ZVec out(cols, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (x[i] == 0) continue;
    for (std::size_t j = 0; j < cols; ++j) out[j] += x[i] * a[i][j];
  }
  return out;
}

}  // namespace nfcf
