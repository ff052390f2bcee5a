#include "nfcf/poly.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "nfcf/error.hpp"

namespace nfcf {

// ---------------------------------------------------------------- QPoly

QPoly::QPoly(std::vector<mpq_class> coeffs) : c_(std::move(coeffs)) {
  for (auto& x : c_) x.canonicalize();
  trim();
}

QPoly QPoly::from_ints(const std::vector<long>& coeffs) {
  std::vector<mpq_class> c;
  c.reserve(coeffs.size());
  for (long v : coeffs) c.emplace_back(v);
  return QPoly(std::move(c));
}

QPoly QPoly::from_mpz(const std::vector<mpz_class>& coeffs) {
  std::vector<mpq_class> c;
  c.reserve(coeffs.size());
  for (const auto& v : coeffs) c.emplace_back(v);
  return QPoly(std::move(c));
}

QPoly QPoly::monomial(const mpq_class& c, int degree) {
  std::vector<mpq_class> v(static_cast<size_t>(degree) + 1);
  v.back() = c;
  return QPoly(std::move(v));
}

void QPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

mpq_class QPoly::coeff(int i) const {
  if (i < 0 || i > degree()) return 0;
  return c_[static_cast<size_t>(i)];
}

QPoly QPoly::operator-() const {
  QPoly r = *this;
  for (auto& x : r.c_) x = -x;
  return r;
}

QPoly& QPoly::operator+=(const QPoly& rhs) {
  if (rhs.c_.size() > c_.size()) c_.resize(rhs.c_.size());
  for (size_t i = 0; i < rhs.c_.size(); ++i) c_[i] += rhs.c_[i];
  trim();
  return *this;
}

QPoly& QPoly::operator-=(const QPoly& rhs) {
  if (rhs.c_.size() > c_.size()) c_.resize(rhs.c_.size());
  for (size_t i = 0; i < rhs.c_.size(); ++i) c_[i] -= rhs.c_[i];
  trim();
  return *this;
}

QPoly& QPoly::operator*=(const mpq_class& s) {
  if (s == 0) {
    c_.clear();
    return *this;
  }
  for (auto& x : c_) x *= s;
  return *this;
}

QPoly operator*(const QPoly& a, const QPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<mpq_class> out(a.c_.size() + b.c_.size() - 1);
  for (size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i] == 0) continue;
    for (size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
  }
  return QPoly(std::move(out));
}

std::pair<QPoly, QPoly> QPoly::divmod(const QPoly& divisor) const {
  if (divisor.is_zero()) throw Error(Errc::DivideByZero, "polynomial division by zero");
  QPoly rem = *this;
  if (rem.degree() < divisor.degree()) return {QPoly{}, rem};
  std::vector<mpq_class> quo(static_cast<size_t>(rem.degree() - divisor.degree()) + 1);
  const mpq_class inv_lead = 1 / divisor.lead();
  while (!rem.is_zero() && rem.degree() >= divisor.degree()) {
    const int shift = rem.degree() - divisor.degree();
    const mpq_class t = rem.lead() * inv_lead;
    quo[static_cast<size_t>(shift)] = t;
    for (int i = 0; i <= divisor.degree(); ++i) {
      rem.c_[static_cast<size_t>(i + shift)] -= t * divisor.c_[static_cast<size_t>(i)];
    }
    rem.trim();
  }
  return {QPoly(std::move(quo)), rem};
}

QPoly QPoly::derivative() const {
  if (degree() < 1) return {};
  std::vector<mpq_class> out(c_.size() - 1);
  for (size_t i = 1; i < c_.size(); ++i) out[i - 1] = c_[i] * static_cast<long>(i);
  return QPoly(std::move(out));
}

QPoly QPoly::monic() const {
  if (is_zero()) return {};
  QPoly r = *this;
  r *= 1 / lead();
  return r;
}

mpq_class QPoly::eval(const mpq_class& x) const {
  mpq_class acc = 0;
  for (size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
  return acc;
}

bool QPoly::is_integral() const {
  return std::all_of(c_.begin(), c_.end(), [](const mpq_class& q) { return q.get_den() == 1; });
}

std::vector<mpz_class> QPoly::to_mpz() const {
  std::vector<mpz_class> out;
  out.reserve(c_.size());
  for (const auto& q : c_) {
    if (q.get_den() != 1) throw Error(Errc::InvalidInput, "polynomial has non-integer coefficients");
    out.push_back(q.get_num());
  }
  return out;
}

std::string QPoly::to_string(const std::string& var) const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    mpq_class c = c_[static_cast<size_t>(i)];
    if (c == 0) continue;
    const bool neg = c < 0;
    if (neg) c = -c;
    if (first) {
      if (neg) os << "-";
    } else {
      os << (neg ? " - " : " + ");
    }
    first = false;
    if (i == 0 || c != 1) os << c.get_str();
    if (i >= 1) {
      if (c != 1) os << "*";
      os << var;
      if (i >= 2) os << "^" << i;
    }
  }
  return os.str();
}

QPoly gcd(const QPoly& a, const QPoly& b) {
  QPoly x = a, y = b;
  while (!y.is_zero()) {
    QPoly r = x % y;
    x = std::move(y);
    y = std::move(r);
  }
  return x.monic();
}

QXgcd xgcd(const QPoly& a, const QPoly& b) {
  QPoly r0 = a, r1 = b;
  QPoly s0 = QPoly::constant(1), s1;
  QPoly t0, t1 = QPoly::constant(1);
  while (!r1.is_zero()) {
    auto [q, r] = r0.divmod(r1);
    r0 = std::move(r1);
    r1 = std::move(r);
    QPoly s2 = s0 - q * s1;
    QPoly t2 = t0 - q * t1;
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.is_zero()) return {r0, s0, t0};
  const mpq_class inv = 1 / r0.lead();
  return {r0 * inv, s0 * inv, t0 * inv};
}

mpq_class resultant(const QPoly& a, const QPoly& b) {
  if (a.is_zero() || b.is_zero()) return 0;
  QPoly x = a, y = b;
  mpq_class acc = 1;
  while (true) {
    const int m = x.degree();
    const int n = y.degree();
    if (n == 0) {
      mpq_class t;
      mpq_class lc = y.lead();
      t = 1;
      for (int i = 0; i < m; ++i) t *= lc;
      return acc * t;
    }
    QPoly r = x % y;
    if (r.is_zero()) return 0;
    const int k = r.degree();
    if ((static_cast<long>(m) * n) % 2 != 0) acc = -acc;
    mpq_class lc = y.lead();
    for (int i = 0; i < m - k; ++i) acc *= lc;
    x = std::move(y);
    y = std::move(r);
  }
}

mpq_class discriminant(const QPoly& f) {
  const int n = f.degree();
  if (n < 1) throw Error(Errc::InvalidInput, "discriminant of a constant");
  if (n == 1) return 1;
  mpq_class r = resultant(f, f.derivative()) / f.lead();
  if ((static_cast<long>(n) * (n - 1) / 2) % 2 != 0) r = -r;
  return r;
}

int count_real_roots(const QPoly& f) {
  if (f.is_zero()) throw Error(Errc::InvalidInput, "real-root count of the zero polynomial");
  std::vector<QPoly> seq{f, f.derivative()};
  while (!seq.back().is_zero()) {
    QPoly r = -(seq[seq.size() - 2] % seq.back());
    seq.push_back(std::move(r));
  }
  seq.pop_back();
  auto variations = [&](bool at_plus_inf) {
    int count = 0;
    int prev = 0;
    for (const auto& p : seq) {
      int s = sgn(p.lead());
      if (!at_plus_inf && p.degree() % 2 != 0) s = -s;
      if (s == 0) continue;
      if (prev != 0 && s != prev) ++count;
      prev = s;
    }
    return count;
  };
  return variations(false) - variations(true);
}

// ---------------------------------------------------------------- modular helpers

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

std::uint64_t invmod(std::uint64_t a, std::uint64_t p) {
  a %= p;
  if (a == 0) throw Error(Errc::DivideByZero, "inverse of 0 mod p");
  return powmod(a, p - 2, p);
}

// ---------------------------------------------------------------- FpPoly

FpPoly::FpPoly(std::uint64_t p, std::vector<std::uint64_t> coeffs) : p_(p), c_(std::move(coeffs)) {
  for (auto& x : c_) x %= p_;
  trim();
}

FpPoly FpPoly::from_qpoly(std::uint64_t p, const QPoly& f) {
  std::vector<std::uint64_t> c;
  const mpz_class pz(std::to_string(p));
  for (const auto& q : f.coeffs()) {
    mpz_class den = q.get_den() % pz;
    if (den == 0) throw Error(Errc::DivideByZero, "coefficient denominator divisible by p");
    mpz_class num = q.get_num() % pz;
    if (num < 0) num += pz;
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), pz.get_mpz_t());
    mpz_class v = (num * inv) % pz;
    c.push_back(std::stoull(v.get_str()));
  }
  return FpPoly(p, std::move(c));
}

FpPoly FpPoly::monomial(std::uint64_t p, std::uint64_t c, int degree) {
  std::vector<std::uint64_t> v(static_cast<size_t>(degree) + 1, 0);
  v.back() = c % p;
  return FpPoly(p, std::move(v));
}

void FpPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

FpPoly& FpPoly::operator+=(const FpPoly& rhs) {
  if (rhs.c_.size() > c_.size()) c_.resize(rhs.c_.size(), 0);
  for (size_t i = 0; i < rhs.c_.size(); ++i) {
    c_[i] += rhs.c_[i];
    if (c_[i] >= p_) c_[i] -= p_;
  }
  trim();
  return *this;
}

FpPoly& FpPoly::operator-=(const FpPoly& rhs) {
  if (rhs.c_.size() > c_.size()) c_.resize(rhs.c_.size(), 0);
  for (size_t i = 0; i < rhs.c_.size(); ++i) c_[i] = c_[i] >= rhs.c_[i] ? c_[i] - rhs.c_[i] : c_[i] + p_ - rhs.c_[i];
  trim();
  return *this;
}

FpPoly operator*(const FpPoly& a, const FpPoly& b) {
  if (a.is_zero() || b.is_zero()) return FpPoly(a.p_, {});
  std::vector<unsigned __int128> acc(a.c_.size() + b.c_.size() - 1, 0);
  const unsigned __int128 p = a.p_;
  for (size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i] == 0) continue;
    for (size_t j = 0; j < b.c_.size(); ++j) {
      acc[i + j] = (acc[i + j] + static_cast<unsigned __int128>(a.c_[i]) * b.c_[j]) % p;
    }
  }
  std::vector<std::uint64_t> out(acc.size());
  for (size_t i = 0; i < acc.size(); ++i) out[i] = static_cast<std::uint64_t>(acc[i]);
  return FpPoly(a.p_, std::move(out));
}

bool operator<(const FpPoly& a, const FpPoly& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  for (int i = a.degree(); i >= 0; --i) {
    if (a.c_[static_cast<size_t>(i)] != b.c_[static_cast<size_t>(i)]) {
      return a.c_[static_cast<size_t>(i)] < b.c_[static_cast<size_t>(i)];
    }
  }
  return false;
}

std::pair<FpPoly, FpPoly> FpPoly::divmod(const FpPoly& divisor) const {
  if (divisor.is_zero()) throw Error(Errc::DivideByZero, "polynomial division by zero mod p");
  FpPoly rem = *this;
  if (rem.degree() < divisor.degree()) return {FpPoly(p_, {}), rem};
  std::vector<std::uint64_t> quo(static_cast<size_t>(rem.degree() - divisor.degree()) + 1, 0);
  const std::uint64_t inv_lead = invmod(divisor.lead(), p_);
  while (!rem.is_zero() && rem.degree() >= divisor.degree()) {
    const int shift = rem.degree() - divisor.degree();
    const std::uint64_t t = mulmod(rem.lead(), inv_lead, p_);
    quo[static_cast<size_t>(shift)] = t;
    for (int i = 0; i <= divisor.degree(); ++i) {
      auto& slot = rem.c_[static_cast<size_t>(i + shift)];
      const std::uint64_t sub = mulmod(t, divisor.c_[static_cast<size_t>(i)], p_);
      slot = slot >= sub ? slot - sub : slot + p_ - sub;
    }
    rem.trim();
  }
  return {FpPoly(p_, std::move(quo)), rem};
}

FpPoly FpPoly::monic() const {
  if (is_zero()) return *this;
  return scaled(invmod(lead(), p_));
}

FpPoly FpPoly::scaled(std::uint64_t s) const {
  std::vector<std::uint64_t> out(c_.size());
  for (size_t i = 0; i < c_.size(); ++i) out[i] = mulmod(c_[i], s, p_);
  return FpPoly(p_, std::move(out));
}

FpPoly FpPoly::derivative() const {
  if (degree() < 1) return FpPoly(p_, {});
  std::vector<std::uint64_t> out(c_.size() - 1);
  for (size_t i = 1; i < c_.size(); ++i) out[i - 1] = mulmod(c_[i], i % p_, p_);
  return FpPoly(p_, std::move(out));
}

QPoly FpPoly::lift_balanced() const {
  std::vector<mpq_class> out;
  out.reserve(c_.size());
  for (auto v : c_) {
    mpz_class z(std::to_string(v));
    if (v > p_ / 2) z -= mpz_class(std::to_string(p_));
    out.emplace_back(z);
  }
  return QPoly(std::move(out));
}

FpPoly gcd(const FpPoly& a, const FpPoly& b) {
  FpPoly x = a, y = b;
  while (!y.is_zero()) {
    FpPoly r = x % y;
    x = std::move(y);
    y = std::move(r);
  }
  return x.monic();
}

FpPoly powmod(const FpPoly& base, const mpz_class& e, const FpPoly& modulus) {
  FpPoly result = FpPoly::monomial(modulus.prime(), 1, 0) % modulus;
  FpPoly b = base % modulus;
  const size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (size_t i = bits; i-- > 0;) {
    result = (result * result) % modulus;
    if (mpz_tstbit(e.get_mpz_t(), i)) result = (result * b) % modulus;
  }
  return result;
}

namespace {

mpz_class to_mpz(std::uint64_t v) { return mpz_class(std::to_string(v)); }

FpPoly pth_root(const FpPoly& f) {
  const std::uint64_t p = f.prime();
  std::vector<std::uint64_t> out;
  for (int i = 0; i <= f.degree(); i += static_cast<int>(p)) out.push_back(f.coeff(i));
  return FpPoly(p, std::move(out));
}

void squarefree(const FpPoly& f, int mult, std::vector<std::pair<FpPoly, int>>& out) {
  const std::uint64_t p = f.prime();
  const FpPoly one = FpPoly::monomial(p, 1, 0);
  FpPoly c = gcd(f, f.derivative());
  FpPoly w = f.divmod(c).first.monic();
  int i = 1;
  while (w.degree() > 0) {
    FpPoly y = gcd(w, c);
    FpPoly fac = w.divmod(y).first.monic();
    if (fac.degree() > 0) out.emplace_back(fac, i * mult);
    w = y;
    c = c.divmod(y).first.monic();
    ++i;
  }
  if (c.degree() > 0) squarefree(pth_root(c), mult * static_cast<int>(p), out);
}

// Split a squarefree monic polynomial whose factors all have degree `deg`.
void equal_degree(const FpPoly& g, int deg, std::mt19937_64& rng, std::vector<FpPoly>& out) {
  if (g.degree() == deg) {
    out.push_back(g.monic());
    return;
  }
  const std::uint64_t p = g.prime();
  const mpz_class q = [&] {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), to_mpz(p).get_mpz_t(), static_cast<unsigned long>(deg));
    return r;
  }();
  std::uniform_int_distribution<std::uint64_t> dist(0, p - 1);
  while (true) {
    std::vector<std::uint64_t> coeffs(static_cast<size_t>(g.degree()));
    for (auto& c : coeffs) c = dist(rng);
    FpPoly a(p, coeffs);
    if (a.degree() < 1) continue;
    FpPoly shaped(p, {});
    if (p == 2) {
      FpPoly t = a % g;
      FpPoly acc = t;
      for (int k = 1; k < deg; ++k) {
        t = (t * t) % g;
        acc += t;
      }
      shaped = acc;
    } else {
      shaped = powmod(a, (q - 1) / 2, g) - FpPoly::monomial(p, 1, 0);
    }
    FpPoly d = gcd(g, shaped);
    if (d.degree() > 0 && d.degree() < g.degree()) {
      equal_degree(d, deg, rng, out);
      equal_degree(g.divmod(d).first.monic(), deg, rng, out);
      return;
    }
  }
}

}  // namespace

std::vector<std::pair<FpPoly, int>> factor(const FpPoly& f) {
  if (f.is_zero()) throw Error(Errc::InvalidInput, "factorization of the zero polynomial");
  std::vector<std::pair<FpPoly, int>> sqf;
  if (f.degree() > 0) squarefree(f.monic(), 1, sqf);
  const std::uint64_t p = f.prime();
  std::mt19937_64 rng(0x5eedULL ^ p);
  std::vector<std::pair<FpPoly, int>> out;
  const FpPoly x = FpPoly::monomial(p, 1, 1);
  for (const auto& [part, mult] : sqf) {
    FpPoly g = part;
    FpPoly h = x % g;
    for (int i = 1; g.degree() >= 2 * i; ++i) {
      h = powmod(h, to_mpz(p), g);
      FpPoly fac = gcd(g, h - x);
      if (fac.degree() > 0) {
        std::vector<FpPoly> pieces;
        equal_degree(fac, i, rng, pieces);
        for (auto& pc : pieces) out.emplace_back(std::move(pc), mult);
        g = g.divmod(fac).first.monic();
        h = h % g;
      }
    }
    if (g.degree() > 0) out.emplace_back(g.monic(), mult);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.first == b.first) return a.second < b.second;
    return a.first < b.first;
  });
  return out;
}

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % q == 0) return n == q;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

namespace {

// Degrees reachable as sums of sub-multisets of the factor degrees.
std::vector<bool> reachable_degrees(const std::vector<std::pair<FpPoly, int>>& facs, int n) {
  std::vector<bool> reach(static_cast<size_t>(n) + 1, false);
  reach[0] = true;
  for (const auto& [g, m] : facs) {
    for (int rep = 0; rep < m; ++rep) {
      for (int k = n; k >= g.degree(); --k) {
        if (reach[static_cast<size_t>(k - g.degree())]) reach[static_cast<size_t>(k)] = true;
      }
    }
  }
  return reach;
}

}  // namespace

bool is_irreducible_over_q(const QPoly& f) {
  const int n = f.degree();
  if (n < 1) return false;
  if (n == 1) return true;
  if (f.lead() != 1 || !f.is_integral()) throw Error(Errc::InvalidInput, "irreducibility test needs a monic integer polynomial");
  if (gcd(f, f.derivative()).degree() > 0) return false;
  const mpq_class disc = discriminant(f);

  // Degree-pattern sieve: an integer factor of degree k forces a mod-p
  // factor set with degrees summing to k for every good prime p.
  std::vector<bool> possible(static_cast<size_t>(n) + 1, true);
  int good = 0;
  for (std::uint64_t p = 2; p < 400 && good < 30; ++p) {
    if (!is_prime_u64(p)) continue;
    if (mpz_divisible_ui_p(disc.get_num_mpz_t(), p)) continue;
    ++good;
    auto reach = reachable_degrees(factor(FpPoly::from_qpoly(p, f)), n);
    bool any = false;
    for (int k = 1; k < n; ++k) {
      possible[static_cast<size_t>(k)] = possible[static_cast<size_t>(k)] && reach[static_cast<size_t>(k)];
      any = any || possible[static_cast<size_t>(k)];
    }
    if (!any) return true;
  }

  // Exhaustive recombination at a prime above twice the Mignotte bound: any
  // monic integer factor reduces to a product of mod-p factors and lifts
  // back exactly from balanced residues.
  mpz_class norm2 = 0;
  for (const auto& c : f.coeffs()) norm2 += c.get_num() * c.get_num();
  mpz_class norm = sqrt(norm2) + 1;
  mpz_class binom;
  mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(n / 2));
  mpz_class bound = 2 * binom * norm + 1;
  if (mpz_sizeinbase(bound.get_mpz_t(), 2) > 60) throw Error(Errc::InvalidInput, "coefficients too large for the irreducibility test");
  std::uint64_t p = std::stoull(bound.get_str());
  while (true) {
    ++p;
    if (!is_prime_u64(p)) continue;
    if (mpz_divisible_ui_p(disc.get_num_mpz_t(), p)) continue;
    break;
  }
  auto facs = factor(FpPoly::from_qpoly(p, f));
  const size_t r = facs.size();
  for (std::uint64_t mask = 1; mask + 1 < (1ULL << r); ++mask) {
    int deg = 0;
    for (size_t i = 0; i < r; ++i) {
      if (mask >> i & 1) deg += facs[i].first.degree();
    }
    if (deg > n / 2) continue;
    FpPoly prod = FpPoly::monomial(p, 1, 0);
    for (size_t i = 0; i < r; ++i) {
      if (mask >> i & 1) prod = prod * facs[i].first;
    }
    if ((f % prod.lift_balanced()).is_zero()) return false;
  }
  return true;
}

}  // namespace nfcf
