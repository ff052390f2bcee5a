#include "nfcf/ideals.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "nfcf/error.hpp"
#include "nfcf/poly.hpp"

namespace nfcf {

namespace {

ZVec to_z(const QVec& v, const mpz_class& scale) {
  ZVec out;
  out.reserve(v.size());
  for (const auto& q : v) {
    const mpq_class s = q * mpq_class(scale);
    if (s.get_den() != 1) throw Error(Errc::InvalidInput, "non-integral lattice vector");
    out.push_back(s.get_num());
  }
  return out;
}

mpz_class content(const ZMat& m) {
  mpz_class g = 0;
  for (const auto& r : m) {
    for (const auto& x : r) g = gcd(g, x);
  }
  return g;
}

mpz_class vec_content(const ZVec& v) {
  mpz_class g = 0;
  for (const auto& x : v) g = gcd(g, x);
  return g;
}

long vp(mpz_class n, const mpz_class& p) {
  if (n == 0) throw Error(Errc::ZeroValuation, "p-adic valuation of 0");
  long k = 0;
  n = abs(n);
  while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
    n /= p;
    ++k;
  }
  return k;
}

NFElement from_fp(const FieldPtr& field, const FpPoly& g) {
  NFElement x = NFElement::zero(field);
  const NFElement a = NFElement::generator(field);
  NFElement pw = NFElement::one(field);
  for (int i = 0; i <= g.degree(); ++i) {
    if (g.coeff(i) != 0) x += pw * mpq_class(mpz_class(static_cast<unsigned long>(g.coeff(i))));
    pw *= a;
  }
  return x;
}

// Valuation of a nonzero integral element given as integer ib coordinates.
long integral_valuation(const FieldPtr& field, ZVec y, const PrimeIdeal& pr) {
  const mpz_class c = vec_content(y);
  const long k = vp(c, pr.p);
  mpz_class pk;
  mpz_pow_ui(pk.get_mpz_t(), pr.p.get_mpz_t(), static_cast<unsigned long>(k));
  for (auto& x : y) x /= pk;
  long count = 0;
  QVec q(y.begin(), y.end());
  NFElement cur = NFElement::from_ib(field, q);
  while (true) {
    const NFElement t = cur * pr.anti_uniformizer;
    const QVec tc = t.ib_coords();
    bool divisible = true;
    for (const auto& x : tc) {
      if (!mpz_divisible_p(x.get_num().get_mpz_t(), pr.p.get_mpz_t())) {
        divisible = false;
        break;
      }
    }
    if (!divisible) break;
    cur = t * mpq_class(1, pr.p);
    ++count;
  }
  return static_cast<long>(pr.e) * k + count;
}

}  // namespace

FractionalIdeal FractionalIdeal::unit(const FieldPtr& field) {
  const size_t d = static_cast<size_t>(field->degree());
  FractionalIdeal I;
  I.field_ = field;
  I.h_.assign(d, ZVec(d, 0));
  for (size_t i = 0; i < d; ++i) I.h_[i][i] = 1;
  return I;
}

FractionalIdeal FractionalIdeal::from_lattice(const FieldPtr& field, const ZMat& rows, const mpz_class& denom) {
  if (denom <= 0) throw Error(Errc::InvalidInput, "ideal denominator must be positive");
  FractionalIdeal I;
  I.field_ = field;
  I.h_ = hnf_square(rows, static_cast<size_t>(field->degree()));
  const mpz_class g = gcd(content(I.h_), denom);
  I.den_ = denom / g;
  if (g != 1) {
    for (auto& r : I.h_) {
      for (auto& x : r) x /= g;
    }
  }
  return I;
}

FractionalIdeal FractionalIdeal::from_generators(const FieldPtr& field, const std::vector<NFElement>& gens) {
  mpz_class m = 1;
  bool any = false;
  for (const auto& g : gens) {
    if (g.is_zero()) continue;
    any = true;
    m = lcm(m, g.denominator());
  }
  if (!any) throw Error(Errc::ZeroElement, "the zero ideal is not a fractional ideal");
  ZMat rows;
  for (const auto& g : gens) {
    if (g.is_zero()) continue;
    for (const auto& r : multiplication_matrix(g * mpq_class(m))) rows.push_back(to_z(r, 1));
  }
  return from_lattice(field, rows, m);
}

FractionalIdeal FractionalIdeal::principal(const NFElement& x) { return from_generators(x.field(), {x}); }

mpq_class FractionalIdeal::norm() const {
  mpz_class n = 1;
  for (size_t i = 0; i < h_.size(); ++i) n *= h_[i][i];
  mpz_class dd;
  mpz_pow_ui(dd.get_mpz_t(), den_.get_mpz_t(), h_.size());
  mpq_class out(n, dd);
  out.canonicalize();
  return out;
}

bool FractionalIdeal::is_unit() const {
  if (den_ != 1) return false;
  for (size_t i = 0; i < h_.size(); ++i) {
    for (size_t j = 0; j < h_.size(); ++j) {
      if (h_[i][j] != (i == j ? 1 : 0)) return false;
    }
  }
  return true;
}

bool FractionalIdeal::contains(const NFElement& x) const {
  QVec y = x.ib_coords();
  for (auto& q : y) q *= den_;
  for (const auto& q : solve_lower(h_, y)) {
    if (q.get_den() != 1) return false;
  }
  return true;
}

std::vector<NFElement> FractionalIdeal::basis() const {
  std::vector<NFElement> out;
  for (const auto& r : h_) {
    QVec q;
    for (const auto& x : r) q.emplace_back(x, den_);
    for (auto& v : q) v.canonicalize();
    out.push_back(NFElement::from_ib(field_, q));
  }
  return out;
}

mpz_class FractionalIdeal::min_integer() const {
  if (!is_integral()) throw Error(Errc::InvalidInput, "min_integer of a non-integral ideal");
  return h_[0][0];
}

FractionalIdeal FractionalIdeal::operator*(const FractionalIdeal& other) const {
  const auto& k = field_;
  std::vector<NFElement> a, b;
  for (const auto& r : h_) a.push_back(NFElement::from_ib(k, QVec(r.begin(), r.end())));
  for (const auto& r : other.h_) b.push_back(NFElement::from_ib(k, QVec(r.begin(), r.end())));
  ZMat rows;
  for (const auto& x : a) {
    for (const auto& y : b) rows.push_back(to_z((x * y).ib_coords(), 1));
  }
  return from_lattice(k, rows, den_ * other.den_);
}

FractionalIdeal FractionalIdeal::operator+(const FractionalIdeal& other) const {
  const mpz_class l = lcm(den_, other.den_);
  ZMat rows;
  for (const auto& r : h_) {
    ZVec z;
    for (const auto& x : r) z.push_back(x * (l / den_));
    rows.push_back(std::move(z));
  }
  for (const auto& r : other.h_) {
    ZVec z;
    for (const auto& x : r) z.push_back(x * (l / other.den_));
    rows.push_back(std::move(z));
  }
  return from_lattice(field_, rows, l);
}

FractionalIdeal FractionalIdeal::intersect(const FractionalIdeal& other) const {
  const size_t d = h_.size();
  const mpz_class l = lcm(den_, other.den_);
  ZMat a, stacked;
  for (const auto& r : h_) {
    ZVec z;
    for (const auto& x : r) z.push_back(x * (l / den_));
    a.push_back(z);
    stacked.push_back(std::move(z));
  }
  for (const auto& r : other.h_) {
    ZVec z;
    for (const auto& x : r) z.push_back(x * (l / other.den_));
    stacked.push_back(std::move(z));
  }
  const ZMat ker = left_kernel(stacked, d);
  ZMat rows;
  for (const auto& kr : ker) {
    const ZVec x(kr.begin(), kr.begin() + static_cast<std::ptrdiff_t>(d));
    rows.push_back(mul(x, a));
  }
  return from_lattice(field_, rows, l);
}

FractionalIdeal FractionalIdeal::inverse() const {
  const size_t d = h_.size();
  const auto& k = field_;
  // Dual of the lattice spanned by the columns of the multiplication matrices.
  ZMat cols;
  for (const auto& r : h_) {
    const QMat m = multiplication_matrix(NFElement::from_ib(k, QVec(r.begin(), r.end())));
    for (size_t c = 0; c < d; ++c) {
      ZVec v;
      for (size_t j = 0; j < d; ++j) v.push_back(m[j][c].get_num());
      cols.push_back(std::move(v));
    }
  }
  const ZMat h = hnf_square(cols, d);
  QMat ht(d, QVec(d));
  for (size_t i = 0; i < d; ++i) {
    for (size_t j = 0; j < d; ++j) ht[i][j] = h[j][i];
  }
  const QMat dual = nfcf::inverse(ht);
  mpz_class den = 1;
  for (const auto& r : dual) {
    for (const auto& x : r) den = lcm(den, x.get_den());
  }
  ZMat rows;
  for (const auto& r : dual) {
    ZVec z;
    for (const auto& x : r) z.push_back(mpq_class(x * mpq_class(den * den_)).get_num());
    rows.push_back(std::move(z));
  }
  return from_lattice(k, rows, den);
}

FractionalIdeal FractionalIdeal::pow(long e) const {
  if (e < 0) return inverse().pow(-e);
  FractionalIdeal result = unit(field_);
  FractionalIdeal base = *this;
  while (e > 0) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return result;
}

std::string FractionalIdeal::to_string() const {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < h_.size(); ++i) {
    if (i) os << ", ";
    os << "[";
    for (size_t j = 0; j < h_[i].size(); ++j) {
      if (j) os << ", ";
      os << h_[i][j].get_str();
    }
    os << "]";
  }
  os << "]";
  if (den_ != 1) os << "/" << den_.get_str();
  return os.str();
}

FractionalIdeal denominator_ideal(const NFElement& x) {
  const FieldPtr& k = x.field();
  if (x.is_zero() || x.is_integral()) return FractionalIdeal::unit(k);
  return FractionalIdeal::unit(k).intersect(FractionalIdeal::principal(x.inverse()));
}

std::string PrimeIdeal::to_string() const {
  return "(" + p.get_str() + ", " + gen2.to_string() + ")";
}

std::vector<PrimeIdeal> primes_above(const FieldPtr& field, const mpz_class& p) {
  if (p < 2 || !mpz_fits_ulong_p(p.get_mpz_t()) || p.get_ui() >= (1UL << 62) || !is_prime_u64(p.get_ui())) {
    throw Error(Errc::InvalidInput, p.get_str() + " is not a supported rational prime");
  }
  if (!field->power_basis()) {
    const mpq_class inv_index = abs(det(field->integral_basis()));
    const mpz_class index = inv_index.get_den();
    if (mpz_divisible_p(index.get_mpz_t(), p.get_mpz_t())) {
      throw Error(Errc::IndexDivisor, p.get_str() + " divides the index [O_K : Z[alpha]]");
    }
  }
  const std::uint64_t pu = p.get_ui();
  const FpPoly fp = FpPoly::from_qpoly(pu, field->min_poly());
  const auto facs = factor(fp);
  std::vector<PrimeIdeal> out;
  int idx = 0;
  for (const auto& [g, e] : facs) {
    PrimeIdeal pr;
    pr.field = field;
    pr.p = p;
    pr.e = e;
    pr.f = g.degree();
    mpz_pow_ui(pr.norm.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(pr.f));
    pr.gen2 = g.degree() == field->degree() ? NFElement::rational(field, mpq_class(p)) : from_fp(field, g);
    pr.anti_uniformizer = from_fp(field, fp.divmod(g).first);
    pr.index = idx++;
    // Only e = 1 can leave g(α) in 𝔓²; then g(α) + p is a uniformizer.
    if (g.degree() != field->degree() && valuation(pr.gen2, pr) >= 2) {
      pr.gen2 += NFElement::rational(field, mpq_class(p));
    }
    pr.ideal = FractionalIdeal::from_generators(field, {NFElement::rational(field, mpq_class(p)), pr.gen2});
    if (pr.ideal.norm() != mpq_class(pr.norm)) throw Error(Errc::InvalidInput, "prime ideal norm mismatch");
    out.push_back(std::move(pr));
  }
  return out;
}

long valuation(const NFElement& x, const PrimeIdeal& prime) {
  if (x.is_zero()) throw Error(Errc::ZeroValuation, "valuation of 0 is +infinity");
  const mpz_class m = x.denominator();
  const ZVec y = to_z((x * mpq_class(m)).ib_coords(), 1);
  const long vm = m == 1 ? 0 : vp(m, prime.p);
  return integral_valuation(x.field(), y, prime) - static_cast<long>(prime.e) * vm;
}

long valuation(const FractionalIdeal& ideal, const PrimeIdeal& prime) {
  long v = -1;
  bool first = true;
  for (const auto& r : ideal.hnf()) {
    bool zero = true;
    for (const auto& x : r) zero = zero && x == 0;
    if (zero) continue;
    const long w = integral_valuation(ideal.field(), r, prime);
    if (first || w < v) v = w;
    first = false;
  }
  const long vm = ideal.denom() == 1 ? 0 : vp(ideal.denom(), prime.p);
  return v - static_cast<long>(prime.e) * vm;
}

NFElement canonical_residue(const NFElement& x, const FractionalIdeal& ideal) {
  if (!ideal.is_integral()) throw Error(Errc::InvalidInput, "canonical residue needs an integral ideal");
  const FieldPtr& k = x.field();
  if (ideal.is_unit() || x.is_zero()) return NFElement::zero(k);
  const size_t d = static_cast<size_t>(k->degree());
  const ZMat& h = ideal.hnf();
  const mpz_class h0 = h[0][0];
  const mpz_class m = x.denominator();
  NFElement z = x;
  if (m != 1) {
    if (gcd(m, h0) == 1) {
      mpz_class minv;
      mpz_invert(minv.get_mpz_t(), m.get_mpz_t(), h0.get_mpz_t());
      z = x * mpq_class(m * minv);
    } else {
      const FractionalIdeal dx = denominator_ideal(x);
      ZMat stacked = dx.hnf();
      for (const auto& r : h) stacked.push_back(r);
      ZVec one(d, 0);
      one[0] = 1;
      const auto sol = solve_integer(stacked, one, d);
      if (!sol) throw Error(Errc::NotIntegralAtI, x.to_string() + " has a denominator at a prime of the modulus");
      ZVec bcoord(d, 0);
      for (size_t i = 0; i < d; ++i) {
        for (size_t j = 0; j < d; ++j) bcoord[j] += (*sol)[i] * dx.hnf()[i][j];
      }
      z = x * NFElement::from_ib(k, QVec(bcoord.begin(), bcoord.end()));
    }
  }
  ZVec c = to_z(z.ib_coords(), 1);
  for (size_t i = d; i-- > 0;) {
    const mpz_class& hi = h[i][i];
    mpz_class q;
    mpz_class num = 2 * c[i] + hi;
    mpz_class den = 2 * hi;
    mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    if (q != 0) {
      for (size_t j = 0; j <= i; ++j) c[j] -= q * h[i][j];
    }
  }
  return NFElement::from_ib(k, QVec(c.begin(), c.end()));
}

NFElement canonical_lift(const NFElement& eta, const PrimeIdeal& prime, const std::optional<NFElement>& gamma) {
  if (eta.is_zero()) return eta;
  const long v = valuation(eta, prime);
  const long kk = std::max(0L, -v);
  const FractionalIdeal modulus = prime.ideal.pow(kk + 1);
  if (gamma) {
    if (abs(gamma->norm()) != mpq_class(prime.norm) || valuation(*gamma, prime) != 1) {
      throw Error(Errc::InvalidInput, gamma->to_string() + " does not generate " + prime.to_string());
    }
    const NFElement mu = eta * gamma->pow(kk);
    return canonical_residue(mu, modulus) * gamma->pow(-kk);
  }
  const NFElement shift = prime.anti_uniformizer * mpq_class(1, prime.p);  // v_𝔓 = −1, integral elsewhere
  const NFElement mu = eta * shift.pow(-kk);
  return canonical_residue(mu, modulus) * shift.pow(kk);
}

std::optional<NFElement> find_generator(const FractionalIdeal& ideal, long search_bound) {
  if (!ideal.is_integral()) throw Error(Errc::InvalidInput, "generator search needs an integral ideal");
  const FieldPtr& k = ideal.field();
  if (ideal.is_unit()) return NFElement::one(k);
  const mpq_class target = ideal.norm();
  const auto basis = lll_reduce(ideal.basis());
  const size_t d = basis.size();
  std::vector<std::vector<std::complex<long double>>> emb;
  for (const auto& b : basis) emb.push_back(approx_embeddings(b));
  const long double log_target = std::log(static_cast<long double>(target.get_d()));
  for (long s = 1; s <= search_bound; ++s) {
    std::vector<long> c(d, -s);
    while (true) {
      long mx = 0;
      for (long x : c) mx = std::max(mx, std::labs(x));
      if (mx == s) {
        long double lg = 0;
        for (size_t i = 0; i < d; ++i) {
          std::complex<long double> z = 0;
          for (size_t j = 0; j < d; ++j) z += static_cast<long double>(c[j]) * emb[j][i];
          lg += std::log(std::abs(z));
        }
        if (std::fabs(lg - log_target) < 1e-6L * (1 + std::fabs(log_target))) {
          NFElement x = NFElement::zero(k);
          for (size_t j = 0; j < d; ++j) x += basis[j] * mpq_class(c[j]);
          if (abs(x.norm()) == target) return x;
        }
      }
      size_t i = d;
      while (i-- > 0) {
        if (c[i] < s) {
          ++c[i];
          break;
        }
        c[i] = -s;
      }
      if (i == static_cast<size_t>(-1)) break;
    }
  }
  return std::nullopt;
}

NFElement principal_generator(const FractionalIdeal& ideal, const UnitSystem* units, long search_bound) {
  if (search_bound <= 0) throw Error(Errc::InvalidInput, "search bound must be positive");
  auto g = find_generator(ideal, search_bound);
  if (!g) throw Error(Errc::SearchExhausted, "no generator of " + ideal.to_string() + " within the search bound");
  if (units) return unit_reduce(*g, *units);
  return *g;
}

NFElement principal_generator(const PrimeIdeal& prime, const UnitSystem& units, long search_bound) {
  return principal_generator(prime.ideal, &units, search_bound);
}

SIntegerRing::SIntegerRing(FieldPtr field, std::vector<PrimeIdeal> primes) : field_(std::move(field)), s_(std::move(primes)) {
  for (const auto& p : s_) {
    if (p.field != field_) throw Error(Errc::InvalidInput, "S-prime from a different field");
  }
}

bool SIntegerRing::contains(const NFElement& x) const {
  if (x.is_zero() || x.is_integral()) return true;
  mpz_class s_part = 1;
  for (const auto& p : s_) {
    const long v = valuation(x, p);
    if (v < 0) {
      mpz_class t;
      mpz_pow_ui(t.get_mpz_t(), p.norm.get_mpz_t(), static_cast<unsigned long>(-v));
      s_part *= t;
    }
  }
  return denominator_ideal_norm(x) == s_part;
}

mpq_class SIntegerRing::s_norm(const NFElement& x) const {
  if (x.is_zero()) return 0;
  mpq_class n = abs(x.norm());
  for (const auto& p : s_) {
    const long v = valuation(x, p);
    mpz_class t;
    mpz_pow_ui(t.get_mpz_t(), p.norm.get_mpz_t(), static_cast<unsigned long>(std::labs(v)));
    if (v > 0) n /= mpq_class(t);
    else if (v < 0) n *= mpq_class(t);
  }
  return n;
}

mpq_class SIntegerRing::s_norm(const FractionalIdeal& ideal) const {
  mpq_class n = ideal.norm();
  for (const auto& p : s_) {
    const long v = valuation(ideal, p);
    mpz_class t;
    mpz_pow_ui(t.get_mpz_t(), p.norm.get_mpz_t(), static_cast<unsigned long>(std::labs(v)));
    if (v > 0) n /= mpq_class(t);
    else if (v < 0) n *= mpq_class(t);
  }
  return n;
}

bool SIntegerRing::is_unit(const NFElement& x) const { return !x.is_zero() && contains(x) && s_norm(x) == 1; }

bool SIntegerRing::in_s(const PrimeIdeal& prime) const {
  return std::any_of(s_.begin(), s_.end(), [&](const PrimeIdeal& q) { return q == prime; });
}

std::optional<PrimeIdeal> SIntegerRing::prime_of(const NFElement& x) const {
  if (x.is_zero() || !contains(x)) return std::nullopt;
  const mpq_class n = s_norm(x);
  if (n.get_den() != 1 || n <= 1) return std::nullopt;
  const mpz_class nz = n.get_num();
  for (int f = 1; f <= field_->degree(); ++f) {
    mpz_class root;
    if (!mpz_root(root.get_mpz_t(), nz.get_mpz_t(), static_cast<unsigned long>(f))) continue;
    if (!mpz_fits_ulong_p(root.get_mpz_t()) || root.get_ui() >= (1UL << 62) || !is_prime_u64(root.get_ui())) continue;
    std::vector<PrimeIdeal> ps;
    try {
      ps = primes_above(field_, root);
    } catch (const Error& e) {
      if (e.code() == Errc::IndexDivisor) return std::nullopt;
      throw;
    }
    for (const auto& q : ps) {
      if (q.f == f && !in_s(q) && valuation(x, q) == 1) return q;
    }
    return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace nfcf
