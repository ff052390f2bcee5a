#include "nfcf/number_field.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cctype>
#include <complex>
#include <numeric>
#include <sstream>

#include "nfcf/error.hpp"

namespace nfcf {

namespace {

struct QComplex {
  mpq_class re, im;
};

QComplex cmul(const QComplex& a, const QComplex& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

std::pair<QComplex, QComplex> eval_with_derivative(const QPoly& f, const QComplex& z) {
  QComplex v{0, 0}, dv{0, 0};
  for (int i = f.degree(); i >= 0; --i) {
    dv = cmul(dv, z);
    dv.re += v.re;
    dv.im += v.im;
    v = cmul(v, z);
    v.re += f.coeff(i);
  }
  return {v, dv};
}

mpq_class truncate_dyadic(const mpq_class& q, long bits) {
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 2, static_cast<unsigned long>(bits));
  mpq_class t = q * scale + mpq_class(1, 2);
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), t.get_num_mpz_t(), t.get_den_mpz_t());
  mpq_class out(fl, scale);
  out.canonicalize();
  return out;
}

mpq_class pow2(long e) {
  mpz_class s;
  mpz_ui_pow_ui(s.get_mpz_t(), 2, static_cast<unsigned long>(e < 0 ? -e : e));
  return e >= 0 ? mpq_class(s) : mpq_class(mpz_class(1), s);
}

// Power of two ≥ max(1, |q|).
mpq_class magnitude_scale(const mpq_class& q) {
  mpq_class a = abs(q);
  mpq_class s = 1;
  while (s < a) s *= 2;
  return s;
}

mpq_class sqrt_upper(const mpq_class& q) {
  mpfr_t t;
  mpfr_init2(t, 64);
  mpfr_set_q(t, q.get_mpq_t(), MPFR_RNDU);
  mpfr_sqrt(t, t, MPFR_RNDU);
  mpq_class out;
  mpfr_get_q(out.get_mpq_t(), t);
  mpfr_clear(t);
  return out;
}

}  // namespace

FieldPtr NumberField::create(const QPoly& min_poly, std::optional<QMat> integral_basis,
                             std::optional<mpz_class> field_disc) {
  const int d = min_poly.degree();
  if (d < 1 || d > 8) throw Error(Errc::InvalidInput, "minimal polynomial degree must be in 1..8");
  if (min_poly.lead() != 1 || !min_poly.is_integral()) {
    throw Error(Errc::InvalidInput, "minimal polynomial must be monic with integer coefficients");
  }
  if (!is_irreducible_over_q(min_poly)) throw Error(Errc::NotIrreducible, min_poly.to_string() + " is reducible over Q");

  std::shared_ptr<NumberField> k(new NumberField());
  k->f_ = min_poly;
  k->d_ = d;
  k->poly_disc_ = discriminant(min_poly);
  k->r1_ = count_real_roots(min_poly);
  k->r2_ = (d - k->r1_) / 2;

  if (integral_basis) {
    const QMat& b = *integral_basis;
    if (b.size() != static_cast<size_t>(d)) throw Error(Errc::InvalidInput, "integral basis must be d×d");
    for (const auto& row : b) {
      if (row.size() != static_cast<size_t>(d)) throw Error(Errc::InvalidInput, "integral basis must be d×d");
    }
    for (int j = 0; j < d; ++j) {
      if (b[0][static_cast<size_t>(j)] != (j == 0 ? 1 : 0)) {
        throw Error(Errc::InvalidInput, "first integral basis element must be 1");
      }
    }
    const mpq_class det_b = det(b);
    if (det_b == 0) throw Error(Errc::InvalidInput, "integral basis is singular");
    const mpq_class index_q = 1 / abs(det_b);
    if (index_q.get_den() != 1) throw Error(Errc::InvalidInput, "integral basis does not contain Z[alpha]");
    const mpz_class index = index_q.get_num();
    k->basis_ = b;
    k->basis_inv_ = inverse(b);
    k->power_basis_ = (index == 1);
    const mpq_class expected = k->poly_disc_ / mpq_class(index * index);
    if (expected.get_den() != 1) throw Error(Errc::DiscMismatch, "disc(f) is not divisible by index^2");
    if (field_disc && mpq_class(*field_disc) != expected) {
      throw Error(Errc::DiscMismatch, "disc(f) = " + k->poly_disc_.get_str() + " but field_disc·index² = " +
                                          mpq_class(mpq_class(*field_disc) * mpq_class(index * index)).get_str());
    }
    k->disc_ = expected.get_num();
  } else {
    k->basis_.assign(static_cast<size_t>(d), QVec(static_cast<size_t>(d), 0));
    for (int i = 0; i < d; ++i) k->basis_[static_cast<size_t>(i)][static_cast<size_t>(i)] = 1;
    k->basis_inv_ = k->basis_;
    if (field_disc && mpq_class(*field_disc) != k->poly_disc_) {
      throw Error(Errc::DiscMismatch,
                  "disc(f) = " + k->poly_disc_.get_str() + " differs from field_disc = " + field_disc->get_str());
    }
    k->disc_ = k->poly_disc_.get_num();
  }

  // x^k reductions for d ≤ k ≤ 2d−2.
  QVec cur(static_cast<size_t>(d), 0);
  for (int i = 0; i < d; ++i) cur[static_cast<size_t>(i)] = -min_poly.coeff(i);
  k->reduce_.push_back(cur);
  for (int e = d + 1; e <= 2 * d - 2; ++e) {
    QVec next(static_cast<size_t>(d), 0);
    const mpq_class top = cur[static_cast<size_t>(d - 1)];
    for (int i = d - 1; i >= 1; --i) next[static_cast<size_t>(i)] = cur[static_cast<size_t>(i - 1)];
    for (int i = 0; i < d; ++i) next[static_cast<size_t>(i)] += top * k->reduce_[0][static_cast<size_t>(i)];
    k->reduce_.push_back(next);
    cur = std::move(next);
  }

  // Newton identities for the power sums of the roots.
  std::vector<mpq_class> s(static_cast<size_t>(d), 0);
  s[0] = d;
  for (int kk = 1; kk < d; ++kk) {
    mpq_class acc = mpq_class(kk) * min_poly.coeff(d - kk);
    for (int i = 1; i < kk; ++i) acc += min_poly.coeff(d - i) * s[static_cast<size_t>(kk - i)];
    s[static_cast<size_t>(kk)] = -acc;
  }
  k->power_traces_ = std::move(s);

  if (!k->power_basis_) {
    // The supplied basis must span a ring: ω_i·ω_j stays in the lattice.
    const FieldPtr probe = k;
    for (int i = 0; i < d; ++i) {
      for (int j = i; j < d; ++j) {
        NFElement prod = NFElement(probe, k->basis_[static_cast<size_t>(i)]) * NFElement(probe, k->basis_[static_cast<size_t>(j)]);
        if (!prod.is_integral()) throw Error(Errc::InvalidInput, "integral basis is not closed under multiplication");
      }
    }
  }
  return k;
}

std::vector<NumberField::Approx> NumberField::isolate(long target_bits) const {
  const int d = d_;
  std::vector<Approx> out;
  if (d == 1) {
    out.push_back({-f_.coeff(0), 0, 0, true});
    return out;
  }
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(d, d);
  for (int i = 1; i < d; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) comp(i, d - 1) = -f_.coeff(i).get_d();
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  std::vector<std::complex<double>> guesses;
  for (int i = 0; i < d; ++i) guesses.push_back(es.eigenvalues()[i]);
  std::sort(guesses.begin(), guesses.end(),
            [](const auto& a, const auto& b) { return std::abs(a.imag()) < std::abs(b.imag()); });
  std::vector<QComplex> starts;
  for (int i = 0; i < r1_; ++i) starts.push_back({mpq_class(guesses[static_cast<size_t>(i)].real()), 0});
  std::vector<std::complex<double>> upper;
  for (size_t i = static_cast<size_t>(r1_); i < guesses.size(); ++i) {
    if (guesses[i].imag() > 0) upper.push_back(guesses[i]);
  }
  if (static_cast<int>(upper.size()) != r2_) {
    // Conjugate split failed numerically; take the r2 largest imaginary parts.
    upper.clear();
    std::vector<std::complex<double>> rest(guesses.begin() + r1_, guesses.end());
    std::sort(rest.begin(), rest.end(), [](const auto& a, const auto& b) { return a.imag() > b.imag(); });
    for (int i = 0; i < r2_; ++i) upper.push_back({rest[static_cast<size_t>(i)].real(), std::abs(rest[static_cast<size_t>(i)].imag())});
  }
  for (const auto& g : upper) starts.push_back({mpq_class(g.real()), mpq_class(g.imag())});

  const QPoly df = f_.derivative();
  for (long work = target_bits + 32; work <= 16 * (target_bits + 64); work *= 2) {
    out.clear();
    bool ok = true;
    for (size_t idx = 0; idx < starts.size() && ok; ++idx) {
      const bool real = static_cast<int>(idx) < r1_;
      QComplex z = starts[idx];
      for (int it = 0; it < 400; ++it) {
        auto [v, dv] = eval_with_derivative(f_, z);
        const mpq_class den = dv.re * dv.re + dv.im * dv.im;
        if (den == 0) break;
        // z ← z − v/dv
        QComplex q{(v.re * dv.re + v.im * dv.im) / den, (v.im * dv.re - v.re * dv.im) / den};
        QComplex nz{truncate_dyadic(z.re - q.re, work), real ? mpq_class(0) : truncate_dyadic(z.im - q.im, work)};
        const bool same = nz.re == z.re && nz.im == z.im;
        z = std::move(nz);
        if (same) break;
      }
      const mpq_class scale = magnitude_scale(abs(z.re) + abs(z.im));
      const mpq_class target = pow2(-(target_bits + 8)) * scale;
      if (real) {
        const mpq_class lo = z.re - target, hi = z.re + target;
        if (sgn(f_.eval(lo)) * sgn(f_.eval(hi)) >= 0) {
          ok = false;
          break;
        }
        out.push_back({z.re, 0, target, true});
      } else {
        auto [v, dv] = eval_with_derivative(f_, z);
        const mpq_class dn = dv.re * dv.re + dv.im * dv.im;
        if (dn == 0) {
          ok = false;
          break;
        }
        const mpq_class r2 = mpq_class(d * d) * (v.re * v.re + v.im * v.im) / dn;
        mpq_class radius = sqrt_upper(r2);
        if (radius == 0) radius = pow2(-(work + 8)) * scale;
        if (radius > target || z.im * z.im <= radius * radius || z.im <= 0) {
          ok = false;
          break;
        }
        out.push_back({z.re, z.im, radius, false});
      }
    }
    if (!ok) continue;
    // Disjointness of the real intervals and of the upper-half-plane discs.
    std::vector<Approx> reals(out.begin(), out.begin() + r1_);
    std::vector<Approx> cplx(out.begin() + r1_, out.end());
    std::sort(reals.begin(), reals.end(), [](const Approx& a, const Approx& b) { return a.re < b.re; });
    for (size_t i = 1; i < reals.size() && ok; ++i) {
      if (reals[i - 1].re + reals[i - 1].radius >= reals[i].re - reals[i].radius) ok = false;
    }
    for (size_t i = 0; i < cplx.size() && ok; ++i) {
      for (size_t j = i + 1; j < cplx.size() && ok; ++j) {
        const mpq_class dr = cplx[i].re - cplx[j].re, di = cplx[i].im - cplx[j].im;
        const mpq_class rr = cplx[i].radius + cplx[j].radius;
        if (dr * dr + di * di <= rr * rr) ok = false;
      }
    }
    if (!ok) continue;
    std::sort(cplx.begin(), cplx.end(), [](const Approx& a, const Approx& b) {
      if (a.re != b.re) return a.re < b.re;
      return a.im < b.im;
    });
    out = reals;
    for (const auto& c : cplx) {
      out.push_back(c);
      out.push_back({c.re, -c.im, c.radius, false});
    }
    return out;
  }
  throw Error(Errc::CertificationFailed, "root isolation failed for " + f_.to_string());
}

std::vector<ComplexInterval> NumberField::roots(long prec) const {
  std::lock_guard<std::mutex> lock(cache_mu_);
  auto it = root_cache_.find(prec);
  if (it != root_cache_.end()) return it->second;
  const long mp = prec + 32;
  std::vector<ComplexInterval> out;
  for (const auto& a : isolate(prec)) {
    if (a.real) {
      out.emplace_back(Interval::from_bounds(a.re - a.radius, a.re + a.radius, mp), Interval(mp));
    } else {
      out.emplace_back(Interval::from_bounds(a.re - a.radius, a.re + a.radius, mp),
                       Interval::from_bounds(a.im - a.radius, a.im + a.radius, mp));
    }
  }
  root_cache_.emplace(prec, out);
  return out;
}

int NumberField::place_of_embedding(int i) const {
  if (i < r1_) return i;
  return r1_ + (i - r1_) / 2;
}

// ---------------------------------------------------------------- NFElement

NFElement::NFElement(FieldPtr field, QVec coords) : field_(std::move(field)), c_(std::move(coords)) {
  const size_t d = static_cast<size_t>(field_->degree());
  if (c_.size() > d) throw Error(Errc::InvalidInput, "too many coordinates for the field degree");
  c_.resize(d, 0);
  for (auto& x : c_) x.canonicalize();
}

NFElement NFElement::zero(const FieldPtr& field) { return NFElement(field, QVec(static_cast<size_t>(field->degree()), 0)); }

NFElement NFElement::one(const FieldPtr& field) { return rational(field, 1); }

NFElement NFElement::rational(const FieldPtr& field, const mpq_class& value) {
  QVec c(static_cast<size_t>(field->degree()), 0);
  c[0] = value;
  return NFElement(field, std::move(c));
}

NFElement NFElement::generator(const FieldPtr& field) {
  if (field->degree() == 1) return rational(field, -field->min_poly().coeff(0));
  QVec c(static_cast<size_t>(field->degree()), 0);
  c[1] = 1;
  return NFElement(field, std::move(c));
}

NFElement NFElement::from_ib(const FieldPtr& field, const QVec& ib) {
  if (field->power_basis()) return NFElement(field, ib);
  return NFElement(field, mul(ib, field->integral_basis()));
}

bool NFElement::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](const mpq_class& q) { return q == 0; });
}

bool NFElement::is_one() const { return is_rational() && c_[0] == 1; }

bool NFElement::is_rational() const {
  return std::all_of(c_.begin() + 1, c_.end(), [](const mpq_class& q) { return q == 0; });
}

NFElement NFElement::operator-() const {
  NFElement r = *this;
  for (auto& x : r.c_) x = -x;
  return r;
}

NFElement& NFElement::operator+=(const NFElement& rhs) {
  for (size_t i = 0; i < c_.size(); ++i) c_[i] += rhs.c_[i];
  return *this;
}

NFElement& NFElement::operator-=(const NFElement& rhs) {
  for (size_t i = 0; i < c_.size(); ++i) c_[i] -= rhs.c_[i];
  return *this;
}

NFElement& NFElement::operator*=(const mpq_class& s) {
  for (auto& x : c_) x *= s;
  return *this;
}

NFElement& NFElement::operator*=(const NFElement& rhs) {
  const size_t d = c_.size();
  if (d == 1) {
    c_[0] *= rhs.c_[0];
    return *this;
  }
  std::vector<mpq_class> prod(2 * d - 1, 0);
  for (size_t i = 0; i < d; ++i) {
    if (c_[i] == 0) continue;
    for (size_t j = 0; j < d; ++j) {
      if (rhs.c_[j] == 0) continue;
      prod[i + j] += c_[i] * rhs.c_[j];
    }
  }
  QVec out(prod.begin(), prod.begin() + static_cast<std::ptrdiff_t>(d));
  const auto& red = field_->reduction_table();
  for (size_t k = d; k < prod.size(); ++k) {
    if (prod[k] == 0) continue;
    const QVec& r = red[k - d];
    for (size_t i = 0; i < d; ++i) out[i] += prod[k] * r[i];
  }
  c_ = std::move(out);
  return *this;
}

NFElement NFElement::inverse() const {
  if (is_zero()) throw Error(Errc::DivideByZero, "inverse of zero in K");
  if (is_rational()) return rational(field_, 1 / c_[0]);
  QXgcd g = xgcd(as_poly(), field_->min_poly());
  if (g.g.degree() != 0) throw Error(Errc::DivideByZero, "element not invertible (reducible modulus?)");
  QVec c(c_.size(), 0);
  for (int i = 0; i <= g.s.degree(); ++i) c[static_cast<size_t>(i)] = g.s.coeff(i);
  return NFElement(field_, std::move(c));
}

NFElement NFElement::pow(long e) const {
  if (e < 0) return inverse().pow(-e);
  NFElement result = one(field_);
  NFElement base = *this;
  while (e > 0) {
    if (e & 1) result *= base;
    e >>= 1;
    if (e) base *= base;
  }
  return result;
}

mpq_class NFElement::norm() const {
  if (is_rational()) {
    mpq_class r = 1;
    for (size_t i = 0; i < c_.size(); ++i) r *= c_[0];
    return r;
  }
  return resultant(field_->min_poly(), as_poly());
}

mpq_class NFElement::trace() const {
  mpq_class t = 0;
  const auto& s = field_->power_traces();
  for (size_t i = 0; i < c_.size(); ++i) t += c_[i] * s[i];
  return t;
}

QVec NFElement::ib_coords() const {
  if (field_->power_basis()) return c_;
  return mul(c_, field_->integral_basis_inv());
}

bool NFElement::is_integral() const {
  for (const auto& q : ib_coords()) {
    if (q.get_den() != 1) return false;
  }
  return true;
}

mpz_class NFElement::denominator() const {
  mpz_class m = 1;
  for (const auto& q : ib_coords()) mpz_lcm(m.get_mpz_t(), m.get_mpz_t(), q.get_den_mpz_t());
  return m;
}

ComplexInterval NFElement::embed(int i, long prec) const {
  const auto roots = field_->roots(prec);
  const ComplexInterval& z = roots.at(static_cast<size_t>(i));
  const long mp = z.precision();
  ComplexInterval acc(Interval(c_.back(), mp), Interval(mp));
  for (size_t k = c_.size() - 1; k-- > 0;) {
    acc = acc * z;
    acc.re += Interval(c_[k], mp);
  }
  return acc;
}

std::vector<ComplexInterval> NFElement::embeddings(long prec) const {
  std::vector<ComplexInterval> out;
  out.reserve(c_.size());
  for (int i = 0; i < static_cast<int>(c_.size()); ++i) out.push_back(embed(i, prec));
  return out;
}

std::vector<double> NFElement::abs_embeddings_double() const {
  std::vector<double> out;
  for (const auto& e : embeddings(64)) out.push_back(e.abs().mid_double());
  return out;
}

QPoly NFElement::as_poly() const { return QPoly(c_); }

std::string NFElement::to_string(const std::string& var) const { return as_poly().to_string(var); }

std::string NFElement::key() const {
  std::string out;
  for (size_t i = 0; i < c_.size(); ++i) {
    if (i) out += ',';
    out += c_[i].get_str();
  }
  return out;
}

QMat multiplication_matrix(const NFElement& x) {
  const FieldPtr& k = x.field();
  const size_t d = static_cast<size_t>(k->degree());
  QMat out;
  out.reserve(d);
  for (size_t j = 0; j < d; ++j) out.push_back((x * NFElement(k, k->integral_basis()[j])).ib_coords());
  return out;
}

mpz_class denominator_ideal_norm(const NFElement& x) {
  if (x.is_zero()) return 1;
  const mpz_class m = x.denominator();
  if (m == 1) return 1;
  const size_t d = static_cast<size_t>(x.field()->degree());
  if (d == 1) return m;
  const NFElement y = x * mpq_class(m);
  ZMat rows;
  for (const auto& r : multiplication_matrix(y)) {
    ZVec z;
    for (const auto& q : r) z.push_back(q.get_num());
    rows.push_back(std::move(z));
  }
  for (size_t i = 0; i < d; ++i) {
    ZVec z(d, 0);
    z[i] = m;
    rows.push_back(std::move(z));
  }
  const ZMat h = hnf_square(rows, d);
  mpz_class n_sum = 1;
  for (size_t i = 0; i < d; ++i) n_sum *= h[i][i];
  mpz_class md;
  mpz_pow_ui(md.get_mpz_t(), m.get_mpz_t(), static_cast<unsigned long>(d));
  return md / n_sum;
}

HeightPower weil_height_pow(const NFElement& x, long prec) {
  HeightPower h{denominator_ideal_norm(x), Interval(1L, prec + 32)};
  if (x.is_zero()) return h;
  const Interval one(1L, prec + 32);
  for (const auto& e : x.embeddings(prec)) h.archimedean *= Interval::max(one, e.abs());
  return h;
}

Interval weil_height(const NFElement& x, long prec) {
  return weil_height_pow(x, prec).value().root(static_cast<unsigned long>(x.field()->degree()));
}

namespace {

mpq_class parse_rational(const std::string& s) {
  if (s.empty()) throw Error(Errc::InvalidInput, "empty rational");
  try {
    mpq_class q(s, 10);
    if (q.get_den() == 0) throw Error(Errc::ZeroDenominator, "zero denominator in '" + s + "'");
    q.canonicalize();
    return q;
  } catch (const std::invalid_argument&) {
    throw Error(Errc::InvalidInput, "cannot parse rational '" + s + "'");
  }
}

}  // namespace

NFElement parse_element(const FieldPtr& field, const std::string& text) {
  std::string s;
  for (char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  }
  if (s.empty()) throw Error(Errc::InvalidInput, "empty element");
  const size_t d = static_cast<size_t>(field->degree());
  if (s.front() == '[') {
    if (s.back() != ']') throw Error(Errc::InvalidInput, "unterminated coordinate list");
    QVec c;
    std::string body = s.substr(1, s.size() - 2);
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) c.push_back(parse_rational(item));
    if (c.size() > d) throw Error(Errc::InvalidInput, "too many coordinates");
    return NFElement(field, std::move(c));
  }
  // Polynomial text: terms like -12x^2, 6*x, 1/5, x.
  QVec c(d, 0);
  size_t pos = 0;
  bool any = false;
  while (pos < s.size()) {
    int sign = 1;
    if (s[pos] == '+' || s[pos] == '-') {
      sign = s[pos] == '-' ? -1 : 1;
      ++pos;
    } else if (any) {
      throw Error(Errc::InvalidInput, "cannot parse element '" + text + "'");
    }
    size_t start = pos;
    while (pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '/')) ++pos;
    mpq_class coef = pos > start ? parse_rational(s.substr(start, pos - start)) : mpq_class(1);
    if (pos < s.size() && s[pos] == '*') ++pos;
    long exp = 0;
    if (pos < s.size() && std::isalpha(static_cast<unsigned char>(s[pos]))) {
      ++pos;
      exp = 1;
      if (pos < s.size() && s[pos] == '^') {
        ++pos;
        size_t es = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == es) throw Error(Errc::InvalidInput, "missing exponent in '" + text + "'");
        exp = std::stol(s.substr(es, pos - es));
      }
    } else if (pos == start) {
      throw Error(Errc::InvalidInput, "cannot parse element '" + text + "'");
    }
    NFElement term = NFElement::generator(field).pow(exp) * (coef * sign);
    for (size_t i = 0; i < d; ++i) c[i] += term.coords()[i];
    any = true;
  }
  return NFElement(field, std::move(c));
}

}  // namespace nfcf
