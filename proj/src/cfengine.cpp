#include "nfcf/cfengine.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <unordered_map>

#include "nfcf/error.hpp"
#include "nfcf/geometry.hpp"

namespace nfcf {

namespace {

long vp_rational(const mpq_class& q, const mpz_class& p) {
  long v = 0;
  mpz_class n = abs(q.get_num()), d = q.get_den();
  while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
    n /= p;
    ++v;
  }
  while (mpz_divisible_p(d.get_mpz_t(), p.get_mpz_t())) {
    d /= p;
    --v;
  }
  return v;
}

mpz_class ipow(const mpz_class& b, long e) {
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), static_cast<unsigned long>(e));
  return r;
}

mpz_class round_half_up(const mpq_class& q) {
  const mpq_class t = q + mpq_class(1, 2);
  mpz_class r;
  mpz_fdiv_q(r.get_mpz_t(), t.get_num_mpz_t(), t.get_den_mpz_t());
  return r;
}

// Offsets with max |o_i| == r, lexicographic.
std::vector<std::vector<long>> shell(size_t dim, long r) {
  std::vector<std::vector<long>> out;
  std::vector<long> o(dim, -r);
  while (true) {
    long mx = 0;
    for (long x : o) mx = std::max(mx, std::labs(x));
    if (mx == r) out.push_back(o);
    size_t i = dim;
    while (i-- > 0) {
      if (o[i] < r) {
        ++o[i];
        break;
      }
      o[i] = -r;
    }
    if (i == static_cast<size_t>(-1)) break;
  }
  return out;
}

// N(𝔡(x)) with the 𝔓-part removed.
mpz_class denominator_away(const NFElement& x, const PrimeIdeal& prime) {
  if (x.is_zero()) return 1;
  mpz_class n = denominator_ideal_norm(x);
  const long v = valuation(x, prime);
  if (v < 0) n /= ipow(prime.norm, -v);
  return n;
}

}  // namespace

BrowkinFloor::BrowkinFloor(FieldPtr rationals, mpz_class p) : field_(std::move(rationals)), p_(std::move(p)) {
  if (field_->degree() != 1) throw Error(Errc::InvalidInput, "the Browkin floor is defined over Q only");
  if (p_ == 2) throw Error(Errc::EvenPrime, "the Browkin floor needs an odd prime");
  if (p_ < 3 || mpz_probab_prime_p(p_.get_mpz_t(), 30) == 0) throw Error(Errc::InvalidInput, "p must be an odd prime");
}

NFElement BrowkinFloor::operator()(const NFElement& eta) const {
  const mpq_class& x = eta.rational_value();
  if (x == 0) return NFElement::zero(field_);
  const long k = std::max(0L, -vp_rational(x, p_));
  const mpz_class pk = ipow(p_, k);
  const mpz_class mod = pk * p_;
  const mpq_class y = x * mpq_class(pk);
  mpz_class inv;
  mpz_invert(inv.get_mpz_t(), y.get_den_mpz_t(), mod.get_mpz_t());
  mpz_class r = (y.get_num() * inv) % mod;
  if (r < 0) r += mod;
  if (2 * r > mod) r -= mod;
  mpq_class s(r, pk);
  s.canonicalize();
  return NFElement::rational(field_, s);
}

RepresentativeFloor::RepresentativeFloor(PrimeIdeal prime, RepresentativeParams params)
    : prime_(std::move(prime)), params_(std::move(params)) {
  const FieldPtr& k = prime_.field;
  if (params_.M < 2) throw Error(Errc::InvalidInput, "M must be at least 2");
  if (!params_.epsilon.certainly_positive()) throw Error(Errc::InvalidInput, "epsilon must be positive");
  const FractionalIdeal lattice = params_.lattice ? *params_.lattice : FractionalIdeal::unit(k);
  if (!lattice.is_integral()) throw Error(Errc::InvalidInput, "the tau lattice must be an integral ideal");
  principal_ = lattice.is_unit();
  if (FractionalIdeal::principal(params_.gamma) * lattice != prime_.ideal) {
    throw Error(Errc::InvalidInput, "gamma times the lattice must equal the prime");
  }
  basis_ = lll_reduce(lattice.basis());
  QMat b;
  for (const auto& x : basis_) b.push_back(x.ib_coords());
  basis_inv_ = inverse(b);
  eps_hint_ = params_.epsilon.hi_double();
}

RepresentativeFloor::Choice RepresentativeFloor::choose(const NFElement& eta) const {
  const FieldPtr& k = prime_.field;
  if (eta.is_zero()) return {eta, 1, NFElement::zero(k)};
  const NFElement lift = principal_ ? canonical_lift(eta, prime_, params_.gamma) : canonical_lift(eta, prime_);
  const NFElement xi = lift / params_.gamma;
  const size_t d = basis_.size();
  std::vector<std::vector<std::complex<long double>>> bemb;
  for (const auto& b : basis_) bemb.push_back(approx_embeddings(b));
  std::vector<std::vector<std::vector<long>>> shells;
  for (long r = 0; r <= params_.radius; ++r) shells.push_back(shell(d, r));

  double best = 1e300;
  const long m = params_.M.get_si();
  for (long j = 1; j < m; ++j) {
    // j ∈ 𝔓 would break η − s(η) ∈ 𝔓
    if (mpz_class(j) % prime_.p == 0) continue;
    const NFElement t = xi * mpq_class(j);
    const QVec c = mul(t.ib_coords(), basis_inv_);
    std::vector<mpz_class> base;
    for (const auto& x : c) base.push_back(round_half_up(x));
    // residual target − Σ base_i b_i, in floating point
    NFElement rounded = NFElement::zero(k);
    for (size_t i = 0; i < d; ++i) rounded += basis_[i] * mpq_class(base[i]);
    const auto remb = approx_embeddings(t - rounded);
    for (const auto& sh : shells) {
      for (const auto& off : sh) {
        double sup = 0;
        for (size_t s = 0; s < remb.size(); ++s) {
          std::complex<long double> z = remb[s];
          for (size_t i = 0; i < d; ++i) z -= static_cast<long double>(off[i]) * bemb[i][s];
          sup = std::max(sup, static_cast<double>(std::abs(z)));
        }
        best = std::min(best, sup);
        if (sup > eps_hint_ * (1 + 1e-9) + 1e-12) continue;
        NFElement tau = rounded;
        for (size_t i = 0; i < d; ++i) {
          if (off[i] != 0) tau += basis_[i] * mpq_class(off[i]);
        }
        bool ok = true;
        for (const auto& z : (t - tau).embeddings(params_.epsilon.precision())) {
          if (!z.abs().certainly_lt(params_.epsilon)) {
            ok = false;
            break;
          }
        }
        if (!ok) continue;
        return {lift - params_.gamma * tau * mpq_class(1, j), j, tau};
      }
    }
  }
  std::ostringstream msg;
  msg << "no (j, tau) certified below epsilon = " << params_.epsilon.lo_string(8) << "; best sup found " << best;
  throw Error(Errc::SearchExhausted, msg.str());
}

TypeSpec browkin_type(const FieldPtr& rationals, const mpz_class& p) {
  TypeSpec t;
  t.field = rationals;
  t.floor = std::make_shared<BrowkinFloor>(rationals, p);
  t.prime = primes_above(rationals, p).at(0);
  t.denom_set = {NFElement::one(rationals)};
  return t;
}

TypeSpec browkin_type(const mpz_class& p) { return browkin_type(NumberField::create(QPoly::from_ints({0, 1})), p); }

TypeSpec representative_type(const PrimeIdeal& prime, RepresentativeParams params, const std::optional<Interval>& c_mk,
                             const std::optional<Interval>& t0) {
  TypeSpec t;
  t.field = prime.field;
  t.prime = prime;
  const long m = params.M.get_si();
  for (long i = 1; i <= m; ++i) t.denom_set.push_back(NFElement::rational(prime.field, i));
  if (prime.p <= params.M) t.warnings.push_back("the denominator set meets the prime " + prime.to_string());
  if (c_mk) {
    const Interval q(prime.norm, c_mk->precision());
    if (!q.certainly_gt(*c_mk)) {
      t.warnings.push_back("N(P) = " + prime.norm.get_str() + " is not above c(M,K) = " + c_mk->hi_string(10));
    } else if (t0) {
      t.nu_bound = epsilon_prime(prime.norm, params.M, prime.field->degree(), params.epsilon, *t0);
    }
  }
  t.floor = std::make_shared<RepresentativeFloor>(prime, std::move(params));
  return t;
}

TypeSpec representative_type(const UnitSystem& units, const PrimeIdeal& prime, const ConstantsReport& constants) {
  RepresentativeParams params;
  params.gamma = principal_generator(prime, units);
  params.M = constants.M;
  params.epsilon = constants.epsilon;
  return representative_type(prime, std::move(params), constants.c_mk, constants.t0);
}

mpz_class nu_finite_factor(const NFElement& a, const PrimeIdeal& prime) { return denominator_away(a, prime); }

Interval nu_term(const NFElement& a, const PrimeIdeal& prime, long prec) {
  if (a.is_zero()) throw Error(Errc::NotAdmissible, "nu of 0");
  const long v = valuation(a, prime);
  if (v >= 0) throw Error(Errc::NotAdmissible, "nu needs negative valuation at the prime, got " + std::to_string(v));
  const mpz_class big = ipow(prime.norm, -v);
  Interval r(mpq_class(denominator_away(a, prime), big), prec);
  for (const auto& z : a.embeddings(prec)) r *= theta(z);
  return r;
}

std::string to_string(CFStatus s) {
  switch (s) {
    case CFStatus::Finite: return "Finite";
    case CFStatus::Periodic: return "Periodic";
    case CFStatus::Truncated: return "Truncated";
  }
  return "?";
}

CFExpansion expand(const NFElement& alpha, const TypeSpec& type, std::optional<size_t> cap, long prec) {
  if (alpha.field() != type.field) throw Error(Errc::InvalidInput, "element from a different field");
  const auto& floor = *type.floor;
  CFExpansion e;
  e.alpha = alpha;
  const NFElement a0 = floor(alpha);
  e.height_constant = height_constant(alpha, a0, type.prime, prec);
  e.c_alpha = c_alpha(alpha, a0, type.prime);
  if (cap) {
    e.cap = *cap;
  } else {
    e.cap = e.c_alpha < static_cast<unsigned long>(kHardCap) ? e.c_alpha.get_ui() : kHardCap;
  }
  e.V.push_back(NFElement::one(type.field));
  std::unordered_map<std::string, size_t> seen;
  seen.emplace(alpha.key(), 0);
  NFElement cur = alpha;
  for (size_t n = 0;; ++n) {
    if (n >= e.cap) {
      e.status = CFStatus::Truncated;
      break;
    }
    const NFElement a = n == 0 ? a0 : floor(cur);
    LedgerEntry entry;
    entry.height = weil_height_pow(cur, prec);
    entry.valuation = cur.is_zero() ? 0 : valuation(cur, type.prime);
    if (n >= 1 && !a.is_zero() && valuation(a, type.prime) < 0) entry.nu = nu_term(a, type.prime, prec);
    e.complete.push_back(cur);
    e.quotients.push_back(a);
    e.ledger.push_back(std::move(entry));
    if (n == 0) {
      e.V.push_back(a - alpha);
    } else {
      const size_t s = e.V.size();
      e.V.push_back(a * e.V[s - 1] + e.V[s - 2]);
    }
    if (cur == a) {
      e.status = CFStatus::Finite;
      break;
    }
    NFElement next = (cur - a).inverse();
    const auto [it, fresh] = seen.emplace(next.key(), n + 1);
    if (!fresh) {
      e.status = CFStatus::Periodic;
      e.preperiod = it->second;
      e.period = n + 1 - it->second;
      break;
    }
    cur = std::move(next);
  }
  return e;
}

Continuants continuants(const std::vector<NFElement>& q) {
  if (q.empty()) throw Error(Errc::InvalidInput, "empty quotient list");
  const FieldPtr& k = q[0].field();
  Continuants c;
  c.A = {NFElement::one(k), q[0]};
  c.B = {NFElement::zero(k), NFElement::one(k)};
  for (size_t n = 1; n < q.size(); ++n) {
    c.A.push_back(q[n] * c.A[n] + c.A[n - 1]);
    c.B.push_back(q[n] * c.B[n] + c.B[n - 1]);
  }
  return c;
}

bool continuant_determinant_holds(const Continuants& c) {
  const FieldPtr& k = c.A[0].field();
  const NFElement one = NFElement::one(k), minus = NFElement::rational(k, -1);
  for (size_t i = 1; i < c.A.size(); ++i) {
    const NFElement det = c.A[i] * c.B[i - 1] - c.A[i - 1] * c.B[i];
    if (det != one && det != minus) return false;
  }
  return true;
}

NFElement evaluate_cf(const std::vector<NFElement>& quotients) {
  const Continuants c = continuants(quotients);
  if (c.B.back().is_zero()) throw Error(Errc::ZeroDenominator, "continued fraction has a zero denominator");
  return c.A.back() / c.B.back();
}

CheckReport check_expansion_invariants(const CFExpansion& e, const TypeSpec& type) {
  CheckReport r;
  auto check = [&](bool cond, const std::string& what) {
    ++r.checks;
    if (!cond) r.failures.push_back(what);
  };
  const size_t len = e.length();
  const auto& q = e.quotients;
  const auto& al = e.complete;
  for (size_t n = 0; n < len; ++n) {
    check((*type.floor)(al[n]) == q[n], "a_" + std::to_string(n) + " != s(alpha_" + std::to_string(n) + ")");
    if (n + 1 < len) check(al[n + 1] * (al[n] - q[n]) == NFElement::one(type.field), "complete quotient step " + std::to_string(n));
    if (n >= 1) check(!q[n].is_zero() && valuation(q[n], type.prime) < 0, "v(a_" + std::to_string(n) + ") >= 0");
  }
  check(e.V.size() == len + 1, "V length");
  if (e.V.size() >= 2) check(e.V[1] == q[0] - e.alpha, "V_0 = a_0 - alpha");
  for (size_t n = 1; n + 1 < e.V.size(); ++n) {
    check(e.V[n + 1] == q[n] * e.V[n] + e.V[n - 1], "V recurrence at " + std::to_string(n));
  }
  // α_{n+1} = −V_{n−1}/V_n, V_n = e.V[n + 1]
  for (size_t n = 0; n + 1 < len; ++n) {
    if (e.V[n + 1].is_zero()) {
      check(false, "V_" + std::to_string(n) + " vanishes early");
      continue;
    }
    check(al[n + 1] == -(e.V[n] / e.V[n + 1]), "alpha_{n+1} = -V_{n-1}/V_n at " + std::to_string(n));
  }
  long vsum = 0;
  for (size_t n = 1; n < len; ++n) {
    vsum += q[n].is_zero() ? 0 : valuation(q[n], type.prime);
    const NFElement& vn1 = e.V[n];  // V_{n−1}
    if (!vn1.is_zero()) check(valuation(vn1, type.prime) == -vsum, "|V_{n-1}| product at " + std::to_string(n));
  }
  if (e.status == CFStatus::Finite) {
    check(evaluate_cf(q) == e.alpha, "finite expansion does not evaluate to alpha");
    check(e.V.back().is_zero(), "last V is not zero");
  }
  if (e.status == CFStatus::Periodic) {
    check(e.preperiod + e.period == len, "period bookkeeping");
    check((al.back() - q.back()).inverse() == al[e.preperiod], "periodic replay");
  }
  check(continuant_determinant_holds(continuants(q)), "continuant determinant");
  return r;
}

HeightChainReport check_height_chain(const CFExpansion& e) {
  HeightChainReport r;
  const long prec = e.height_constant.precision();
  r.nu_bar = Interval(0L, prec);
  for (const auto& l : e.ledger) {
    if (l.nu) r.nu_bar = Interval::max(r.nu_bar, *l.nu);
  }
  Interval pw(1L, prec);
  for (size_t n = 0; n + 1 < e.ledger.size(); ++n) {
    if (n > 0) pw *= r.nu_bar;
    ++r.checked;
    if (!e.ledger[n + 1].height.value().certainly_le(e.height_constant * pw)) r.violations.push_back(n);
  }
  return r;
}

AxiomReport verify_floor_axioms(const TypeSpec& type, const std::vector<NFElement>& samples, std::mt19937_64& rng) {
  AxiomReport rep;
  const auto& s = *type.floor;
  const auto& pr = type.prime;
  const FieldPtr& k = type.field;
  auto note = [&](int axiom, size_t idx, const std::string& msg) {
    ++rep.failures[static_cast<size_t>(axiom)];
    if (rep.details.size() < 20) {
      rep.details.push_back("axiom " + std::to_string(axiom + 1) + " sample " + std::to_string(idx) + ": " + msg);
    }
  };
  if (!s(NFElement::zero(k)).is_zero()) note(2, 0, "s(0) != 0");
  std::uniform_int_distribution<long> coef(-9, 9), den(1, 12);
  for (size_t idx = 0; idx < samples.size(); ++idx) {
    const NFElement& eta = samples[idx];
    ++rep.samples;
    const NFElement out = s(eta);
    if (out != eta && valuation(eta - out, pr) < 1) note(0, idx, "v(eta - s(eta)) < 1");
    bool some = false;
    for (const auto& t : type.denom_set) {
      const NFElement x = t * out;
      if (x.is_zero() || denominator_away(x, pr) == 1) {
        some = true;
        break;
      }
    }
    if (!some) note(1, idx, "no t in T makes t*s(eta) integral away from P");
    QVec y;
    for (int i = 0; i < k->degree(); ++i) y.push_back(coef(rng));
    long c = den(rng);
    while (gcd(mpz_class(c), pr.p) != 1) c = den(rng);
    const NFElement delta = pr.gen2 * NFElement::from_ib(k, y) * mpq_class(1, c);
    if (!delta.is_zero() && s(eta + delta) != out) note(3, idx, "s changes inside the coset");
  }
  return rep;
}

bool TypeCriterionReport::ok() const {
  return nu_at_least_one == 0 && nu_above_bound == 0 && nu_finite_factor_violations == 0 && height_violations == 0 &&
         invariant_failures == 0;
}

TypeCriterionReport verify_type_criterion(const TypeSpec& type, const std::vector<NFElement>& samples,
                                          std::optional<size_t> cap) {
  TypeCriterionReport r;
  const Interval one(1L, kDefaultPrecision);
  mpz_class fin_cap = 0;
  for (const auto& t : type.denom_set) fin_cap = std::max(fin_cap, mpq_class(abs(t.norm())).get_num());
  for (const auto& alpha : samples) {
    const CFExpansion e = expand(alpha, type, cap);
    ++r.expansions;
    switch (e.status) {
      case CFStatus::Finite: ++r.finite; break;
      case CFStatus::Periodic: ++r.periodic; break;
      case CFStatus::Truncated: ++r.truncated; break;
    }
    for (size_t n = 1; n < e.length(); ++n) {
      const auto& nu = e.ledger[n].nu;
      if (!nu) continue;
      r.nu_sup = r.nu_sup ? Interval::max(*r.nu_sup, *nu) : *nu;
      if (!nu->certainly_lt(one)) ++r.nu_at_least_one;
      if (type.nu_bound && !nu->certainly_le(*type.nu_bound)) ++r.nu_above_bound;
      if (nu_finite_factor(e.quotients[n], type.prime) > fin_cap) ++r.nu_finite_factor_violations;
    }
    const auto hc = check_height_chain(e);
    r.height_violations += hc.violations.size();
    const auto inv = check_expansion_invariants(e, type);
    r.invariant_failures += inv.failures.size();
    if (!inv.ok() && r.details.size() < 20) r.details.push_back(alpha.to_string() + ": " + inv.failures.front());
  }
  return r;
}

std::vector<NFElement> sample_elements(const FieldPtr& field, const mpz_class& p, size_t count, std::mt19937_64& rng,
                                       long range, int max_pow) {
  std::uniform_int_distribution<long> num(-range, range), den(1, range);
  std::uniform_int_distribution<int> pw(0, max_pow);
  std::vector<NFElement> out;
  while (out.size() < count) {
    const mpq_class extra(1, ipow(p, pw(rng)));
    QVec c;
    for (int i = 0; i < field->degree(); ++i) {
      mpq_class x(num(rng), den(rng));
      x.canonicalize();
      c.push_back(x * extra);
    }
    NFElement x(field, c);
    if (!x.is_zero()) out.push_back(std::move(x));
  }
  return out;
}

}  // namespace nfcf
