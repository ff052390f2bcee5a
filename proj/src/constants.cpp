#include "nfcf/constants.hpp"

#include "nfcf/error.hpp"

namespace nfcf {

namespace {

mpz_class factorial(int n) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
  return f;
}

// d!/d^d
mpq_class factorial_ratio(int d) {
  mpz_class dd;
  mpz_ui_pow_ui(dd.get_mpz_t(), static_cast<unsigned long>(d), static_cast<unsigned long>(d));
  mpq_class r(factorial(d), dd);
  r.canonicalize();
  return r;
}

Interval one(long prec) { return Interval(1L, prec); }

}  // namespace

Interval theta(const Interval& magnitude) {
  const long prec = magnitude.precision();
  const Interval m = magnitude.abs();
  return (m + (m.sqr() + Interval(4L, prec)).sqrt()) / Interval(2L, prec);
}

Interval theta(const ComplexInterval& z) {
  const long prec = z.precision();
  return (z.abs() + (z.abs_sqr() + Interval(4L, prec)).sqrt()) / Interval(2L, prec);
}

Interval minkowski_bound(const NumberField& field, long prec) {
  Interval b = Interval(factorial_ratio(field.degree()), prec) * Interval(field.abs_disc(), prec).sqrt();
  const Interval four_over_pi = Interval(4L, prec) / Interval::pi(prec);
  for (int i = 0; i < field.r2(); ++i) b *= four_over_pi;
  return b;
}

Interval c_ideal(const FractionalIdeal& ideal, long prec) {
  if (!ideal.is_integral()) throw Error(Errc::InvalidInput, "c(A,K) needs an integral ideal");
  const NumberField& k = *ideal.field();
  Interval c = Interval(k.abs_disc(), prec).sqrt() * Interval(ideal.norm(), prec);
  const Interval two_over_pi = Interval(2L, prec) / Interval::pi(prec);
  for (int i = 0; i < k.r2(); ++i) c *= two_over_pi;
  return Interval::max(c, one(prec));
}

std::optional<mpq_class> c_field_exact(const NumberField& field) {
  if (field.r2() != 0) return std::nullopt;
  mpq_class c = mpq_class(field.abs_disc()) * factorial_ratio(field.degree());
  return c < 1 ? mpq_class(1) : c;
}

Interval c_field(const NumberField& field, long prec) {
  if (auto e = c_field_exact(field)) return Interval(*e, prec);
  Interval c = Interval(field.abs_disc(), prec) * Interval(factorial_ratio(field.degree()), prec);
  const Interval f = Interval(8L, prec) / Interval::pi(prec).sqr();
  for (int i = 0; i < field.r2(); ++i) c *= f;
  return Interval::max(c, one(prec));
}

mpz_class choose_M(const NumberField& field) {
  if (auto e = c_field_exact(field)) {
    mpz_class m;
    mpz_cdiv_q(m.get_mpz_t(), e->get_num_mpz_t(), e->get_den_mpz_t());
    return m;
  }
  // π is transcendental, so c(K) is not an integer and refinement terminates.
  for (long prec = 64; prec <= 8192; prec *= 2) {
    const Interval c = c_field(field, prec);
    mpz_class lo_ceil;
    mpfr_t t;
    mpfr_init2(t, prec);
    mpfr_ceil(t, c.lo());
    mpfr_get_z(lo_ceil.get_mpz_t(), t, MPFR_RNDN);
    mpfr_clear(t);
    if (lo_ceil == c.ceil_hi()) return lo_ceil;
  }
  throw Error(Errc::CertificationFailed, "could not separate c(K) from an integer");
}

Interval epsilon_for(const FractionalIdeal& ideal, const mpz_class& M, long prec) {
  if (M <= 0) throw Error(Errc::InvalidInput, "M must be positive");
  const NumberField& k = *ideal.field();
  Interval v = Interval(k.abs_disc(), prec).sqrt() * Interval(ideal.norm(), prec);
  const Interval two_over_pi = Interval(2L, prec) / Interval::pi(prec);
  for (int i = 0; i < k.r2(); ++i) v *= two_over_pi;
  const Interval eps = (v / Interval(M, prec)).root(static_cast<unsigned long>(k.degree()));
  if (!eps.certainly_lt(one(prec))) {
    throw Error(Errc::EpsilonNotLessThanOne,
                "epsilon = " + eps.lo_string(8) + " is not below 1 for M = " + M.get_str());
  }
  return eps;
}

Interval c_MK(const mpz_class& M, int d, const Interval& epsilon, const Interval& t0) {
  const long prec = epsilon.precision();
  const auto ud = static_cast<unsigned long>(d);
  const Interval ed = epsilon.pow(ud);
  const Interval td = t0.pow(ud);
  const Interval inner = ((one(prec) - ed) / (ed * td) + one(prec)).root(ud) - one(prec);
  return (Interval(M, prec) / (epsilon * t0 * inner)).pow(ud);
}

Interval epsilon_prime(const mpz_class& q, const mpz_class& M, int d, const Interval& epsilon, const Interval& t0) {
  const long prec = epsilon.precision();
  const auto ud = static_cast<unsigned long>(d);
  const Interval qd = Interval(q, prec).root(ud);
  const Interval growth = (one(prec) + Interval(M, prec) / (epsilon * t0 * qd)).pow(ud) - one(prec);
  return epsilon.pow(ud) * (one(prec) + t0.pow(ud) * growth);
}

Interval height_constant(const NFElement& alpha, const NFElement& a0, const PrimeIdeal& prime, long prec) {
  const NFElement x = a0 - alpha;
  Interval c = one(prec);
  for (const auto& z : x.embeddings(prec)) c *= (z.abs_sqr() + one(prec)).sqrt();
  if (x.is_zero()) return c;
  mpz_class fin = denominator_ideal_norm(x);
  const long v = valuation(x, prime);
  if (v < 0) {
    mpz_class pv;
    mpz_pow_ui(pv.get_mpz_t(), prime.norm.get_mpz_t(), static_cast<unsigned long>(-v));
    fin /= pv;
  }
  return c * Interval(fin, prec);
}

mpz_class c_alpha(const NFElement& alpha, const NFElement& a0, const PrimeIdeal& prime) {
  const int d = alpha.field()->degree();
  const mpz_class c = height_constant(alpha, a0, prime).ceil_hi();
  mpz_class base;
  mpz_ui_pow_ui(base.get_mpz_t(), 2, static_cast<unsigned long>(d + 1));
  base = base * c + 1;
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(d + 1));
  return r * d;
}

ConstantsReport compute_constants(const UnitSystem& units, const ConstantsOptions& opts, const std::string& field_id) {
  const FieldPtr& k = units.field;
  const long prec = opts.prec;
  ConstantsReport rep;
  rep.field_id = field_id;
  rep.abs_disc = k->abs_disc();
  rep.r1 = k->r1();
  rep.r2 = k->r2();
  rep.minkowski = minkowski_bound(*k, prec);
  rep.c_field = c_field(*k, prec);
  rep.M = opts.M ? *opts.M : choose_M(*k);
  if (rep.M < choose_M(*k)) {
    rep.warnings.push_back("M = " + rep.M.get_str() + " is below c(K) = " + rep.c_field.lo_string(10));
  }
  const auto lat = log_lattice(units, prec);
  rep.rho_upper = lat.rho_upper;
  rep.t0 = lat.t0;
  if (opts.epsilon) {
    if (*opts.epsilon <= 0 || *opts.epsilon >= 1) {
      throw Error(Errc::EpsilonNotLessThanOne, "supplied epsilon must lie in (0, 1)");
    }
    rep.epsilon = Interval(*opts.epsilon, prec);
    rep.epsilon_exact = *opts.epsilon;
  } else {
    rep.epsilon = epsilon_for(FractionalIdeal::unit(k), rep.M, prec);
  }
  rep.c_mk = c_MK(rep.M, k->degree(), rep.epsilon, rep.t0);
  for (const auto& q : opts.epsilon_prime_samples) {
    rep.epsilon_prime_at.emplace_back(q, epsilon_prime(q, rep.M, k->degree(), rep.epsilon, rep.t0));
  }
  return rep;
}

Interval t0_complex_weight_one(const UnitSystem& units, long prec) {
  const auto& k = *units.field;
  if (units.rank() == 0) return Interval(1L, prec);
  std::vector<std::vector<Interval>> basis;
  for (const auto& u : units.units) {
    auto l = log_embedding(u, prec);
    for (size_t j = static_cast<size_t>(k.r1()); j < l.size(); ++j) l[j] = l[j] / Interval(2L, prec);
    basis.push_back(std::move(l));
  }
  return covering_radius_upper(basis).exp();
}

}  // namespace nfcf
