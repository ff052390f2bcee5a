#include "nfcf/divchain.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "nfcf/error.hpp"
#include "nfcf/poly.hpp"

namespace nfcf {

namespace {

ChainReport fail(size_t step, std::string why) {
  ChainReport r;
  r.valid = false;
  r.failing_step = step;
  r.reason = std::move(why);
  return r;
}

// O_K/𝔔 ≅ F_ℓ[x]/(g) for a prime 𝔔 not dividing the index.
class ResidueField {
 public:
  explicit ResidueField(const PrimeIdeal& q) : p_(q.p.get_ui()) {
    const FieldPtr& k = q.field;
    if (q.f == k->degree()) {
      g_ = FpPoly::from_qpoly(p_, k->min_poly());
    } else {
      std::vector<std::uint64_t> c;
      for (const auto& x : q.gen2.coords()) c.push_back(reduce(x));
      g_ = FpPoly(p_, c);
    }
    mpz_ui_pow_ui(order_.get_mpz_t(), p_, static_cast<unsigned long>(q.f));
  }

  std::uint64_t reduce(const mpq_class& x) const {
    mpz_class n = x.get_num() % mpz_class(static_cast<unsigned long>(p_));
    if (n < 0) n += static_cast<unsigned long>(p_);
    mpz_class d = x.get_den() % mpz_class(static_cast<unsigned long>(p_));
    if (d == 0) throw Error(Errc::InvalidInput, "element not integral at the residue prime");
    return mulmod(n.get_ui(), invmod(d.get_ui(), p_), p_);
  }

  FpPoly image(const NFElement& x) const {
    std::vector<std::uint64_t> c;
    for (const auto& v : x.coords()) c.push_back(reduce(v));
    return FpPoly(p_, c) % g_;
  }

  FpPoly mul(const FpPoly& a, const FpPoly& b) const { return (a * b) % g_; }

  FpPoly pow(FpPoly a, mpz_class e) const {
    FpPoly r(p_, {1});
    while (e > 0) {
      if (mpz_odd_p(e.get_mpz_t())) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }

  FpPoly inverse(const FpPoly& a) const { return pow(a, order_ - 2); }

 private:
  std::uint64_t p_;
  FpPoly g_;
  mpz_class order_;
};

// Exponent vectors with max |e_i| == r, lexicographic.
std::vector<std::vector<long>> shell(size_t dim, long r) {
  std::vector<std::vector<long>> out;
  if (dim == 0) {
    if (r == 0) out.emplace_back();
    return out;
  }
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

// 0, 1, −1, 2, −2, …
std::vector<long> signed_order(long bound) {
  std::vector<long> v{0};
  for (long i = 1; i <= bound; ++i) {
    v.push_back(i);
    v.push_back(-i);
  }
  return v;
}

NFElement round_ib(const NFElement& x, const std::vector<long>& offset) {
  QVec c = x.ib_coords();
  for (size_t i = 0; i < c.size(); ++i) {
    const mpq_class t = c[i] + mpq_class(1, 2);
    mpz_class f;
    mpz_fdiv_q(f.get_mpz_t(), t.get_num_mpz_t(), t.get_den_mpz_t());
    c[i] = f + offset[i];
  }
  return NFElement::from_ib(x.field(), c);
}

}  // namespace

ChainReport verify_chain(const DivisionChain& c) {
  const auto& ring = c.ring;
  if (c.steps.empty()) return fail(0, "empty chain");
  if (!ring.contains(c.a) || !ring.contains(c.b)) return fail(0, "a or b is not an S-integer");
  NFElement prev2 = c.a, prev1 = c.b;
  for (size_t i = 0; i < c.steps.size(); ++i) {
    const auto& [q, r] = c.steps[i];
    if (prev1.is_zero()) return fail(i + 1, "step after a zero remainder");
    if (!ring.contains(q) || !ring.contains(r)) return fail(i + 1, "entry is not an S-integer");
    if (prev2 != q * prev1 + r) return fail(i + 1, "step identity fails");
    prev2 = prev1;
    prev1 = r;
  }
  if (c.terminating()) {
    if (c.b.is_zero()) return fail(0, "b = 0");
    if (evaluate_cf(chain_to_cf(c)) != c.a / c.b) return fail(0, "continued fraction does not evaluate to a/b");
  }
  return {};
}

std::vector<NFElement> chain_to_cf(const DivisionChain& c) {
  std::vector<NFElement> q;
  for (const auto& s : c.steps) q.push_back(s.q);
  return q;
}

DivisionChain cf_to_chain(const SIntegerRing& ring, const NFElement& a, const NFElement& b,
                          const std::vector<NFElement>& quotients) {
  if (b.is_zero()) throw Error(Errc::ZeroDenominator, "b = 0");
  DivisionChain c{ring, a, b, {}};
  NFElement prev2 = a, prev1 = b;
  for (const auto& q : quotients) {
    if (prev1.is_zero()) throw Error(Errc::ZeroDenominator, "quotient after a zero remainder");
    NFElement r = prev2 - q * prev1;
    c.steps.push_back({q, r});
    prev2 = prev1;
    prev1 = std::move(r);
  }
  return c;
}

std::vector<long> class_of(const FractionalIdeal& ideal, const ClassData& data, long search_bound) {
  auto integral = [](const FractionalIdeal& i) {
    return i * FractionalIdeal::principal(NFElement::rational(i.field(), mpq_class(i.denom())));
  };
  const FractionalIdeal I = integral(ideal);
  if (find_generator(I, search_bound)) return std::vector<long>(data.group.size(), 0);
  for (const auto& [rep, cls] : data.reps) {
    if (find_generator(integral(I * rep.inverse()), search_bound)) return cls;
  }
  throw Error(Errc::SearchExhausted, "could not identify the class of " + ideal.to_string());
}

bool class_obstruction(const NFElement& a, const NFElement& b, const SIntegerRing& ring, const ClassData* data,
                       long search_bound) {
  if (data && data->class_number == 1) return true;
  if (!data || data->reps.empty() || data->group.empty()) {
    throw Error(Errc::MissingClassData, "class group data is required when h > 1");
  }
  const FieldPtr& k = ring.field();
  const size_t n = data->group.size();
  const auto target = class_of(FractionalIdeal::from_generators(k, {a, b}), *data, search_bound);
  std::set<std::vector<long>> sub{std::vector<long>(n, 0)};
  std::vector<std::vector<long>> gens;
  for (const auto& p : ring.primes()) gens.push_back(class_of(p.ideal, *data, search_bound));
  bool grew = true;
  while (grew) {
    grew = false;
    for (auto cur : std::vector<std::vector<long>>(sub.begin(), sub.end())) {
      for (const auto& g : gens) {
        std::vector<long> nx(n);
        for (size_t i = 0; i < n; ++i) nx[i] = (cur[i] + g[i]) % data->group[i];
        if (sub.insert(nx).second) grew = true;
      }
    }
  }
  std::vector<long> t(n);
  for (size_t i = 0; i < n; ++i) t[i] = ((target[i] % data->group[i]) + data->group[i]) % data->group[i];
  return sub.count(t) > 0;
}

DivisionChain clw_expand(const NFElement& a, const NFElement& b, const SIntegerRing& ring, const UnitSystem& units,
                         const std::optional<NFElement>& pi_in, const ClwCaps& caps) {
  const FieldPtr& k = ring.field();
  if (b.is_zero()) throw Error(Errc::ZeroDenominator, "b = 0");
  if (!ring.contains(a) || !ring.contains(b)) throw Error(Errc::InvalidInput, "a and b must be S-integers");
  if (ring.primes().empty()) throw Error(Errc::InvalidInput, "S needs a finite principal place");
  if (a.is_zero() ? !ring.is_unit(b) : ring.s_norm(FractionalIdeal::from_generators(k, {a, b})) != 1) {
    throw Error(Errc::NotCoprime, "(a, b) is not the unit ideal of O_S");
  }
  const PrimeIdeal& place = ring.primes().front();
  const NFElement pi = pi_in ? *pi_in : principal_generator(place.ideal, &units, 12);
  if (FractionalIdeal::principal(pi) != place.ideal) throw Error(Errc::InvalidInput, "pi does not generate the S-place");

  DivisionChain chain{ring, a, b, {}};
  const NFElement ratio = a / b;
  if (ring.contains(ratio)) {
    chain.steps.push_back({ratio, NFElement::zero(k)});
    return chain;
  }

  // Step 1: q_1 with |r_1|_π = 1 and the smallest S-norm.
  const size_t d = static_cast<size_t>(k->degree());
  std::optional<NFElement> best_q, best_r;
  mpq_class best_norm;
  for (long t = 0; t <= caps.shift_bound; ++t) {
    const NFElement pit = pi.pow(t);
    const NFElement scaled = ratio * pit;
    for (long rad = 0; rad <= 1; ++rad) {
      for (const auto& off : shell(d, rad)) {
        const NFElement q1 = round_ib(scaled, off) / pit;
        const NFElement r1 = a - q1 * b;
        if (r1.is_zero() || valuation(r1, place) != 0) continue;
        const mpq_class nr = ring.s_norm(r1);
        if (!best_r || nr < best_norm) {
          best_q = q1;
          best_r = r1;
          best_norm = nr;
        }
      }
    }
  }
  if (!best_r) throw Error(Errc::SearchExhausted, "no first quotient with |r_1| = 1 at the S-place");
  const NFElement q1 = *best_q, r1 = *best_r;
  chain.steps.push_back({q1, r1});
  if (ring.is_unit(r1)) {
    chain.steps.push_back({b / r1, NFElement::zero(k)});
    return chain;
  }

  // Step 2: p′ = b + κ r_1 prime outside S, and r_1 ≡ u (mod p′) for an S-unit u.
  std::vector<NFElement> omega;
  for (size_t i = 0; i < d; ++i) {
    QVec e(d, 0);
    e[i] = 1;
    omega.push_back(NFElement::from_ib(k, e));
  }
  const int r = units.rank();
  std::vector<std::vector<long>> unit_exps;
  for (long s = 0; s <= caps.unit_exponent_bound; ++s) {
    for (auto& e : shell(static_cast<size_t>(r), s)) unit_exps.push_back(std::move(e));
  }
  const auto pi_exps = signed_order(caps.s_unit_exponent_bound);

  long tried = 0;
  for (long s = 0; tried < caps.candidate_bound; ++s) {
    std::vector<std::vector<long>> ks;
    if (d == 1) {
      ks.push_back({s});
      if (s > 0) ks.push_back({-s});
    } else {
      ks = shell(d, s);
    }
    for (const auto& kv : ks) {
      if (tried >= caps.candidate_bound) break;
      ++tried;
      NFElement kappa = NFElement::zero(k);
      for (size_t i = 0; i < d; ++i) kappa += omega[i] * mpq_class(kv[i]);
      const NFElement pp = b + kappa * r1;
      const auto q = ring.prime_of(pp);
      if (!q || mpz_sizeinbase(q->p.get_mpz_t(), 2) > 62) continue;
      const ResidueField F(*q);
      const FpPoly target = F.image(r1);
      // torsion × units, first occurrence per residue
      std::map<std::vector<std::uint64_t>, std::pair<int, const std::vector<long>*>> table;
      const FpPoly tg = F.image(units.torsion_generator);
      std::vector<FpPoly> ug, ug_inv;
      for (const auto& u : units.units) {
        ug.push_back(F.image(u));
        ug_inv.push_back(F.inverse(ug.back()));
      }
      for (const auto& e : unit_exps) {
        FpPoly base(F.image(NFElement::one(k)));
        for (int i = 0; i < r; ++i) {
          const long ei = e[static_cast<size_t>(i)];
          base = F.mul(base, F.pow(ei >= 0 ? ug[static_cast<size_t>(i)] : ug_inv[static_cast<size_t>(i)], std::labs(ei)));
        }
        FpPoly tw = base;
        for (int w = 0; w < units.torsion_order; ++w) {
          table.emplace(tw.coeffs(), std::make_pair(w, &e));
          tw = F.mul(tw, tg);
        }
      }
      const FpPoly pim = F.image(pi), pim_inv = F.inverse(pim);
      for (long e : pi_exps) {
        // r_1 π^{−e} must be in the torsion×unit table
        const FpPoly need = F.mul(target, F.pow(e >= 0 ? pim_inv : pim, std::labs(e)));
        const auto it = table.find(need.coeffs());
        if (it == table.end()) continue;
        NFElement u = units.torsion_generator.pow(it->second.first) * pi.pow(e);
        const auto& ue = *it->second.second;
        for (int i = 0; i < r; ++i) u *= units.units[static_cast<size_t>(i)].pow(ue[static_cast<size_t>(i)]);
        const NFElement q3 = (r1 - u) / pp;
        if (!ring.contains(q3)) continue;
        chain.steps.push_back({-kappa, pp});
        chain.steps.push_back({q3, u});
        chain.steps.push_back({pp / u, NFElement::zero(k)});
        return chain;
      }
    }
  }
  throw Error(Errc::SearchExhausted, "no auxiliary prime within " + std::to_string(caps.candidate_bound) + " candidates");
}

}  // namespace nfcf
