#include "nfcf/geometry.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nfcf/error.hpp"

namespace nfcf {

namespace {

constexpr long kMaxPrecision = 4096;

// Some r×r minor of the r×n interval matrix is certainly nonzero.
bool certainly_independent(const std::vector<std::vector<Interval>>& rows) {
  const size_t r = rows.size();
  if (r == 0) return true;
  const size_t n = rows[0].size();
  if (r > n) return false;
  std::vector<size_t> cols(r);
  std::iota(cols.begin(), cols.end(), 0);
  while (true) {
    std::vector<std::vector<Interval>> m(r);
    for (size_t i = 0; i < r; ++i) {
      for (size_t c : cols) m[i].push_back(rows[i][c]);
    }
    bool ok = true;
    for (size_t k = 0; k < r && ok; ++k) {
      size_t piv = r;
      double best = 0;
      for (size_t i = k; i < r; ++i) {
        if (m[i][k].contains_zero()) continue;
        const double mag = std::fabs(m[i][k].mid_double());
        if (piv == r || mag > best) {
          piv = i;
          best = mag;
        }
      }
      if (piv == r) {
        ok = false;
        break;
      }
      std::swap(m[piv], m[k]);
      for (size_t i = k + 1; i < r; ++i) {
        const Interval f = m[i][k] / m[k][k];
        for (size_t j = k; j < r; ++j) m[i][j] -= f * m[k][j];
      }
    }
    if (ok) return true;
    // next combination of r columns out of n
    std::ptrdiff_t i = static_cast<std::ptrdiff_t>(r) - 1;
    while (i >= 0 && cols[static_cast<size_t>(i)] == static_cast<size_t>(i) + n - r) --i;
    if (i < 0) return false;
    ++cols[static_cast<size_t>(i)];
    for (size_t j = static_cast<size_t>(i) + 1; j < r; ++j) cols[j] = cols[j - 1] + 1;
  }
}

long double log_abs(const mpz_class& z) {
  long e = 0;
  const double m = mpz_get_d_2exp(&e, z.get_mpz_t());
  return std::log(std::fabs(static_cast<long double>(m))) + static_cast<long double>(e) * std::log(2.0L);
}

NFElement unit_product(const UnitSystem& us, const std::vector<long>& e) {
  NFElement u = NFElement::one(us.field);
  for (size_t i = 0; i < e.size(); ++i) {
    if (e[i] != 0) u *= us.units[i].pow(e[i]);
  }
  return u;
}

}  // namespace

UnitSystem UnitSystem::make(const FieldPtr& field, std::vector<NFElement> units, int torsion_order,
                            std::optional<NFElement> torsion_generator) {
  UnitSystem us;
  us.field = field;
  if (static_cast<int>(units.size()) != field->unit_rank()) {
    throw Error(Errc::InvalidInput, "expected " + std::to_string(field->unit_rank()) + " fundamental units, got " +
                                        std::to_string(units.size()));
  }
  for (const auto& u : units) {
    if (u.field() != field) throw Error(Errc::InvalidInput, "unit from a different field");
    if (!u.is_integral() || abs(u.norm()) != 1) {
      throw Error(Errc::InvalidInput, "supplied unit " + u.to_string() + " has norm " + u.norm().get_str());
    }
  }
  std::vector<std::vector<Interval>> logs;
  for (const auto& u : units) logs.push_back(log_embedding(u));
  if (!certainly_independent(logs)) throw Error(Errc::DependentBasis, "supplied units are not independent");
  us.units = std::move(units);
  if (torsion_order < 1) throw Error(Errc::InvalidInput, "torsion order must be positive");
  us.torsion_order = torsion_order;
  us.torsion_generator = torsion_generator ? *torsion_generator : NFElement::rational(field, -1);
  if (torsion_order == 1 && !torsion_generator) us.torsion_generator = NFElement::one(field);
  const NFElement& z = us.torsion_generator;
  if (!z.pow(torsion_order).is_one()) throw Error(Errc::InvalidInput, "torsion generator has wrong order");
  for (int q = 2; q <= torsion_order; ++q) {
    if (torsion_order % q == 0 && z.pow(torsion_order / q).is_one()) {
      throw Error(Errc::InvalidInput, "torsion generator is not primitive");
    }
  }
  return us;
}

std::vector<Interval> log_embedding(const NFElement& u, long prec) {
  if (u.is_zero()) throw Error(Errc::ZeroElement, "log embedding of 0");
  const FieldPtr& k = u.field();
  for (long p = prec;; p *= 2) {
    const auto emb = u.embeddings(p);
    std::vector<Interval> out;
    bool ok = true;
    for (int i = 0; i < k->r1() && ok; ++i) {
      Interval a = emb[static_cast<size_t>(i)].re.abs();
      if (!a.certainly_positive()) ok = false;
      else out.push_back(a.log());
    }
    for (int j = 0; j < k->r2() && ok; ++j) {
      Interval a = emb[static_cast<size_t>(k->r1() + 2 * j)].abs_sqr();
      if (!a.certainly_positive()) ok = false;
      else out.push_back(a.log());
    }
    if (ok) return out;
    if (p >= kMaxPrecision) throw Error(Errc::CertificationFailed, "cannot separate an embedding from 0");
  }
}

Interval covering_radius_upper(const std::vector<std::vector<Interval>>& basis) {
  const long prec = basis.empty() || basis[0].empty() ? kDefaultPrecision : basis[0][0].precision();
  Interval sum(0L, prec);
  if (basis.empty()) return sum;
  if (!certainly_independent(basis)) throw Error(Errc::DependentBasis, "lattice basis is not independent");
  for (const auto& v : basis) {
    Interval m(0L, prec);
    for (const auto& x : v) m = Interval::max(m, x.abs());
    sum += m;
  }
  return sum * Interval::from_bounds(mpq_class(1, 2), mpq_class(1, 2), prec);
}

LogLattice log_lattice(const UnitSystem& units, long prec) {
  LogLattice l;
  for (const auto& u : units.units) l.basis.push_back(log_embedding(u, prec));
  l.rho_upper = covering_radius_upper(l.basis);
  if (l.basis.empty()) l.rho_upper = Interval(0L, prec);
  l.t0 = l.rho_upper.exp();
  return l;
}

Interval t0(const UnitSystem& units, long prec) { return log_lattice(units, prec).t0; }

UnitReduction unit_reduce_with_exponents(const NFElement& a, const UnitSystem& units, long prec) {
  if (a.is_zero()) throw Error(Errc::ZeroElement, "unit reduction of 0");
  const FieldPtr& k = a.field();
  const int r = units.rank();
  const int d = k->degree();
  // Rank 0: every |σ(a)| already equals |N(a)|^{1/d}.
  if (r == 0) return {a, {}};

  const int n = k->places();
  const mpq_class norm = abs(a.norm());
  const auto emb = approx_embeddings(a);
  const long double log_norm_share = (log_abs(norm.get_num()) - log_abs(norm.get_den())) / d;
  std::vector<long double> weight(static_cast<size_t>(n)), target(static_cast<size_t>(n));
  for (int p = 0; p < n; ++p) {
    const bool real = p < k->r1();
    const int idx = real ? p : k->r1() + 2 * (p - k->r1());
    weight[static_cast<size_t>(p)] = real ? 1 : 2;
    target[static_cast<size_t>(p)] =
        weight[static_cast<size_t>(p)] * (std::log(std::abs(emb[static_cast<size_t>(idx)])) - log_norm_share);
  }
  Eigen::MatrixXd e(r, n);
  const LogLattice lat0 = log_lattice(units, 64);
  for (int i = 0; i < r; ++i) {
    for (int p = 0; p < n; ++p) e(i, p) = lat0.basis[static_cast<size_t>(i)][static_cast<size_t>(p)].mid_double();
  }
  Eigen::VectorXd b(n);
  for (int p = 0; p < n; ++p) b(p) = static_cast<double>(target[static_cast<size_t>(p)]);
  const Eigen::VectorXd c = (e * e.transpose()).ldlt().solve(-(e * b));
  std::vector<long> base(static_cast<size_t>(r));
  for (int i = 0; i < r; ++i) base[static_cast<size_t>(i)] = std::lround(c(i));

  auto predicted = [&](const std::vector<long>& ex) {
    double worst = -1e300;
    for (int p = 0; p < n; ++p) {
      double v = b(p);
      for (int i = 0; i < r; ++i) v += static_cast<double>(ex[static_cast<size_t>(i)]) * e(i, p);
      worst = std::max(worst, v / static_cast<double>(weight[static_cast<size_t>(p)]));
    }
    return worst;
  };

  for (int radius = 1; radius <= 2; ++radius) {
    std::vector<std::vector<long>> cands;
    std::vector<long> off(static_cast<size_t>(r), -radius);
    while (true) {
      std::vector<long> ex = base;
      for (int i = 0; i < r; ++i) ex[static_cast<size_t>(i)] += off[static_cast<size_t>(i)];
      cands.push_back(std::move(ex));
      int i = 0;
      while (i < r && off[static_cast<size_t>(i)] == radius) off[static_cast<size_t>(i++)] = -radius;
      if (i == r) break;
      ++off[static_cast<size_t>(i)];
    }
    std::stable_sort(cands.begin(), cands.end(),
                     [&](const auto& x, const auto& y) { return predicted(x) < predicted(y); });
    for (long p = prec; p <= kMaxPrecision; p *= 4) {
      const LogLattice lat = log_lattice(units, p);
      const Interval bound = lat.t0 * Interval(norm, p).root(static_cast<unsigned long>(d));
      for (const auto& ex : cands) {
        const NFElement x = a * unit_product(units, ex);
        bool ok = true;
        for (const auto& s : x.embeddings(p)) {
          if (!s.abs().certainly_le(bound)) {
            ok = false;
            break;
          }
        }
        if (ok) return {x, ex};
      }
    }
  }
  // The bound can be attained exactly (4 + √14 = √(2ε) in ℚ(√14)); accept the
  // best candidate that is not certainly above it at the top precision.
  {
    const LogLattice lat = log_lattice(units, kMaxPrecision);
    const Interval bound = lat.t0 * Interval(norm, kMaxPrecision).root(static_cast<unsigned long>(d));
    std::vector<long> off(static_cast<size_t>(r), -1);
    std::vector<std::vector<long>> cands;
    while (true) {
      std::vector<long> ex = base;
      for (int i = 0; i < r; ++i) ex[static_cast<size_t>(i)] += off[static_cast<size_t>(i)];
      cands.push_back(std::move(ex));
      int i = 0;
      while (i < r && off[static_cast<size_t>(i)] == 1) off[static_cast<size_t>(i++)] = -1;
      if (i == r) break;
      ++off[static_cast<size_t>(i)];
    }
    std::stable_sort(cands.begin(), cands.end(),
                     [&](const auto& x, const auto& y) { return predicted(x) < predicted(y); });
    for (const auto& ex : cands) {
      const NFElement x = a * unit_product(units, ex);
      bool ok = true;
      for (const auto& z : x.embeddings(kMaxPrecision)) {
        if (z.abs().certainly_gt(bound)) {
          ok = false;
          break;
        }
      }
      if (ok) return {x, ex};
    }
  }
  throw Error(Errc::CertificationFailed, "unit reduction of " + a.to_string() + " did not meet the T0 bound");
}

NFElement unit_reduce(const NFElement& a, const UnitSystem& units, long prec) {
  return unit_reduce_with_exponents(a, units, prec).value;
}

NFElement quadratic_fundamental_unit(const FieldPtr& field) {
  if (field->degree() != 2 || field->r1() != 2 || !field->power_basis()) {
    throw Error(Errc::InvalidInput, "continued-fraction unit needs a real quadratic field with power basis");
  }
  const mpz_class bq = field->min_poly().coeff(1).get_num();
  const mpz_class cq = field->min_poly().coeff(0).get_num();
  const mpz_class disc = bq * bq - 4 * cq;
  const mpz_class sigma = mpz_class(bq % 2 == 0 ? 0 : 1);
  // ω = (σ + √Δ)/2 = α + (b + σ)/2
  const NFElement omega = NFElement::generator(field) + NFElement::rational(field, mpq_class((bq + sigma) / 2));
  const mpq_class tr = sigma;
  mpq_class nm(mpz_class(sigma * sigma - disc), 4);
  nm.canonicalize();
  mpz_class root;
  mpz_sqrt(root.get_mpz_t(), disc.get_mpz_t());

  auto ge = [&](const mpz_class& a, const mpz_class& p, const mpz_class& q) {
    const mpz_class t = a * q - p;
    if (q > 0) return t <= 0 || t * t <= disc;
    return t >= 0 && t * t >= disc;
  };
  mpz_class p = sigma, q = 2;
  mpz_class h1 = 1, h2 = 0, k1 = 0, k2 = 1;
  for (int it = 0; it < 200000; ++it) {
    mpz_class a;
    mpz_fdiv_q(a.get_mpz_t(), mpz_class(p + root).get_mpz_t(), q.get_mpz_t());
    while (!ge(a, p, q)) --a;
    while (ge(a + 1, p, q)) ++a;
    const mpz_class h = a * h1 + h2, kk = a * k1 + k2;
    h2 = h1;
    h1 = h;
    k2 = k1;
    k1 = kk;
    const mpq_class n = mpq_class(h * h) - mpq_class(h * kk) * tr + mpq_class(kk * kk) * nm;
    if (abs(n) == 1) {
      // h − k·ω̄ with ω̄ = σ − ω
      return NFElement::rational(field, mpq_class(h - kk * sigma)) + omega * mpq_class(kk);
    }
    const mpz_class pn = a * q - p;
    q = (disc - pn * pn) / q;
    p = pn;
  }
  throw Error(Errc::SearchExhausted, "continued fraction period too long");
}

std::vector<std::complex<long double>> approx_embeddings(const NFElement& x) {
  const FieldPtr& k = x.field();
  const auto roots = k->roots(64);
  std::vector<std::complex<long double>> out;
  out.reserve(roots.size());
  const auto& c = x.coords();
  for (const auto& rt : roots) {
    const std::complex<long double> z(rt.re.mid_double(), rt.im.mid_double());
    std::complex<long double> acc = 0;
    for (size_t i = c.size(); i-- > 0;) acc = acc * z + static_cast<long double>(c[i].get_d());
    out.push_back(acc);
  }
  return out;
}

std::vector<long double> euclidean_embedding(const NFElement& x) {
  const FieldPtr& k = x.field();
  const auto emb = approx_embeddings(x);
  std::vector<long double> v;
  for (int i = 0; i < k->r1(); ++i) v.push_back(emb[static_cast<size_t>(i)].real());
  const long double s2 = std::sqrt(2.0L);
  for (int j = 0; j < k->r2(); ++j) {
    const auto& z = emb[static_cast<size_t>(k->r1() + 2 * j)];
    v.push_back(s2 * z.real());
    v.push_back(s2 * z.imag());
  }
  return v;
}

ZMat lll_transform(std::vector<std::vector<long double>> b) {
  const size_t n = b.size();
  ZMat u(n, ZVec(n, 0));
  for (size_t i = 0; i < n; ++i) u[i][i] = 1;
  if (n < 2) return u;
  const size_t dim = b[0].size();
  auto dot = [&](const std::vector<long double>& x, const std::vector<long double>& y) {
    long double s = 0;
    for (size_t i = 0; i < dim; ++i) s += x[i] * y[i];
    return s;
  };
  std::vector<std::vector<long double>> bs(n), mu(n, std::vector<long double>(n, 0));
  std::vector<long double> bn(n);
  auto gram_schmidt = [&]() {
    for (size_t i = 0; i < n; ++i) {
      bs[i] = b[i];
      for (size_t j = 0; j < i; ++j) {
        mu[i][j] = bn[j] > 0 ? dot(b[i], bs[j]) / bn[j] : 0;
        for (size_t t = 0; t < dim; ++t) bs[i][t] -= mu[i][j] * bs[j][t];
      }
      bn[i] = dot(bs[i], bs[i]);
    }
  };
  gram_schmidt();
  size_t k = 1;
  for (int guard = 0; k < n && guard < 100000; ++guard) {
    for (size_t j = k; j-- > 0;) {
      if (std::fabs(mu[k][j]) > 0.5L) {
        const long double qf = std::nearbyint(mu[k][j]);
        mpz_class q;
        mpz_set_d(q.get_mpz_t(), static_cast<double>(qf));
        for (size_t t = 0; t < dim; ++t) b[k][t] -= qf * b[j][t];
        for (size_t t = 0; t < n; ++t) u[k][t] -= q * u[j][t];
        gram_schmidt();
      }
    }
    if (bn[k] >= (0.99L - mu[k][k - 1] * mu[k][k - 1]) * bn[k - 1]) {
      ++k;
    } else {
      std::swap(b[k], b[k - 1]);
      std::swap(u[k], u[k - 1]);
      gram_schmidt();
      k = std::max<size_t>(k - 1, 1);
    }
  }
  return u;
}

std::vector<NFElement> lll_reduce(const std::vector<NFElement>& basis) {
  std::vector<std::vector<long double>> vecs;
  for (const auto& x : basis) vecs.push_back(euclidean_embedding(x));
  const ZMat u = lll_transform(std::move(vecs));
  std::vector<NFElement> out;
  for (const auto& row : u) {
    NFElement acc = NFElement::zero(basis[0].field());
    for (size_t j = 0; j < row.size(); ++j) {
      if (row[j] != 0) acc += basis[j] * mpq_class(row[j]);
    }
    out.push_back(std::move(acc));
  }
  return out;
}

}  // namespace nfcf
