#include "ba/macpoly.hpp"

#include <algorithm>

namespace ba {

namespace {

Key negated(const Key& k) {
  Key r = k;
  for (auto& v : r) v = -v;
  return r;
}

// dual basis to the simple roots within their span (fundamental coweights):
// w_j = sum_k Minv[j][k] simple_k with <simple_i, w_j> = delta_ij
std::vector<std::vector<Rat>> simple_dual_matrix(const RootDatum& d) {
  size_t n = d.simple.size();
  std::vector<std::vector<Rat>> a(n, std::vector<Rat>(2 * n, Rat(0)));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) a[i][j] = d.ip(d.simple[i], d.simple[j]);
    a[i][n + i] = 1;
  }
  for (size_t c = 0; c < n; ++c) {
    size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    std::swap(a[c], a[p]);
    Rat inv = Rat(1) / a[c][c];
    for (auto& v : a[c]) v *= inv;
    for (size_t i = 0; i < n; ++i) {
      if (i == c || a[i][c] == 0) continue;
      Rat f = a[i][c];
      for (size_t j = 0; j < 2 * n; ++j) a[i][j] -= f * a[c][j];
    }
  }
  std::vector<std::vector<Rat>> m(n, std::vector<Rat>(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) m[i][j] = a[i][n + j];
  return m;
}

// height of gamma in Q tensor Q: sum of its simple-root coordinates
Rat q_height(const RootDatum& d, const std::vector<std::vector<Rat>>& minv,
             const Vec& gamma) {
  Rat h(0);
  for (size_t j = 0; j < d.simple.size(); ++j)
    for (size_t k = 0; k < d.simple.size(); ++k)
      h += minv[j][k] * d.ip(gamma, d.simple[k]);
  return h;
}

void check_case(const RootDatum& d) {
  if (d.cs == Case::c)
    throw WrongCase("Macdonald polynomials at t = q^k: cases a/b only");
}

// t = q^{-m}, so m = -k gives the operator at t = q^k (all orbits)
std::vector<Rat> override_mults(long k) { return {Rat(-k)}; }

Vec rho_at_k(const RootDatum& d, long k) {
  Vec r(d.dim, Rat(0));
  for (const auto& a : d.pos) r = r + a;
  return Rat(-k, 2) * r;
}

MacPolynomial gram_schmidt_poly(const DatumPtr& datum, long k,
                                const Vec& lambda, const Session& s);
MacPolynomial eigen_solve_poly(const DatumPtr& datum, long k, const Vec& lambda,
                               const Session& s);

}  // namespace

XPoly nabla_k(const DatumPtr& datum, long k, const Session& s) {
  const RootDatum& d = *datum;
  check_case(d);
  if (k < 0) throw NonIntegerK("nabla_k requires integer k >= 0");
  XPoly r = XPoly::monomial(Key{}, Scalar(1));
  for (size_t i = 0; i < d.pos.size(); ++i)
    for (const Vec& a : {d.pos[i], Rat(-1) * d.pos[i]})
      for (long j = 0; j < k; ++j) {
        XPoly b = XPoly::monomial(Key{}, Scalar(1));
        b.add_term(key_of(a, s.scale), Scalar(0) - qpow(d.qexp_pos[i] * j));
        r = r * b;
      }
  return r;
}

Scalar scalar_product(const DatumPtr& datum, long k, const XPoly& f,
                      const XPoly& g, const Session& s) {
  XPoly nb = nabla_k(datum, k, s);
  Scalar ct(0);
  for (const auto& [kf, cf] : f.t)
    for (const auto& [kg, cg] : g.t) {
      // term exponent kf - kg; nabla must contribute kg - kf
      Key need = negated(key_sub(kf, kg));
      auto it = nb.t.find(need);
      if (it != nb.t.end()) ct += cf * cg * it->second;
    }
  return ct;
}

std::vector<Vec> dominant_below(const RootDatum& d, const Vec& lambda) {
  auto minv = simple_dual_matrix(d);
  size_t n = d.simple.size();
  std::vector<long> bound(n, 0);
  for (size_t j = 0; j < n; ++j) {
    Rat b(0);
    for (size_t kk = 0; kk < n; ++kk)
      b += minv[j][kk] * d.ip(lambda, d.simple[kk]);
    if (b < 0) return d.is_dominant(lambda) ? std::vector<Vec>{lambda}
                                            : std::vector<Vec>{};
    bound[j] = mpz_class(b.get_num() / b.get_den()).get_si();
  }
  std::vector<Vec> out;
  std::vector<long> c(n, 0);
  while (true) {
    Vec nu = lambda;
    for (size_t j = 0; j < n; ++j) nu = nu - Rat(c[j]) * d.simple[j];
    if (d.is_dominant(nu)) out.push_back(nu);
    size_t j = 0;
    while (j < n && c[j] == bound[j]) c[j++] = 0;
    if (j == n) break;
    ++c[j];
  }
  // deepest first (increasing dominance), deterministic tie-break by key
  std::sort(out.begin(), out.end(), [&](const Vec& a, const Vec& b) {
    Rat ha = q_height(d, minv, lambda - a), hb = q_height(d, minv, lambda - b);
    if (ha != hb) return ha > hb;
    return KeyLess()(key_of(a, 2), key_of(b, 2));
  });
  return out;
}

std::map<Key, Scalar, KeyLess> orbit_decompose(const RootDatum& d,
                                               const XPoly& f, long scale) {
  std::map<Key, Scalar, KeyLess> out;
  for (const auto& [k, c] : f.t)
    if (d.is_dominant(vec_of(k, scale, d.dim))) out[k] = c;
  return out;
}

namespace {

MacPolynomial gram_schmidt_poly(const DatumPtr& datum, long k,
                                const Vec& lambda, const Session& s) {
  const RootDatum& d = *datum;
  auto nus = dominant_below(d, lambda);
  std::vector<XPoly> basis;
  std::vector<Scalar> norms;
  XPoly nb = nabla_k(datum, k, s);
  auto sp = [&](const XPoly& f, const XPoly& g) {
    Scalar ct(0);
    for (const auto& [kf, cf] : f.t)
      for (const auto& [kg, cg] : g.t) {
        auto it = nb.t.find(negated(key_sub(kf, kg)));
        if (it != nb.t.end()) ct += cf * cg * it->second;
      }
    return ct;
  };
  for (const Vec& nu : nus) {
    XPoly p = orbit_poly(d, nu, s.scale);
    for (size_t i = 0; i < basis.size(); ++i) {
      Scalar c = sp(p, basis[i]);
      if (!c.is_zero()) p -= basis[i].scaled(c / norms[i]);
    }
    Scalar nrm = sp(p, p);
    if (nrm.is_zero() && !(nu == lambda))
      throw NotDefinedAtParameters("Gram-Schmidt norm vanishes below lambda");
    basis.push_back(p);
    norms.push_back(nrm);
  }
  MacPolynomial out;
  out.datum = datum;
  out.k = k;
  out.lambda = lambda;
  out.monomial_expansion = basis.back();
  out.orbit_expansion = orbit_decompose(d, basis.back(), s.scale);
  return out;
}

MacPolynomial eigen_solve_poly(const DatumPtr& datum, long k, const Vec& lambda,
                               const Session& s) {
  const RootDatum& d = *datum;
  auto nus = dominant_below(d, lambda);  // deepest first, lambda last
  auto mv = override_mults(k);
  auto pis = minuscule_and_quasiminuscule(d);
  auto op = build_macdonald_operator(datum, pis[0].pi, s, &mv);
  Vec rk = rho_at_k(d, k);
  std::vector<Scalar> diag;
  for (const Vec& nu : nus) diag.push_back(orbit_value(d, op.pi, nu - rk));
  for (size_t i = 0; i + 1 < nus.size(); ++i)
    if (diag[i] == diag.back())
      throw EigenvalueCollision("diagonal coefficients not separated");
  // columns of D on the orbit basis
  std::vector<std::map<Key, Scalar, KeyLess>> cols;
  for (const Vec& nu : nus) {
    auto ap = apply(op, orbit_poly(d, nu, s.scale));
    if (!ap.exact)
      throw NotDefinedAtParameters("operator application not polynomial");
    cols.push_back(orbit_decompose(d, ap.num, s.scale));
  }
  // solve (D - c_{lambda lambda}) p = 0 triangularly, a_lambda = 1
  size_t n = nus.size();
  std::vector<Scalar> a(n);
  a[n - 1] = Scalar(1);
  for (size_t i = n - 1; i-- > 0;) {
    Key ki = key_of(nus[i], s.scale);
    Scalar rhs(0);
    for (size_t j = i + 1; j < n; ++j) {
      if (a[j].is_zero()) continue;
      auto it = cols[j].find(ki);
      if (it != cols[j].end()) rhs += a[j] * it->second;
    }
    a[i] = rhs / (diag.back() - diag[i]);
  }
  MacPolynomial out;
  out.datum = datum;
  out.k = k;
  out.lambda = lambda;
  for (size_t i = 0; i < n; ++i) {
    if (a[i].is_zero()) continue;
    out.orbit_expansion[key_of(nus[i], s.scale)] = a[i];
    out.monomial_expansion += orbit_poly(d, nus[i], s.scale).scaled(a[i]);
  }
  return out;
}

}  // namespace

MacPolynomial macdonald_poly(const DatumPtr& datum, long k, const Vec& lambda,
                             const Session& s, MacBackend backend) {
  check_case(*datum);
  if (k < 1) throw NonIntegerK("macdonald_poly requires integer k >= 1");
  if (!datum->is_dominant(lambda))
    throw std::invalid_argument("macdonald_poly: lambda must be dominant");
  if (backend == MacBackend::eigen_solve) {
    try {
      return eigen_solve_poly(datum, k, lambda, s);
    } catch (const EigenvalueCollision&) {
      // fall back to the constant-term construction
    }
  }
  return gram_schmidt_poly(datum, k, lambda, s);
}

bool eigenvalue_separated(const RootDatum& d, const Vec& lambda) {
  auto nus = dominant_below(d, lambda);
  Vec lr = dominant_representative(d, lambda - d.rho);
  for (const Vec& nu : nus) {
    if (nu == lambda) continue;
    if (dominant_representative(d, nu - d.rho) == lr) return false;
  }
  return true;
}

}  // namespace ba
