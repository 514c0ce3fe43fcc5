#include "ba/bafunc.hpp"

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <set>

namespace ba {

LCoeff BaFunction::coeff(const Vec& nu) const {
  auto it = coeffs.find(key_of(nu, scale));
  return it == coeffs.end() ? LCoeff() : it->second;
}

ExpFunction BaFunction::function() const {
  ExpFunction f;
  f.datum = datum;
  f.scale = scale;
  f.sigma = Vec(datum->dim, Rat(0));
  for (const auto& [k, c] : coeffs)
    if (!c.is_zero()) f.body.add_term(k, c);
  return f;
}

LPoly dual_delta_lambda(const DatumPtr& datum, const Session& s) {
  return build_weights(datum, s).delta_dual;
}

namespace {

// Heavy polynomial arithmetic runs over Laurent polynomials in (u, Lambda)
// with coefficients in Q(zeta_N): the u-power is key coordinate 0 and the
// Lambda exponents follow.  Coefficient arithmetic is then cheap field
// arithmetic, with no rational-function gcds.
using EPoly = ExpPoly<Cyclo>;

Key ukey(long upow, const Key& k) {
  Key r;
  r.reserve(k.size() + 1);
  r.push_back(upow);
  for (auto v : k) r.push_back(v);
  key_trim(r);
  return r;
}

// a Scalar of the form (cyclotomic unit) * u^e
std::pair<long, Cyclo> unit_parts(const Scalar& s) {
  const UPoly& n = s.num();
  const UPoly& d = s.den();
  long ni = -1;
  for (size_t i = 0; i < n.size(); ++i)
    if (!n[i].is_zero()) {
      if (ni >= 0) throw std::runtime_error("unit_parts: non-monomial scalar");
      ni = (long)i;
    }
  for (size_t i = 0; i + 1 < d.size(); ++i)
    if (!d[i].is_zero())
      throw std::runtime_error("unit_parts: non-monomial denominator");
  return {ni - (long)(d.size() - 1), n[ni] * d.back().inv()};
}

LPoly lpoly_of(const EPoly& f, long qden) {
  LPoly r;
  for (const auto& [k, c] : f.t) {
    Key lk(k.size() > 0 ? k.begin() + 1 : k.begin(), k.end());
    key_trim(lk);
    r.add_term(lk, Scalar(c) * qpow(Rat(key_at(k, 0), qden)));
  }
  return r;
}

// requires every coefficient denominator to be a u-monomial
EPoly epoly_of(const LPoly& f) {
  EPoly r;
  for (const auto& [k, s] : f.t) {
    const UPoly& n = s.num();
    const UPoly& d = s.den();
    for (size_t i = 0; i + 1 < d.size(); ++i)
      if (!d[i].is_zero())
        throw std::runtime_error("epoly_of: non-monomial denominator");
    Cyclo di = d.back().inv();
    long shift = (long)d.size() - 1;
    for (size_t i = 0; i < n.size(); ++i)
      if (!n[i].is_zero()) r.add_term(ukey((long)i - shift, k), n[i] * di);
  }
  return r;
}

}  // namespace

void normalize(BaFunction& ba, const Session& s) {
  auto it = ba.coeffs.find(key_of(ba.datum->rho, ba.scale));
  if (it == ba.coeffs.end() || it->second.is_zero())
    throw NormalizationDivideByZero("psi_rho vanishes");
  EPoly dl = epoly_of(dual_delta_lambda(ba.datum, s));
  EPoly rn = epoly_of(it->second.num), rd = epoly_of(it->second.den);
  for (auto& [k, c] : ba.coeffs) {
    EPoly num = dl * epoly_of(c.num) * rd;
    EPoly den = epoly_of(c.den) * rn;
    // normalized coefficients are Laurent polynomials in Lambda; collapse
    try {
      num = divide_exact(num, den, 100 * (long)num.size() + 10000);
      den = EPoly::monomial(Key{}, Cyclo(1));
    } catch (const std::runtime_error&) {
    }
    c = LCoeff(lpoly_of(num, s.qden), lpoly_of(den, s.qden));
  }
  ba.normalized = true;
}

namespace {

// k = rep + j * b along direction b (same classing as divide_by_binomial)
std::pair<Key, long> binomial_class(const Key& k, const Key& b) {
  long long num = 0, den = 0;
  for (size_t i = 0; i < b.size(); ++i) {
    num += (long long)key_at(k, i) * b[i];
    den += (long long)b[i] * b[i];
  }
  long long j = num / den;
  if (num % den != 0 && (num < 0) != (den < 0)) --j;  // floor division
  Key rep(std::max(k.size(), b.size()));
  for (size_t i = 0; i < rep.size(); ++i)
    rep[i] = key_at(k, i) - j * key_at(b, i);
  key_trim(rep);
  return {rep, (long)j};
}

Scalar scalar_pow(const Scalar& s, long e) {
  Scalar base = e < 0 ? s.inv() : s;
  Scalar r(1);
  for (long i = 0; i < std::labs(e); ++i) r = r * base;
  return r;
}

using SparseRow = std::map<int, EPoly>;

struct EchRow {
  SparseRow row;
  // fraction-free divisor: the pivot of the step when this row was last
  // updated (rows untouched by a step keep their own divisor, which keeps
  // the exact divisions exact on sparse systems)
  EPoly last = EPoly::monomial(Key{}, Cyclo(1));
};

// fraction-free echelon with Markowitz pivoting on sparse rows.  Consumes the
// rows of M; returns the pivot rows in pivot order together with their pivot
// columns.  Each returned row only involves its own and later pivot columns
// plus the free columns.
void sparse_echelon(std::vector<EchRow>& M, std::vector<SparseRow>& done,
                    std::vector<int>& pivot_cols) {
  bool dbg = std::getenv("BA_DEBUG_ECHELON") != nullptr;
  while (true) {
    if (dbg) {
      size_t mx = 0, tot = 0;
      for (const auto& er : M)
        for (const auto& [c, e] : er.row) {
          mx = std::max(mx, e.size());
          tot += e.size();
        }
      std::cerr << "[ech] step " << done.size() << " rows=" << M.size()
                << " maxterms=" << mx << " totterms=" << tot << std::endl;
    }
    std::vector<int> colcount;
    for (const auto& er : M)
      for (const auto& [c, e] : er.row) {
        if ((int)colcount.size() <= c) colcount.resize(c + 1, 0);
        ++colcount[c];
      }
    // pick the nonzero entry with the smallest fill estimate, then smallest
    size_t bi = M.size();
    int bc = -1;
    long bscore = 0;
    size_t bsz = 0;
    for (size_t i = 0; i < M.size(); ++i)
      for (const auto& [c, e] : M[i].row) {
        long score = (long)(M[i].row.size() - 1) * (colcount[c] - 1) * 1000 +
                     (long)e.size();
        if (bi == M.size() || score < bscore ||
            (score == bscore && e.size() < bsz)) {
          bi = i;
          bc = c;
          bscore = score;
          bsz = e.size();
        }
      }
    if (bi == M.size()) break;
    EchRow piv = std::move(M[bi]);
    M.erase(M.begin() + bi);
    const EPoly& p = piv.row.at(bc);
    for (auto& er : M) {
      auto it = er.row.find(bc);
      if (it == er.row.end()) continue;
      EPoly f = std::move(it->second);
      er.row.erase(it);
      SparseRow upd;
      for (const auto& [c, e] : er.row) {
        auto pit = piv.row.find(c);
        EPoly v = pit == piv.row.end() ? p * e : p * e - f * pit->second;
        if (!v.is_zero()) upd[c] = std::move(v);
      }
      for (const auto& [c, e] : piv.row)
        if (c != bc && !er.row.count(c)) {
          EPoly v = -(f * e);
          if (!v.is_zero()) upd[c] = std::move(v);
        }
      // divide by this row's own previous pivot, row-atomic (a partially
      // divided row would change the row space)
      SparseRow divided;
      bool ok = !(er.last == EPoly::monomial(Key{}, Cyclo(1)));
      if (!ok) {
        er.row = std::move(upd);
      } else {
        for (const auto& [c, e] : upd) {
          try {
            divided[c] = divide_exact(e, er.last);
          } catch (const std::runtime_error&) {
            ok = false;
            break;
          }
        }
        er.row = ok ? std::move(divided) : std::move(upd);
      }
      er.last = p;
    }
    done.push_back(std::move(piv.row));
    pivot_cols.push_back(bc);
  }
}

}  // namespace

BaFunction construct_ba_linear(const DatumPtr& datum, const Session& s,
                               long ell, bool full_weight_lattice) {
  const RootDatum& d = *datum;
  if (!ell_admissible(d, ell))
    throw EllNotAdmissible("ell = " + std::to_string(ell) +
                           " is not admissible for this datum");
  bool root_lat = (ell == 1 && d.cs != Case::c && !full_weight_lattice);
  auto support = support_set(d, ell, root_lat);
  std::sort(support.begin(), support.end(), [&](const Vec& a, const Vec& b) {
    return KeyLess()(key_of(b, s.scale), key_of(a, s.scale));
  });
  size_t n = support.size();

  std::vector<EchRow> M;
  for (const auto& c : quasi_conditions(datum, s, ell)) {
    // psi(lambda, x - v) - eps psi(lambda, x + v) = 0 mod (X^b - cond_val),
    // one equation per residue class of the support modulo Z b
    std::map<Key, SparseRow, KeyLess> classrow;
    for (size_t i = 0; i < n; ++i) {
      const Vec& nu = support[i];
      auto [rep, j] = binomial_class(key_of(nu, s.scale), c.cond_key);
      Scalar vj = scalar_pow(c.cond_val, j);
      auto [u1, c1] = unit_parts(qpow(-d.ip(nu, c.v)) * vj);
      auto [u2, c2] =
          unit_parts((Scalar(0) - c.eps_factor * qpow(d.ip(nu, c.v))) * vj);
      EPoly entry;
      entry.add_term(ukey(u1, key_of(Rat(-1) * c.v, s.scale)), c1);
      entry.add_term(ukey(u2, key_of(c.v, s.scale)), c2);
      auto& row = classrow[rep];
      auto it = row.find((int)i);
      if (it == row.end())
        row[(int)i] = std::move(entry);
      else {
        it->second = it->second + entry;
        if (it->second.is_zero()) row.erase(it);
      }
    }
    for (auto& [rep, row] : classrow)
      if (!row.empty()) M.push_back(EchRow{std::move(row)});
  }

  std::vector<SparseRow> done;
  std::vector<int> pivot_cols;
  sparse_echelon(M, done, pivot_cols);
  long rk = (long)done.size();
  long nullity = (long)n - rk;
  if (nullity != 1) throw SolutionSpaceNotOneDimensional(nullity);

  // back-substitute as fractions of (u, Lambda)-polynomials, collapsing to a
  // polynomial whenever the division happens to be exact
  const EPoly eone = EPoly::monomial(Key{}, Cyclo(1));
  auto try_collapse = [&](EPoly& nm, EPoly& dn) {
    if (dn == eone || nm.is_zero()) {
      if (nm.is_zero()) dn = eone;
      return;
    }
    try {
      nm = divide_exact(nm, dn, 4 * (long)nm.size() + 50);
      dn = eone;
    } catch (const std::runtime_error&) {
    }
  };
  std::vector<EPoly> xn(n), xd(n, eone);
  std::vector<bool> is_pivot(n, false);
  for (int c : pivot_cols) is_pivot[c] = true;
  for (size_t c = 0; c < n; ++c)
    if (!is_pivot[c]) xn[c] = eone;
  for (long i = rk - 1; i >= 0; --i) {
    int c = pivot_cols[i];
    EPoly sn, sd = eone;
    for (const auto& [j, e] : done[i]) {
      if (j == c || xn[j].is_zero()) continue;
      EPoly tn = e * xn[j];
      sn = sd == xd[j] ? sn + tn : sn * xd[j] + tn * sd;
      if (!(sd == xd[j])) sd = sd * xd[j];
      try_collapse(sn, sd);
    }
    xn[c] = -sn;
    xd[c] = sd * done[i].at(c);
    try_collapse(xn[c], xd[c]);
  }
  std::vector<LCoeff> x(n);
  for (size_t c = 0; c < n; ++c)
    if (!xn[c].is_zero())
      x[c] = LCoeff(lpoly_of(xn[c], s.qden), lpoly_of(xd[c], s.qden));

  BaFunction ba;
  ba.datum = datum;
  ba.ell = ell;
  ba.scale = s.scale;
  ba.support = support;
  for (size_t i = 0; i < n; ++i)
    if (!x[i].is_zero()) ba.coeffs[key_of(support[i], s.scale)] = x[i];
  normalize(ba, s);
  return ba;
}

namespace {

// the nonzero shifts nu for the iterated product: all distinct sums of the
// support layers of Q above the polytope
std::vector<Vec> iteration_shifts(const RootDatum& d, long scale) {
  std::vector<Vec> gens;
  std::vector<long> caps;
  if (d.cs == Case::c) {
    long clong = (long)(prec_set(d.mc[0], d.mc[1]).size() +
                        prec_set(d.mc[2], d.mc[3]).size());
    for (size_t i = 0; i < d.pos.size(); ++i)
      if (d.ip(d.pos[i], d.pos[i]) == 4) {
        gens.push_back(Rat(1, 2) * d.pos[i]);  // e_i
        caps.push_back(clong);
      } else {
        gens.push_back(d.pos[i]);
        caps.push_back(d.mc[4].get_num().get_si());
      }
  } else {
    for (size_t i = 0; i < d.pos.size(); ++i) {
      gens.push_back(d.pos[i]);
      caps.push_back(Rat(d.m_pos[i]).get_num().get_si());
    }
  }
  std::set<Key> seen;
  std::vector<Vec> out;
  std::vector<long> idx(gens.size(), 0);
  while (true) {
    size_t p = 0;
    while (p < gens.size() && idx[p] == caps[p]) idx[p++] = 0;
    if (p == gens.size()) break;
    ++idx[p];
    Vec v(d.dim, Rat(0));
    for (size_t i = 0; i < gens.size(); ++i) v = v + Rat(idx[i]) * gens[i];
    if (!is_zero(v) && seen.insert(key_of(v, scale)).second) out.push_back(v);
  }
  return out;
}

}  // namespace

BaFunction construct_ba_iterative(const DatumPtr& datum, const Vec& pi,
                                  const Session& s) {
  const RootDatum& d = *datum;
  auto w = build_weights(datum, s);
  DiffOperator op = d.cs == Case::c ? build_koornwinder_operator(datum, s)
                                    : build_macdonald_operator(datum, pi, s);
  Vec sigma = d.rho;
  LXPoly body = lift_poly(w.Qx);
  std::vector<BinomialFactor> den;
  for (const auto& nu : iteration_shifts(d, s.scale)) {
    LXPoly g;
    std::vector<BinomialFactor> gden;
    apply_rational(op, sigma, body, den, g, gden);
    LCoeff c = orbit_lambda(d, op.pi, nu, s.scale);
    add_binomial_fractions(g, gden, body.scaled(LCoeff() - c), den);
    body = std::move(g);
    den = std::move(gden);
  }
  if (!den.empty())
    throw ConstructionNotPolynomial(
        "iterated product left a nontrivial denominator (" +
        std::to_string(den.size()) + " binomial factors)");

  BaFunction ba;
  ba.datum = datum;
  ba.ell = 1;
  ba.scale = s.scale;
  for (const auto& [k, c] : body.t) {
    if (c.is_zero()) continue;
    Vec mu = sigma + vec_of(k, s.scale, d.dim);
    ba.support.push_back(mu);
    ba.coeffs[key_of(mu, s.scale)] = c;
  }
  normalize(ba, s);
  return ba;
}

BaFunction rank_one_closed_form(const DatumPtr& datum, const Session& s) {
  const RootDatum& d = *datum;
  if (d.cs != Case::b || d.pos.size() != 1)
    throw WrongCase("rank_one_closed_form: A1 case b only");
  Rat mr = d.m_pos[0];
  if (mr.get_den() != 1 || mr < 0)
    throw WrongCase("rank_one_closed_form: m must be a nonnegative integer");
  long m = mr.get_num().get_si();
  Vec alpha = d.pos[0];
  Vec ha = Rat(1, 2) * alpha;

  BaFunction ba;
  ba.datum = datum;
  ba.scale = s.scale;
  LCoeff cur(Scalar(1));
  ba.support.push_back(d.rho);
  ba.coeffs[key_of(d.rho, s.scale)] = cur;
  for (long j = 1; j <= m; ++j) {
    // factor j of the product formula, with q^{1/2} playing the role of the
    // rank-one base and Lambda^{alpha/2} the eigenvalue variable
    Scalar n1 = qpow(Rat(-m + j - 1, 2)) - qpow(Rat(m - j + 1, 2));
    LPoly n2;
    n2.add_term(key_of(Rat(-1) * ha, s.scale), qpow(Rat(-m + j - 1, 2)));
    n2.add_term(key_of(ha, s.scale), Scalar(0) - qpow(Rat(m - j + 1, 2)));
    Scalar d1 = qpow(Rat(j, 2)) - qpow(Rat(-j, 2));
    LPoly d2;
    d2.add_term(key_of(Rat(-1) * ha, s.scale), qpow(Rat(j, 2)));
    d2.add_term(key_of(ha, s.scale), Scalar(0) - qpow(Rat(-j, 2)));
    cur = cur * LCoeff(n2.scaled(n1), d2.scaled(d1));
    Vec nu = d.rho - Rat(j) * alpha;
    ba.support.push_back(nu);
    ba.coeffs[key_of(nu, s.scale)] = cur;
  }
  return ba;
}

namespace {

Scalar eval_lpoly(const RootDatum& d, const LPoly& p, const Vec& l0,
                  long scale) {
  Scalar r(0);
  for (const auto& [k, c] : p.t)
    r += c * qpow(d.ip(vec_of(k, scale, d.dim), l0));
  return r;
}

}  // namespace

Scalar eval_lcoeff(const RootDatum& d, const LCoeff& c, const Vec& lambda0,
                   long scale) {
  Scalar dn = eval_lpoly(d, c.den, lambda0, scale);
  if (dn.is_zero())
    throw PoleAtLambda("coefficient denominator vanishes at lambda0");
  return eval_lpoly(d, c.num, lambda0, scale) * dn.inv();
}

Scalar evaluate(const BaFunction& ba, const Vec& lambda0, const Vec& x0) {
  const RootDatum& d = *ba.datum;
  Scalar r(0);
  for (const auto& [k, c] : ba.coeffs) {
    Vec nu = vec_of(k, ba.scale, d.dim);
    r += eval_lcoeff(d, c, lambda0, ba.scale) *
         qpow(d.ip(lambda0, x0) / Rat(ba.ell) + d.ip(nu, x0));
  }
  return r;
}

XPoly specialize_lambda(const BaFunction& ba, const Vec& lambda0) {
  const RootDatum& d = *ba.datum;
  XPoly r;
  for (const auto& [k, c] : ba.coeffs) {
    Vec nu = vec_of(k, ba.scale, d.dim);
    r.add_term(key_of(Rat(1, ba.ell) * lambda0 + nu, ba.scale),
               eval_lcoeff(d, c, lambda0, ba.scale));
  }
  return r;
}

XPoly symmetrize(const BaFunction& ba, const Vec& lambda0, int sign) {
  const RootDatum& d = *ba.datum;
  XPoly r;
  for (size_t i = 0; i < d.weyl.size(); ++i) {
    XPoly p = specialize_lambda(ba, mat_apply(d.weyl[i], lambda0));
    if (sign < 0 && d.weyl_sign[i] == -1)
      r -= p;
    else
      r += p;
  }
  return r;
}

std::map<Key, LPoly, KeyLess> coefficient_table(const BaFunction& ba) {
  std::map<Key, LPoly, KeyLess> out;
  for (const auto& [k, c] : ba.coeffs) {
    if (c.is_zero()) continue;
    out[k] = divide_exact(c.num, c.den);
  }
  return out;
}

}  // namespace ba
