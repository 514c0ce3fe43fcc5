#include "ba/rootdata.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace ba {

namespace {

bool is_nonneg_int(const Rat& r) { return r.get_den() == 1 && r >= 0; }
bool is_int(const Rat& r) { return r.get_den() == 1; }

Vec ev(int dim, int i, const Rat& c = Rat(1)) {
  Vec v(dim, Rat(0));
  v[i] = c;
  return v;
}

struct FamilyData {
  int dim;
  Rat gram;
  std::vector<Vec> simple;
  std::vector<Vec> pos;
};

FamilyData family_roots(const std::string& family, int rank) {
  FamilyData f;
  if (family == "A") {
    int n = rank + 1;
    f.dim = n;
    f.gram = 1;
    for (int i = 0; i < rank; ++i) f.simple.push_back(ev(n, i) - ev(n, i + 1));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) f.pos.push_back(ev(n, i) - ev(n, j));
  } else if (family == "B") {
    if (rank < 2) throw UnsupportedFamily("B requires rank >= 2");
    f.dim = rank;
    f.gram = 2;  // short roots e_i get squared length 2
    for (int i = 0; i + 1 < rank; ++i)
      f.simple.push_back(ev(rank, i) - ev(rank, i + 1));
    f.simple.push_back(ev(rank, rank - 1));
    for (int i = 0; i < rank; ++i) f.pos.push_back(ev(rank, i));
    for (int i = 0; i < rank; ++i)
      for (int j = i + 1; j < rank; ++j) {
        f.pos.push_back(ev(rank, i) - ev(rank, j));
        f.pos.push_back(ev(rank, i) + ev(rank, j));
      }
  } else if (family == "C") {
    if (rank < 1) throw UnsupportedFamily("C requires rank >= 1");
    f.dim = rank;
    f.gram = 1;
    for (int i = 0; i + 1 < rank; ++i)
      f.simple.push_back(ev(rank, i) - ev(rank, i + 1));
    f.simple.push_back(ev(rank, rank - 1, Rat(2)));
    for (int i = 0; i < rank; ++i)
      for (int j = i + 1; j < rank; ++j) {
        f.pos.push_back(ev(rank, i) - ev(rank, j));
        f.pos.push_back(ev(rank, i) + ev(rank, j));
      }
    for (int i = 0; i < rank; ++i) f.pos.push_back(ev(rank, i, Rat(2)));
  } else if (family == "D") {
    if (rank < 3) throw UnsupportedFamily("D requires rank >= 3");
    f.dim = rank;
    f.gram = 1;
    for (int i = 0; i + 1 < rank; ++i)
      f.simple.push_back(ev(rank, i) - ev(rank, i + 1));
    f.simple.push_back(ev(rank, rank - 2) + ev(rank, rank - 1));
    for (int i = 0; i < rank; ++i)
      for (int j = i + 1; j < rank; ++j) {
        f.pos.push_back(ev(rank, i) - ev(rank, j));
        f.pos.push_back(ev(rank, i) + ev(rank, j));
      }
  } else if (family == "G2") {
    if (rank != 2) throw UnsupportedFamily("G2 has rank 2");
    f.dim = 3;
    f.gram = 1;
    Vec a1 = ev(3, 0) - ev(3, 1);                      // short, |a1|^2 = 2
    Vec a2 = Rat(-2) * ev(3, 0) + ev(3, 1) + ev(3, 2); // long,  |a2|^2 = 6
    f.simple = {a1, a2};
    f.pos = {a1,
             a2,
             a1 + a2,
             Rat(2) * a1 + a2,
             Rat(3) * a1 + a2,
             Rat(3) * a1 + Rat(2) * a2};
  } else {
    throw UnsupportedFamily("unsupported family: " + family +
                            " (E and F are rejected)");
  }
  return f;
}

void build_weyl(RootDatum& d) {
  std::vector<Mat> gens;
  for (const auto& a : d.simple) gens.push_back(reflection_matrix(a));
  std::map<Mat, int> seen;
  std::vector<Mat> elems{mat_identity(d.dim)};
  std::vector<int> sign{1};
  seen[elems[0]] = 0;
  for (size_t i = 0; i < elems.size(); ++i) {
    for (const auto& g : gens) {
      Mat w = mat_mul(g, elems[i]);
      if (!seen.count(w)) {
        seen[w] = (int)elems.size();
        elems.push_back(w);
        sign.push_back(-sign[i]);
      }
    }
  }
  d.weyl = std::move(elems);
  d.weyl_sign = std::move(sign);
}

void build_lattice_data(RootDatum& d) {
  // span basis and orthogonal complement
  d.span_basis = d.simple;
  Mat rows = d.simple;
  d.span_perp = nullspace(rows);
  // fundamental weights: omega_i in root span with <omega_i, alpha_j^vee> = delta_ij
  int r = d.rank;
  Mat A(r, Vec(r, Rat(0)));
  for (int j = 0; j < r; ++j) {
    Vec cj = d.coroot(d.simple[j]);
    for (int k = 0; k < r; ++k) A[j][k] = d.ip(d.simple[k], cj);
  }
  d.fw.clear();
  for (int i = 0; i < r; ++i) {
    Vec b(r, Rat(0));
    b[i] = 1;
    auto c = solve_linear(A, b);
    if (!c) throw std::runtime_error("fundamental weight solve failed");
    Vec w(d.dim, Rat(0));
    for (int k = 0; k < r; ++k) w = w + (*c)[k] * d.simple[k];
    d.fw.push_back(std::move(w));
  }
}

void finish_datum(RootDatum& d) {
  build_weyl(d);
  build_lattice_data(d);
  d.rho = Vec(d.dim, Rat(0));
  d.rho_star = Vec(d.dim, Rat(0));
  d.rho_tilde = Vec(d.dim, Rat(0));
  d.M = 0;
  d.Mtilde = 0;
  for (size_t i = 0; i < d.pos.size(); ++i) {
    d.rho = d.rho + (d.m_pos[i] / 2) * d.pos[i];
    d.rho_star = d.rho_star + (d.mstar_pos[i] / 2) * d.pos_star[i];
    d.rho_tilde = d.rho_tilde + ((d.m_pos[i] + 1) / 2) * d.pos[i];
    d.M += d.m_pos[i];
    d.Mtilde += d.m_pos[i] + 1;
  }
}

// the starred datum built from an a/b-case primal (case c handled separately)
DatumPtr make_dual_ab(const RootDatum& d) {
  auto dd = std::make_shared<RootDatum>();
  dd->cs = d.cs;
  dd->family = d.family + "*";
  dd->rank = d.rank;
  dd->dim = d.dim;
  dd->gram = d.gram;
  for (const auto& a : d.simple)
    dd->simple.push_back(d.cs == Case::b ? d.coroot(a) : a);
  for (size_t i = 0; i < d.pos.size(); ++i) {
    dd->pos.push_back(d.pos_star[i]);
    dd->m_pos.push_back(d.mstar_pos[i]);
    const Vec& b = d.pos_star[i];
    dd->qexp_pos.push_back(d.cs == Case::b ? d.ip(b, b) / 2 : Rat(1));
    dd->pos_star.push_back(d.cs == Case::b ? dd->coroot(b) : b);
    dd->mstar_pos.push_back(d.m_pos[i]);
  }
  finish_datum(*dd);
  return dd;
}

std::vector<Rat> dual_c_params(const std::vector<Rat>& m) {
  return {Rat(1) / 2 + (m[0] + m[1] + m[2] + m[3]) / 2,
          Rat(-1) / 2 + (m[0] + m[1] - m[2] - m[3]) / 2,
          Rat(-1) / 2 + (m[0] - m[1] + m[2] - m[3]) / 2,
          Rat(-1) / 2 + (m[0] - m[1] - m[2] + m[3]) / 2, m[4]};
}

DatumPtr build_datum_nodual(Case cs, const std::string& family, int rank,
                            const std::vector<Rat>& mult) {
  auto d = std::make_shared<RootDatum>();
  d->cs = cs;
  d->family = family;
  d->rank = rank;
  FamilyData f = family_roots(family, rank);
  d->dim = f.dim;
  d->gram = f.gram;
  d->simple = std::move(f.simple);
  d->pos = std::move(f.pos);

  if (cs == Case::c) {
    if (family != "C")
      throw UnsupportedFamily("case c requires the C_n root system");
    if (mult.size() != 5)
      throw IntegralityViolation("case c needs five parameters m1..m5");
    d->mc = mult;
    const auto& m = d->mc;
    for (int i = 0; i < 4; ++i)
      if (Rat(m[i] * 2).get_den() != 1)
        throw IntegralityViolation("case c: m1..m4 must be half-integers");
    if (!is_nonneg_int(m[4]))
      throw IntegralityViolation("case c: m5 must be a nonnegative integer");
    auto ms = dual_c_params(m);
    for (int i = 0; i < 4; ++i)
      if (m[i] < Rat(-1) / 2 || ms[i] < Rat(-1) / 2)
        throw IntegralityViolation("case c: m_i and m*_i must be >= -1/2");
    Rat mlong = Rat(1) / 2 + (m[0] + m[1] + m[2] + m[3]) / 2;
    for (const auto& a : d->pos) {
      Rat a2 = d->ip(a, a);
      bool lng = (a2 == 4);  // 2e_i
      d->m_pos.push_back(lng ? mlong : m[4]);
      d->qexp_pos.push_back(1);
      d->pos_star.push_back(a);
      d->mstar_pos.push_back(lng ? m[0] : m[4]);
    }
  } else {
    // orbit multiplicities: short first (or one value for all)
    std::set<Rat> lengths;
    for (const auto& a : d->pos) lengths.insert(d->ip(a, a));
    if (mult.empty() || mult.size() > lengths.size())
      throw IntegralityViolation("wrong number of multiplicities");
    for (const auto& mv : mult)
      if (!is_nonneg_int(mv))
        throw IntegralityViolation("cases a/b: m_alpha must be in Z_+");
    Rat shortlen = *lengths.begin();
    for (const auto& a : d->pos) {
      Rat a2 = d->ip(a, a);
      Rat m = (a2 == shortlen || mult.size() == 1) ? mult[0] : mult[1];
      d->m_pos.push_back(m);
      d->qexp_pos.push_back(cs == Case::b ? a2 / 2 : Rat(1));
      d->pos_star.push_back(cs == Case::b ? d->coroot(a) : a);
      d->mstar_pos.push_back(m);
    }
  }
  finish_datum(*d);
  return d;
}

}  // namespace

Vec RootDatum::coroot(const Vec& alpha) const {
  return (Rat(2) / ip(alpha, alpha)) * alpha;
}

bool RootDatum::in_root_span(const Vec& v) const {
  for (const auto& k : span_perp)
    if (edot(v, k) != 0) return false;
  return true;
}

Vec RootDatum::p_coordinates(const Vec& v) const {
  Vec c(rank);
  for (int i = 0; i < rank; ++i) c[i] = ip(v, coroot(simple[i]));
  return c;
}

bool RootDatum::in_lattice_P(const Vec& v) const {
  if (!in_root_span(v)) return false;
  for (const auto& c : p_coordinates(v))
    if (!is_int(c)) return false;
  return true;
}

bool RootDatum::in_lattice_Q(const Vec& v) const {
  if (!in_root_span(v)) return false;
  Mat A(dim, Vec(rank));
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < rank; ++j) A[i][j] = simple[j][i];
  auto c = solve_linear(A, v);
  if (!c) return false;
  for (const auto& x : *c)
    if (!is_int(x)) return false;
  return true;
}

bool RootDatum::is_dominant(const Vec& v) const {
  for (const auto& a : simple)
    if (ip(v, coroot(a)) < 0) return false;
  return true;
}

bool RootDatum::dominance_less(const Vec& nu, const Vec& lambda) const {
  Vec diff = lambda - nu;
  if (is_zero(diff)) return false;
  if (!in_root_span(diff)) return false;
  Mat A(dim, Vec(rank));
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < rank; ++j) A[i][j] = simple[j][i];
  auto c = solve_linear(A, diff);
  if (!c) return false;
  for (const auto& x : *c)
    if (x < 0) return false;
  return true;
}

DatumPtr build_root_datum(Case cs, const std::string& family, int rank,
                          const std::vector<Rat>& multiplicities) {
  auto d = build_datum_nodual(cs, family, rank, multiplicities);
  DatumPtr dd;
  if (cs == Case::c)
    dd = build_datum_nodual(cs, family, rank, dual_c_params(multiplicities));
  else
    dd = make_dual_ab(*d);
  d->dual = dd;
  if (cs == Case::c)
    dd->dual = build_datum_nodual(cs, family, rank, d->mc);
  else
    dd->dual = make_dual_ab(*dd);
  d->fw_star = dd->fw;
  dd->fw_star = dd->dual->fw;
  return d;
}

std::vector<Vec> weyl_orbit(const RootDatum& d, const Vec& v) {
  std::set<Vec> orb;
  for (const auto& w : d.weyl) orb.insert(mat_apply(w, v));
  return std::vector<Vec>(orb.begin(), orb.end());
}

Vec dominant_representative(const RootDatum& d, const Vec& v, Mat* w_out) {
  Vec cur = v;
  Mat w = mat_identity(d.dim);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& a : d.simple) {
      if (d.ip(cur, a) < 0) {
        Mat s = reflection_matrix(a);
        cur = mat_apply(s, cur);
        w = mat_mul(s, w);
        changed = true;
      }
    }
  }
  if (w_out) *w_out = w;
  return cur;
}

std::vector<MinusculeWeight> minuscule_and_quasiminuscule(const RootDatum& d) {
  const RootDatum& dd = *d.dual;  // weights of R' = R*
  std::vector<MinusculeWeight> out;
  for (const auto& pi : dd.fw) {
    bool ok = true;
    for (const auto& b : dd.pos) {
      Rat p = dd.ip(pi, dd.coroot(b));
      if (p < -1 || p > 1) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back({pi, true});
  }
  // quasi-minuscule: the short dominant root of R'
  Rat shortlen(-1);
  for (const auto& b : dd.pos) {
    Rat l = dd.ip(b, b);
    if (shortlen < 0 || l < shortlen) shortlen = l;
  }
  for (const auto& b : dd.pos)
    if (dd.ip(b, b) == shortlen && dd.is_dominant(b)) {
      out.push_back({b, false});
      break;
    }
  return out;
}

namespace {

// facet-normal candidates of the zonotope (directions in the root span
// orthogonal to rank-1 independent roots)
std::vector<Vec> facet_normals(const RootDatum& d) {
  std::vector<Vec> dirs;  // distinct positive-root directions
  for (const auto& a : d.pos) dirs.push_back(a);
  std::vector<Vec> normals;
  int need = d.rank - 1;
  std::vector<int> idx(need);
  auto try_subset = [&](const std::vector<int>& sel) {
    Mat rows = d.span_perp;
    for (int i : sel) rows.push_back(dirs[i]);
    auto ns = nullspace(rows);
    if (ns.size() == 1) {
      Vec u = ns[0];
      Int l = denominator_lcm(u);
      u = Rat(l) * u;
      normals.push_back(u);
    }
  };
  if (need == 0) {
    Mat rows = d.span_perp;
    auto ns = nullspace(rows);
    if (ns.size() == 1) normals.push_back(ns[0]);
  } else {
    // iterate over subsets of size need
    std::vector<int> sel;
    std::function<void(int)> rec = [&](int start) {
      if ((int)sel.size() == need) {
        try_subset(sel);
        return;
      }
      for (int i = start; i < (int)dirs.size(); ++i) {
        sel.push_back(i);
        rec(i + 1);
        sel.pop_back();
      }
    };
    rec(0);
  }
  return normals;
}

Rat support_h(const RootDatum& d, const Vec& u) {
  Rat h(0);
  for (size_t i = 0; i < d.pos.size(); ++i) {
    Rat p = d.ip(d.pos[i], u);
    h += d.m_pos[i] / 2 * (p < 0 ? -p : p);
  }
  return h;
}

}  // namespace

bool in_support_polytope(const RootDatum& d, const Vec& mu) {
  if (!d.in_root_span(mu)) return false;
  static std::map<std::pair<Mat, std::vector<Rat>>, std::vector<Vec>> cache;
  auto key = std::make_pair(d.pos, d.m_pos);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, facet_normals(d)).first;
  for (const auto& u : it->second) {
    Rat p = d.ip(mu, u);
    if (p < 0) p = -p;
    if (p > support_h(d, u)) return false;
  }
  return true;
}

std::vector<Vec> support_set(const RootDatum& d, long ell, bool use_root_lattice) {
  // lattice rho + (1/ell) L with L = P or Q; basis of L:
  std::vector<Vec> basis;
  if (use_root_lattice)
    basis = d.simple;
  else
    basis = d.fw;
  for (auto& b : basis) b = Rat(1, ell) * b;
  // dual basis within the root span to bound coefficients
  int r = d.rank;
  Mat A(r, Vec(r));
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) A[i][j] = d.ip(basis[i], basis[j]);
  std::vector<Vec> dualb;
  for (int i = 0; i < r; ++i) {
    Vec e(r, Rat(0));
    e[i] = 1;
    auto c = solve_linear(A, e);
    if (!c) throw std::runtime_error("support_set: degenerate basis");
    Vec u(d.dim, Rat(0));
    for (int k = 0; k < r; ++k) u = u + (*c)[k] * basis[k];
    dualb.push_back(std::move(u));
  }
  // coefficient bounds: c_i = <nu, dualb_i>, |c_i| <= h(dualb_i) (+ rho offset)
  std::vector<long> lo(r), hi(r);
  for (int i = 0; i < r; ++i) {
    Rat h = support_h(d, dualb[i]);
    Rat off = d.ip(d.rho, dualb[i]);
    Rat a = -h - off, b = h - off;
    mpz_class fa, fb;
    mpz_fdiv_q(fa.get_mpz_t(), a.get_num_mpz_t(), a.get_den_mpz_t());
    mpz_cdiv_q(fb.get_mpz_t(), b.get_num_mpz_t(), b.get_den_mpz_t());
    lo[i] = fa.get_si();
    hi[i] = fb.get_si();
  }
  std::vector<Vec> out;
  std::vector<long> c(r, 0);
  std::function<void(int, Vec)> rec = [&](int i, Vec acc) {
    if (i == r) {
      if (in_support_polytope(d, acc)) out.push_back(acc);
      return;
    }
    for (long k = lo[i]; k <= hi[i]; ++k)
      rec(i + 1, acc + Rat(k) * basis[i]);
  };
  rec(0, d.rho);
  std::sort(out.begin(), out.end());
  return out;
}

Rat nu_R(const RootDatum& d) {
  Rat mx(0);
  for (const auto& a : d.pos) {
    Rat l = d.ip(a, a) / 2;
    if (l > mx) mx = l;
  }
  return mx;
}

bool ell_admissible(const RootDatum& d, long ell) {
  if (ell < 1) return false;
  if (ell == 1) return true;  // untwisted
  switch (d.cs) {
    case Case::b:
      return true;
    case Case::a: {
      Rat nu = nu_R(d);
      // ell in nu_R * Z intersect (1/nu_{R^vee}) * Z; the latter is automatic
      // for integer ell since nu_{R^vee} in {1,2,3}
      Rat q = Rat(ell) / nu;
      return q.get_den() == 1;
    }
    case Case::c:
      return ell % 2 == 0;
  }
  return false;
}

}  // namespace ba
