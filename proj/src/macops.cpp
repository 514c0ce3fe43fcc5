#include "ba/macops.hpp"

#include <algorithm>

namespace ba {

LCoeff lambda_monomial(const Vec& tau, long scale, const Scalar& c) {
  return LCoeff(LPoly::monomial(key_of(tau, scale), c));
}

LXPoly lift_poly(const XPoly& f) {
  LXPoly r;
  for (const auto& [k, c] : f.t) r.t.emplace(k, LCoeff(Scalar(c)));
  return r;
}

Scalar orbit_value(const RootDatum& d, const Vec& pi, const Vec& pt) {
  Scalar r(0);
  for (const auto& tau : weyl_orbit(d, pi)) r += qpow(d.ip(tau, pt));
  return r;
}

LCoeff orbit_lambda(const RootDatum& d, const Vec& pi, const Vec& nu, long scale) {
  LPoly p;
  for (const auto& tau : weyl_orbit(d, pi))
    p.add_term(key_of(tau, scale), qpow(d.ip(nu, tau)));
  return LCoeff(p);
}

XPoly orbit_poly(const RootDatum& d, const Vec& lambda, long scale) {
  XPoly p;
  for (const auto& tau : weyl_orbit(d, lambda))
    p.add_term(key_of(tau, scale), Scalar(1));
  return p;
}

XPoly shift_x(const RootDatum& d, const XPoly& f, const Vec& v, long scale) {
  XPoly r;
  for (const auto& [k, c] : f.t)
    r.add_term(k, c * qpow(d.ip(vec_of(k, scale, d.dim), v)));
  return r;
}

namespace {

// multiplicity per positive root, possibly overridden per orbit (short first)
std::vector<Rat> root_multiplicities(const RootDatum& d,
                                     const std::vector<Rat>* ov) {
  if (!ov) return d.m_pos;
  Rat shortlen(-1);
  for (const auto& a : d.pos) {
    Rat l = d.ip(a, a);
    if (shortlen < 0 || l < shortlen) shortlen = l;
  }
  std::vector<Rat> m(d.pos.size());
  for (size_t i = 0; i < d.pos.size(); ++i)
    m[i] = (d.ip(d.pos[i], d.pos[i]) == shortlen || ov->size() == 1)
               ? (*ov)[0]
               : (*ov)[1];
  return m;
}

Vec half_weighted_sum(const RootDatum& d, const std::vector<Rat>& m) {
  Vec r(d.dim, Rat(0));
  for (size_t i = 0; i < d.pos.size(); ++i) r = r + (m[i] / 2) * d.pos[i];
  return r;
}

void conv(const Scalar& s, Scalar& out) { out = s; }
void conv(const Scalar& s, LCoeff& out) { out = LCoeff(s); }

template <class C>
ExpPoly<C> binom_poly(const Key& b, const C& s) {  // X^b - s
  ExpPoly<C> p = ExpPoly<C>::monomial(b, C(1));
  p += ExpPoly<C>::monomial(Key{}, C(0) - s);
  return p;
}

template <class C>
ExpPoly<C> one_minus(const XBinomial& f, long scale) {  // 1 - c X^a
  C mc;
  conv(Scalar(0) - f.c, mc);
  ExpPoly<C> p = ExpPoly<C>::monomial(Key{}, C(1));
  p += ExpPoly<C>::monomial(key_of(f.a, scale), mc);
  return p;
}

template <class C>
struct DenFactor {
  Key b;
  C s;
  int mult;
};

template <class C>
void push_den(std::vector<DenFactor<C>>& den, const Key& b, const C& s) {
  for (auto& f : den)
    if (f.b == b && f.s == s) {
      ++f.mult;
      return;
    }
  den.push_back({b, s, 1});
}

template <class C>
int den_mult(const std::vector<DenFactor<C>>& den, const Key& b, const C& s) {
  for (const auto& f : den)
    if (f.b == b && f.s == s) return f.mult;
  return 0;
}

// core of operator application: shift(tau) must return T^tau f (plain form)
// or T^tau f - f (shifted form); fbody is f itself (for the a0 term).
template <class C, class ShiftFn>
void apply_core(const DiffOperator& op, const ExpPoly<C>& fbody, ShiftFn&& shift,
                ExpPoly<C>& out_num, ExpPoly<C>& out_den, bool& exact) {
  struct TermEval {
    ExpPoly<C> num;
    std::vector<DenFactor<C>> den;
  };
  std::vector<TermEval> evals;
  for (const auto& t : op.terms) {
    TermEval e;
    C pref;
    conv(t.pref, pref);
    e.num = shift(t.tau).scaled(pref);
    for (const auto& nb : t.num) e.num = e.num * one_minus<C>(nb, op.scale);
    for (const auto& db : t.den) {
      // normalize (1 - c X^a) to (X^b - s) with b in canonical direction
      Key k = key_of(db.a, op.scale);
      if (KeyLess()(Key{}, k)) {
        // (1 - c X^a) = (-c)(X^a - c^{-1})
        C s, adj;
        conv(db.c.inv(), s);
        conv(Scalar(0) - db.c.inv(), adj);
        e.num = e.num.scaled(adj);
        push_den(e.den, k, s);
      } else {
        // (1 - c X^a) = X^a (X^{-a} - c)
        Key nk(k.size());
        for (size_t i = 0; i < k.size(); ++i) nk[i] = -k[i];
        C s;
        conv(db.c, s);
        e.num = e.num * ExpPoly<C>::monomial(nk, C(1));
        push_den(e.den, nk, s);
      }
    }
    evals.push_back(std::move(e));
  }
  // common denominator (multiset max)
  std::vector<DenFactor<C>> common;
  for (const auto& e : evals)
    for (const auto& f : e.den) {
      bool found = false;
      for (auto& g : common)
        if (g.b == f.b && g.s == f.s) {
          g.mult = std::max(g.mult, f.mult);
          found = true;
        }
      if (!found) common.push_back(f);
    }
  ExpPoly<C> total;
  for (auto& e : evals) {
    for (const auto& g : common) {
      int extra = g.mult - den_mult(e.den, g.b, g.s);
      for (int i = 0; i < extra; ++i) e.num = e.num * binom_poly(g.b, g.s);
    }
    total += e.num;
  }
  if (op.shifted_form) {
    C a0;
    conv(op.a0, a0);
    ExpPoly<C> cst = fbody.scaled(a0);
    for (const auto& g : common)
      for (int i = 0; i < g.mult; ++i) cst = cst * binom_poly(g.b, g.s);
    total += cst;
  }
  // cancel the common denominator factor by factor; retry so that factors
  // whose cancellation needs the others removed first still get a chance
  std::vector<DenFactor<C>> remaining = common;
  bool progress = true;
  while (progress && !remaining.empty() && !total.is_zero()) {
    progress = false;
    for (size_t i = 0; i < remaining.size(); ++i) {
      try {
        ExpPoly<C> q = divide_by_binomial(total, remaining[i].b, remaining[i].s);
        total = std::move(q);
        if (--remaining[i].mult == 0) remaining.erase(remaining.begin() + i);
        progress = true;
        break;
      } catch (const std::runtime_error&) {
      }
    }
  }
  if (total.is_zero()) remaining.clear();
  out_num = std::move(total);
  out_den = ExpPoly<C>::monomial(Key{}, C(1));
  for (const auto& g : remaining)
    for (int i = 0; i < g.mult; ++i) out_den = out_den * binom_poly(g.b, g.s);
  exact = remaining.empty();
}

}  // namespace

DiffOperator build_macdonald_operator(const DatumPtr& datum, const Vec& pi,
                                      const Session& s,
                                      const std::vector<Rat>* m_override) {
  const RootDatum& d = *datum;
  if (d.cs == Case::c)
    throw WrongCase("build_macdonald_operator: use the Koornwinder operator in case c");
  // pairing vector giving <(alpha')^vee, .>: alpha' = alpha^vee in case b,
  // alpha in case a, so (alpha')^vee = alpha (b) or alpha^vee (a)
  auto pairing_vec = [&](const Vec& a) {
    return d.cs == Case::b ? a : d.coroot(a);
  };
  bool minuscule = true;
  for (const auto& a : d.pos) {
    Rat c2 = d.ip(pairing_vec(a), pi);
    if (c2.get_den() != 1)
      throw NotQuasiMinuscule("pi is not in the weight lattice P(R')");
    Rat ab = abs(c2);
    if (ab > 2) throw NotQuasiMinuscule("pi pairs with a coroot beyond 2");
    if (ab == 2) {
      // allowed only against alpha' = +-pi (quasi-minuscule case)
      Vec ap = d.cs == Case::b ? d.coroot(a) : a;
      if (!(ap == pi || Vec(Rat(-1) * ap) == pi))
        throw NotQuasiMinuscule("pi is not quasi-minuscule in P(R')");
      minuscule = false;
    }
  }
  std::vector<Rat> m = root_multiplicities(d, m_override);
  Vec rho_m = half_weighted_sum(d, m);
  auto root_index = [&](const Vec& a) {
    for (size_t i = 0; i < d.pos.size(); ++i)
      if (d.pos[i] == a || Vec(Rat(-1) * d.pos[i]) == a) return i;
    throw std::runtime_error("root not found");
  };

  DiffOperator op;
  op.datum = datum;
  op.scale = s.scale;
  op.pi = pi;
  op.shifted_form = !minuscule;
  for (const auto& tau : weyl_orbit(d, pi)) {
    OpTerm t;
    t.tau = tau;
    t.pref = Scalar(1);
    for (int sgn : {1, -1})
      for (const auto& p : d.pos) {
        Vec a = Rat(sgn) * p;
        size_t i = root_index(a);
        Rat e = d.qexp_pos[i];
        if (m[i] != 0 && d.ip(a, tau) > 0) {
          t.pref *= qpow(m[i] * e / 2);  // t_alpha^{-1/2}
          t.num.push_back({a, qpow(-m[i] * e)});
          t.den.push_back({a, Scalar(1)});
        }
        if (m[i] != 0 && !minuscule && d.ip(pairing_vec(a), tau) == 2) {
          t.pref *= qpow(m[i] * e / 2);
          t.num.push_back({a, qpow((1 - m[i]) * e)});
          t.den.push_back({a, qpow(e)});
        }
      }
    op.terms.push_back(std::move(t));
  }
  if (op.shifted_form) op.a0 = orbit_value(d, pi, Rat(-1) * rho_m);
  return op;
}

DiffOperator build_koornwinder_operator(const DatumPtr& datum, const Session& s,
                                        const std::vector<Rat>* mc_override) {
  const RootDatum& d = *datum;
  if (d.cs != Case::c)
    throw WrongCase("build_koornwinder_operator: case c only");
  std::vector<Rat> mc = mc_override ? *mc_override : d.mc;
  Rat msum = mc[0] + mc[1] + mc[2] + mc[3];
  Rat m_long = Rat(1, 2) + msum / 2;
  std::vector<Rat> m(d.pos.size());
  for (size_t i = 0; i < d.pos.size(); ++i)
    m[i] = d.ip(d.pos[i], d.pos[i]) == 4 ? m_long : mc[4];
  Vec rho_m = half_weighted_sum(d, m);

  Vec pi(d.dim, Rat(0));
  pi[0] = 1;
  DiffOperator op;
  op.datum = datum;
  op.scale = s.scale;
  op.pi = pi;
  op.shifted_form = true;
  for (const auto& tau : weyl_orbit(d, pi)) {
    OpTerm t;
    t.tau = tau;
    // v(z) with z = <tau,x>: (q/(t1 t2 t3 t4))^{1/2} = q^{(1+sum m_i)/2}
    t.pref = qpow((1 + msum) / 2);
    Scalar sign[4] = {Scalar(1), Scalar(1), Scalar(Rat(-1)), Scalar(Rat(-1))};
    for (int i = 0; i < 4; ++i)
      t.num.push_back({tau, sign[i] * qpow(-mc[i])});
    Vec tau2 = Rat(2) * tau;
    t.den.push_back({tau2, Scalar(1)});
    t.den.push_back({tau2, qpow(1)});
    for (int sgn : {1, -1})
      for (size_t i = 0; i < d.pos.size(); ++i) {
        if (d.ip(d.pos[i], d.pos[i]) == 4) continue;  // R^2 only
        Vec a = Rat(sgn) * d.pos[i];
        if (mc[4] != 0 && d.ip(a, tau) > 0) {
          Rat e = d.qexp_pos[i];
          t.pref *= qpow(mc[4] * e / 2);
          t.num.push_back({a, qpow(-mc[4] * e)});
          t.den.push_back({a, Scalar(1)});
        }
      }
    op.terms.push_back(std::move(t));
  }
  op.a0 = orbit_value(d, pi, Rat(-1) * rho_m);
  return op;
}

AppliedPoly apply(const DiffOperator& op, const XPoly& f) {
  const RootDatum& d = *op.datum;
  auto shift = [&](const Vec& tau) {
    XPoly g = shift_x(d, f, tau, op.scale);
    if (op.shifted_form) g -= f;
    return g;
  };
  AppliedPoly r;
  apply_core<Scalar>(op, f, shift, r.num, r.den, r.exact);
  return r;
}

ExpFunction apply(const DiffOperator& op, const ExpFunction& f) {
  if (!f.exact)
    throw std::runtime_error("apply: input is in flagged rational form");
  const RootDatum& d = *op.datum;
  auto shift = [&](const Vec& tau) {
    LXPoly g;
    for (const auto& [k, c] : f.body.t) {
      Vec nu = vec_of(k, op.scale, d.dim);
      Scalar qf = qpow(d.ip(f.sigma, tau) + d.ip(nu, tau));
      g.add_term(k, c * lambda_monomial(tau, op.scale, qf));
    }
    if (op.shifted_form) g -= f.body;
    return g;
  };
  ExpFunction r;
  r.datum = f.datum;
  r.scale = f.scale;
  r.sigma = f.sigma;
  apply_core<LCoeff>(op, f.body, shift, r.body, r.den, r.exact);
  return r;
}

std::vector<ShiftCondition> quasi_conditions(const DatumPtr& datum,
                                             const Session& s, long ell) {
  const RootDatum& d = *datum;
  std::vector<ShiftCondition> out;
  long N = s.N;
  for (size_t i = 0; i < d.pos.size(); ++i) {
    const Vec& a = d.pos[i];
    bool first_kind = d.cs == Case::c && d.ip(a, a) == 4;
    if (!first_kind) {
      long mj = Rat(d.m_pos[i]).get_num().get_si();
      for (long j = 1; j <= mj; ++j) {
        if (ell == 1) {
          Vec v = (Rat(j) / 2) * d.pos_star[i];
          out.push_back(
              {a, v, key_of(a, s.scale), Scalar(1), Scalar(1), Rat(j), 0});
        } else {
          // twisted: shift (j/2) alpha, condition q^{<alpha,x>/ell} = eps
          Vec v = (Rat(j) / 2) * a;
          Key ck = key_of((Rat(1) / ell) * a, s.scale);
          for (long k = 0; k < ell; ++k) {
            long zp = k * (N / ell);
            out.push_back({a, v, ck, Scalar(Cyclo::zeta_pow(zp)),
                           Scalar(Cyclo::zeta_pow(zp * j)), Rat(j), zp});
          }
        }
      }
    } else {
      Vec e = Rat(1, 2) * a;  // a = 2 e_i
      auto sp = prec_set(d.mc[0], d.mc[1]);
      auto sm = prec_set(d.mc[2], d.mc[3]);
      if (ell == 1) {
        for (const auto& sv : sp)
          out.push_back(
              {a, sv * e, key_of(e, s.scale), Scalar(1), Scalar(1), sv, 0});
        for (const auto& sv : sm)
          out.push_back({a, sv * e, key_of(e, s.scale), Scalar(Rat(-1)),
                         Scalar(1), sv, N / 2});
      } else {
        // eps with eps^{2 ell} = 1 (N = 2 ell): eps^ell = 1 for even k
        Key ck = key_of((Rat(1) / ell) * e, s.scale);
        for (long k = 0; k < 2 * ell; ++k) {
          const auto& range = (k % 2 == 0) ? sp : sm;
          for (const auto& sv : range) {
            long two_s = Rat(2 * sv).get_num().get_si();
            out.push_back({a, sv * e, ck, Scalar(Cyclo::zeta_pow(k)),
                           Scalar(Cyclo::zeta_pow(k * two_s)), sv, k});
          }
        }
      }
    }
  }
  return out;
}

QuasiReport is_quasi_invariant(const DatumPtr& datum, const XPoly& f,
                               const Session& s, long ell) {
  const RootDatum& d = *datum;
  QuasiReport rep;
  for (const auto& c : quasi_conditions(datum, s, ell)) {
    XPoly g = shift_x(d, f, Rat(-1) * c.v, s.scale) -
              shift_x(d, f, c.v, s.scale).scaled(c.eps_factor);
    if (!vanishes_mod_binomial(g, c.cond_key, c.cond_val)) {
      rep.ok = false;
      rep.failures.push_back({c.alpha, c.amount, c.eps_power});
    }
  }
  return rep;
}

namespace {

void push_bf(std::vector<BinomialFactor>& den, const Key& b, const Scalar& s,
             int mult = 1) {
  for (auto& f : den)
    if (f.b == b && f.s == s) {
      f.mult += mult;
      return;
    }
  den.push_back({b, s, mult});
}

int bf_mult(const std::vector<BinomialFactor>& den, const Key& b,
            const Scalar& s) {
  for (const auto& f : den)
    if (f.b == b && f.s == s) return f.mult;
  return 0;
}

LXPoly binom_lx(const Key& b, const Scalar& s) {  // X^b - s
  LXPoly p = LXPoly::monomial(b, LCoeff(Scalar(1)));
  p += LXPoly::monomial(Key{}, LCoeff(Scalar(0) - s));
  return p;
}

// multiset max of the two denominators; scales each numerator up accordingly
std::vector<BinomialFactor> common_denominator(
    LXPoly& a, const std::vector<BinomialFactor>& aden, LXPoly& b,
    const std::vector<BinomialFactor>& bden) {
  std::vector<BinomialFactor> common = aden;
  for (const auto& f : bden) {
    int have = bf_mult(common, f.b, f.s);
    if (f.mult > have) push_bf(common, f.b, f.s, f.mult - have);
  }
  for (const auto& g : common) {
    for (int i = bf_mult(aden, g.b, g.s); i < g.mult; ++i)
      a = a * binom_lx(g.b, g.s);
    for (int i = bf_mult(bden, g.b, g.s); i < g.mult; ++i)
      b = b * binom_lx(g.b, g.s);
  }
  return common;
}

}  // namespace

void reduce_binomial_fraction(LXPoly& num, std::vector<BinomialFactor>& den) {
  bool progress = true;
  while (progress && !den.empty() && !num.is_zero()) {
    progress = false;
    for (size_t i = 0; i < den.size(); ++i) {
      try {
        LXPoly q = divide_by_binomial(num, den[i].b, LCoeff(den[i].s));
        num = std::move(q);
        if (--den[i].mult == 0) den.erase(den.begin() + i);
        progress = true;
        break;
      } catch (const std::runtime_error&) {
      }
    }
  }
  if (num.is_zero()) den.clear();
}

void add_binomial_fractions(LXPoly& a, std::vector<BinomialFactor>& aden,
                            LXPoly b, std::vector<BinomialFactor> bden) {
  auto common = common_denominator(a, aden, b, bden);
  a += b;
  aden = std::move(common);
  reduce_binomial_fraction(a, aden);
}

void apply_rational(const DiffOperator& op, const Vec& sigma, const LXPoly& body,
                    const std::vector<BinomialFactor>& den, LXPoly& out_body,
                    std::vector<BinomialFactor>& out_den) {
  const RootDatum& d = *op.datum;
  auto shifted_body = [&](const Vec& tau) {  // body of T^tau f
    LXPoly g;
    for (const auto& [k, c] : body.t) {
      Vec nu = vec_of(k, op.scale, d.dim);
      Scalar qf = qpow(d.ip(sigma, tau) + d.ip(nu, tau));
      g.add_term(k, c * lambda_monomial(tau, op.scale, qf));
    }
    return g;
  };
  struct Ev {
    LXPoly num;
    std::vector<BinomialFactor> den;
  };
  std::vector<Ev> evals;
  for (const auto& t : op.terms) {
    // a_tau T^tau f, and in shifted form additionally -a_tau f
    for (int part = 0; part < (op.shifted_form ? 2 : 1); ++part) {
      Ev e;
      if (part == 0) {
        e.num = shifted_body(t.tau).scaled(LCoeff(t.pref));
        for (const auto& f : den) {
          // T^tau (X^b - s) = c (X^b - s/c) with c = q^{<b,tau>}
          Scalar c = qpow(d.ip(vec_of(f.b, op.scale, d.dim), t.tau));
          push_bf(e.den, f.b, f.s * c.inv(), f.mult);
          for (int i = 0; i < f.mult; ++i) e.num = e.num.scaled(LCoeff(c.inv()));
        }
      } else {
        e.num = body.scaled(LCoeff(Scalar(0) - t.pref));
        e.den = den;
      }
      for (const auto& nb : t.num) e.num = e.num * one_minus<LCoeff>(nb, op.scale);
      for (const auto& db : t.den) {
        Key k = key_of(db.a, op.scale);
        if (KeyLess()(Key{}, k)) {
          // (1 - c X^a) = (-c)(X^a - c^{-1})
          e.num = e.num.scaled(LCoeff(Scalar(0) - db.c.inv()));
          push_bf(e.den, k, db.c.inv());
        } else {
          // (1 - c X^a) = X^a (X^{-a} - c)
          Key nk(k.size());
          for (size_t i = 0; i < k.size(); ++i) nk[i] = -k[i];
          e.num = e.num * LXPoly::monomial(nk, LCoeff(Scalar(1)));
          push_bf(e.den, nk, db.c);
        }
      }
      evals.push_back(std::move(e));
    }
  }
  if (op.shifted_form) {
    Ev e;
    e.num = body.scaled(LCoeff(op.a0));
    e.den = den;
    evals.push_back(std::move(e));
  }
  std::vector<BinomialFactor> common;
  for (const auto& e : evals)
    for (const auto& f : e.den) {
      int have = bf_mult(common, f.b, f.s);
      if (f.mult > have) push_bf(common, f.b, f.s, f.mult - have);
    }
  LXPoly total;
  for (auto& e : evals) {
    for (const auto& g : common)
      for (int i = bf_mult(e.den, g.b, g.s); i < g.mult; ++i)
        e.num = e.num * binom_lx(g.b, g.s);
    total += e.num;
  }
  reduce_binomial_fraction(total, common);
  out_body = std::move(total);
  out_den = std::move(common);
}

}  // namespace ba
