#include "ba/weights.hpp"

#include <cmath>
#include <set>

namespace ba {

std::vector<Rat> prec_set(const Rat& b, const Rat& c) {
  std::set<Rat> out;
  for (Rat s = b; s > 0; s -= 1) out.insert(s);
  for (Rat s = c; s > 0; s -= 1) out.insert(s);
  return std::vector<Rat>(out.begin(), out.end());
}

namespace {

// c_plus * X^{v} + c_minus * X^{-v}
XPoly pm_binomial(const Vec& v, const Scalar& c_plus, const Scalar& c_minus,
                  long scale) {
  XPoly p = XPoly::monomial(key_of(v, scale), c_plus);
  p += XPoly::monomial(key_of(-v, scale), c_minus);
  return p;
}

XPoly build_delta(const RootDatum& d, long scale) {
  XPoly p = XPoly::monomial(Key{}, Scalar(1));
  if (d.cs == Case::c) {
    auto sp = prec_set(d.mc[0], d.mc[1]);
    auto sm = prec_set(d.mc[2], d.mc[3]);
    for (size_t i = 0; i < d.pos.size(); ++i) {
      const Vec& a = d.pos[i];
      if (d.ip(a, a) == 4) {
        Vec e = Rat(1, 2) * a;  // a = 2 e_i
        for (const auto& s : sp)
          p *= pm_binomial(Rat(1, 2) * e, qpow(-s / 2), -qpow(s / 2), scale);
        for (const auto& s : sm)
          p *= pm_binomial(Rat(1, 2) * e, qpow(-s / 2), qpow(s / 2), scale);
      } else {
        for (long j = 1; j <= d.m_pos[i]; ++j)
          p *= pm_binomial(Rat(1, 2) * a, qpow(Rat(-j) * d.qexp_pos[i] / 2),
                           -qpow(Rat(j) * d.qexp_pos[i] / 2), scale);
      }
    }
  } else {
    for (size_t i = 0; i < d.pos.size(); ++i) {
      const Vec& a = d.pos[i];
      for (long j = 1; j <= d.m_pos[i]; ++j)
        p *= pm_binomial(Rat(1, 2) * a, qpow(Rat(-j) * d.qexp_pos[i] / 2),
                         -qpow(Rat(j) * d.qexp_pos[i] / 2), scale);
    }
  }
  return p;
}

Scalar build_C(const RootDatum& d) {
  Rat e(0);
  if (d.cs == Case::c) {
    auto sp = prec_set(d.mc[0], d.mc[1]);
    auto sm = prec_set(d.mc[2], d.mc[3]);
    long n = d.rank;
    for (const auto& r : sp)
      for (const auto& s : sm) e += Rat(n) * (r + s);
    for (size_t i = 0; i < d.pos.size(); ++i)
      if (d.ip(d.pos[i], d.pos[i]) != 4)
        e += d.m_pos[i] * (d.m_pos[i] + 1) / 2;
  } else {
    for (size_t i = 0; i < d.pos.size(); ++i)
      e += d.qexp_pos[i] * d.m_pos[i] * (d.m_pos[i] + 1) / 2;
  }
  return qpow(e);
}

}  // namespace

Scalar WeightBundle::eval_at(const XPoly& p, const Vec& pt) const {
  Scalar r(0);
  for (const auto& [k, c] : p.t) {
    Vec nu = vec_of(k, scale, pt.size());
    r += c * qpow(datum->ip(nu, pt));
  }
  return r;
}

WeightBundle build_weights(const DatumPtr& datum, const Session& s) {
  const RootDatum& d = *datum;
  WeightBundle b;
  b.datum = datum;
  b.scale = s.scale;
  b.delta = build_delta(d, s.scale);
  b.delta_minus = b.delta.negated_argument();
  b.Qx = b.delta * b.delta_minus;
  b.delta0 = XPoly::monomial(Key{}, Scalar(1));
  for (const auto& a : d.pos)
    b.delta0 *= pm_binomial(Rat(1, 2) * a, Scalar(1), Scalar(-1), s.scale);
  b.delta_weyl = b.Qx * b.delta0;
  b.C = build_C(d);
  b.wdel = (b.delta_minus * b.delta0).scaled(b.C);
  b.delta_dual = build_delta(*d.dual, s.scale);
  b.delta_dual_minus = b.delta_dual.negated_argument();
  return b;
}

XPoly nabla_polynomial(const RootDatum& d, const std::vector<Rat>& k,
                       const Session& s) {
  if (d.cs == Case::c)
    throw NonIntegerK("nabla_polynomial: case c not supported");
  // reuse orbit assignment: short orbit first
  Rat shortlen(-1);
  for (const auto& a : d.pos) {
    Rat l = d.ip(a, a);
    if (shortlen < 0 || l < shortlen) shortlen = l;
  }
  XPoly p = XPoly::monomial(Key{}, Scalar(1));
  for (size_t idx = 0; idx < d.pos.size(); ++idx) {
    const Vec& a = d.pos[idx];
    Rat ka = (d.ip(a, a) == shortlen || k.size() == 1) ? k[0] : k[1];
    if (ka.get_den() != 1 || ka < 0)
      throw NonIntegerK("nabla_polynomial: k must be nonnegative integers");
    for (long i = 0; i < ka; ++i)
      for (int sgn : {1, -1}) {
        Vec aa = Rat(sgn) * a;
        XPoly f = XPoly::monomial(Key{}, Scalar(1));
        f += XPoly::monomial(key_of(aa, s.scale),
                             -qpow(Rat(i) * d.qexp_pos[idx]));
        p *= f;
      }
  }
  return p;
}

ThetaResult theta_numeric(const RootDatum& d,
                          const std::vector<std::complex<double>>& x,
                          double q0, double tol) {
  if (!(q0 > 0.0 && q0 < 1.0))
    throw std::invalid_argument("theta_numeric: need 0 < q0 < 1");
  int r = d.rank;
  double g = mpq_get_d(d.gram.get_mpq_t());
  // pairings <fw_i, x> and Gram matrix of the weight basis
  std::vector<std::complex<double>> fx(r, 0.0);
  std::vector<std::vector<double>> G(r, std::vector<double>(r, 0.0));
  for (int i = 0; i < r; ++i) {
    for (size_t c = 0; c < x.size(); ++c)
      fx[i] += g * mpq_get_d(d.fw[i][c].get_mpq_t()) * x[c];
    for (int j = 0; j < r; ++j)
      G[i][j] = g * mpq_get_d(Rat(edot(d.fw[i], d.fw[j])).get_mpq_t());
  }
  // lower bound on the smallest eigenvalue: 1 / sqrt(|G^-1|_1 |G^-1|_inf)
  Mat Ginv;
  {
    Mat A(r, Vec(r));
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) A[i][j] = d.ip(d.fw[i], d.fw[j]);
    for (int j = 0; j < r; ++j) {
      Vec e(r, Rat(0));
      e[j] = 1;
      auto col = solve_linear(A, e);
      if (!col) throw std::runtime_error("theta_numeric: singular Gram");
      Ginv.push_back(*col);
    }
  }
  double n1 = 0;
  for (int i = 0; i < r; ++i) {
    double s = 0;
    for (int j = 0; j < r; ++j)
      s += std::fabs(mpq_get_d(Ginv[i][j].get_mpq_t()));
    n1 = std::max(n1, s);
  }
  double sigma = 1.0 / n1;  // G symmetric: |G^-1|_1 = |G^-1|_inf
  double L = 0;
  for (int i = 0; i < r; ++i) L = std::max(L, std::fabs(fx[i].real()));
  double lq = std::log(q0);  // < 0

  auto shell_bound = [&](long rad) {
    // |term| <= q0^{sigma rad^2 / 2 - L r rad} on the shell |c|_inf = rad
    double expo = 0.5 * sigma * (double)rad * rad - L * r * rad;
    double cnt = 2.0 * r * std::pow(2.0 * rad + 1.0, r - 1);
    return cnt * std::exp(expo * lq);
  };

  std::complex<double> total = 0.0;
  std::vector<long> c(r, 0);
  long rad = 0;
  double tail = 0;
  while (true) {
    // sum the shell |c|_inf == rad
    std::complex<double> shell = 0.0;
    std::vector<long> idx(r, -rad);
    while (true) {
      long mx = 0;
      for (int i = 0; i < r; ++i) mx = std::max(mx, std::labs(idx[i]));
      if (mx == rad || rad == 0) {
        std::complex<double> e = 0.0;
        double n2 = 0.0;
        for (int i = 0; i < r; ++i) {
          e += (double)idx[i] * fx[i];
          for (int j = 0; j < r; ++j) n2 += (double)idx[i] * G[i][j] * idx[j];
        }
        shell += std::exp((e + 0.5 * n2) * lq);
      }
      int p = 0;
      while (p < r && idx[p] == rad) idx[p++] = -rad;
      if (p == r) break;
      ++idx[p];
    }
    total += shell;
    // certified stop: the majorant of shell rad+1 decays geometrically (ratio
    // <= 1/2) once the quadratic term dominates; then tail <= 2 * bound
    long nr = rad + 1;
    double ratio = 2.0 * std::exp((0.5 * sigma * (2.0 * nr + 1.0) - L * r) * lq);
    double nb = shell_bound(nr);
    if (ratio <= 0.5 && nb * 2.0 < tol) {
      tail = 2.0 * nb;
      break;
    }
    ++rad;
    if (rad > 2000)
      throw ToleranceUnreachable("theta_numeric: radius limit reached");
  }
  return {total, tail, rad};
}

}  // namespace ba
