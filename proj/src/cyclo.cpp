#include "ba/cyclo.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace ba {

namespace {

struct CycloCtx {
  int N = 1;
  std::vector<Rat> modulus;  // monic, degree phi(N)
};

CycloCtx g_ctx{1, {Rat(-1), Rat(1)}};  // Phi_1 = z - 1

// polynomial helpers over Q (dense, c[k] ~ z^k)
using Poly = std::vector<Rat>;

void ptrim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

Poly pmul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, Rat(0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  ptrim(r);
  return r;
}

// exact division a / b (b monic up to leading coeff), remainder must vanish
Poly pdiv_exact(Poly a, const Poly& b) {
  ptrim(a);
  Poly q;
  if (a.empty()) return q;
  q.assign(a.size() - b.size() + 1, Rat(0));
  while (a.size() >= b.size()) {
    Rat c = a.back() / b.back();
    size_t k = a.size() - b.size();
    q[k] = c;
    for (size_t i = 0; i < b.size(); ++i) a[k + i] -= c * b[i];
    ptrim(a);
    if (a.empty()) break;
  }
  if (!a.empty()) throw std::runtime_error("pdiv_exact: nonzero remainder");
  return q;
}

Poly cyclotomic(int n) {
  // Phi_n = (z^n - 1) / prod_{d | n, d < n} Phi_d
  Poly num(n + 1, Rat(0));
  num[0] = -1;
  num[n] = 1;
  for (int d = 1; d < n; ++d)
    if (n % d == 0) num = pdiv_exact(num, cyclotomic(d));
  return num;
}

}  // namespace

void set_cyclo_order(int N) {
  if (N < 1) throw std::invalid_argument("cyclo order must be >= 1");
  g_ctx.N = N;
  g_ctx.modulus = cyclotomic(N);
}

int cyclo_order() { return g_ctx.N; }
const std::vector<Rat>& cyclo_modulus() { return g_ctx.modulus; }
int cyclo_degree() { return (int)g_ctx.modulus.size() - 1; }

void Cyclo::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Cyclo Cyclo::from_raw(std::vector<Rat> v) {
  // reduce modulo the cyclotomic polynomial
  const Poly& m = g_ctx.modulus;
  size_t d = m.size() - 1;
  while (v.size() > d) {
    Rat c = v.back();
    size_t k = v.size() - 1 - d;
    if (c != 0)
      for (size_t i = 0; i < d; ++i) v[k + i] -= c * m[i];
    v.pop_back();
  }
  Cyclo r;
  r.c_ = std::move(v);
  r.trim();
  return r;
}

Cyclo::Cyclo(const Rat& r) {
  if (r != 0) c_.push_back(r);
}

Cyclo Cyclo::zeta_pow(long k) {
  long N = g_ctx.N;
  k %= N;
  if (k < 0) k += N;
  std::vector<Rat> v(k + 1, Rat(0));
  v[k] = 1;
  return from_raw(std::move(v));
}

bool Cyclo::is_rational() const { return c_.size() <= 1; }

Rat Cyclo::rational_part() const {
  if (c_.empty()) return Rat(0);
  if (c_.size() > 1) throw std::runtime_error("Cyclo: not rational");
  return c_[0];
}

Cyclo Cyclo::operator-() const {
  Cyclo r = *this;
  for (auto& x : r.c_) x = -x;
  return r;
}

Cyclo& Cyclo::operator+=(const Cyclo& o) {
  if (c_.size() < o.c_.size()) c_.resize(o.c_.size(), Rat(0));
  for (size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  trim();
  return *this;
}

Cyclo& Cyclo::operator-=(const Cyclo& o) {
  if (c_.size() < o.c_.size()) c_.resize(o.c_.size(), Rat(0));
  for (size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  trim();
  return *this;
}

Cyclo& Cyclo::operator*=(const Cyclo& o) {
  *this = from_raw(pmul(c_, o.c_));
  return *this;
}

Cyclo Cyclo::inv() const {
  if (is_zero()) throw DivideByZero("Cyclo::inv of zero");
  if (is_rational()) return Cyclo(Rat(1) / c_[0]);
  // extended Euclid in Q[z]: find u with u*c == 1 mod Phi_N
  Poly r0 = g_ctx.modulus, r1 = c_;
  Poly t0 = {}, t1 = {Rat(1)};
  while (true) {
    ptrim(r1);
    if (r1.empty()) throw std::runtime_error("Cyclo::inv: not invertible");
    if (r1.size() == 1) {
      // gcd is the constant r1[0]
      Cyclo r;
      Poly t = t1;
      for (auto& x : t) x /= r1[0];
      return from_raw(std::move(t));
    }
    // r0 = q*r1 + rem
    Poly rem = r0, q;
    q.assign(rem.size() >= r1.size() ? rem.size() - r1.size() + 1 : 0, Rat(0));
    while (rem.size() >= r1.size()) {
      Rat c = rem.back() / r1.back();
      size_t k = rem.size() - r1.size();
      q[k] = c;
      for (size_t i = 0; i < r1.size(); ++i) rem[k + i] -= c * r1[i];
      ptrim(rem);
      if (rem.empty()) break;
    }
    // t_{k+1} = t_{k-1} - q t_k
    Poly qt = pmul(q, t1);
    Poly tn = t0;
    if (tn.size() < qt.size()) tn.resize(qt.size(), Rat(0));
    for (size_t i = 0; i < qt.size(); ++i) tn[i] -= qt[i];
    ptrim(tn);
    r0 = std::move(r1);
    r1 = std::move(rem);
    t0 = std::move(t1);
    t1 = std::move(tn);
  }
}

Cyclo& Cyclo::operator/=(const Cyclo& o) {
  *this *= o.inv();
  return *this;
}

bool operator==(const Cyclo& a, const Cyclo& b) { return a.c_ == b.c_; }

std::complex<double> Cyclo::eval() const {
  double ang = 2.0 * std::numbers::pi / g_ctx.N;
  std::complex<double> z(std::cos(ang), std::sin(ang)), zp(1.0, 0.0), s(0.0, 0.0);
  for (size_t i = 0; i < c_.size(); ++i) {
    s += c_[i].get_d() * zp;
    zp *= z;
  }
  return s;
}

std::string Cyclo::str() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    if (!first) os << " + ";
    os << c_[i].get_str();
    if (i > 0) os << "*z^" << i;
    first = false;
  }
  return os.str();
}

}  // namespace ba
