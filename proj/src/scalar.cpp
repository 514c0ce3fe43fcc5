#include "ba/scalar.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

namespace ba {

namespace {

long g_qden = 2;

long read_degree_cap() {
  if (const char* s = std::getenv("BA_MAX_DEGREE")) {
    long v = std::atol(s);
    if (v > 0) return v;
  }
  return 4000;
}

void trim(UPoly& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

UPoly mul(const UPoly& a, const UPoly& b) {
  if (a.empty() || b.empty()) return {};
  if ((long)(a.size() + b.size()) - 2 > scalar_degree_cap())
    throw DegreeCapExceeded("u-degree cap exceeded (set BA_MAX_DEGREE)");
  UPoly r(a.size() + b.size() - 1);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (size_t j = 0; j < b.size(); ++j) {
      if (b[j].is_zero()) continue;
      r[i + j] += a[i] * b[j];
    }
  }
  trim(r);
  return r;
}

UPoly add(const UPoly& a, const UPoly& b) {
  UPoly r = a;
  if (r.size() < b.size()) r.resize(b.size());
  for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  trim(r);
  return r;
}

// in-place remainder a mod b (b nonzero)
void rem_inplace(UPoly& a, const UPoly& b) {
  Cyclo lb = b.back().inv();
  while (a.size() >= b.size()) {
    Cyclo c = a.back() * lb;
    size_t k = a.size() - b.size();
    for (size_t i = 0; i + 1 < b.size(); ++i) a[k + i] -= c * b[i];
    a.pop_back();
    trim(a);
    if (a.empty()) break;
  }
}

UPoly gcd(UPoly a, UPoly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    rem_inplace(a, b);
    std::swap(a, b);
  }
  if (!a.empty()) {
    // strip common power of u only if both shared it (handled by Euclid), make monic
    Cyclo la = a.back().inv();
    for (auto& c : a) c = c * la;
  }
  return a;
}

UPoly div_exact(UPoly a, const UPoly& b) {
  trim(a);
  if (a.empty()) return {};
  UPoly q(a.size() - b.size() + 1);
  Cyclo lb = b.back().inv();
  while (a.size() >= b.size()) {
    Cyclo c = a.back() * lb;
    size_t k = a.size() - b.size();
    q[k] = c;
    for (size_t i = 0; i + 1 < b.size(); ++i) a[k + i] -= c * b[i];
    a.pop_back();
    trim(a);
    if (a.empty()) break;
  }
  if (!a.empty()) throw std::runtime_error("Scalar: non-exact division");
  return q;
}

}  // namespace

void set_qpow_denominator(long qden) {
  if (qden < 1) throw std::invalid_argument("qpow denominator must be >= 1");
  g_qden = qden;
}
long qpow_denominator() { return g_qden; }

long scalar_degree_cap() {
  static long cap = read_degree_cap();
  return cap;
}

Scalar::Scalar(const Rat& r) : den_{Cyclo(1)} {
  if (r != 0) num_.push_back(Cyclo(r));
}

Scalar::Scalar(const Cyclo& c) : den_{Cyclo(1)} {
  if (!c.is_zero()) num_.push_back(c);
}

bool Scalar::is_one() const {
  return num_.size() == 1 && num_[0] == Cyclo(1) && den_.size() == 1 &&
         den_[0] == Cyclo(1);
}

void Scalar::canonicalize() {
  trim(num_);
  trim(den_);
  if (den_.empty()) throw DivideByZero("Scalar: zero denominator");
  if (num_.empty()) {
    den_ = {Cyclo(1)};
    return;
  }
  UPoly g = gcd(num_, den_);
  if (g.size() > 1) {
    num_ = div_exact(std::move(num_), g);
    den_ = div_exact(std::move(den_), g);
  }
  Cyclo ld = den_.back().inv();
  if (!(den_.back() == Cyclo(1))) {
    for (auto& c : den_) c = c * ld;
    for (auto& c : num_) c = c * ld;
  }
}

Scalar Scalar::from_fraction(UPoly num, UPoly den) {
  Scalar s;
  s.num_ = std::move(num);
  s.den_ = std::move(den);
  s.canonicalize();
  return s;
}

Scalar Scalar::operator-() const {
  Scalar r = *this;
  for (auto& c : r.num_) c = -c;
  return r;
}

Scalar& Scalar::operator+=(const Scalar& o) {
  UPoly n = add(mul(num_, o.den_), mul(o.num_, den_));
  UPoly d = mul(den_, o.den_);
  num_ = std::move(n);
  den_ = std::move(d);
  canonicalize();
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) { return *this += -o; }

Scalar& Scalar::operator*=(const Scalar& o) {
  num_ = mul(num_, o.num_);
  den_ = mul(den_, o.den_);
  canonicalize();
  return *this;
}

Scalar Scalar::inv() const {
  if (is_zero()) throw DivideByZero("Scalar::inv of zero");
  Scalar r;
  r.num_ = den_;
  r.den_ = num_;
  r.canonicalize();
  return r;
}

Scalar& Scalar::operator/=(const Scalar& o) { return *this *= o.inv(); }

std::complex<double> Scalar::eval(double q0) const {
  if (!(q0 > 0.0))
    throw PoleAtEvaluationPoint("Scalar::eval requires q0 > 0");
  double u0 = std::pow(q0, 1.0 / (double)g_qden);
  auto horner = [&](const UPoly& p) {
    std::complex<double> s(0.0, 0.0);
    for (size_t i = p.size(); i-- > 0;) s = s * u0 + p[i].eval();
    return s;
  };
  std::complex<double> d = horner(den_);
  if (std::abs(d) == 0.0)
    throw PoleAtEvaluationPoint("Scalar::eval: denominator vanishes");
  return horner(num_) / d;
}

std::string Scalar::str() const {
  auto ps = [](const UPoly& p) {
    if (p.empty()) return std::string("0");
    std::ostringstream os;
    bool first = true;
    for (size_t i = 0; i < p.size(); ++i) {
      if (p[i].is_zero()) continue;
      if (!first) os << " + ";
      os << "(" << p[i].str() << ")";
      if (i > 0) os << "*u^" << i;
      first = false;
    }
    return os.str();
  };
  std::string s = ps(num_);
  if (!(den_.size() == 1 && den_[0] == Cyclo(1)))
    s = "[" + s + "] / [" + ps(den_) + "]";
  return s;
}

Scalar qpow(const Rat& r) {
  Rat e = r * g_qden;
  if (e.get_den() != 1)
    throw std::invalid_argument("qpow: exponent " + r.get_str() +
                                " not in (1/" + std::to_string(g_qden) +
                                ")Z");
  Int k = e.get_num();
  if (!k.fits_slong_p()) throw DegreeCapExceeded("qpow: exponent overflow");
  long n = k.get_si();
  UPoly num{Cyclo(1)}, den{Cyclo(1)};
  if (n >= 0) {
    if (n > scalar_degree_cap()) throw DegreeCapExceeded("qpow degree cap");
    num.assign(n + 1, Cyclo(0));
    num[n] = Cyclo(1);
  } else {
    if (-n > scalar_degree_cap()) throw DegreeCapExceeded("qpow degree cap");
    den.assign(-n + 1, Cyclo(0));
    den[-n] = Cyclo(1);
  }
  return Scalar::from_fraction(std::move(num), std::move(den));
}

}  // namespace ba
