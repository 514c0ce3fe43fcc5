#pragma once
// Laurent "exponential polynomials": finite sums  sum_nu c_nu q^{<nu,x>},
// stored as integer-keyed maps over a fixed refinement lattice (key =
// scale * coordinates of nu).  The coefficient type C is a commutative ring
// (Scalar, or fractions of lambda-polynomials); division helpers need a field.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "ba/rootdata.hpp"

namespace ba {

using Key = std::vector<std::int64_t>;

// Keys are canonical with trailing zeros stripped, so the constant key is {}
// and dimension mismatches cannot arise.
inline void key_trim(Key& k) {
  while (!k.empty() && k.back() == 0) k.pop_back();
}

inline std::int64_t key_at(const Key& k, size_t i) {
  return i < k.size() ? k[i] : 0;
}

inline Key key_of(const Vec& v, long scale) {
  Key k(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    Rat s = v[i] * scale;
    if (s.get_den() != 1)
      throw std::runtime_error("key_of: vector not on the refinement lattice");
    k[i] = s.get_num().get_si();
  }
  key_trim(k);
  return k;
}

inline Vec vec_of(const Key& k, long scale, size_t dim = 0) {
  Vec v(std::max(dim, k.size()), Rat(0));
  for (size_t i = 0; i < k.size(); ++i) v[i] = Rat((long)k[i]) / scale;
  return v;
}

// zero-padded lexicographic order (translation invariant, unlike the plain
// vector order on trimmed keys)
struct KeyLess {
  bool operator()(const Key& a, const Key& b) const {
    size_t n = std::max(a.size(), b.size());
    for (size_t i = 0; i < n; ++i) {
      std::int64_t x = key_at(a, i), y = key_at(b, i);
      if (x != y) return x < y;
    }
    return false;
  }
};

inline Key key_add(const Key& a, const Key& b) {
  Key r(std::max(a.size(), b.size()));
  for (size_t i = 0; i < r.size(); ++i) r[i] = key_at(a, i) + key_at(b, i);
  key_trim(r);
  return r;
}

inline Key key_sub(const Key& a, const Key& b) {
  Key r(std::max(a.size(), b.size()));
  for (size_t i = 0; i < r.size(); ++i) r[i] = key_at(a, i) - key_at(b, i);
  key_trim(r);
  return r;
}

template <class C>
class ExpPoly {
 public:
  std::map<Key, C, KeyLess> t;

  ExpPoly() = default;
  static ExpPoly monomial(Key k, C c) {
    ExpPoly p;
    key_trim(k);
    if (!c.is_zero()) p.t.emplace(std::move(k), std::move(c));
    return p;
  }

  bool is_zero() const { return t.empty(); }
  size_t size() const { return t.size(); }

  void add_term(Key k, const C& c) {
    if (c.is_zero()) return;
    key_trim(k);
    auto it = t.find(k);
    if (it == t.end()) {
      t.emplace(std::move(k), c);
    } else {
      it->second += c;
      if (it->second.is_zero()) t.erase(it);
    }
  }

  C coeff(Key k) const {
    key_trim(k);
    auto it = t.find(k);
    return it == t.end() ? C(0) : it->second;
  }

  ExpPoly& operator+=(const ExpPoly& o) {
    for (const auto& [k, c] : o.t) add_term(k, c);
    return *this;
  }
  ExpPoly& operator-=(const ExpPoly& o) {
    for (const auto& [k, c] : o.t) add_term(k, C(0) - c);
    return *this;
  }
  friend ExpPoly operator+(ExpPoly a, const ExpPoly& b) { return a += b; }
  friend ExpPoly operator-(ExpPoly a, const ExpPoly& b) { return a -= b; }
  ExpPoly operator-() const {
    ExpPoly r;
    for (const auto& [k, c] : t) r.t.emplace(k, C(0) - c);
    return r;
  }

  friend ExpPoly operator*(const ExpPoly& a, const ExpPoly& b) {
    ExpPoly r;
    for (const auto& [ka, ca] : a.t)
      for (const auto& [kb, cb] : b.t) r.add_term(key_add(ka, kb), ca * cb);
    return r;
  }
  ExpPoly& operator*=(const ExpPoly& o) { return *this = *this * o; }

  ExpPoly scaled(const C& c) const {
    ExpPoly r;
    if (c.is_zero()) return r;
    for (const auto& [k, v] : t) {
      C w = v * c;
      if (!w.is_zero()) r.t.emplace(k, std::move(w));
    }
    return r;
  }

  // x -> -x
  ExpPoly negated_argument() const {
    ExpPoly r;
    for (const auto& [k, c] : t) {
      Key nk(k.size());
      for (size_t i = 0; i < k.size(); ++i) nk[i] = -k[i];
      r.t.emplace(std::move(nk), c);
    }
    return r;
  }

  // x -> w x for a Weyl matrix (must map the key lattice to itself); since w
  // is orthogonal the exponent nu transforms by w as well
  ExpPoly weyl_argument(const Mat& w) const {
    ExpPoly r;
    for (const auto& [k, c] : t) {
      Key nk(w.size(), 0);
      for (size_t i = 0; i < w.size(); ++i) {
        Rat s(0);
        for (size_t j = 0; j < std::min(k.size(), w[i].size()); ++j)
          s += w[i][j] * (long)k[j];
        if (s.get_den() != 1)
          throw std::runtime_error("weyl_argument: key left the lattice");
        nk[i] = (std::int64_t)s.get_num().get_si();
      }
      key_trim(nk);
      r.t.emplace(std::move(nk), c);
    }
    return r;
  }

  bool operator==(const ExpPoly& o) const { return t == o.t; }
};

// exact division by a general (Laurent) polynomial; throws if not exact.
template <class C>
ExpPoly<C> divide_exact(ExpPoly<C> f, const ExpPoly<C>& g,
                        long max_steps = 2000000) {
  if (g.is_zero()) throw std::runtime_error("divide_exact by zero");
  auto lg = std::prev(g.t.end());  // lex-largest key
  ExpPoly<C> q;
  long steps = 0;
  while (!f.is_zero()) {
    if (++steps > max_steps)
      throw std::runtime_error("divide_exact: division not exact");
    auto lf = std::prev(f.t.end());
    Key dk = key_sub(lf->first, lg->first);
    C c = lf->second * lg->second.inv();
    ExpPoly<C> term = ExpPoly<C>::monomial(dk, c);
    q += term;
    f -= term * g;
  }
  return q;
}

// f / (X^b - s), exact; works per residue class of keys modulo Z b.
template <class C>
ExpPoly<C> divide_by_binomial(const ExpPoly<C>& f, const Key& b, const C& s) {
  // group keys as k0 + j b; synthetic division by (t - s) in t = X^b
  // per class: with coefficients c_j (j descending), the quotient
  // coefficients are r_j = c_j + s * r_{j+1}.
  std::map<Key, std::map<long, C>, KeyLess> classes;  // rep -> {j -> c}
  for (const auto& [k, c] : f.t) {
    // reduce k along direction b: find j maximal-ish; use projection
    // <k,b>/<b,b> rounded to get a stable representative
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
    classes[rep][j] = c;
  }
  ExpPoly<C> q;
  for (auto& [rep, col] : classes) {
    auto it = col.rbegin();
    long jtop = it->first;
    C carry(0);
    for (long j = jtop; ; --j) {
      C cj = col.count(j) ? col[j] : C(0);
      C r = cj + s * carry;
      if (j == col.begin()->first) {
        // last (lowest) coefficient is the remainder: must vanish
        if (!r.is_zero())
          throw std::runtime_error("divide_by_binomial: nonzero remainder");
        break;
      }
      Key k(std::max(rep.size(), b.size()));
      for (size_t i = 0; i < k.size(); ++i)
        k[i] = key_at(rep, i) + (j - 1) * key_at(b, i);
      q.add_term(k, r);
      carry = r;
    }
  }
  return q;
}

// does f vanish modulo (X^b - s)?  (substitute X^b = s per residue class)
template <class C>
bool vanishes_mod_binomial(const ExpPoly<C>& f, const Key& b, const C& s) {
  std::map<Key, std::map<long, C>, KeyLess> classes;
  for (const auto& [k, c] : f.t) {
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
    classes[rep][j] = c;
  }
  for (const auto& [rep, col] : classes) {
    long j0 = col.begin()->first;
    C acc(0);
    for (const auto& [j, c] : col) {
      C p(1);
      for (long i = 0; i < j - j0; ++i) p = p * s;
      acc += c * p;
    }
    if (!acc.is_zero()) return false;
  }
  return true;
}

// Light fraction over an ExpPoly ring (used for lambda-dependent
// coefficients).  Equality by cross-multiplication; reduction only strips a
// common monomial factor and normalizes zero.
template <class P, class C>
class Frac {
 public:
  P num, den;  // den nonzero

  Frac() : den(P::monomial(Key{}, C(1))) {}
  Frac(int v) : den(unit_den()) {
    if (v != 0) num = P::monomial(Key{}, C(v));
  }
  explicit Frac(const C& c) : den(unit_den()) {
    if (!c.is_zero()) num = P::monomial(Key{}, c);
  }
  explicit Frac(P p) : num(std::move(p)), den(unit_den()) {}
  Frac(P n, P d) : num(std::move(n)), den(std::move(d)) {
    if (den.is_zero()) throw std::runtime_error("Frac: zero denominator");
    normalize();
  }

  static P unit_den() { return P::monomial(Key{}, C(1)); }

  bool is_zero() const { return num.is_zero(); }

  void normalize() {
    if (num.is_zero()) {
      den = unit_den();
      return;
    }
    if (den.size() == 1) {
      // divide through by the monomial denominator
      auto [k, c] = *den.t.begin();
      P r;
      C ci = c.inv();
      for (const auto& [nk, nc] : num.t) r.t.emplace(key_sub(nk, k), nc * ci);
      num = std::move(r);
      den = unit_den();
    }
  }

  Frac& operator+=(const Frac& o) {
    if (den == o.den) {
      num += o.num;
    } else {
      num = num * o.den + o.num * den;
      den = den * o.den;
    }
    normalize();
    return *this;
  }
  Frac& operator-=(const Frac& o) { return *this += Frac(-o.num, o.den); }
  friend Frac operator+(Frac a, const Frac& b) { return a += b; }
  friend Frac operator-(Frac a, const Frac& b) { return a -= b; }
  friend Frac operator*(const Frac& a, const Frac& b) {
    Frac r(a.num * b.num, a.den * b.den);
    return r;
  }
  Frac& operator*=(const Frac& o) { return *this = *this * o; }
  Frac operator-() const { return Frac(-num, den); }

  Frac inv() const {
    if (is_zero()) throw std::runtime_error("Frac::inv of zero");
    return Frac(den, num);
  }
  friend Frac operator/(const Frac& a, const Frac& b) { return a * b.inv(); }

  bool operator==(const Frac& o) const { return (num * o.den) == (o.num * den); }
};

}  // namespace ba
