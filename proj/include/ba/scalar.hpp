#pragma once
// The exact coefficient field: rational functions in a formal u = q^(1/qden)
// with coefficients in Q(zeta_N). All fractional q-powers of a run live here.

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "ba/cyclo.hpp"

namespace ba {

struct PoleAtEvaluationPoint : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegreeCapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Session exponent denominator: u = q^(1/qden). qpow(r) requires qden*r in Z.
void set_qpow_denominator(long qden);
long qpow_denominator();
// Degree cap for u-polynomials (default 4000, overridable via BA_MAX_DEGREE).
long scalar_degree_cap();

using UPoly = std::vector<Cyclo>;  // dense, c[k] ~ u^k, trailing zeros trimmed

class Scalar {
public:
  Scalar() : num_{}, den_{Cyclo(1)} {}
  Scalar(const Rat& r);
  Scalar(long n) : Scalar(Rat(n)) {}
  Scalar(int n) : Scalar(Rat(n)) {}
  Scalar(const Cyclo& c);
  static Scalar from_fraction(UPoly num, UPoly den);  // canonicalizes

  bool is_zero() const { return num_.empty(); }
  bool is_one() const;

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);
  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  friend bool operator==(const Scalar& a, const Scalar& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  Scalar inv() const;
  // numeric evaluation at u0 = q0^(1/qden), 0 < q0 < 1 (principal branch)
  std::complex<double> eval(double q0) const;
  std::string str() const;

  const UPoly& num() const { return num_; }
  const UPoly& den() const { return den_; }

private:
  UPoly num_, den_;  // den_ monic, gcd(num_, den_) = 1
  void canonicalize();
};

// q^r as a Scalar; requires qden*r integral.
Scalar qpow(const Rat& r);

}  // namespace ba
