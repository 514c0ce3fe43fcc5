#pragma once
// Arithmetic in the cyclotomic field Q(zeta_N), elements stored as residue
// classes of Q[z] modulo the N-th cyclotomic polynomial.

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace ba {

using Rat = mpq_class;
using Int = mpz_class;

// Session-global cyclotomic order. Set once per session (tests/CLI runs are
// sequential); all Cyclo values created afterwards live in Q(zeta_N).
void set_cyclo_order(int N);
int cyclo_order();
// Coefficients of the N-th cyclotomic polynomial (monic, degree phi(N)).
const std::vector<Rat>& cyclo_modulus();
int cyclo_degree();

class Cyclo {
public:
  Cyclo() : c_() {}
  Cyclo(const Rat& r);
  Cyclo(long n) : Cyclo(Rat(n)) {}
  Cyclo(int n) : Cyclo(Rat(n)) {}

  // zeta_N^k
  static Cyclo zeta_pow(long k);

  bool is_zero() const { return c_.empty(); }
  bool is_rational() const;
  Rat rational_part() const;  // requires is_rational()

  Cyclo operator-() const;
  Cyclo& operator+=(const Cyclo& o);
  Cyclo& operator-=(const Cyclo& o);
  Cyclo& operator*=(const Cyclo& o);
  Cyclo& operator/=(const Cyclo& o);
  friend Cyclo operator+(Cyclo a, const Cyclo& b) { return a += b; }
  friend Cyclo operator-(Cyclo a, const Cyclo& b) { return a -= b; }
  friend Cyclo operator*(Cyclo a, const Cyclo& b) { return a *= b; }
  friend Cyclo operator/(Cyclo a, const Cyclo& b) { return a /= b; }
  friend bool operator==(const Cyclo& a, const Cyclo& b);
  friend bool operator!=(const Cyclo& a, const Cyclo& b) { return !(a == b); }

  Cyclo inv() const;
  std::complex<double> eval() const;  // at zeta_N = exp(2*pi*i/N)
  std::string str() const;

  const std::vector<Rat>& coeffs() const { return c_; }

private:
  // c_[k] multiplies zeta^k, k < cyclo_degree(); trailing zeros trimmed.
  std::vector<Rat> c_;
  void trim();
  static Cyclo from_raw(std::vector<Rat> v);
  friend class CycloOps;
};

struct DivideByZero : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ba
