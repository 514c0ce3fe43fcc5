#pragma once
// Macdonald and Koornwinder difference operators: construction from a root
// datum, exact application to exponential-times-Laurent functions with
// binomial cancellation, and quasi-invariance testing.

#include "ba/weights.hpp"

namespace ba {

struct NotQuasiMinuscule : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct WrongCase : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// lambda-dependent coefficients: rational functions in Lambda = q^{<lambda,.>}
using LPoly = ExpPoly<Scalar>;       // polynomials in Lambda (lambda-exponents)
using LCoeff = Frac<LPoly, Scalar>;  // rational functions of Lambda
using LXPoly = ExpPoly<LCoeff>;      // x-exponentials with LCoeff coefficients

// c * q^{<lambda,tau>} as an LCoeff
LCoeff lambda_monomial(const Vec& tau, long scale, const Scalar& c = Scalar(1));
LXPoly lift_poly(const XPoly& f);

// the factor 1 - c q^{<a,x>}
struct XBinomial {
  Vec a;
  Scalar c;
};

struct OpTerm {
  Vec tau;
  Scalar pref;  // scalar prefactor (the t^{-1/2} and v(z) constants)
  std::vector<XBinomial> num, den;
};

struct DiffOperator {
  DatumPtr datum;
  long scale = 1;
  Vec pi;
  // false: D = sum a_tau T^tau; true: D = sum a_tau (T^tau - 1) + a0
  bool shifted_form = false;
  Scalar a0;
  std::vector<OpTerm> terms;
};

// Macdonald operator D^pi for cases a/b; pi must be minuscule or
// quasi-minuscule in P(R'). m_override replaces the datum multiplicities (one
// value per orbit, short first), giving the operator at t = q^{-m_override};
// this is how t = q^k operators are built (k = -m).
DiffOperator build_macdonald_operator(const DatumPtr& datum, const Vec& pi,
                                      const Session& s,
                                      const std::vector<Rat>* m_override = nullptr);

// Koornwinder operator (case c only), pi = e_1, W pi = {+-e_i}.
DiffOperator build_koornwinder_operator(const DatumPtr& datum, const Session& s,
                                        const std::vector<Rat>* mc_override = nullptr);

// orbit sum m_pi evaluated at a concrete point: sum_tau q^{<tau,pt>}
Scalar orbit_value(const RootDatum& d, const Vec& pi, const Vec& pt);
// m_pi(lambda + nu) as a function of formal lambda
LCoeff orbit_lambda(const RootDatum& d, const Vec& pi, const Vec& nu, long scale);
// the orbit sum m_lambda as a Laurent polynomial in x
XPoly orbit_poly(const RootDatum& d, const Vec& lambda, long scale);

// f(x + v)
XPoly shift_x(const RootDatum& d, const XPoly& f, const Vec& v, long scale);

// q^{<lambda+sigma,x>} * body(x), lambda formal
struct ExpFunction {
  DatumPtr datum;
  long scale = 1;
  Vec sigma;
  LXPoly body;
  LXPoly den;  // unit unless binomial cancellation failed
  bool exact = true;
};

ExpFunction apply(const DiffOperator& op, const ExpFunction& f);

struct AppliedPoly {
  XPoly num, den;  // den is unit when exact
  bool exact;
};
AppliedPoly apply(const DiffOperator& op, const XPoly& f);

// one quasi-invariance condition: f(x - v) = eps_factor f(x + v) on the
// subvariety X^{cond_key} = cond_val
struct ShiftCondition {
  Vec alpha;  // the root responsible
  Vec v;
  Key cond_key;
  Scalar cond_val;
  Scalar eps_factor;
  Rat amount;          // j (second kind) or s (first kind, case c)
  long eps_power = 0;  // power of zeta_N in cond_val
};
std::vector<ShiftCondition> quasi_conditions(const DatumPtr& datum,
                                             const Session& s, long ell = 1);

// a binomial denominator factor (X^b - s)^mult
struct BinomialFactor {
  Key b;
  Scalar s;
  int mult = 1;
};

// divide out whatever binomial factors cancel; leftovers stay in den
void reduce_binomial_fraction(LXPoly& num, std::vector<BinomialFactor>& den);
// a/aden + b/bden accumulated into a/aden (common denominator, then reduce)
void add_binomial_fractions(LXPoly& a, std::vector<BinomialFactor>& aden,
                            LXPoly b, std::vector<BinomialFactor> bden);

// apply D to q^{<lambda+sigma,x>} body / prod (X^b - s)^mult; the result is
// returned in the same shape (out_den empty when polynomial)
void apply_rational(const DiffOperator& op, const Vec& sigma, const LXPoly& body,
                    const std::vector<BinomialFactor>& den, LXPoly& out_body,
                    std::vector<BinomialFactor>& out_den);

struct QuasiFailure {
  Vec alpha;
  Rat amount;           // j (cases a/b, R^2) or s (case c, R^1)
  long eps_power = 0;   // power k of zeta_N in the failing condition
};
struct QuasiReport {
  bool ok = true;
  std::vector<QuasiFailure> failures;
};

// quasi-invariance of f per the shift conditions of (R, m); ell > 1 tests the
// twisted conditions (all eps with eps^ell = 1, factor eps^j)
QuasiReport is_quasi_invariant(const DatumPtr& datum, const XPoly& f,
                               const Session& s, long ell = 1);

}  // namespace ba
