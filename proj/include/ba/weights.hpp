#pragma once
// Explicit weight functions: Delta, its dual, Q(x), delta_0, the
// anti-invariant delta, the constant C, the polynomial weight at t = q^k,
// and the numeric theta function of the weight lattice.

#include <complex>

#include "ba/exppoly.hpp"

namespace ba {

struct NonIntegerK : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ToleranceUnreachable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using XPoly = ExpPoly<Scalar>;

// positive values s with s in {b - Z_+} union {c - Z_+}, ascending
std::vector<Rat> prec_set(const Rat& b, const Rat& c);

struct WeightBundle {
  DatumPtr datum;
  long scale = 1;
  XPoly delta;        // Delta(x)
  XPoly delta_minus;  // Delta(-x)
  XPoly Qx;           // Delta(x) Delta(-x)
  XPoly delta0;       // prod over R_+ of (q^{<a,x>/2} - q^{-<a,x>/2})
  XPoly delta_weyl;   // Q(x) delta0(x), anti-invariant
  XPoly wdel;         // C Delta(-x) delta0(x)
  XPoly delta_dual;   // Delta of the dual datum (the lambda-side weight)
  XPoly delta_dual_minus;
  Scalar C;           // normalization constant

  // evaluate an XPoly at a rational point (exact), e.g. Delta*(lambda0)
  Scalar eval_at(const XPoly& p, const Vec& pt) const;
};

WeightBundle build_weights(const DatumPtr& datum, const Session& s);

// prod over alpha in R, i = 0..k_alpha-1 of (1 - q_alpha^i q^{<alpha,x>});
// k per Weyl orbit like the multiplicities (cases a/b only)
XPoly nabla_polynomial(const RootDatum& d, const std::vector<Rat>& k,
                       const Session& s);

struct ThetaResult {
  std::complex<double> value;
  double tail_bound;
  long radius;
};

// sum over gamma in P of q0^{<gamma,x> + |gamma|^2/2} with certified tail
ThetaResult theta_numeric(const RootDatum& d,
                          const std::vector<std::complex<double>>& x,
                          double q0, double tol);

}  // namespace ba
