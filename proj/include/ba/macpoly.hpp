#pragma once
// Macdonald polynomials at t = q^k (positive integer k): constant-term
// Gram-Schmidt and triangular eigen-solve backends, and the Macdonald scalar
// product CT[f(x) g(-x) nabla(x)].

#include "ba/macops.hpp"

namespace ba {

struct NotDefinedAtParameters : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct EigenvalueCollision : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MacPolynomial {
  DatumPtr datum;
  long k = 1;
  Vec lambda;
  // expansion in orbit sums: dominant nu -> a_{lambda nu} (a_{lambda lambda} = 1)
  std::map<Key, Scalar, KeyLess> orbit_expansion;
  XPoly monomial_expansion;
};

// the paper works at t = q^{-m}; the verification suites need p_lambda at
// t = q^{m+1}, which is this module's k = m + 1
inline long k_from_m(long m) { return m + 1; }

// the weight function at t = q^k (cases a/b):
// nabla = prod_{alpha in R} prod_{i=0}^{k-1} (1 - q_alpha^i q^{<alpha,x>})
XPoly nabla_k(const DatumPtr& datum, long k, const Session& s);

Scalar scalar_product(const DatumPtr& datum, long k, const XPoly& f,
                      const XPoly& g, const Session& s);

// all dominant nu with lambda - nu in Q_+ (including lambda itself)
std::vector<Vec> dominant_below(const RootDatum& d, const Vec& lambda);

// decompose a W-invariant Laurent polynomial into orbit sums
std::map<Key, Scalar, KeyLess> orbit_decompose(const RootDatum& d,
                                               const XPoly& f, long scale);

enum class MacBackend { gram_schmidt, eigen_solve };

// p_lambda(x; q, q^k); eigen_solve falls back to gram_schmidt on an
// eigenvalue collision
MacPolynomial macdonald_poly(const DatumPtr& datum, long k, const Vec& lambda,
                             const Session& s,
                             MacBackend backend = MacBackend::gram_schmidt);

// Remark on well-definedness at t = q^{-m}: true iff W(lambda - rho) differs
// from W(mu - rho) for every dominant mu < lambda (rho of the datum)
bool eigenvalue_separated(const RootDatum& d, const Vec& lambda);

}  // namespace ba
