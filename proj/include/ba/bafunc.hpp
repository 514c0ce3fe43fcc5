#pragma once
// Baker-Akhiezer functions: iterated-operator construction, direct linear
// solve from the shift conditions, the rank-one closed form, normalization,
// evaluation and symmetrization.

#include "ba/macops.hpp"

namespace ba {

struct SolutionSpaceNotOneDimensional : std::runtime_error {
  long dimension;
  explicit SolutionSpaceNotOneDimensional(long dim)
      : std::runtime_error("solution space has dimension " +
                           std::to_string(dim)),
        dimension(dim) {}
};
struct NormalizationDivideByZero : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct PoleAtLambda : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct EllNotAdmissible : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// the iterated-operator product failed to come back polynomial
struct ConstructionNotPolynomial : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BaFunction {
  DatumPtr datum;
  long ell = 1;
  long scale = 1;
  std::vector<Vec> support;               // candidate nu (support lattice in N)
  std::map<Key, LCoeff, KeyLess> coeffs;  // key_of(nu, scale) -> psi_nu(lambda)
  bool normalized = false;

  LCoeff coeff(const Vec& nu) const;
  // as q^{<lambda+sigma,x>} body with sigma = 0, body = sum psi_nu X^nu
  ExpFunction function() const;
};

// Delta'(lambda) = Delta_{R*,m*} in the Lambda monomials (the normalization
// value at the vertex rho)
LPoly dual_delta_lambda(const DatumPtr& datum, const Session& s);

// gauge coeffs[rho] = Delta'(lambda)
void normalize(BaFunction& ba, const Session& s);

// direct solve of the shift conditions over the support lattice; asserts a
// one-dimensional solution space at formal lambda.  Cases a/b default to the
// root-lattice support rho + Q; full_weight_lattice solves over rho + P
// instead (the solution is the same, with zero coefficients off rho + Q)
BaFunction construct_ba_linear(const DatumPtr& datum, const Session& s,
                               long ell = 1,
                               bool full_weight_lattice = false);

// iterated-operator product applied to q^{<lambda+rho,x>} Q(x); pi selects the
// Macdonald operator (ignored in case c, which uses the Koornwinder operator)
BaFunction construct_ba_iterative(const DatumPtr& datum, const Vec& pi,
                                  const Session& s);

// A1 case b, integer m: explicit product formula, psi_rho = 1 gauge
BaFunction rank_one_closed_form(const DatumPtr& datum, const Session& s);

// substitute a concrete lambda0 (and x0); throws PoleAtLambda on a vanishing
// coefficient denominator
Scalar eval_lcoeff(const RootDatum& d, const LCoeff& c, const Vec& lambda0,
                   long scale);
Scalar evaluate(const BaFunction& ba, const Vec& lambda0, const Vec& x0);
XPoly specialize_lambda(const BaFunction& ba, const Vec& lambda0);

// Phi_{+-}(lambda0, x) = sum_w (+-1)^{l(w)} psi(w lambda0, x)
XPoly symmetrize(const BaFunction& ba, const Vec& lambda0, int sign);

// psi_{nu nu'} table: each coefficient as a Lambda polynomial (throws
// std::runtime_error if some coefficient is not polynomial)
std::map<Key, LPoly, KeyLess> coefficient_table(const BaFunction& ba);

}  // namespace ba
