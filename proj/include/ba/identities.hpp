#pragma once
// The verification engine: orthogonality, norm and Weyl formulas (exact
// constant-term checks), the Gaussian-weighted integral and summation
// identities (certified truncated series), and discovery of the twisted
// difference operators in the spectral variable.

#include "ba/bafunc.hpp"
#include "ba/macpoly.hpp"
#include "ba/weights.hpp"

#include <complex>
#include <optional>
#include <string>

namespace ba {

struct NonGenericXi : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NoOperatorAtDepth : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct VerificationReport {
  std::string id;
  std::string params;  // rendered key=value list
  std::string lhs, rhs;
  double abs_err = 0.0, rel_err = 0.0;
  bool pass = false;
  double tail_bound = 0.0;  // certified bound on the truncated remainder
  long truncation = 0;      // series radius (0 for exact/finite checks)

  std::string verdict() const { return pass ? "pass" : "fail"; }
  std::string json_line() const;  // stable field names, one line
};

// numeric defaults shared by the certified-series checks
struct NumericOptions {
  double q0 = 0.5;
  double tol = 1e-9;   // relative
  long radius = 0;     // 0 = choose automatically from the tail bound
};

// one geometric factor (1 - c q^{-<a,x>}) of Delta(x) Delta(-x)
struct GeomFactor {
  Vec a;     // positive direction
  Scalar c;
};
// Delta(x) Delta(-x) = sign q^{2<rho,x>} prod_f (1 - c_f q^{-<a_f,x>})
struct QxFactorization {
  std::vector<GeomFactor> factors;
  int sign = 1;  // (-1)^{#factor pairs / 2} bookkeeping, see builder
  Vec two_rho;
};
QxFactorization qx_factorization(const DatumPtr& datum, const Session& s);

// [exact]  CT[ psi(lambda,x) psi(mu,-x) / (Delta Delta(-x)) ] against
// delta_{lambda mu} (-1)^M Delta'(lambda) Delta'(-lambda); the constant term
// is extracted from the geometric expansion in the chamber of xi_sign
// (negative chamber by default), and re-derived in the opposite chamber.
VerificationReport verify_orthogonality(const BaFunction& ba, const Vec& lambda,
                                        const Vec& mu, const Session& s,
                                        bool opposite_chamber = false);

// [exact]  rank-one residue pairing: the two residues of
// F(z alpha*) at z = -j/2 and z = j/2 sum to zero, j = 1..m
VerificationReport verify_residue_pairing(const BaFunction& ba,
                                          const Vec& lambda, const Vec& mu,
                                          const Session& s);

// [exact]  <p_lambda, p_lambda> at t = q^{m+1} equals
// C (-1)^{Mtilde} |W| Delta'(-lambda-rho~) / Delta'(lambda+rho~)
VerificationReport verify_norm_identity(const DatumPtr& datum,
                                        const Vec& lambda, const Session& s);

// [exact]  Phi_-(lambda,x) = Delta'(lambda) delta(x) p_{lambda-rho~}(x;q,q^{m+1})
// for sign = -1; Phi_+(lambda,x) = Delta'(lambda) p_{lambda+rho}(x;q,q^{-m})
// for sign = +1 (only where the eigen-solve at t = q^{-m} is available and the
// separation predicate holds)
VerificationReport verify_weyl_formula(const BaFunction& ba, const Vec& lambda,
                                       int sign, const Session& s);

// [numeric]  Cherednik-Macdonald-Mehta integral (case b):
// int psi(lambda,x) psi(mu,x) / (Delta Delta(-x)) q^{-|x|^2/2} dx
//   = (-1)^M C^{-1/2} q^{(|lambda|^2+|mu|^2)/2} psi(lambda,mu)
VerificationReport verify_cmm_integral(const BaFunction& ba, const Vec& lambda,
                                       const Vec& mu, const Session& s,
                                       const NumericOptions& opt = {});
// theta-weighted compact form (lambda + mu in P), RHS carries C^{+1/2}
VerificationReport verify_cmm_compact(const BaFunction& ba, const Vec& lambda,
                                      const Vec& mu, const Session& s,
                                      const NumericOptions& opt = {});

// [numeric]  q-Macdonald-Mehta integral.  variant 1: t = q^{m+1} at
// lambda=mu=0 against the infinite-product right-hand side; variant 2:
// t = q^{-m} at lambda=mu=rho against the finite product.
VerificationReport verify_qmm(const BaFunction& ba, int variant,
                              const Session& s, const NumericOptions& opt = {});

// [numeric]  summation formula over xi + P (case b):
// < psi(lambda,x) psi(mu,-x) / (Delta Delta(-x)) q^{|x|^2/2} >_xi
//   = C^{1/2} q^{-(|lambda|^2+|mu|^2)/2} psi(lambda,mu) < q^{|x+lambda-mu|^2/2} >_xi
VerificationReport verify_summation(const BaFunction& ba, const Vec& lambda,
                                    const Vec& mu, const Vec& xi,
                                    const Session& s,
                                    const NumericOptions& opt = {});

// [numeric]  twisted CMM: Gaussian exponent ell; psi_ell is the twisted
// function of the same datum (case b) or of the dual datum (cases a/c)
VerificationReport verify_twisted_cmm(const BaFunction& ba,
                                      const BaFunction& ba_ell,
                                      const Vec& lambda, const Vec& mu,
                                      const Session& s,
                                      const NumericOptions& opt = {});

// [numeric]  symmetric (Cherednik) version:
// int p_lambda p_mu q^{-|x|^2/2} nabla(x;q,q^{m+1}) dx
//   = (-1)^M C^{-1/2} |W| q^{(|la~|^2+|mu~|^2)/2} wdel(mu~) p_lambda(mu~)
VerificationReport verify_cherednik_macdonald(const BaFunction& ba,
                                              const Vec& lambda, const Vec& mu,
                                              const Session& s,
                                              const NumericOptions& opt = {});

// [exact]  symmetrization consistency of Theorem mm's proof:
// sum_{w,w'} (-1)^{ww'} psi(w la~, w' mu~) = |W| Phi_-(la~, mu~)
VerificationReport verify_symmetrization(const BaFunction& ba,
                                         const Vec& lambda, const Vec& mu,
                                         const Session& s);

// a difference operator in the spectral variable on the lattice P:
// (D f)(lambda) = sum_sigma a_sigma(lambda) f(lambda + sigma)
struct SpectralOperator {
  DatumPtr datum;
  long ell = 1;
  long scale = 1;
  Vec pi;
  std::map<Key, LCoeff, KeyLess> terms;  // key_of(sigma, scale) -> a_sigma
};

// [exact]  solve D psi_ell = m_pi(x) psi_ell for D supported on
// { ell w pi - (sums of at most `depth` positive roots) } inside conv(ell W pi);
// asserts a_{ell pi}(lambda) = Delta'(lambda)/Delta'(lambda + ell pi) and
// W-equivariance of the leading coefficients
SpectralOperator discover_twisted_operator(const BaFunction& ba_ell,
                                           const Vec& pi, long depth,
                                           const Session& s,
                                           VerificationReport* report = nullptr);

// apply a spectral operator to a Laurent polynomial (or rational function)
// in Lambda
LCoeff apply_spectral(const SpectralOperator& op, const LPoly& f,
                      const Session& s);
LCoeff apply_spectral(const SpectralOperator& op, const LCoeff& f,
                      const Session& s);

}  // namespace ba
