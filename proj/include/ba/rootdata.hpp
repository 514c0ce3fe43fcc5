#pragma once
// Root-system data (R, m): roots, Weyl group, lattices, multiplicities, dual
// datum, the BA support polytope, and session constants.

#include <memory>
#include <string>
#include <vector>

#include "ba/lattice.hpp"
#include "ba/scalar.hpp"

namespace ba {

enum class Case { a, b, c };

struct IntegralityViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnsupportedFamily : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RootDatum {
  Case cs = Case::a;
  std::string family;  // "A","B","C","D","G2" or "dual"
  int rank = 0;        // rank of R
  int dim = 0;         // ambient dimension
  Rat gram = 1;        // <u,v> = gram * (euclidean dot of coordinates)

  std::vector<Vec> simple;      // simple roots
  std::vector<Vec> pos;         // positive roots of R
  std::vector<Rat> m_pos;       // m_alpha per positive root
  std::vector<Rat> qexp_pos;    // q_alpha = q^{qexp_pos}
  std::vector<Vec> pos_star;    // alpha* per positive root
  std::vector<Rat> mstar_pos;   // m*_alpha per positive root

  std::vector<Rat> mc;          // case c: m1..m5 (else empty)

  std::vector<Mat> weyl;        // all Weyl elements (weyl[0] = identity)
  std::vector<int> weyl_sign;   // (-1)^{length(w)}

  std::vector<Vec> fw;          // fundamental weights (basis of P)
  std::vector<Vec> fw_star;     // basis of P' = P(R*)
  std::vector<Vec> span_basis;  // basis of the root span
  std::vector<Vec> span_perp;   // basis of its orthogonal complement

  Vec rho, rho_star, rho_tilde;
  Rat M;       // sum of m_alpha over R_+
  Rat Mtilde;  // sum of (m_alpha + 1) over R_+

  Rat ip(const Vec& a, const Vec& b) const { return gram * edot(a, b); }
  Vec coroot(const Vec& alpha) const;  // 2 alpha / <alpha,alpha>
  bool in_root_span(const Vec& v) const;
  // coordinates of v in the fundamental-weight basis (v in root span)
  Vec p_coordinates(const Vec& v) const;
  bool in_lattice_P(const Vec& v) const;
  bool in_lattice_Q(const Vec& v) const;
  bool is_dominant(const Vec& v) const;
  // nu < lambda in the dominance order (lambda - nu in the positive cone)
  bool dominance_less(const Vec& nu, const Vec& lambda) const;

  std::shared_ptr<RootDatum> dual;  // the (R*, m*) datum
};

using DatumPtr = std::shared_ptr<RootDatum>;

// multiplicities: cases a/b one value per Weyl orbit (short first if two
// orbits, or a single value applied to all); case c the five m_1..m_5.
DatumPtr build_root_datum(Case cs, const std::string& family, int rank,
                          const std::vector<Rat>& multiplicities);

std::vector<Vec> weyl_orbit(const RootDatum& d, const Vec& v);
Vec dominant_representative(const RootDatum& d, const Vec& v, Mat* w_out = nullptr);

// Dominant (quasi-)minuscule weights of R' = R*; minuscule first. Each entry
// flags whether it is minuscule.
struct MinusculeWeight {
  Vec pi;
  bool minuscule;
};
std::vector<MinusculeWeight> minuscule_and_quasiminuscule(const RootDatum& d);

// Zonotope membership: mu in N = { (1/2) sum l_alpha alpha, |l_alpha| <= m_alpha }.
bool in_support_polytope(const RootDatum& d, const Vec& mu);
// Points of (rho + (1/ell) L) inside N, where L = P (default) or Q.
std::vector<Vec> support_set(const RootDatum& d, long ell, bool use_root_lattice = false);

Rat nu_R(const RootDatum& d);  // max |alpha|^2 / 2 (short roots have length sqrt2)
bool ell_admissible(const RootDatum& d, long ell);

// Session constants: fixes the global qpow denominator and cyclotomic order
// for a run on this datum; returns (qden, N). extra vectors contribute their
// pairing denominators (evaluation points lambda0, mu0, xi).
struct Session {
  long qden;
  int N;
  long scale;  // exponent-lattice denominator for both x and lambda keys
};
Session make_session(const RootDatum& d, long ell,
                     const std::vector<Vec>& extra = {});

}  // namespace ba
