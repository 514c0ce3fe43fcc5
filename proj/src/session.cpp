#include "ba/rootdata.hpp"

namespace ba {

Session make_session(const RootDatum& d, long ell, const std::vector<Vec>& extra) {
  std::vector<Vec> gens;
  auto addv = [&](const Vec& v) { gens.push_back(v); };
  for (const auto& v : d.fw) addv(v);
  for (const auto& v : d.dual->fw) addv(v);
  for (const auto& v : d.pos) addv(v);
  for (const auto& v : d.pos_star) addv(v);
  addv(d.rho);
  addv(d.rho_star);
  addv(d.rho_tilde);
  addv(d.dual->rho);
  addv(d.dual->rho_tilde);
  for (const auto& v : extra) addv(v);

  Int cd(1);
  for (const auto& v : gens)
    mpz_lcm(cd.get_mpz_t(), cd.get_mpz_t(), denominator_lcm(v).get_mpz_t());
  long scale = 2 * ell * cd.get_si();

  Int pd(1);
  for (const auto& a : gens)
    for (const auto& b : gens) {
      Rat p = d.ip(a, b);
      mpz_lcm(pd.get_mpz_t(), pd.get_mpz_t(), p.get_den_mpz_t());
    }
  for (size_t i = 0; i < d.pos.size(); ++i) {
    Rat e = d.qexp_pos[i] / 2;
    mpz_lcm(pd.get_mpz_t(), pd.get_mpz_t(), e.get_den_mpz_t());
    e = d.qexp_pos[i] * d.m_pos[i] / 2;
    mpz_lcm(pd.get_mpz_t(), pd.get_mpz_t(), e.get_den_mpz_t());
  }
  for (size_t i = 0; i < d.dual->pos.size(); ++i) {
    Rat e = d.dual->qexp_pos[i] * (Rat(1) + d.dual->m_pos[i]) / 2;
    mpz_lcm(pd.get_mpz_t(), pd.get_mpz_t(), e.get_den_mpz_t());
  }
  long qden = 2 * (2 * ell) * (2 * ell) * pd.get_si();

  int N = 1;
  if (d.cs == Case::c) N = 2;
  if (ell > 1) N = (d.cs == Case::c) ? 2 * (int)ell : (int)ell;

  Session s{qden, N, scale};
  set_qpow_denominator(qden);
  set_cyclo_order(N);
  return s;
}

}  // namespace ba
