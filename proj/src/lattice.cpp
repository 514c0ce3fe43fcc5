#include "ba/lattice.hpp"

#include <cassert>
#include <stdexcept>

namespace ba {

Vec operator+(const Vec& a, const Vec& b) {
  assert(a.size() == b.size());
  Vec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Vec operator-(const Vec& a, const Vec& b) {
  assert(a.size() == b.size());
  Vec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Vec operator*(const Rat& c, const Vec& a) {
  Vec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
  return r;
}

Vec operator-(const Vec& a) { return Rat(-1) * a; }

bool is_zero(const Vec& a) {
  for (const auto& x : a)
    if (x != 0) return false;
  return true;
}

Rat edot(const Vec& a, const Vec& b) {
  assert(a.size() == b.size());
  Rat s(0);
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Mat mat_mul(const Mat& a, const Mat& b) {
  size_t n = a.size(), m = b[0].size(), k = b.size();
  Mat r(n, Vec(m, Rat(0)));
  for (size_t i = 0; i < n; ++i)
    for (size_t l = 0; l < k; ++l) {
      if (a[i][l] == 0) continue;
      for (size_t j = 0; j < m; ++j) r[i][j] += a[i][l] * b[l][j];
    }
  return r;
}

Vec mat_apply(const Mat& m, const Vec& v) {
  Vec r(m.size(), Rat(0));
  for (size_t i = 0; i < m.size(); ++i)
    for (size_t j = 0; j < v.size(); ++j) r[i] += m[i][j] * v[j];
  return r;
}

Mat mat_identity(int n) {
  Mat m(n, Vec(n, Rat(0)));
  for (int i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

Mat reflection_matrix(const Vec& alpha) {
  int n = (int)alpha.size();
  Rat aa = edot(alpha, alpha);
  if (aa == 0) throw std::invalid_argument("reflection in zero vector");
  Mat m = mat_identity(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m[i][j] -= 2 * alpha[i] * alpha[j] / aa;
  return m;
}

namespace {
// row-reduce [A | b...]; returns pivot columns
std::vector<int> rref(Mat& M, int ncols) {
  std::vector<int> pivots;
  int row = 0, nrows = (int)M.size();
  for (int col = 0; col < ncols && row < nrows; ++col) {
    int p = -1;
    for (int i = row; i < nrows; ++i)
      if (M[i][col] != 0) {
        p = i;
        break;
      }
    if (p < 0) continue;
    std::swap(M[row], M[p]);
    Rat inv = Rat(1) / M[row][col];
    for (auto& x : M[row]) x *= inv;
    for (int i = 0; i < nrows; ++i) {
      if (i == row || M[i][col] == 0) continue;
      Rat c = M[i][col];
      for (size_t j = 0; j < M[i].size(); ++j) M[i][j] -= c * M[row][j];
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}
}  // namespace

std::optional<Vec> solve_linear(Mat A, Vec b) {
  int n = (int)A.size(), m = n ? (int)A[0].size() : (int)b.size() ? 0 : 0;
  if (n == 0) return Vec{};
  m = (int)A[0].size();
  for (int i = 0; i < n; ++i) A[i].push_back(b[i]);
  auto pivots = rref(A, m);
  // consistency: no row of form [0...0 | c!=0]
  for (int i = 0; i < n; ++i) {
    bool allz = true;
    for (int j = 0; j < m; ++j)
      if (A[i][j] != 0) {
        allz = false;
        break;
      }
    if (allz && A[i][m] != 0) return std::nullopt;
  }
  Vec x(m, Rat(0));
  for (size_t k = 0; k < pivots.size(); ++k) x[pivots[k]] = A[k][m];
  return x;
}

std::vector<Vec> nullspace(Mat A) {
  if (A.empty()) return {};
  int m = (int)A[0].size();
  auto pivots = rref(A, m);
  std::vector<bool> ispiv(m, false);
  for (int p : pivots) ispiv[p] = true;
  std::vector<Vec> basis;
  for (int f = 0; f < m; ++f) {
    if (ispiv[f]) continue;
    Vec v(m, Rat(0));
    v[f] = 1;
    for (size_t k = 0; k < pivots.size(); ++k) v[pivots[k]] = -A[k][f];
    basis.push_back(std::move(v));
  }
  return basis;
}

int mat_rank(Mat A) {
  if (A.empty()) return 0;
  return (int)rref(A, (int)A[0].size()).size();
}

Int denominator_lcm(const Vec& v) {
  Int l(1);
  for (const auto& x : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  return l;
}

}  // namespace ba
