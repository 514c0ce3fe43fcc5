#pragma once
// Exact rational vectors/matrices and small linear-algebra kernels used by the
// root-system layer (reflections, lattice bases, zonotope membership).

#include <optional>
#include <vector>

#include "ba/cyclo.hpp"

namespace ba {

using Vec = std::vector<Rat>;       // ambient rational coordinates
using Mat = std::vector<Vec>;       // row-major

Vec operator+(const Vec& a, const Vec& b);
Vec operator-(const Vec& a, const Vec& b);
Vec operator*(const Rat& c, const Vec& a);
Vec operator-(const Vec& a);
bool is_zero(const Vec& a);

// Euclidean dot product of coordinates (gram scaling applied by callers).
Rat edot(const Vec& a, const Vec& b);

Mat mat_mul(const Mat& a, const Mat& b);
Vec mat_apply(const Mat& m, const Vec& v);
Mat mat_identity(int n);

// Reflection in the hyperplane orthogonal to alpha (gram-scale free).
Mat reflection_matrix(const Vec& alpha);

// Solve A x = b exactly; returns nullopt if inconsistent. A need not be
// square; returns one solution (free variables set to 0).
std::optional<Vec> solve_linear(Mat A, Vec b);

// Nullspace basis of A (exact).
std::vector<Vec> nullspace(Mat A);

// Rank of A.
int mat_rank(Mat A);

// lcm of denominators of all coordinates.
Int denominator_lcm(const Vec& v);

}  // namespace ba
