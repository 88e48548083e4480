#pragma once

#include <cstdint>
#include <vector>

namespace sitelab::modp {

/// Dense matrix over F_p, row-major, entries in [0, p).
using Mat = std::vector<std::vector<int>>;
using Vec = std::vector<int>;

Mat zeros(int rows, int cols);
Mat identity(int n);
int rows(const Mat& m);
int cols(const Mat& m, int fallback = 0);

int inverse(int a, int p);
Mat multiply(const Mat& a, const Mat& b, int p, int inner);
Vec apply(const Mat& a, const Vec& v, int p);

struct Echelon {
  Mat reduced;             // reduced row echelon form, zero rows dropped
  std::vector<int> pivots;  // pivot column per row of `reduced`
};

Echelon rref(Mat m, int ncols, int p);
int rank(const Mat& m, int ncols, int p);

/// Columns spanning { v : m v = 0 } (returned as a list of vectors).
std::vector<Vec> kernel(const Mat& m, int ncols, int p);

/// Coefficients c with sum c_i basis[i] = v, if v lies in the span.
/// `basis` must be linearly independent.
bool solve(const std::vector<Vec>& basis, const Vec& v, int p, Vec& out);

/// Quotient of F_p^n by the span of `sub`: `complement` lists standard
/// indices whose unit vectors map to a basis of the quotient, and
/// `projection` sends F_p^n onto those coordinates.
struct Quotient {
  std::vector<int> complement;
  Mat projection;  // |complement| x n
};

Quotient quotient(const std::vector<Vec>& sub, int n, int p);

}  // namespace sitelab::modp
