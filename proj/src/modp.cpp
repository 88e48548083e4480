#include "sitelab/modp.hpp"

#include <stdexcept>

namespace sitelab::modp {

Mat zeros(int r, int c) { return Mat(static_cast<std::size_t>(r), Vec(static_cast<std::size_t>(c), 0)); }

Mat identity(int n) {
  Mat m = zeros(n, n);
  for (int i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

int rows(const Mat& m) { return static_cast<int>(m.size()); }
int cols(const Mat& m, int fallback) { return m.empty() ? fallback : static_cast<int>(m[0].size()); }

int inverse(int a, int p) {
  a %= p;
  if (a < 0) a += p;
  if (a == 0) throw std::domain_error("zero has no inverse mod p");
  int r = 1;
  for (int e = p - 2, b = a; e > 0; e >>= 1, b = b * b % p)
    if (e & 1) r = r * b % p;
  return r;
}

Mat multiply(const Mat& a, const Mat& b, int p, int inner) {
  const int n = rows(a);
  const int m = cols(b);
  Mat out = zeros(n, m);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < inner; ++k) {
      const int aik = a[i][k];
      if (!aik) continue;
      for (int j = 0; j < m; ++j) out[i][j] = (out[i][j] + aik * b[k][j]) % p;
    }
  return out;
}

Vec apply(const Mat& a, const Vec& v, int p) {
  Vec out(a.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    int acc = 0;
    for (std::size_t j = 0; j < v.size(); ++j) acc = (acc + a[i][j] * v[j]) % p;
    out[i] = acc;
  }
  return out;
}

Echelon rref(Mat m, int ncols, int p) {
  Echelon e;
  int r = 0;
  const int nrows = rows(m);
  for (int c = 0; c < ncols && r < nrows; ++c) {
    int piv = -1;
    for (int i = r; i < nrows; ++i)
      if (m[i][c] % p) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    std::swap(m[r], m[piv]);
    const int inv = inverse(m[r][c], p);
    for (int j = 0; j < ncols; ++j) m[r][j] = m[r][j] * inv % p;
    for (int i = 0; i < nrows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      const int f = m[i][c];
      for (int j = 0; j < ncols; ++j) m[i][j] = ((m[i][j] - f * m[r][j]) % p + p) % p;
    }
    e.pivots.push_back(c);
    ++r;
  }
  m.resize(static_cast<std::size_t>(r));
  e.reduced = std::move(m);
  return e;
}

int rank(const Mat& m, int ncols, int p) { return static_cast<int>(rref(m, ncols, p).pivots.size()); }

std::vector<Vec> kernel(const Mat& m, int ncols, int p) {
  const auto e = rref(m, ncols, p);
  std::vector<char> is_pivot(static_cast<std::size_t>(ncols), 0);
  for (int c : e.pivots) is_pivot[c] = 1;
  std::vector<Vec> out;
  for (int free = 0; free < ncols; ++free) {
    if (is_pivot[free]) continue;
    Vec v(static_cast<std::size_t>(ncols), 0);
    v[free] = 1;
    for (std::size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = (p - e.reduced[r][free]) % p;
    out.push_back(std::move(v));
  }
  return out;
}

bool solve(const std::vector<Vec>& basis, const Vec& v, int p, Vec& out) {
  // Augmented system [basis | v] with basis vectors as columns.
  const int n = static_cast<int>(v.size());
  const int k = static_cast<int>(basis.size());
  Mat aug = zeros(n, k + 1);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < k; ++j) aug[i][j] = basis[j][i];
    aug[i][k] = v[i];
  }
  const auto e = rref(aug, k + 1, p);
  out.assign(static_cast<std::size_t>(k), 0);
  for (std::size_t r = 0; r < e.pivots.size(); ++r) {
    if (e.pivots[r] == k) return false;
    out[e.pivots[r]] = e.reduced[r][k];
  }
  return true;
}

Quotient quotient(const std::vector<Vec>& sub, int n, int p) {
  const auto e = rref(Mat(sub.begin(), sub.end()), n, p);
  std::vector<char> is_pivot(static_cast<std::size_t>(n), 0);
  for (int c : e.pivots) is_pivot[c] = 1;
  Quotient q;
  for (int j = 0; j < n; ++j)
    if (!is_pivot[j]) q.complement.push_back(j);
  // v minus the multiples of reduced rows that clear pivot entries leaves
  // coordinates at the complement: row c of the projection is
  // e_c - sum_r reduced[r][c] e_{pivot r}.
  q.projection = zeros(static_cast<int>(q.complement.size()), n);
  for (std::size_t i = 0; i < q.complement.size(); ++i) {
    const int c = q.complement[i];
    q.projection[i][c] = 1;
    for (std::size_t r = 0; r < e.pivots.size(); ++r)
      q.projection[i][e.pivots[r]] = (p - e.reduced[r][c]) % p;
  }
  return q;
}

}  // namespace sitelab::modp
