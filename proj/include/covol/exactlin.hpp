#pragma once

// Exact integer/rational building blocks: univariate integer polynomials
// (evaluation, gcd, subresultant resultant), rational polynomial arithmetic
// modulo a fixed polynomial, and integer matrix reductions (Bareiss
// determinant, Smith-style column reduction with unimodular transforms).

#include <algorithm>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "covol/common.hpp"

namespace covol {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline double to_double(const Int& x) { return x.convert_to<double>(); }
inline double to_double(const Rat& x) { return x.convert_to<double>(); }

// ---------- univariate polynomials, constant term first ----------

template <typename T>
void poly_trim(std::vector<T>& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

template <typename T>
int poly_deg(const std::vector<T>& p) {
  return static_cast<int>(p.size()) - 1;  // -1 for the zero polynomial
}

template <typename T>
std::vector<T> poly_mul(const std::vector<T>& a, const std::vector<T>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<T> out(a.size() + b.size() - 1, T(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

template <typename T>
std::vector<T> poly_derivative(const std::vector<T>& p) {
  std::vector<T> out;
  for (std::size_t i = 1; i < p.size(); ++i) out.push_back(p[i] * T(static_cast<int>(i)));
  poly_trim(out);
  return out;
}

inline cplx poly_eval(const std::vector<Int>& p, cplx x) {
  cplx acc = 0.0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + to_double(*it);
  return acc;
}

inline cplx poly_eval(const std::vector<Rat>& p, cplx x) {
  cplx acc = 0.0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + to_double(*it);
  return acc;
}

// Pseudo-remainder: lc(B)^(degA-degB+1) * A reduced by B.
inline std::vector<Int> poly_prem(std::vector<Int> a, const std::vector<Int>& b) {
  int da = poly_deg(a), db = poly_deg(b);
  Int lb = b.back();
  for (int k = da; k >= db; --k) {
    Int la = (static_cast<std::size_t>(k) < a.size()) ? a[k] : Int(0);
    for (auto& c : a) c *= lb;
    if (la != 0) {
      for (int j = 0; j <= db; ++j) a[k - db + j] -= la * b[j];
    }
    poly_trim(a);
    if (poly_deg(a) < k) {
      a.resize(static_cast<std::size_t>(std::max(poly_deg(a) + 1, 0)));
    }
  }
  poly_trim(a);
  return a;
}

inline Int poly_content(const std::vector<Int>& p) {
  Int g = 0;
  for (const auto& c : p) g = boost::multiprecision::gcd(g, c);
  return g;
}

inline std::vector<Int> poly_primitive(std::vector<Int> p) {
  Int g = poly_content(p);
  if (g > 1)
    for (auto& c : p) c /= g;
  return p;
}

// Primitive-PRS gcd of integer polynomials (primitive part of the gcd).
inline std::vector<Int> poly_gcd(std::vector<Int> a, std::vector<Int> b) {
  poly_trim(a);
  poly_trim(b);
  if (a.empty()) return poly_primitive(b);
  if (b.empty()) return poly_primitive(a);
  a = poly_primitive(std::move(a));
  b = poly_primitive(std::move(b));
  if (poly_deg(a) < poly_deg(b)) std::swap(a, b);
  while (!b.empty()) {
    std::vector<Int> r = poly_primitive(poly_prem(a, b));
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty() && a.back() < 0)
    for (auto& c : a) c = -c;
  return a;
}

// Subresultant resultant of integer polynomials.
inline Int resultant(std::vector<Int> a, std::vector<Int> b) {
  poly_trim(a);
  poly_trim(b);
  if (a.empty() || b.empty()) return 0;
  if (poly_deg(a) == 0) return boost::multiprecision::pow(a[0], static_cast<unsigned>(poly_deg(b)));
  if (poly_deg(b) == 0) return boost::multiprecision::pow(b[0], static_cast<unsigned>(poly_deg(a)));
  Int sign = 1;
  if (poly_deg(a) < poly_deg(b)) {
    if ((poly_deg(a) & 1) && (poly_deg(b) & 1)) sign = -sign;
    std::swap(a, b);
  }
  Int g = 1, h = 1;
  while (true) {
    int da = poly_deg(a), db = poly_deg(b);
    int d = da - db;
    if ((da & 1) && (db & 1)) sign = -sign;
    std::vector<Int> r = poly_prem(a, b);
    a = std::move(b);
    Int denom = g * boost::multiprecision::pow(h, static_cast<unsigned>(d));
    for (auto& c : r) c /= denom;
    b = std::move(r);
    g = a.back();
    if (d > 0) {
      Int gpow = boost::multiprecision::pow(g, static_cast<unsigned>(d));
      Int hpow = boost::multiprecision::pow(h, static_cast<unsigned>(d - 1));
      h = gpow / hpow;
    }
    if (b.empty()) return 0;
    if (poly_deg(b) == 0) {
      int dA = poly_deg(a);
      Int num = boost::multiprecision::pow(b[0], static_cast<unsigned>(dA));
      Int den = boost::multiprecision::pow(h, static_cast<unsigned>(dA - 1));
      return sign * (num / den);
    }
  }
}

inline bool poly_squarefree(const std::vector<Int>& p) {
  std::vector<Int> g = poly_gcd(p, poly_derivative(p));
  return poly_deg(g) <= 0;
}

// ---------- rational polynomial arithmetic modulo a fixed polynomial ----------

inline std::vector<Rat> poly_mod(std::vector<Rat> a, const std::vector<Int>& f) {
  int df = poly_deg(f);
  Rat lf(f.back());
  while (poly_deg(a) >= df) {
    int k = poly_deg(a);
    Rat q = a[static_cast<std::size_t>(k)] / lf;
    for (int j = 0; j <= df; ++j) a[static_cast<std::size_t>(k - df + j)] -= q * Rat(f[static_cast<std::size_t>(j)]);
    poly_trim(a);
  }
  return a;
}

inline std::vector<Rat> poly_mulmod(const std::vector<Rat>& a, const std::vector<Rat>& b,
                                    const std::vector<Int>& f) {
  return poly_mod(poly_mul(a, b), f);
}

// ---------- exact integer matrices ----------

using IMat = std::vector<std::vector<Int>>;  // row major

inline IMat imat_identity(int n) {
  IMat m(static_cast<std::size_t>(n), std::vector<Int>(static_cast<std::size_t>(n), 0));
  for (int i = 0; i < n; ++i) m[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;
  return m;
}

// Bareiss fraction-free determinant.
inline Int imat_det(IMat a) {
  const int n = static_cast<int>(a.size());
  if (n == 0) return 1;
  Int sign = 1, prev = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (a[k][k] == 0) {
      int p = -1;
      for (int i = k + 1; i < n; ++i)
        if (a[i][k] != 0) {
          p = i;
          break;
        }
      if (p < 0) return 0;
      std::swap(a[k], a[p]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) {
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
      }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

// Column-reduces the single row w by unimodular column operations so that
// w*U = (g, 0, ..., 0) with g = gcd(w). Returns U (n x n, det +-1).
inline IMat gcd_column_transform(const std::vector<Int>& w_in) {
  const int n = static_cast<int>(w_in.size());
  std::vector<Int> w = w_in;
  IMat u = imat_identity(n);
  auto col_axpy = [&](int dst, int src, const Int& q) {
    // column dst -= q * column src
    for (int r = 0; r < n; ++r) u[static_cast<std::size_t>(r)][static_cast<std::size_t>(dst)] -=
        q * u[static_cast<std::size_t>(r)][static_cast<std::size_t>(src)];
    w[static_cast<std::size_t>(dst)] -= q * w[static_cast<std::size_t>(src)];
  };
  auto col_swap = [&](int i, int j) {
    for (int r = 0; r < n; ++r)
      std::swap(u[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)],
                u[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)]);
    std::swap(w[static_cast<std::size_t>(i)], w[static_cast<std::size_t>(j)]);
  };
  for (int j = 1; j < n; ++j) {
    while (w[static_cast<std::size_t>(j)] != 0) {
      if (w[0] == 0) {
        col_swap(0, j);
        continue;
      }
      Int q = w[static_cast<std::size_t>(j)] / w[0];
      col_axpy(j, 0, q);
      if (w[static_cast<std::size_t>(j)] != 0) col_swap(0, j);
    }
  }
  if (w[0] < 0) {
    for (int r = 0; r < n; ++r) u[static_cast<std::size_t>(r)][0] = -u[static_cast<std::size_t>(r)][0];
  }
  return u;
}

// Column-reduces C (rows x cols) by unimodular column operations, tracking
// the transform V. Afterwards (C*V) is in column echelon form; the trailing
// columns of V with zero image form a Z-basis of ker_Z(C).
inline IMat integer_column_echelon(IMat c, IMat& v) {
  const int rows = static_cast<int>(c.size());
  if (!rows) return c;
  const int cols = static_cast<int>(c[0].size());
  v = imat_identity(cols);
  auto col_axpy = [&](int dst, int src, const Int& q) {
    for (int r = 0; r < rows; ++r) c[static_cast<std::size_t>(r)][static_cast<std::size_t>(dst)] -=
        q * c[static_cast<std::size_t>(r)][static_cast<std::size_t>(src)];
    for (int r = 0; r < cols; ++r) v[static_cast<std::size_t>(r)][static_cast<std::size_t>(dst)] -=
        q * v[static_cast<std::size_t>(r)][static_cast<std::size_t>(src)];
  };
  auto col_swap = [&](int i, int j) {
    for (int r = 0; r < rows; ++r)
      std::swap(c[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)],
                c[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)]);
    for (int r = 0; r < cols; ++r)
      std::swap(v[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)],
                v[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)]);
  };
  int pivot_col = 0;
  for (int row = 0; row < rows && pivot_col < cols; ++row) {
    for (int j = pivot_col + 1; j < cols; ++j) {
      while (c[static_cast<std::size_t>(row)][static_cast<std::size_t>(j)] != 0) {
        if (c[static_cast<std::size_t>(row)][static_cast<std::size_t>(pivot_col)] == 0) {
          col_swap(pivot_col, j);
          continue;
        }
        Int q = c[static_cast<std::size_t>(row)][static_cast<std::size_t>(j)] /
                c[static_cast<std::size_t>(row)][static_cast<std::size_t>(pivot_col)];
        col_axpy(j, pivot_col, q);
        if (c[static_cast<std::size_t>(row)][static_cast<std::size_t>(j)] != 0) col_swap(pivot_col, j);
      }
    }
    if (c[static_cast<std::size_t>(row)][static_cast<std::size_t>(pivot_col)] != 0) ++pivot_col;
  }
  return c;
}

// Z-basis of { x in Z^n : C x = 0 }.
inline IMat integer_kernel(const IMat& c, int n_cols) {
  if (c.empty()) return imat_identity(n_cols);
  IMat v;
  IMat reduced = integer_column_echelon(c, v);
  IMat kernel;
  for (int j = 0; j < n_cols; ++j) {
    bool zero = true;
    for (const auto& row : reduced) zero = zero && (row[static_cast<std::size_t>(j)] == 0);
    if (!zero) continue;
    std::vector<Int> col;
    for (int r = 0; r < n_cols; ++r) col.push_back(v[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)]);
    kernel.push_back(std::move(col));
  }
  return kernel;
}

// Integer rows spanning the rational null space of span(rows of A): i.e.
// functionals u with u . a = 0 for all rows a.
inline IMat rational_orthogonal_rows(const IMat& a, int n) {
  // Row-reduce A over Q.
  std::vector<std::vector<Rat>> m;
  for (const auto& row : a) {
    std::vector<Rat> r;
    for (const auto& x : row) r.emplace_back(x);
    m.push_back(std::move(r));
  }
  std::vector<int> pivot_of_col(static_cast<std::size_t>(n), -1);
  int rank = 0;
  for (int col = 0; col < n && rank < static_cast<int>(m.size()); ++col) {
    int p = -1;
    for (int r = rank; r < static_cast<int>(m.size()); ++r)
      if (m[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] != 0) {
        p = r;
        break;
      }
    if (p < 0) continue;
    std::swap(m[static_cast<std::size_t>(p)], m[static_cast<std::size_t>(rank)]);
    Rat inv = m[static_cast<std::size_t>(rank)][static_cast<std::size_t>(col)];
    for (auto& x : m[static_cast<std::size_t>(rank)]) x /= inv;
    for (int r = 0; r < static_cast<int>(m.size()); ++r) {
      if (r == rank) continue;
      Rat f = m[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)];
      if (f == 0) continue;
      for (int cc = 0; cc < n; ++cc)
        m[static_cast<std::size_t>(r)][static_cast<std::size_t>(cc)] -=
            f * m[static_cast<std::size_t>(rank)][static_cast<std::size_t>(cc)];
    }
    pivot_of_col[static_cast<std::size_t>(col)] = rank;
    ++rank;
  }
  // Free columns parameterize the null space of the ROW span's orthogonal?
  // Here we want u with A u^T = 0, i.e. the null space of A as a linear map.
  IMat out;
  for (int col = 0; col < n; ++col) {
    if (pivot_of_col[static_cast<std::size_t>(col)] >= 0) continue;
    std::vector<Rat> u(static_cast<std::size_t>(n), Rat(0));
    u[static_cast<std::size_t>(col)] = 1;
    for (int cc = 0; cc < n; ++cc) {
      int pr = pivot_of_col[static_cast<std::size_t>(cc)];
      if (pr >= 0) u[static_cast<std::size_t>(cc)] = -m[static_cast<std::size_t>(pr)][static_cast<std::size_t>(col)];
    }
    Int den = 1;
    for (const auto& x : u) den = boost::multiprecision::lcm(den, boost::multiprecision::denominator(x));
    std::vector<Int> iu;
    for (const auto& x : u)
      iu.push_back(boost::multiprecision::numerator(x) * (den / boost::multiprecision::denominator(x)));
    out.push_back(std::move(iu));
  }
  return out;
}

// Saturated basis of the lattice (R-span of the generator rows) intersect Z^n.
inline IMat saturated_basis(const IMat& generators, int n) {
  IMat functionals = rational_orthogonal_rows(generators, n);
  return integer_kernel(functionals, n);
}

// All k x k minors of an n x k integer matrix (columns are vectors), indexed
// by increasing row subsets in lexicographic order.
template <typename F>
void for_each_combination(int n, int k, F&& fn) {
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    fn(static_cast<const std::vector<int>&>(idx));
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j)
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

inline std::size_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::size_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
  return r;
}

}  // namespace covol
