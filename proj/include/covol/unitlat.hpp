#pragma once

// Lattices of unit logarithms: 1- and 2-norms of wedges (covolumes), the
// classical totally-real lower-bound checks, exact codimension-one pure-wedge
// extraction, and a brute-force search for the minimal wedge 1-norm.

#include <algorithm>
#include <cmath>
#include <vector>

#include "covol/common.hpp"
#include "covol/exactlin.hpp"
#include "covol/numfield.hpp"

namespace covol {

struct LogLattice {
  int ambient_dim = 0;
  Mat basis;  // ambient_dim x rank, columns are LOG vectors
  int rank = 0;
};

inline LogLattice make_log_lattice(const std::vector<LogVector>& vectors) {
  require(!vectors.empty(), Errc::DomainError, "empty basis");
  LogLattice lat;
  lat.ambient_dim = static_cast<int>(vectors[0].values.size());
  lat.rank = static_cast<int>(vectors.size());
  lat.basis.resize(lat.ambient_dim, lat.rank);
  for (int j = 0; j < lat.rank; ++j) {
    require(vectors[static_cast<std::size_t>(j)].values.size() == lat.ambient_dim,
            Errc::LengthMismatch, "inconsistent vector lengths");
    lat.basis.col(j) = vectors[static_cast<std::size_t>(j)].values;
  }
  Eigen::JacobiSVD<Mat> svd(lat.basis);
  double smin = svd.singularValues().minCoeff();
  double smax = svd.singularValues().maxCoeff();
  require(smin > 1e-9 * smax, Errc::DependentVectors, "basis numerically dependent");
  return lat;
}

inline LogLattice unit_log_lattice(const std::vector<FieldElement>& units) {
  std::vector<LogVector> vs;
  for (const auto& u : units) vs.push_back(log_embed(u, LogFlavor::WeightedLog));
  return make_log_lattice(vs);
}

struct WedgeNorms {
  double one_norm = 0.0;  // sum of |k x k minors| in the standard basis
  double two_norm = 0.0;  // sqrt(Gram determinant) = covolume
};

inline WedgeNorms wedge_norms(const Mat& vectors) {
  const int amb = static_cast<int>(vectors.rows());
  const int j = static_cast<int>(vectors.cols());
  require(j >= 1 && j <= amb, Errc::DomainError, "need 1 <= j <= ambient dimension");
  Mat gram = vectors.transpose() * vectors;
  double g = gram.determinant();
  double scale = vectors.squaredNorm() / j;
  require(g > 1e-18 * std::pow(std::max(scale, 1e-300), j), Errc::DependentVectors,
          "Gram determinant vanishes");
  WedgeNorms out;
  out.two_norm = std::sqrt(g);
  double one = 0.0;
  for_each_combination(amb, j, [&](const std::vector<int>& idx) {
    Mat minor(j, j);
    for (int r = 0; r < j; ++r) minor.row(r) = vectors.row(idx[static_cast<std::size_t>(r)]);
    one += std::abs(minor.determinant());
  });
  out.one_norm = one;
  return out;
}

inline WedgeNorms wedge_norms(const std::vector<LogVector>& vectors) {
  return wedge_norms(make_log_lattice(vectors).basis);
}

// ---------- totally real checks ----------

struct CheckRecord {
  std::string check;
  double value = 0.0;
  double bound = 0.0;
  bool pass = false;
  double margin = 0.0;
};

inline CheckRecord make_check(std::string name, double value, double bound,
                              bool allow_equal = false) {
  CheckRecord r;
  r.check = std::move(name);
  r.value = value;
  r.bound = bound;
  double slack = allow_equal ? 1e-12 * std::max(1.0, std::abs(bound)) : 0.0;
  r.pass = value > bound - slack;
  r.margin = value - bound;
  return r;
}

struct PohstReport {
  std::vector<CheckRecord> records;
  bool all_pass = true;
};

// Totally real fields: per-unit norm bound sqrt(n) log((1+sqrt5)/2), the
// covolume bound (n/j)^(j/2) 1.406^j / ((j+2) sqrt j), and the 1-norm bound
// 0.001 * 1.4^j for the sublattice spanned by the supplied units.
inline PohstReport pohst_check(const NumberField& field, const std::vector<FieldElement>& units) {
  require(field.r2 == 0, Errc::NotTotallyReal, "pohst_check needs a totally real field");
  const double log_phi = std::log((1.0 + std::sqrt(5.0)) / 2.0);
  const int n = field.degree;
  PohstReport rep;
  for (std::size_t i = 0; i < units.size(); ++i) {
    UnitClass cls = classify_unit(units[i]);
    require(cls == UnitClass::Unit, Errc::DomainError,
            "pohst_check inputs must be units of infinite order");
    double norm2 = log_embed(units[i]).values.norm();
    rep.records.push_back(make_check("unit_norm2_ge_sqrtn_logphi[" + std::to_string(i) + "]",
                                     norm2, std::sqrt(static_cast<double>(n)) * log_phi,
                                     /*allow_equal=*/true));
  }
  LogLattice lat = unit_log_lattice(units);
  const int j = lat.rank;
  WedgeNorms wn = wedge_norms(lat.basis);
  double rhs2 = std::pow(static_cast<double>(n) / j, j / 2.0) * std::pow(1.406, j) /
                ((j + 2) * std::sqrt(static_cast<double>(j)));
  rep.records.push_back(make_check("covolume_gt_totreal2", wn.two_norm, rhs2));
  rep.records.push_back(make_check("one_norm_gt_totreal", wn.one_norm, 0.001 * std::pow(1.4, j)));
  for (const auto& r : rep.records) rep.all_pass = rep.all_pass && r.pass;
  return rep;
}

// ---------- exact pure-wedge extraction ----------

struct PureWedge {
  Int d;
  IMat basis;  // n vectors of length n in ambient coordinates; basis of the lattice
};

// Minor-basis coordinates of v_1 ^ ... ^ v_(n-1) for n-1 vectors of length n
// (given as rows of `vectors`). Coordinates follow the lexicographic order of
// increasing (n-1)-subsets, so position p is the minor omitting row index
// n-1-p of the identity.
inline std::vector<Int> integer_wedge_coords(const IMat& vectors) {
  require(!vectors.empty(), Errc::DomainError, "need at least one vector");
  const int n = static_cast<int>(vectors[0].size());
  require(static_cast<int>(vectors.size()) == n - 1, Errc::LengthMismatch,
          "expected n-1 vectors of length n");
  std::vector<Int> out(static_cast<std::size_t>(n));
  for (int omit = 0; omit < n; ++omit) {
    IMat sub;
    for (int c = 0; c < n; ++c) {
      if (c == omit) continue;
      std::vector<Int> row;
      for (int v = 0; v + 1 < n; ++v) row.push_back(vectors[static_cast<std::size_t>(v)][static_cast<std::size_t>(c)]);
      sub.push_back(std::move(row));
    }
    out[static_cast<std::size_t>(n - 1 - omit)] = imat_det(sub);
  }
  return out;
}

// Writes a codimension-one wedge as d * eps_1 ^ ... ^ eps_(n-1) for a basis
// eps_1..eps_n of the lattice spanned by `basis` (rows are basis vectors).
// `omega` holds the minor-basis coordinates with respect to that basis, in
// the lexicographic subset order of integer_wedge_coords.
inline PureWedge pure_wedge_extract(const IMat& basis, const std::vector<Int>& omega) {
  const int n = static_cast<int>(basis.size());
  require(n >= 1 && static_cast<int>(omega.size()) == n, Errc::LengthMismatch,
          "omega must have n coordinates");
  bool zero = true;
  for (const auto& c : omega) zero = zero && (c == 0);
  require(!zero, Errc::ZeroWedge, "omega is zero");

  // omega ^ m = (w . m) b_1^...^b_n with w_o = (-1)^(n-1-o) * (coefficient of
  // the subset omitting o), which sits at lexicographic position n-1-o.
  std::vector<Int> w(static_cast<std::size_t>(n));
  for (int o = 0; o < n; ++o) {
    Int s = (((n - 1 - o) % 2) == 0) ? 1 : -1;
    w[static_cast<std::size_t>(o)] = s * omega[static_cast<std::size_t>(n - 1 - o)];
  }
  IMat u = gcd_column_transform(w);
  // Kernel of w: columns 2..n of u. Completing vector: column 1.
  IMat eps_coords;  // n vectors in basis coordinates
  for (int j = 1; j < n; ++j) {
    std::vector<Int> v(static_cast<std::size_t>(n));
    for (int r = 0; r < n; ++r) v[static_cast<std::size_t>(r)] = u[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)];
    eps_coords.push_back(std::move(v));
  }
  {
    std::vector<Int> v(static_cast<std::size_t>(n));
    for (int r = 0; r < n; ++r) v[static_cast<std::size_t>(r)] = u[static_cast<std::size_t>(r)][0];
    eps_coords.push_back(std::move(v));
  }

  // d from any nonzero minor coordinate; all coordinates must match exactly.
  Int d = 0;
  if (n == 1) {
    d = omega[0];
  } else {
    IMat rows(eps_coords.begin(), eps_coords.end() - 1);
    std::vector<Int> wc = integer_wedge_coords(rows);
    for (int i = 0; i < n && d == 0; ++i)
      if (wc[static_cast<std::size_t>(i)] != 0) {
        require(omega[static_cast<std::size_t>(i)] % wc[static_cast<std::size_t>(i)] == 0,
                Errc::DomainError, "inconsistent wedge ratio");
        d = omega[static_cast<std::size_t>(i)] / wc[static_cast<std::size_t>(i)];
      }
    for (int i = 0; i < n; ++i)
      require(d * wc[static_cast<std::size_t>(i)] == omega[static_cast<std::size_t>(i)],
              Errc::DomainError, "wedge coordinates do not reproduce omega");
    if (d < 0) {  // fold the sign into eps_1
      d = -d;
      for (auto& c : eps_coords[0]) c = -c;
    }
  }

  // Map back to ambient coordinates.
  PureWedge out;
  out.d = d;
  for (const auto& coords : eps_coords) {
    std::vector<Int> amb(basis[0].size(), Int(0));
    for (int r = 0; r < n; ++r)
      for (std::size_t c = 0; c < amb.size(); ++c)
        amb[c] += coords[static_cast<std::size_t>(r)] * basis[static_cast<std::size_t>(r)][c];
    out.basis.push_back(std::move(amb));
  }
  return out;
}

// ---------- brute-force minimal wedge 1-norm ----------

// Minimum 1-norm of a wedge of k independent lattice vectors with integer
// coordinates in [-B, B] with respect to the given basis; an upper bound for
// the true minimum over the whole lattice.
inline double mu_1k_search(const LogLattice& lat, int k, int coeff_bound) {
  require(k >= 1 && k <= lat.rank, Errc::DomainError, "need 1 <= k <= rank");
  require(coeff_bound >= 1, Errc::DomainError, "coefficient bound must be >= 1");
  std::vector<Vec> candidates;
  std::vector<int> c(static_cast<std::size_t>(lat.rank), -coeff_bound);
  while (true) {
    int first_nonzero = -1;
    for (int i = 0; i < lat.rank; ++i)
      if (c[static_cast<std::size_t>(i)] != 0) {
        first_nonzero = i;
        break;
      }
    if (first_nonzero >= 0 && c[static_cast<std::size_t>(first_nonzero)] > 0) {
      Vec v = Vec::Zero(lat.ambient_dim);
      for (int i = 0; i < lat.rank; ++i) v += c[static_cast<std::size_t>(i)] * lat.basis.col(i);
      candidates.push_back(std::move(v));
    }
    int i = lat.rank - 1;
    while (i >= 0 && c[static_cast<std::size_t>(i)] == coeff_bound) {
      c[static_cast<std::size_t>(i)] = -coeff_bound;
      --i;
    }
    if (i < 0) break;
    ++c[static_cast<std::size_t>(i)];
  }
  double best = std::numeric_limits<double>::infinity();
  const int nv = static_cast<int>(candidates.size());
  for_each_combination(nv, k, [&](const std::vector<int>& idx) {
    Mat m(lat.ambient_dim, k);
    for (int j = 0; j < k; ++j) m.col(j) = candidates[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])];
    try {
      best = std::min(best, wedge_norms(m).one_norm);
    } catch (const Error&) {
      // dependent tuple, skip
    }
  });
  return best;
}

}  // namespace covol
