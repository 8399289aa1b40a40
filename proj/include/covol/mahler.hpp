#pragma once

// Mahler measures of integer Laurent polynomials (Jensen's formula for one
// variable, randomized lattice QMC and fiber-wise Jensen reduction for more),
// Newton polytopes with exact face enumeration and face polynomials, the
// one-variable specializations along a direction, and the Bloch-Wigner
// dilogarithm with its functional equations.

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "covol/common.hpp"
#include "covol/exactlin.hpp"
#include "covol/numfield.hpp"
#include "covol/quadrature.hpp"

namespace covol {

struct LaurentPolynomial {
  int nvars = 0;
  std::map<std::vector<long long>, Int> terms;  // exponent vector -> coefficient

  bool empty() const { return terms.empty(); }
};

inline LaurentPolynomial make_laurent(
    int nvars, const std::vector<std::pair<std::vector<long long>, Int>>& entries) {
  LaurentPolynomial p;
  p.nvars = nvars;
  for (const auto& [e, c] : entries) {
    require(static_cast<int>(e.size()) == nvars, Errc::LengthMismatch,
            "exponent arity mismatch");
    if (c == 0) continue;
    p.terms[e] += c;
    if (p.terms[e] == 0) p.terms.erase(e);
  }
  return p;
}

inline LaurentPolynomial laurent_mul(const LaurentPolynomial& a, const LaurentPolynomial& b) {
  require(a.nvars == b.nvars, Errc::LengthMismatch, "arity mismatch");
  LaurentPolynomial out;
  out.nvars = a.nvars;
  for (const auto& [ea, ca] : a.terms)
    for (const auto& [eb, cb] : b.terms) {
      std::vector<long long> e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out.terms[e] += ca * cb;
      if (out.terms[e] == 0) out.terms.erase(e);
    }
  return out;
}

inline cplx laurent_eval_torus(const LaurentPolynomial& p, const std::vector<double>& theta) {
  cplx acc = 0.0;
  for (const auto& [e, c] : p.terms) {
    double phase = 0.0;
    for (int i = 0; i < p.nvars; ++i) phase += static_cast<double>(e[static_cast<std::size_t>(i)]) * theta[static_cast<std::size_t>(i)];
    phase -= std::floor(phase);
    acc += to_double(c) * std::polar(1.0, 2.0 * M_PI * phase);
  }
  return acc;
}

inline LaurentPolynomial load_polynomial(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), Errc::ParseError, "cannot open polynomial file " + path);
  nlohmann::json doc = nlohmann::json::parse(in);
  int nvars = doc.at("vars").get<int>();
  std::vector<std::pair<std::vector<long long>, Int>> entries;
  for (const auto& t : doc.at("terms")) {
    std::vector<long long> e = t.at(0).get<std::vector<long long>>();
    Int c = t.at(1).is_number_integer() ? Int(t.at(1).get<long long>())
                                        : Int(t.at(1).get<std::string>());
    entries.emplace_back(std::move(e), std::move(c));
  }
  return make_laurent(nvars, entries);
}

// ---------- one variable ----------

// Dense coefficients after shifting out the monomial factor and dividing the
// exponent gcd (both leave the measure unchanged).
inline std::vector<Int> univariate_dense(const LaurentPolynomial& p) {
  require(p.nvars == 1, Errc::DomainError, "univariate polynomial expected");
  require(!p.empty(), Errc::DomainError, "zero polynomial");
  long long lo = p.terms.begin()->first[0];
  long long g = 0;
  for (const auto& [e, c] : p.terms) g = std::gcd(g, e[0] - lo);
  if (g == 0) g = 1;
  std::vector<Int> coeffs(static_cast<std::size_t>((p.terms.rbegin()->first[0] - lo) / g + 1),
                          Int(0));
  for (const auto& [e, c] : p.terms) coeffs[static_cast<std::size_t>((e[0] - lo) / g)] = c;
  return coeffs;
}

inline double mahler_univariate(const LaurentPolynomial& p) {
  std::vector<Int> coeffs = univariate_dense(p);
  double m = std::log(std::abs(to_double(coeffs.back())));
  if (poly_deg(coeffs) == 0) return std::log(std::abs(to_double(coeffs[0])));
  auto roots = poly_roots(coeffs);
  double cscale = 0.0;
  for (const auto& c : coeffs) cscale = std::max(cscale, std::abs(to_double(c)));
  for (const auto& z : roots) {
    double res = std::abs(poly_eval(coeffs, z));
    double zpow = std::pow(std::max(1.0, std::abs(z)), poly_deg(coeffs));
    if (!(res < 1e-9 * cscale * zpow))
      fail(Errc::RootFindingFailed, "root residual too large in mahler_univariate");
    double az = std::abs(z);
    if (az > 1.0 + 1e-10) m += std::log(az);
  }
  return m;
}

// ---------- several variables: QMC ----------

struct QmcResult {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t points = 0;
  int clamped = 0;  // evaluations with |P| below the clamp threshold
};

struct QmcOptions {
  int log2_points = 20;
  int shifts = 8;
  std::uint64_t seed = 0x5eed5eedULL;
};

// Rank-1 lattice rule with a Korobov generating vector and random shifts; the
// shift spread gives the error estimate. log|P| has integrable singularities
// on the zero set, so isolated tiny values are clamped and counted.
inline QmcResult mahler_qmc(const LaurentPolynomial& p, const QmcOptions& opt = {}) {
  require(!p.empty(), Errc::DomainError, "zero polynomial");
  const std::uint64_t n_points = 1ULL << opt.log2_points;
  const std::uint64_t a = 104729;  // Korobov multiplier
  std::vector<std::uint64_t> gen(static_cast<std::size_t>(p.nvars));
  gen[0] = 1;
  for (int j = 1; j < p.nvars; ++j) gen[static_cast<std::size_t>(j)] = (gen[static_cast<std::size_t>(j - 1)] * a) % n_points;

  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> shift_means;
  int clamped = 0;
  for (int s = 0; s < opt.shifts; ++s) {
    std::vector<double> delta(static_cast<std::size_t>(p.nvars));
    for (auto& d : delta) d = unif(rng);
    double acc = 0.0;
    std::vector<double> theta(static_cast<std::size_t>(p.nvars));
    for (std::uint64_t i = 0; i < n_points; ++i) {
      for (int j = 0; j < p.nvars; ++j) {
        double x = static_cast<double>((i * gen[static_cast<std::size_t>(j)]) % n_points) /
                       static_cast<double>(n_points) +
                   delta[static_cast<std::size_t>(j)];
        theta[static_cast<std::size_t>(j)] = x - std::floor(x);
      }
      double av = std::abs(laurent_eval_torus(p, theta));
      if (av < 1e-290) {
        av = 1e-290;
        ++clamped;
      }
      acc += std::log(av);
    }
    shift_means.push_back(acc / static_cast<double>(n_points));
  }
  QmcResult out;
  out.points = n_points;
  out.clamped = clamped;
  double mean = 0.0;
  for (double v : shift_means) mean += v;
  mean /= opt.shifts;
  double var = 0.0;
  for (double v : shift_means) var += (v - mean) * (v - mean);
  var /= std::max(1, opt.shifts - 1);
  out.value = mean;
  out.std_error = std::sqrt(var / opt.shifts);
  if (clamped > static_cast<int>(n_points / 1000))
    fail(Errc::VanishingOnTorusSuspected, "too many near-zero evaluations");
  return out;
}

// ---------- several variables: fiber-wise Jensen (n = 2) ----------

struct FiberJensenResult {
  double value = 0.0;
  double error_estimate = 0.0;
};

namespace detail {

inline std::vector<cplx> complex_roots(const std::vector<cplx>& coeffs) {
  int deg = static_cast<int>(coeffs.size()) - 1;
  while (deg > 0 && std::abs(coeffs[static_cast<std::size_t>(deg)]) == 0.0) --deg;
  if (deg <= 0) return {};
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i)
    comp(i, deg - 1) = -coeffs[static_cast<std::size_t>(i)] / coeffs[static_cast<std::size_t>(deg)];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
  std::vector<cplx> roots;
  for (int i = 0; i < deg; ++i) {
    cplx z = es.eigenvalues()(i);
    for (int it = 0; it < 2; ++it) {  // Newton polish
      cplx f = coeffs[static_cast<std::size_t>(deg)], df = 0.0;
      for (int j = deg - 1; j >= 0; --j) {
        df = df * z + f;
        f = f * z + coeffs[static_cast<std::size_t>(j)];
      }
      if (std::abs(df) == 0.0) break;
      z -= f / df;
    }
    roots.push_back(z);
  }
  return roots;
}

}  // namespace detail

// m(P) = int_0^1 [ log|lc(theta)| + sum log+ |alpha_nu(theta)| ] dtheta, with
// P read as a polynomial in the last variable.
inline FiberJensenResult mahler_fiber_jensen(const LaurentPolynomial& p) {
  require(p.nvars == 2, Errc::DomainError, "fiber-Jensen reduction implemented for 2 variables");
  require(!p.empty(), Errc::DomainError, "zero polynomial");
  long long ylo = p.terms.begin()->first[1], yhi = ylo;
  for (const auto& [e, c] : p.terms) {
    ylo = std::min(ylo, e[1]);
    yhi = std::max(yhi, e[1]);
  }
  const int ydeg = static_cast<int>(yhi - ylo);

  auto integrand = [&](double theta) {
    std::vector<cplx> coeffs(static_cast<std::size_t>(ydeg + 1), cplx(0.0));
    for (const auto& [e, c] : p.terms) {
      double ph = static_cast<double>(e[0]) * theta;
      ph -= std::floor(ph);
      coeffs[static_cast<std::size_t>(e[1] - ylo)] += to_double(c) * std::polar(1.0, 2.0 * M_PI * ph);
    }
    int deg = ydeg;
    while (deg > 0 && std::abs(coeffs[static_cast<std::size_t>(deg)]) < 1e-14) --deg;
    double v = std::log(std::max(std::abs(coeffs[static_cast<std::size_t>(deg)]), 1e-290));
    if (deg > 0) {
      coeffs.resize(static_cast<std::size_t>(deg + 1));
      for (const cplx& z : detail::complex_roots(coeffs)) {
        double az = std::abs(z);
        if (az > 1.0) v += std::log(az);
      }
    }
    return v;
  };

  quad::Options opt;
  opt.rel_tol = 1e-9;
  opt.abs_tol = 1e-11;
  FiberJensenResult out;
  out.value = quad::integrate_real(integrand, 0.0, 1.0, opt);
  out.error_estimate = 1e-7 * (1.0 + std::abs(out.value));
  return out;
}

enum class MahlerMethod { ExactUnivariate, QMC, FiberJensen };

struct MahlerResult {
  double value = 0.0;
  double error = 0.0;
  MahlerMethod method = MahlerMethod::QMC;
};

inline MahlerResult mahler_measure(const LaurentPolynomial& p, const QmcOptions& opt = {}) {
  MahlerResult out;
  if (p.nvars == 1) {
    out.value = mahler_univariate(p);
    out.error = 1e-10 * (1.0 + std::abs(out.value));
    out.method = MahlerMethod::ExactUnivariate;
  } else if (p.nvars == 2) {
    auto fj = mahler_fiber_jensen(p);
    out.value = fj.value;
    out.error = fj.error_estimate;
    out.method = MahlerMethod::FiberJensen;
  } else {
    auto qm = mahler_qmc(p, opt);
    out.value = qm.value;
    out.error = 3.0 * qm.std_error;
    out.method = MahlerMethod::QMC;
  }
  return out;
}

// ---------- Newton polytope faces ----------

struct NewtonFace {
  int dim = 0;                     // dimension of the face
  std::vector<int> point_indices;  // indices into the exponent list
  LaurentPolynomial poly;          // the face polynomial in `dim` variables
};

namespace detail {

using Pt = std::vector<Int>;

inline Pt sub(const Pt& a, const Pt& b) {
  Pt out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

// Exact coordinates of v in the saturated basis `basis` (d columns given as
// rows of length n): solves over Q and requires integrality.
inline std::vector<Int> lattice_coords(const IMat& basis, const Pt& v) {
  const int d = static_cast<int>(basis.size());
  const int n = static_cast<int>(v.size());
  // Solve (B^T B) m = B^T v over the rationals via elimination.
  std::vector<std::vector<Rat>> m(static_cast<std::size_t>(d),
                                  std::vector<Rat>(static_cast<std::size_t>(d + 1), Rat(0)));
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      Int acc = 0;
      for (int t = 0; t < n; ++t) acc += basis[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)] *
                                         basis[static_cast<std::size_t>(j)][static_cast<std::size_t>(t)];
      m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = Rat(acc);
    }
    Int rhs = 0;
    for (int t = 0; t < n; ++t) rhs += basis[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)] * v[static_cast<std::size_t>(t)];
    m[static_cast<std::size_t>(i)][static_cast<std::size_t>(d)] = Rat(rhs);
  }
  for (int col = 0; col < d; ++col) {
    int p = -1;
    for (int r = col; r < d; ++r)
      if (m[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] != 0) {
        p = r;
        break;
      }
    require(p >= 0, Errc::RankDeficient, "degenerate lattice basis");
    std::swap(m[static_cast<std::size_t>(p)], m[static_cast<std::size_t>(col)]);
    Rat inv = m[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)];
    for (auto& x : m[static_cast<std::size_t>(col)]) x /= inv;
    for (int r = 0; r < d; ++r) {
      if (r == col) continue;
      Rat f = m[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)];
      if (f == 0) continue;
      for (int cc = 0; cc <= d; ++cc)
        m[static_cast<std::size_t>(r)][static_cast<std::size_t>(cc)] -= f * m[static_cast<std::size_t>(col)][static_cast<std::size_t>(cc)];
    }
  }
  std::vector<Int> out;
  for (int i = 0; i < d; ++i) {
    const Rat& x = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(d)];
    require(boost::multiprecision::denominator(x) == 1, Errc::DomainError,
            "face lattice coordinates must be integral");
    out.push_back(boost::multiprecision::numerator(x));
  }
  return out;
}

inline Int cross2(const Pt& o, const Pt& a, const Pt& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

// Edges of the 2-d convex hull as point-index subsets (hull boundary plus any
// collinear points lying on each edge).
inline std::vector<std::vector<int>> hull2_edges(const std::vector<Pt>& pts) {
  std::vector<int> idx(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) idx[i] = static_cast<int>(i);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return pts[static_cast<std::size_t>(a)] < pts[static_cast<std::size_t>(b)]; });
  auto build = [&](bool upper) {
    std::vector<int> chain;
    for (int i : idx) {
      while (chain.size() >= 2) {
        Int c = cross2(pts[static_cast<std::size_t>(chain[chain.size() - 2])],
                       pts[static_cast<std::size_t>(chain.back())], pts[static_cast<std::size_t>(i)]);
        bool pop = upper ? (c >= 0) : (c <= 0);
        if (!pop) break;
        chain.pop_back();
      }
      chain.push_back(i);
    }
    return chain;
  };
  std::vector<int> lower = build(false), upper = build(true);
  std::vector<int> loop = lower;
  for (std::size_t i = upper.size() - 1; i >= 1; --i) {
    loop.push_back(upper[i - 1]);
    if (i == 1) break;
  }
  loop.pop_back();  // last == first
  std::vector<std::vector<int>> edges;
  const int h = static_cast<int>(loop.size());
  if (h == 1) return edges;
  if (h == 2) {
    // degenerate (should not happen for a true 2-d hull) - single edge
    edges.push_back({loop[0], loop[1]});
    return edges;
  }
  for (int i = 0; i < h; ++i) {
    const Pt& a = pts[static_cast<std::size_t>(loop[static_cast<std::size_t>(i)])];
    const Pt& b = pts[static_cast<std::size_t>(loop[static_cast<std::size_t>((i + 1) % h)])];
    std::vector<int> on_edge;
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (cross2(a, b, pts[j]) != 0) continue;
      // within the segment's bounding box
      bool inside = true;
      for (int c = 0; c < 2; ++c) {
        Int lo = std::min(a[static_cast<std::size_t>(c)], b[static_cast<std::size_t>(c)]);
        Int hi = std::max(a[static_cast<std::size_t>(c)], b[static_cast<std::size_t>(c)]);
        inside = inside && pts[j][static_cast<std::size_t>(c)] >= lo && pts[j][static_cast<std::size_t>(c)] <= hi;
      }
      if (inside) on_edge.push_back(static_cast<int>(j));
    }
    edges.push_back(std::move(on_edge));
  }
  return edges;
}

// Facet point-subsets of a full-dimensional 3-d point set, by enumerating
// candidate integer normals from point triples.
inline std::vector<std::vector<int>> hull3_facets(const std::vector<Pt>& pts) {
  const int n = static_cast<int>(pts.size());
  std::set<std::vector<Int>> seen_normals;
  std::set<std::vector<int>> subsets;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        Pt u = sub(pts[static_cast<std::size_t>(j)], pts[static_cast<std::size_t>(i)]);
        Pt v = sub(pts[static_cast<std::size_t>(k)], pts[static_cast<std::size_t>(i)]);
        std::vector<Int> nor = {u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2],
                                u[0] * v[1] - u[1] * v[0]};
        if (nor[0] == 0 && nor[1] == 0 && nor[2] == 0) continue;
        Int g = boost::multiprecision::gcd(boost::multiprecision::gcd(boost::multiprecision::abs(nor[0]), boost::multiprecision::abs(nor[1])), boost::multiprecision::abs(nor[2]));
        for (auto& x : nor) x /= g;
        for (int sgn = 0; sgn < 2; ++sgn) {
          std::vector<Int> nn = nor;
          if (sgn) for (auto& x : nn) x = -x;
          if (!seen_normals.insert(nn).second) continue;
          Int c = nn[0] * pts[static_cast<std::size_t>(i)][0] + nn[1] * pts[static_cast<std::size_t>(i)][1] +
                  nn[2] * pts[static_cast<std::size_t>(i)][2];
          bool supporting = true;
          std::vector<int> on_face;
          for (int t = 0; t < n && supporting; ++t) {
            Int val = nn[0] * pts[static_cast<std::size_t>(t)][0] + nn[1] * pts[static_cast<std::size_t>(t)][1] +
                      nn[2] * pts[static_cast<std::size_t>(t)][2];
            if (val > c) supporting = false;
            else if (val == c) on_face.push_back(t);
          }
          if (supporting) subsets.insert(on_face);
        }
      }
  return {subsets.begin(), subsets.end()};
}

}  // namespace detail

// Enumerates all faces of the Newton polytope (vertices, edges, facets, and
// lower-dimensional polytopes handled by projection), with exact-lattice face
// polynomials.
inline std::vector<NewtonFace> face_polynomials(const LaurentPolynomial& p) {
  require(!p.empty(), Errc::DomainError, "zero polynomial");
  require(p.nvars <= 3, Errc::DomainError, "face enumeration implemented for <= 3 variables");

  std::vector<detail::Pt> pts;
  std::vector<Int> coeffs;
  for (const auto& [e, c] : p.terms) {
    detail::Pt q;
    for (long long x : e) q.push_back(Int(x));
    pts.push_back(std::move(q));
    coeffs.push_back(c);
  }
  const int npts = static_cast<int>(pts.size());

  // Face polynomial of a point subset: exponents mapped through the saturated
  // lattice of the subset's affine hull.
  auto build_face = [&](const std::vector<int>& subset) {
    NewtonFace face;
    face.point_indices = subset;
    int base_idx = subset[0];
    for (int i : subset)
      if (pts[static_cast<std::size_t>(i)] < pts[static_cast<std::size_t>(base_idx)]) base_idx = i;
    IMat gens;
    for (int i : subset) {
      if (i == base_idx) continue;
      gens.push_back(detail::sub(pts[static_cast<std::size_t>(i)], pts[static_cast<std::size_t>(base_idx)]));
    }
    IMat basis = gens.empty() ? IMat{} : saturated_basis(gens, p.nvars);
    face.dim = static_cast<int>(basis.size());
    std::vector<std::pair<std::vector<long long>, Int>> entries;
    for (int i : subset) {
      std::vector<long long> m;
      if (face.dim > 0) {
        auto coords = detail::lattice_coords(
            basis, detail::sub(pts[static_cast<std::size_t>(i)], pts[static_cast<std::size_t>(base_idx)]));
        for (const auto& c : coords) m.push_back(c.convert_to<long long>());
      }
      entries.emplace_back(std::move(m), coeffs[static_cast<std::size_t>(i)]);
    }
    face.poly = make_laurent(std::max(face.dim, 0), entries);
    return face;
  };

  std::set<std::vector<int>> seen;
  std::vector<NewtonFace> out;
  // Recursive face collection: facets of the current subset, then recurse.
  auto add_all = [&](auto&& self, const std::vector<int>& subset) -> void {
    std::vector<int> key = subset;
    std::sort(key.begin(), key.end());
    if (!seen.insert(key).second) return;
    NewtonFace face = build_face(key);
    const int d = face.dim;
    out.push_back(face);
    if (d == 0) return;

    // Project the subset to d coordinates and find its facets there.
    int base_idx = key[0];
    for (int i : key)
      if (pts[static_cast<std::size_t>(i)] < pts[static_cast<std::size_t>(base_idx)]) base_idx = i;
    IMat gens;
    for (int i : key)
      if (i != base_idx)
        gens.push_back(detail::sub(pts[static_cast<std::size_t>(i)], pts[static_cast<std::size_t>(base_idx)]));
    IMat basis = saturated_basis(gens, p.nvars);
    std::vector<detail::Pt> proj;
    for (int i : key)
      proj.push_back(detail::lattice_coords(
          basis, detail::sub(pts[static_cast<std::size_t>(i)], pts[static_cast<std::size_t>(base_idx)])));

    std::vector<std::vector<int>> facet_local;
    if (d == 1) {
      int lo = 0, hi = 0;
      for (int i = 1; i < static_cast<int>(proj.size()); ++i) {
        if (proj[static_cast<std::size_t>(i)][0] < proj[static_cast<std::size_t>(lo)][0]) lo = i;
        if (proj[static_cast<std::size_t>(i)][0] > proj[static_cast<std::size_t>(hi)][0]) hi = i;
      }
      facet_local.push_back({lo});
      facet_local.push_back({hi});
    } else if (d == 2) {
      facet_local = detail::hull2_edges(proj);
    } else {
      facet_local = detail::hull3_facets(proj);
    }
    for (const auto& loc : facet_local) {
      std::vector<int> glob;
      for (int l : loc) glob.push_back(key[static_cast<std::size_t>(l)]);
      self(self, glob);
    }
  };
  std::vector<int> all(static_cast<std::size_t>(npts));
  for (int i = 0; i < npts; ++i) all[static_cast<std::size_t>(i)] = i;
  add_all(add_all, all);
  return out;
}

struct FaceInequality {
  NewtonFace face;
  double face_measure = 0.0;
  double face_error = 0.0;
  bool pass = false;  // m(P_tau) <= m(P) within error bands
};

inline std::vector<FaceInequality> face_inequality_report(const LaurentPolynomial& p,
                                                          double m_p, double m_p_error,
                                                          const QmcOptions& opt = {}) {
  std::vector<FaceInequality> out;
  for (auto& face : face_polynomials(p)) {
    FaceInequality rec;
    rec.face = face;
    if (face.dim == 0) {
      rec.face_measure = std::log(std::abs(to_double(face.poly.terms.begin()->second)));
      rec.face_error = 0.0;
    } else {
      auto mr = mahler_measure(face.poly, opt);
      rec.face_measure = mr.value;
      rec.face_error = mr.error;
    }
    rec.pass = rec.face_measure <= m_p + m_p_error + rec.face_error + 1e-9;
    out.push_back(std::move(rec));
  }
  return out;
}

// ---------- one-variable limits along a direction ----------

// Specialization x_i -> t^(a_i * k^i); the geometric spacing keeps the
// exponent vector non-degenerate so the one-variable measures converge to
// m(P) as k grows.
inline LaurentPolynomial boyd_specialize(const LaurentPolynomial& p,
                                         const std::vector<long long>& a, long long k) {
  require(static_cast<int>(a.size()) == p.nvars, Errc::LengthMismatch, "direction arity");
  bool nonzero = false;
  for (long long x : a) nonzero = nonzero || (x != 0);
  require(nonzero, Errc::DomainError, "direction must be nonzero");
  LaurentPolynomial out;
  out.nvars = 1;
  for (const auto& [e, c] : p.terms) {
    long long expo = 0, kp = 1;
    for (int i = 0; i < p.nvars; ++i) {
      kp *= k;
      expo += a[static_cast<std::size_t>(i)] * kp * e[static_cast<std::size_t>(i)];
    }
    std::vector<long long> key = {expo};
    out.terms[key] += c;
    if (out.terms[key] == 0) out.terms.erase(key);
  }
  require(!out.empty(), Errc::DegenerateSubstitution, "specialization collapsed to zero");
  return out;
}

struct BoydStep {
  long long k = 0;
  double measure = 0.0;
};

inline std::vector<BoydStep> boyd_limit(const LaurentPolynomial& p,
                                        const std::vector<long long>& a,
                                        const std::vector<long long>& ks) {
  std::vector<BoydStep> out;
  for (long long k : ks) out.push_back({k, mahler_univariate(boyd_specialize(p, a, k))});
  return out;
}

// ---------- Bloch-Wigner dilogarithm ----------

namespace detail {

// Li2 via the Bernoulli series in u = -log(1-z), fast once |z| <= 1 and
// Re z <= 1/2 (then |u| < 0.9 << 2 pi).
inline cplx li2_core(cplx z) {
  cplx u = -std::log(1.0 - z);
  cplx term = u, sum = u - u * u / 4.0;  // B_0 and B_1 terms
  cplx u2 = u * u;
  double fact = 1.0;
  for (std::size_t k = 0; k < covol::detail::kBernoulli.size(); ++k) {
    const double n2k = 2.0 * (k + 1);
    term *= u2;
    fact *= n2k * (n2k + 1.0);
    sum += covol::detail::kBernoulli[k] * term / fact;
  }
  return sum;
}

}  // namespace detail

// D(z) = Im Li2(z) + arg(1-z) log|z|, real-analytic off {0,1}, zero on the
// real line.
inline double bloch_wigner(cplx z) {
  if (z.imag() == 0.0) return 0.0;
  double sign = 1.0;
  if (z.imag() < 0.0) {
    z = std::conj(z);
    sign = -sign;
  }
  if (std::abs(z) < 1e-150 || std::abs(z - 1.0) < 1e-150) return 0.0;
  for (int it = 0; it < 8; ++it) {
    if (std::abs(z) > 1.0) {
      z = 1.0 / z;
      sign = -sign;
    } else if (z.real() > 0.5) {
      z = 1.0 - z;
      sign = -sign;
    } else {
      break;
    }
    if (z.imag() < 0.0) {
      z = std::conj(z);
      sign = -sign;
    }
  }
  cplx li2 = detail::li2_core(z);
  double d = li2.imag() + std::arg(1.0 - z) * std::log(std::abs(z));
  return sign * d;
}

enum class BlochRelation { Antisymmetry, FiveTerm, Identity32 };

// Residual of the named identity; zero up to roundoff when the
// implementation is correct.
inline double bloch_relation_residual(BlochRelation kind, cplx x = 0.0, cplx y = 0.0) {
  switch (kind) {
    case BlochRelation::Antisymmetry:
      return bloch_wigner(std::conj(x)) + bloch_wigner(x);
    case BlochRelation::FiveTerm: {
      cplx one(1.0, 0.0);
      require(std::abs(one - x * y) > 1e-12, Errc::DomainError, "xy = 1 is excluded");
      return bloch_wigner(x) + bloch_wigner(y) + bloch_wigner((one - x) / (one - x * y)) +
             bloch_wigner(one - x * y) + bloch_wigner((one - y) / (one - x * y));
    }
    case BlochRelation::Identity32: {
      cplx alpha(-0.75, std::sqrt(7.0) / 4.0);
      return 7.0 * bloch_wigner(alpha) + bloch_wigner(alpha * alpha) -
             3.0 * bloch_wigner(alpha * alpha * alpha) + bloch_wigner(-alpha * alpha * alpha * alpha);
    }
  }
  return 0.0;
}

// ---------- reciprocality and the Kronecker property ----------

struct PolyFlags {
  bool reciprocal = false;           // P(1/x,...) = x^a ... P(x,...)
  bool numerically_cyclotomic = false;  // monic with all roots on the circle
};

inline PolyFlags reciprocal_and_kronecker(const LaurentPolynomial& p) {
  require(!p.empty(), Errc::DomainError, "zero polynomial");
  PolyFlags out;

  auto normalize = [](const LaurentPolynomial& q) {
    std::vector<long long> lo(static_cast<std::size_t>(q.nvars), 0);
    bool first = true;
    for (const auto& [e, c] : q.terms) {
      for (int i = 0; i < q.nvars; ++i)
        lo[static_cast<std::size_t>(i)] = first ? e[static_cast<std::size_t>(i)]
                                                : std::min(lo[static_cast<std::size_t>(i)], e[static_cast<std::size_t>(i)]);
      first = false;
    }
    std::map<std::vector<long long>, Int> shifted;
    for (const auto& [e, c] : q.terms) {
      std::vector<long long> ee(e.size());
      for (int i = 0; i < q.nvars; ++i) ee[static_cast<std::size_t>(i)] = e[static_cast<std::size_t>(i)] - lo[static_cast<std::size_t>(i)];
      shifted[ee] = c;
    }
    return shifted;
  };
  LaurentPolynomial flipped;
  flipped.nvars = p.nvars;
  for (const auto& [e, c] : p.terms) {
    std::vector<long long> ee(e.size());
    for (int i = 0; i < p.nvars; ++i) ee[static_cast<std::size_t>(i)] = -e[static_cast<std::size_t>(i)];
    flipped.terms[ee] = c;
  }
  out.reciprocal = normalize(p) == normalize(flipped);

  if (p.nvars == 1) {
    std::vector<Int> coeffs = univariate_dense(p);
    bool monic = boost::multiprecision::abs(coeffs.back()) == 1;
    if (monic && poly_deg(coeffs) >= 1) {
      auto roots = poly_roots(coeffs);
      bool all_circle = true;
      const long long bound = 2LL * poly_deg(coeffs) * poly_deg(coeffs);
      for (const cplx& z : roots) {
        if (std::abs(std::abs(z) - 1.0) > 1e-8) {
          all_circle = false;
          break;
        }
        bool torsion = false;
        cplx w = z;
        for (long long mm = 1; mm <= bound && !torsion; ++mm) {
          if (std::abs(w - 1.0) < 1e-6) torsion = true;
          w *= z;
        }
        if (!torsion) {
          all_circle = false;
          break;
        }
      }
      out.numerically_cyclotomic = all_circle;
    } else if (monic) {
      out.numerically_cyclotomic = true;  // a unit monomial
    }
  }
  return out;
}

}  // namespace covol
