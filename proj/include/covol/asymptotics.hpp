#pragma once

// Saddle-point asymptotics of the contour integral
//   (1/i^k) int_{I_sigma} exp(alpha(s) - n y.s) ds = I_1 + I_2 - I_3 + I_4:
// the Gaussian main term I_1, certified bounds for I_2..I_4 and the
// derivative-weighted term, the supporting one-dimensional Gamma-line
// estimates and Taylor-remainder inequalities, direct contour quadrature for
// k <= 2, the psi function with its three-way Mellin cross-check, and the
// certified covolume lower-bound pipeline.
//
// Values scale like exp(alpha(sigma) - n y.sigma), which overflows doubles
// for the synthetic sizes the formulas target, so main terms are carried in
// log form and every bound is returned as a multiple of I_1.

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include "covol/common.hpp"
#include "covol/quadrature.hpp"
#include "covol/saddle.hpp"
#include "covol/subgeom.hpp"
#include "covol/unitlat.hpp"

namespace covol {

// ---------- place data ----------

// The section-5 formulas depend only on (m_w, kappa_w, Qcal); synthetic data
// makes them testable at m = 1000 without degree-1000 fields.
struct PlaceDataSet {
  Mat Qcal;     // |A_K| x k, first column all ones, rank k
  Vec m_w;      // m_w >= 1
  Vec kappa_w;  // in [1/2, 1]
  double m_scale = 0.0;  // the "m" of the preconditions; min_w m_w by default

  int k() const { return static_cast<int>(Qcal.cols()); }
  int num_fibers() const { return static_cast<int>(Qcal.rows()); }
  double n() const { return m_w.sum(); }
  double r2() const { return (m_w.array() * (1.0 - kappa_w.array())).sum(); }
  double r1() const { return n() - 2.0 * r2(); }

  GammaWeights weights() const { return GammaWeights{Qcal, m_w, kappa_w}; }
};

inline PlaceDataSet make_place_data(Mat qcal, Vec m, Vec kappa, double m_scale = 0.0) {
  const int nw = static_cast<int>(qcal.rows());
  require(m.size() == nw && kappa.size() == nw, Errc::LengthMismatch,
          "m and kappa must have one entry per fiber");
  for (int w = 0; w < nw; ++w) {
    require((std::abs(qcal(w, 0) - 1.0) < 1e-12), Errc::DomainError,
            "first column of Qcal must be all ones");
    require(m(w) >= 1.0, Errc::DomainError, "fiber weights must be >= 1");
    require(kappa(w) >= 0.5 && kappa(w) <= 1.0, Errc::DomainError, "kappa must lie in [1/2,1]");
  }
  Eigen::JacobiSVD<Mat> svd(qcal);
  require(svd.singularValues().minCoeff() > 1e-9 * svd.singularValues().maxCoeff(),
          Errc::RankDeficient, "Qcal must have full column rank");
  PlaceDataSet pd;
  pd.Qcal = std::move(qcal);
  pd.m_w = std::move(m);
  pd.kappa_w = std::move(kappa);
  pd.m_scale = (m_scale > 0.0) ? m_scale : pd.m_w.minCoeff();
  return pd;
}

// Single synthetic fiber: |A_K| = 1, k = 1.
inline PlaceDataSet single_fiber(double m, double kappa) {
  Mat q(1, 1);
  q << 1.0;
  Vec mv(1), kv(1);
  mv << m;
  kv << kappa;
  return make_place_data(q, mv, kv);
}

inline PlaceDataSet place_data_from_geometry(const SubgroupGeometry& geo) {
  require(geo.fibers.has_value(), Errc::MissingFiberData, "geometry has no FiberData");
  GammaWeights w = weights_per_fiber(geo);
  return make_place_data(w.rows, w.m, w.kappa);
}

// ---------- det H two ways ----------

struct DetH {
  double direct = 0.0;        // det(Qcal^T diag(m alpha'') Qcal)
  double cauchy_binet = 0.0;  // sum over k-subsets of det^2 * prod
};

inline DetH det_h(const PlaceDataSet& pd, const Vec& sigma) {
  const GammaWeights w = pd.weights();
  Vec sv = pd.Qcal * sigma;
  require((sv.array() > 0.0).all(), Errc::OutsideDomain, "sigma outside the domain");
  Vec diag(pd.num_fibers());
  for (int r = 0; r < pd.num_fibers(); ++r)
    diag(r) = pd.m_w(r) * alpha_kappa(sv(r), pd.kappa_w(r), 2);
  DetH out;
  out.direct = (pd.Qcal.transpose() * diag.asDiagonal() * pd.Qcal).determinant();
  double sum = 0.0;
  for_each_combination(pd.num_fibers(), pd.k(), [&](const std::vector<int>& idx) {
    Mat sub(pd.k(), pd.k());
    double prod = 1.0;
    for (int r = 0; r < pd.k(); ++r) {
      sub.row(r) = pd.Qcal.row(idx[static_cast<std::size_t>(r)]);
      prod *= diag(idx[static_cast<std::size_t>(r)]);
    }
    double d = sub.determinant();
    sum += d * d * prod;
  });
  out.cauchy_binet = sum;
  return out;
}

// ---------- main term ----------

struct MainTerm {
  SaddleResult saddle;   // solved at n*y
  double det_h = 0.0;
  double log_i1 = 0.0;   // log of I_1
  double i1() const { return std::exp(log_i1); }
};

inline MainTerm main_term_i1(const PlaceDataSet& pd, const Vec& y) {
  const GammaWeights w = pd.weights();
  require(y.size() == pd.k(), Errc::LengthMismatch, "y must have k coordinates");
  MainTerm out;
  out.saddle = solve_saddle({w, pd.n() * y});
  out.det_h = det_h(pd, out.saddle.sigma).direct;
  require(out.det_h > 0.0, Errc::DegenerateForm, "det H must be positive");
  out.log_i1 = 0.5 * pd.k() * std::log(2.0 * M_PI) + out.saddle.objective -
               0.5 * std::log(out.det_h);
  return out;
}

// ---------- Gaussian moments ----------

enum class GaussianMoment { Zeroth, FourthAt, SixthAt };

struct MomentResult {
  double value = 0.0;   // exact closed form
  double bound = 0.0;   // the inequality form (equals value for Zeroth)
};

inline MomentResult gaussian_moments(const Vec& b, const Mat& qcal, GaussianMoment which,
                                     int w0 = 0) {
  const int k = static_cast<int>(qcal.cols());
  const int nw = static_cast<int>(qcal.rows());
  require(b.size() == nw, Errc::LengthMismatch, "one b_w per row");
  require((b.array() > 0.0).all(), Errc::DomainError, "b must be positive");
  double dsum = 0.0, dsum_w0 = 0.0;
  for_each_combination(nw, k, [&](const std::vector<int>& idx) {
    Mat sub(k, k);
    double prod = 1.0;
    bool has_w0 = false;
    for (int r = 0; r < k; ++r) {
      int row = idx[static_cast<std::size_t>(r)];
      sub.row(r) = qcal.row(row);
      prod *= b(row);
      has_w0 = has_w0 || (row == w0);
    }
    double d = sub.determinant();
    double term = d * d * prod;
    dsum += term;
    if (has_w0) dsum_w0 += term;
  });
  require(dsum > 0.0, Errc::DegenerateForm, "quadratic form is degenerate");
  const double tau = std::pow(2.0 * M_PI, 0.5 * k);
  MomentResult out;
  switch (which) {
    case GaussianMoment::Zeroth:
      out.value = tau / std::sqrt(dsum);
      out.bound = out.value;
      break;
    case GaussianMoment::FourthAt:
      out.value = 3.0 * tau * std::pow(dsum, -2.5) * std::pow(b(w0), -2.0) * dsum_w0 * dsum_w0;
      out.bound = 3.0 * tau / std::sqrt(dsum) * std::pow(b(w0), -2.0);
      break;
    case GaussianMoment::SixthAt:
      out.value = 15.0 * tau * std::pow(dsum, -3.5) * std::pow(b(w0), -3.0) * dsum_w0 * dsum_w0 *
                  dsum_w0;
      out.bound = 15.0 * tau / std::sqrt(dsum) * std::pow(b(w0), -3.0);
      break;
  }
  return out;
}

// ---------- certified tail bounds ----------

namespace detail {

inline void check_section5_preconditions(const PlaceDataSet& pd, double d_param) {
  require(pd.m_scale >= 1000.0, Errc::PreconditionViolated, "needs m >= 1000");
  require((pd.m_w.array() >= pd.m_scale - 1e-9).all(), Errc::PreconditionViolated,
          "every fiber weight must be >= m");
  require(d_param > 0.0 && d_param < std::cbrt(pd.m_scale) / std::sqrt(2.0),
          Errc::PreconditionViolated, "needs 0 < D < m^(1/3)/sqrt(2)");
  for (int w = 0; w < pd.num_fibers(); ++w)
    require(d_param <= std::cbrt(pd.m_w(w)) * pd.kappa_w(w) + 1e-12, Errc::PreconditionViolated,
            "needs D <= m_w^(1/3) kappa_w");
}

}  // namespace detail

struct TailBounds {
  double i2_over_i1 = 0.0;
  double i3_over_i1 = 0.0;
  std::vector<int> eta0;      // maximizing subset of fibers
  std::vector<double> delta_w;  // box half-widths for w in eta0
};

// eta0 maximizes det^2(Qcal_eta) prod m_w alpha''(S_w(sigma)); the bounds are
// exact transcriptions of the I2/I3 estimates, as multiples of I_1.
inline TailBounds tail_bounds_i2_i3(const PlaceDataSet& pd, const Vec& y, double d_param) {
  detail::check_section5_preconditions(pd, d_param);
  const GammaWeights w = pd.weights();
  SaddleResult sr = solve_saddle({w, pd.n() * y});
  Vec sv = pd.Qcal * sr.sigma;
  Vec diag(pd.num_fibers());
  for (int r = 0; r < pd.num_fibers(); ++r)
    diag(r) = pd.m_w(r) * alpha_kappa(sv(r), pd.kappa_w(r), 2);

  TailBounds out;
  double best = -1.0;
  for_each_combination(pd.num_fibers(), pd.k(), [&](const std::vector<int>& idx) {
    Mat sub(pd.k(), pd.k());
    double prod = 1.0;
    for (int r = 0; r < pd.k(); ++r) {
      sub.row(r) = pd.Qcal.row(idx[static_cast<std::size_t>(r)]);
      prod *= diag(idx[static_cast<std::size_t>(r)]);
    }
    double d = sub.determinant();
    double val = d * d * prod;
    if (val > best) {
      best = val;
      out.eta0 = idx;
    }
  });
  require(best > 0.0, Errc::DegenerateForm, "no nondegenerate fiber subset");
  for (int w_idx : out.eta0) {
    double a2 = alpha_kappa(sv(w_idx), pd.kappa_w(w_idx), 2);
    out.delta_w.push_back(d_param / (std::cbrt(pd.m_w(w_idx)) * std::sqrt(a2)));
  }

  const double k = pd.k();
  const double root_subsets = std::sqrt(static_cast<double>(binomial(pd.num_fibers(), pd.k())));
  const double m = pd.m_scale;
  out.i2_over_i1 = std::pow(1.0021, k - 1.0) * (1e-76 + 41.43 / std::pow(d_param, 6.0)) * k *
                   root_subsets / m;
  out.i3_over_i1 = 3.67 * k * root_subsets / (m * std::pow(d_param, 6.0));
  return out;
}

struct InnerBound {
  double i4_over_i1 = 0.0;
  double z = 0.0;
};

inline InnerBound inner_bound_i4(const PlaceDataSet& pd, double d_param) {
  require(d_param > 0.0, Errc::PreconditionViolated, "needs D > 0");
  require(pd.m_scale >= 1.0, Errc::PreconditionViolated, "needs m >= 1");
  const double ak = pd.num_fibers();
  const double k = pd.k();
  const double x = ak * std::pow(k, 4.0) * std::pow(d_param, 4.0) / std::cbrt(pd.m_scale);
  InnerBound out;
  out.z = (x < 1e-8) ? 1.0 + 0.5 * x : (std::expm1(x) / x);
  out.i4_over_i1 = ak * ((5.0 / 3.0) * ak + 1.5 * out.z) / pd.m_scale;
  return out;
}

inline double deriv_term_bound(const PlaceDataSet& pd, double sigma1) {
  require(pd.m_scale >= 1000.0, Errc::PreconditionViolated, "needs m >= 1000");
  const double k = pd.k();
  const double root_subsets = std::sqrt(static_cast<double>(binomial(pd.num_fibers(), pd.k())));
  return 1.66 * std::pow(1.0021, k - 1.0) * k * root_subsets * sigma1 / std::sqrt(pd.m_scale);
}

// Main term plus every certified error bound, all as multiples of I_1.
struct AsymptoticBreakdown {
  SaddleResult saddle;
  double log_i1 = 0.0;
  double det_h = 0.0;
  double d_param = 0.0;
  double i2_over_i1 = 0.0, i3_over_i1 = 0.0, i4_over_i1 = 0.0;
  double deriv_over_i1 = 0.0;  // includes the sigma_1 factor
  double z = 0.0;
  std::vector<int> eta0;
  std::vector<double> delta_w;

  double error_budget() const { return i2_over_i1 + i3_over_i1 + i4_over_i1; }
};

inline AsymptoticBreakdown asymptotic_breakdown(const PlaceDataSet& pd, const Vec& y,
                                                double d_param) {
  MainTerm mt = main_term_i1(pd, y);
  TailBounds tb = tail_bounds_i2_i3(pd, y, d_param);
  InnerBound ib = inner_bound_i4(pd, d_param);
  AsymptoticBreakdown out;
  out.saddle = mt.saddle;
  out.log_i1 = mt.log_i1;
  out.det_h = mt.det_h;
  out.d_param = d_param;
  out.i2_over_i1 = tb.i2_over_i1;
  out.i3_over_i1 = tb.i3_over_i1;
  out.i4_over_i1 = ib.i4_over_i1;
  out.z = ib.z;
  out.deriv_over_i1 = deriv_term_bound(pd, mt.saddle.sigma(0));
  out.eta0 = tb.eta0;
  out.delta_w = tb.delta_w;
  return out;
}

// ---------- one-dimensional Gamma-line estimates ----------

enum class GammaLineCheck {
  Line,          // int |e^(m alpha_kappa(r+it))| dt
  LineWeighted,  // int |t e^(m alpha_kappa(r+it))| dt
  TailLine,      // same as Line but over |t| > delta
  TailGauss,     // Gaussian tail over |t| > delta
};

struct GammaLineResult {
  double lhs = 0.0;   // in units of sqrt(2pi) e^(m alpha(r)) / sqrt(m alpha''(r))
  double rhs = 0.0;   // bound in the same units
  double delta = 0.0; // only for the tail variants
  bool pass = false;
};

inline GammaLineResult onedim_gamma_line(double m, double kappa, double r, double d_param,
                                         GammaLineCheck which) {
  require(m >= 1000.0, Errc::PreconditionViolated, "needs m >= 1000");
  require(kappa >= 0.5 && kappa <= 1.0, Errc::DomainError, "kappa in [1/2,1]");
  require(r > 0.0, Errc::DomainError, "r > 0");
  const double a0 = alpha_kappa(r, kappa, 0);
  const double a2 = alpha_kappa(r, kappa, 2);
  const double unit = std::sqrt(2.0 * M_PI) / std::sqrt(m * a2);
  const double scale = 1.0 / std::sqrt(m * a2);  // Gaussian core width

  auto g = [&](double t) {
    return std::exp(m * (alpha_kappa(cplx(r, t), kappa, 0).real() - a0));
  };

  GammaLineResult out;
  quad::Options opt;
  opt.abs_tol = 1e-13 * unit;
  opt.rel_tol = 1e-9;
  switch (which) {
    case GammaLineCheck::Line:
      out.lhs = quad::integrate_line<double>(g, scale, opt) / unit;
      out.rhs = 1.0021;
      break;
    case GammaLineCheck::LineWeighted: {
      auto gt = [&](double t) { return std::abs(t) * g(t); };
      out.lhs = quad::integrate_line<double>(gt, scale, opt) / (unit / std::sqrt(m * a2));
      out.rhs = 0.83;
      break;
    }
    case GammaLineCheck::TailLine: {
      require(d_param > 0.0 && d_param <= std::cbrt(m) * kappa, Errc::PreconditionViolated,
              "needs 0 < D <= m^(1/3) kappa");
      out.delta = d_param / (std::cbrt(m) * std::sqrt(a2));
      double tail = quad::integrate_tail<double>(g, out.delta, std::max(out.delta, scale), opt);
      out.lhs = 2.0 * tail / unit;
      out.rhs = (1e-76 + 41.43 / std::pow(d_param, 6.0)) / m;
      break;
    }
    case GammaLineCheck::TailGauss: {
      require(d_param > 0.0 && d_param <= std::cbrt(m) * kappa, Errc::PreconditionViolated,
              "needs 0 < D <= m^(1/3) kappa");
      out.delta = d_param / (std::cbrt(m) * std::sqrt(a2));
      // int_{|t|>delta} e^(-m a2 t^2 / 2) dt = sqrt(2pi/(m a2)) erfc(delta sqrt(m a2 / 2))
      out.lhs = std::erfc(out.delta * std::sqrt(0.5 * m * a2));
      out.rhs = 3.67 / (m * std::pow(d_param, 6.0));
      break;
    }
  }
  out.pass = out.lhs <= out.rhs;
  return out;
}

// ---------- Taylor remainder of the quadratic expansion ----------

struct RhoChecks {
  std::vector<cplx> rho_w;
  cplx rho_total;          // sum m_w rho_w
  double worst_violation = 0.0;  // most negative margin over all claims
};

inline cplx rho_single(double s_sigma, double s_t, double kappa) {
  cplx z(s_sigma, s_t);
  return alpha_kappa(z, kappa, 0) - alpha_kappa(s_sigma, kappa, 0) -
         cplx(0.0, 1.0) * alpha_kappa(s_sigma, kappa, 1) * s_t +
         0.5 * alpha_kappa(s_sigma, kappa, 2) * s_t * s_t;
}

// Evaluates rho_w(T) and the cubic/quartic/parity/positivity claims.
inline RhoChecks rho_remainder(const PlaceDataSet& pd, const Vec& sigma, const Vec& t_vec) {
  Vec sv = pd.Qcal * sigma;
  require((sv.array() > 0.0).all(), Errc::OutsideDomain, "sigma outside the domain");
  Vec st = pd.Qcal * t_vec;
  RhoChecks out;
  out.rho_total = 0.0;
  double worst = 0.0;
  for (int w = 0; w < pd.num_fibers(); ++w) {
    double kp = pd.kappa_w(w);
    cplx rho = rho_single(sv(w), st(w), kp);
    out.rho_w.push_back(rho);
    out.rho_total += pd.m_w(w) * rho;

    const double a2 = alpha_kappa(sv(w), kp, 2);
    const double a3 = alpha_kappa(sv(w), kp, 3);
    const double a4 = alpha_kappa(sv(w), kp, 4);
    const double at = std::abs(st(w));
    double slack = 1e-12 * (1.0 + std::abs(rho));
    // |Im rho| <= (-a3/6)|S_w(T)|^3 <= (sqrt2/3) a2^(3/2) |S_w(T)|^3
    worst = std::min(worst, (-a3 / 6.0) * at * at * at - std::abs(rho.imag()) + slack);
    worst = std::min(worst, (std::sqrt(2.0) / 3.0) * std::pow(a2, 1.5) * at * at * at -
                                (-a3 / 6.0) * at * at * at + slack);
    // |Re rho| <= (a4/24) S_w(T)^4 <= (1/2) a2^2 S_w(T)^4
    worst = std::min(worst, (a4 / 24.0) * std::pow(at, 4.0) - std::abs(rho.real()) + slack);
    worst = std::min(worst, 0.5 * a2 * a2 * std::pow(at, 4.0) -
                                (a4 / 24.0) * std::pow(at, 4.0) + slack);
    // parity
    cplx rho_neg = rho_single(sv(w), -st(w), kp);
    worst = std::min(worst, slack - std::abs(rho_neg.imag() + rho.imag()));
    worst = std::min(worst, slack - std::abs(rho_neg.real() - rho.real()));
    // 0 <= Re rho <= (a2/4) S_w(T)^2 when |S_w(T)| <= S_w(sigma)
    if (at <= sv(w)) {
      worst = std::min(worst, rho.real() + slack);
      worst = std::min(worst, 0.25 * a2 * st(w) * st(w) - rho.real() + slack);
    }
  }
  out.worst_violation = worst;
  return out;
}

// ---------- dominant-minor inequality ----------

// Selects eta0 maximizing |det M_eta| prod a_i and certifies
// a_i |P_i(T)| <= sum_{j in eta0} a_j |P_j(T)| on the given samples.
struct MaxMinorResult {
  std::vector<int> eta0;
  double min_margin = 0.0;
  bool pass = true;
};

inline MaxMinorResult max_minor_property(const Mat& m, const Vec& a,
                                         const std::vector<Vec>& t_samples) {
  const int rows = static_cast<int>(m.rows());
  const int k = static_cast<int>(m.cols());
  require(a.size() == rows, Errc::LengthMismatch, "one weight per row");
  Eigen::JacobiSVD<Mat> svd(m);
  require(svd.singularValues().minCoeff() > 1e-12 * svd.singularValues().maxCoeff(),
          Errc::RankDeficient, "matrix must have rank k");
  MaxMinorResult out;
  double best = -1.0;
  for_each_combination(rows, k, [&](const std::vector<int>& idx) {
    Mat sub(k, k);
    double prod = 1.0;
    for (int r = 0; r < k; ++r) {
      sub.row(r) = m.row(idx[static_cast<std::size_t>(r)]);
      prod *= a(idx[static_cast<std::size_t>(r)]);
    }
    double val = std::abs(sub.determinant()) * prod;
    if (val > best) {
      best = val;
      out.eta0 = idx;
    }
  });
  out.min_margin = 1e300;
  for (const Vec& t : t_samples) {
    Vec p = m * t;
    double rhs = 0.0;
    for (int j : out.eta0) rhs += a(j) * std::abs(p(j));
    for (int i = 0; i < rows; ++i) {
      double margin = rhs - a(i) * std::abs(p(i));
      out.min_margin = std::min(out.min_margin, margin);
      if (margin < -1e-9 * std::max(1.0, rhs)) out.pass = false;
    }
  }
  return out;
}

// ---------- direct contour quadrature ----------

struct ContourResult {
  double ratio_to_i1 = 0.0;  // (1/i^k) int ... ds / I_1
  double log_i1 = 0.0;
  double imag_rel = 0.0;     // |Im| / |Re| of the computed integral
  double tail_estimate = 0.0;
};

struct ContourOptions {
  double rel_tol = 1e-9;
  double t_max = 0.0;  // > 0 fixes the truncation window; 0 extends adaptively
};

// (1/i^k) int exp(alpha(s) - n y.s) ds over I_sigma, sigma = sigma(n y),
// in units of I_1. Supported for k <= 2.
inline ContourResult direct_contour(const PlaceDataSet& pd, const Vec& y,
                                    const ContourOptions& copt = {}) {
  require(pd.k() <= 2, Errc::RankTooLarge, "direct contour quadrature supports k <= 2");
  const GammaWeights w = pd.weights();
  MainTerm mt = main_term_i1(pd, y);
  const Vec& sigma = mt.saddle.sigma;
  const Vec target = pd.n() * y;
  const double alpha0 = mt.saddle.alpha_value;

  auto integrand = [&](const Vec& t) -> cplx {
    CVec s(pd.k());
    for (int i = 0; i < pd.k(); ++i) s(i) = cplx(sigma(i), t(i));
    cplx expo = alpha_eval_complex(w, s) - alpha0;
    for (int i = 0; i < pd.k(); ++i) expo -= cplx(0.0, 1.0) * target(i) * t(i);
    return std::exp(expo);
  };

  quad::Options opt;
  opt.rel_tol = copt.rel_tol;
  opt.abs_tol = 1e-13;
  cplx total;
  double tail_est = 0.0;
  if (pd.k() == 1) {
    double scale = 1.0 / std::sqrt(mt.det_h);
    auto f = [&](double t) {
      Vec tv(1);
      tv << t;
      return integrand(tv);
    };
    if (copt.t_max > 0.0) {
      total = quad::integrate<cplx>(f, -copt.t_max, copt.t_max, opt);
      tail_est = std::abs(f(copt.t_max)) * copt.t_max;
    } else {
      total = quad::integrate_line<cplx>(f, scale, opt);
      double far = 16.0 * scale;
      tail_est = std::abs(f(far)) * far;
    }
  } else {
    // Tensor quadrature; the saddle Hessian of alpha at sigma is exactly
    // H(sigma), so its diagonal sets the per-axis Gaussian widths.
    const Mat& h = mt.saddle.hessian;
    double s1 = 1.0 / std::sqrt(std::max(h(0, 0), 1e-300));
    double s2 = 1.0 / std::sqrt(std::max(h(1, 1), 1e-300));
    quad::Options inner = opt;
    inner.rel_tol = copt.rel_tol * 0.1;
    auto row = [&](double t1) {
      auto f = [&](double t2) {
        Vec tv(2);
        tv << t1, t2;
        return integrand(tv);
      };
      return quad::integrate_line<cplx>(f, s2, inner);
    };
    total = quad::integrate_line<cplx>(row, s1, opt);
    Vec far(2);
    far << 16.0 * s1, 16.0 * s2;
    tail_est = std::abs(integrand(far)) * far.norm();
  }

  ContourResult out;
  out.log_i1 = mt.log_i1;
  double norm_i1 = std::pow(2.0 * M_PI, 0.5 * pd.k()) / std::sqrt(mt.det_h);
  out.ratio_to_i1 = total.real() / norm_i1;
  out.imag_rel = std::abs(total.imag()) / std::max(std::abs(total.real()), 1e-300);
  out.tail_estimate = tail_est / norm_i1;
  return out;
}

// Sanity helper for the det H scale in the k = 2 branch above: the saddle
// Hessian of alpha at sigma equals Qcal^T diag(m alpha'') Qcal exactly.

// ---------- psi and its Mellin routes ----------

struct PsiTriple {
  double direct = 0.0;          // integral over E_R
  double mellin_roundtrip = 0.0;  // Mellin inversion of the closed transform
  double inverse_mellin = 0.0;  // the log-Gamma contour form with prefactor
  double mt_closed = 0.0;       // closed transform at the probe point
  double mt_quadrature = 0.0;   // k-fold Mellin quadrature of `direct`
  double max_rel_spread = 0.0;  // spread of the three psi values
};

namespace detail {

inline double psi_direct_impl(const SubgroupGeometry& geo, const Vec& h) {
  const int amb = static_cast<int>(geo.Q.rows());
  const int r = geo.rank_e;
  Vec sh = splitting_image(geo, h);
  Vec coef(amb);
  for (int v = 0; v < amb; ++v) coef(v) = geo.e(v) * sh(v) * sh(v);
  if (r == 0) {
    return std::exp(-coef.sum());
  }
  Mat logs(amb, r);
  for (int i = 0; i < r; ++i)
    logs.col(i) = log_embed(geo.units[static_cast<std::size_t>(i)], LogFlavor::WeightedLog).values;
  Eigen::HouseholderQR<Mat> qr(logs);
  Mat u = qr.householderQ() * Mat::Identity(amb, r);  // orthonormal basis of LOG(E_R)

  quad::Options opt;
  opt.rel_tol = 1e-10;
  opt.abs_tol = 1e-14;
  auto point = [&](const Vec& tau) {
    Vec p = u * tau;
    double acc = 0.0;
    for (int v = 0; v < amb; ++v) acc += coef(v) * std::exp(2.0 * p(v) / geo.e(v));
    return std::exp(-acc);
  };
  if (r == 1) {
    auto f = [&](double t) {
      Vec tau(1);
      tau << t;
      return point(tau);
    };
    return quad::integrate_line<double>(f, 1.0, opt);
  }
  require(r == 2, Errc::RankTooLarge, "direct psi supports unit rank <= 2");
  quad::Options inner = opt;
  auto row = [&](double t1) {
    auto f = [&](double t2) {
      Vec tau(2);
      tau << t1, t2;
      return point(tau);
    };
    return quad::integrate_line<double>(f, 1.0, inner);
  };
  return quad::integrate_line<double>(row, 1.0, opt);
}

}  // namespace detail

// Closed Mellin transform: sqrt(det Q^T Q)/2^r1 * prod Gamma(e_v S_v(s)/2) / e_v^(e_v S_v(s)/2).
inline double mellin_transform_closed(const SubgroupGeometry& geo, const Vec& s) {
  Vec sv = s_map(geo, s);
  require((sv.array() > 0.0).all(), Errc::OutsideDomain, "Re S(s) must be positive");
  double log_acc = 0.5 * std::log(det_qtq(geo)) - geo.field->r1 * std::log(2.0);
  for (int v = 0; v < sv.size(); ++v) {
    double ev = geo.e(v);
    log_acc += log_gamma(ev * sv(v) / 2.0) - (ev * sv(v) / 2.0) * std::log(ev);
  }
  return std::exp(log_acc);
}

// Three-way evaluation of psi at h (componentwise positive), with the closed
// transform checked against direct Mellin quadrature at probe point s.
inline PsiTriple psi_triple(const SubgroupGeometry& geo, const Vec& h, const Vec& s_probe) {
  require(geo.k <= 2, Errc::RankTooLarge, "psi_triple supports k <= 2");
  require(geo.rank_e <= 2, Errc::RankTooLarge, "psi_triple supports unit rank <= 2");
  require((h.array() > 0.0).all(), Errc::DomainError, "h must be positive");
  const NumberField& f = *geo.field;
  PsiTriple out;
  out.direct = detail::psi_direct_impl(geo, h);

  // Route (iii): psi(h) = L' / i^k int exp(alpha(s) - y.s) ds, y_j = 2 log h_j.
  Vec y(geo.k);
  for (int j = 0; j < geo.k; ++j) y(j) = 2.0 * std::log(h(j));
  const GammaWeights w = weights_per_place(geo);
  SaddleResult sr = solve_saddle({w, y});
  const double prefactor = std::sqrt(det_qtq(geo)) /
                           (std::pow(2.0, f.r1) * std::pow(2.0 * std::sqrt(M_PI), f.r2) *
                            std::pow(M_PI, geo.k));
  {
    quad::Options opt;
    opt.rel_tol = 1e-10;
    opt.abs_tol = 1e-14;
    Mat hess = sr.hessian;
    auto integrand1 = [&](double t) -> cplx {
      CVec s(1);
      s(0) = cplx(sr.sigma(0), t);
      return std::exp(alpha_eval_complex(w, s) - cplx(0.0, 1.0) * y(0) * t - sr.alpha_value);
    };
    if (geo.k == 1) {
      cplx val = quad::integrate_line<cplx>(integrand1, 1.0 / std::sqrt(hess(0, 0)), opt);
      out.inverse_mellin = prefactor * val.real() * std::exp(sr.alpha_value - y.dot(sr.sigma));
    } else {
      double s1 = 1.0 / std::sqrt(hess(0, 0)), s2 = 1.0 / std::sqrt(hess(1, 1));
      quad::Options inner = opt;
      auto row = [&](double t1) {
        auto g = [&](double t2) -> cplx {
          CVec s(2);
          s(0) = cplx(sr.sigma(0), t1);
          s(1) = cplx(sr.sigma(1), t2);
          return std::exp(alpha_eval_complex(w, s) - cplx(0.0, 1.0) * (y(0) * t1 + y(1) * t2) -
                          sr.alpha_value);
        };
        return quad::integrate_line<cplx>(g, s2, inner);
      };
      cplx val = quad::integrate_line<cplx>(row, s1, opt);
      out.inverse_mellin = prefactor * val.real() * std::exp(sr.alpha_value - y.dot(sr.sigma));
    }
  }

  // Route (ii): Mellin inversion of the closed transform along Re(s) = sigma/2.
  {
    quad::Options opt;
    opt.rel_tol = 1e-9;
    opt.abs_tol = 1e-14;
    Vec shalf = 0.5 * sr.sigma;
    auto mt_at = [&](const CVec& s) -> cplx {
      CVec sv = geo.Q.cast<cplx>() * s;
      cplx log_acc = 0.5 * std::log(det_qtq(geo)) - f.r1 * std::log(2.0);
      for (int v = 0; v < sv.size(); ++v) {
        double ev = geo.e(v);
        log_acc += log_gamma(ev * sv(v) / 2.0) - (ev * sv(v) / 2.0) * std::log(ev);
      }
      return std::exp(log_acc);
    };
    if (geo.k == 1) {
      auto g = [&](double t) -> cplx {
        CVec s(1);
        s(0) = cplx(shalf(0), t);
        return mt_at(s) * std::exp(-s(0) * std::log(h(0)));
      };
      cplx val = quad::integrate_line<cplx>(g, 2.0 / std::sqrt(sr.hessian(0, 0)), opt);
      out.mellin_roundtrip = val.real() / (2.0 * M_PI);
    } else {
      double s1 = 2.0 / std::sqrt(sr.hessian(0, 0)), s2 = 2.0 / std::sqrt(sr.hessian(1, 1));
      quad::Options inner = opt;
      auto row = [&](double t1) {
        auto g = [&](double t2) -> cplx {
          CVec s(2);
          s(0) = cplx(shalf(0), t1);
          s(1) = cplx(shalf(1), t2);
          return mt_at(s) * std::exp(-s(0) * std::log(h(0)) - s(1) * std::log(h(1)));
        };
        return quad::integrate_line<cplx>(g, s2, inner);
      };
      cplx val = quad::integrate_line<cplx>(row, s1, opt);
      out.mellin_roundtrip = val.real() / std::pow(2.0 * M_PI, 2.0);
    }
  }

  // Closed transform vs k-fold Mellin quadrature of the direct psi.
  out.mt_closed = mellin_transform_closed(geo, s_probe);
  {
    quad::Options opt;
    opt.rel_tol = 1e-8;
    opt.abs_tol = 1e-12;
    if (geo.k == 1) {
      auto g = [&](double u) {
        Vec hh(1);
        hh << std::exp(u);
        return detail::psi_direct_impl(geo, hh) * std::exp(s_probe(0) * u);
      };
      out.mt_quadrature = quad::integrate_line<double>(g, 2.0, opt);
    } else {
      quad::Options inner = opt;
      auto row = [&](double u1) {
        auto g = [&](double u2) {
          Vec hh(2);
          hh << std::exp(u1), std::exp(u2);
          return detail::psi_direct_impl(geo, hh) * std::exp(s_probe(0) * u1 + s_probe(1) * u2);
        };
        return quad::integrate_line<double>(g, 2.0, inner);
      };
      out.mt_quadrature = quad::integrate_line<double>(row, 2.0, opt);
    }
  }

  double lo = std::min({out.direct, out.mellin_roundtrip, out.inverse_mellin});
  double hi = std::max({out.direct, out.mellin_roundtrip, out.inverse_mellin});
  out.max_rel_spread = (hi - lo) / std::max(std::abs(hi), 1e-300);
  return out;
}

// ---------- the certified lower-bound pipeline ----------

// f(x) = log Gamma(0.51+x) - 0.51 psi(0.51+x) + x log(4/pi) - log 2; the
// certified rate is exp(n f(r2/(2n))).
inline double rate_exponent(double x) {
  return log_gamma(0.51 + x) - 0.51 * digamma(0.51 + x) + x * std::log(4.0 / M_PI) -
         std::log(2.0);
}

struct CertifiedBound {
  double t = 0.0;
  double y1 = 0.0;
  double sigma1 = 0.0;
  double log_i1 = 0.0;
  double l_const = 0.0;      // the prefactor L
  double log_bound = 0.0;    // log(0.01 * I_1 * L)
  double bound = 0.0;        // exp(log_bound), may underflow for huge n
  double rate = 0.0;         // exp(n f(r2/(2n)))
  double m = 0.0;            // min_w m_w
  double k_degree = 0.0;     // n / m (the [K:Q] surrogate)
  bool precondition_met = false;  // m >= N0 * 2.01^[K:Q]
  std::optional<double> covolume;  // 2-norm of the unit wedge when available
  bool sigma1_ok = false, y1_ok = false, consistent = true;
};

inline CertifiedBound certified_lower_bound(const SubgroupGeometry& geo, double n0) {
  require(geo.fibers.has_value(), Errc::MissingFiberData,
          "certified bound needs fiber data (a subfield partition)");
  const NumberField& f = *geo.field;
  PlaceDataSet pd = place_data_from_geometry(geo);
  const double n = pd.n();
  const double r2 = f.r2;

  CertifiedBound out;
  out.t = std::exp(digamma(0.51 + r2 / (2.0 * n)));
  Vec y = Vec::Zero(geo.k);
  y(0) = std::log(out.t);
  out.y1 = y(0);
  out.y1_ok = (out.y1 > -2.0) && (out.y1 >= digamma(0.51) - 1e-12) &&
              (out.y1 <= digamma(0.76) + 1e-12) && (out.y1 < -1.0);

  MainTerm mt = main_term_i1(pd, y);
  out.sigma1 = mt.saddle.sigma(0);
  out.sigma1_ok = out.sigma1 >= 0.51 - 1e-9;
  out.log_i1 = mt.log_i1;

  double prod_fold = 1.0;
  for (int w = 0; w < pd.num_fibers(); ++w)
    prod_fold *= geo.fibers->r1w[static_cast<std::size_t>(w)] +
                 geo.fibers->r2w[static_cast<std::size_t>(w)];
  double det_qcal = (pd.Qcal.transpose() * pd.Qcal).determinant();
  out.l_const = std::sqrt(det_qcal * prod_fold) /
                (std::pow(2.0, f.r1) * std::pow(2.0 * std::sqrt(M_PI), f.r2) *
                 std::pow(M_PI, geo.k));
  out.log_bound = std::log(0.01) + out.log_i1 + std::log(out.l_const);
  out.bound = std::exp(out.log_bound);
  out.rate = std::exp(n * rate_exponent(r2 / (2.0 * n)));
  out.m = pd.m_w.minCoeff();
  out.k_degree = n / out.m;
  out.precondition_met = out.m >= n0 * std::pow(2.01, out.k_degree);

  if (geo.rank_e >= 1) {
    auto wn = wedge_norms(unit_log_lattice(geo.units).basis);
    out.covolume = wn.two_norm;
    out.consistent = out.bound <= wn.two_norm;
  }
  return out;
}

}  // namespace covol
