#pragma once

// The convex objective F_y(sigma) = alpha(sigma) - y.sigma over the domain
// D = { S(sigma) > 0 componentwise }, its unique critical point, and the
// inequalities controlling the first coordinate of the solution.
//
// alpha is always evaluated in the weighted form
//   alpha(s) = sum_w m_w * alpha_kappa_w(S_w(s)),
// which covers both the per-place split (real place: m=1, kappa=1; complex
// place: m=2, kappa=1/2) and the per-fiber split of a subfield.

#include <cmath>
#include <vector>

#include "covol/common.hpp"
#include "covol/specfun.hpp"
#include "covol/subgeom.hpp"

namespace covol {

struct GammaWeights {
  Mat rows;   // R x k; first column all ones
  Vec m;      // positive weights, sum = n
  Vec kappa;  // each in [1/2, 1]

  int k() const { return static_cast<int>(rows.cols()); }
  int num_rows() const { return static_cast<int>(rows.rows()); }
  double n() const { return m.sum(); }
  double r2() const { return (m.array() * (1.0 - kappa.array())).sum(); }
};

inline GammaWeights weights_per_place(const SubgroupGeometry& geo) {
  GammaWeights w;
  w.rows = geo.Q;
  w.m.resize(geo.Q.rows());
  w.kappa.resize(geo.Q.rows());
  for (int v = 0; v < geo.Q.rows(); ++v) {
    w.m(v) = geo.e(v);
    w.kappa(v) = (geo.e(v) > 1.5) ? 0.5 : 1.0;
  }
  return w;
}

inline GammaWeights weights_per_fiber(const SubgroupGeometry& geo) {
  require(geo.fibers.has_value(), Errc::MissingFiberData, "geometry has no FiberData");
  const FiberData& fd = *geo.fibers;
  GammaWeights w;
  w.rows = fd.Qcal;
  const int nw = static_cast<int>(fd.fibers.size());
  w.m.resize(nw);
  w.kappa.resize(nw);
  for (int i = 0; i < nw; ++i) {
    w.m(i) = fd.m_w[static_cast<std::size_t>(i)];
    w.kappa(i) = fd.kappa_w[static_cast<std::size_t>(i)];
  }
  return w;
}

inline bool domain_check(const GammaWeights& w, const Vec& sigma) {
  Vec sv = w.rows * sigma;
  return (sv.array() > 0.0).all();
}

struct AlphaEval {
  double value = 0.0;
  Vec gradient;
  Mat hessian;
};

inline AlphaEval alpha_eval(const GammaWeights& w, const Vec& sigma, int derivatives = 2) {
  Vec sv = w.rows * sigma;
  require((sv.array() > 0.0).all(), Errc::OutsideDomain, "sigma outside the domain");
  AlphaEval out;
  const int k = w.k();
  if (derivatives >= 1) out.gradient = Vec::Zero(k);
  if (derivatives >= 2) out.hessian = Mat::Zero(k, k);
  for (int r = 0; r < w.num_rows(); ++r) {
    double mw = w.m(r), kw = w.kappa(r), z = sv(r);
    out.value += mw * alpha_kappa(z, kw, 0);
    if (derivatives >= 1) out.gradient += mw * alpha_kappa(z, kw, 1) * w.rows.row(r).transpose();
    if (derivatives >= 2)
      out.hessian += mw * alpha_kappa(z, kw, 2) * w.rows.row(r).transpose() * w.rows.row(r);
  }
  return out;
}

inline cplx alpha_eval_complex(const GammaWeights& w, const CVec& s) {
  CVec sv = w.rows.cast<cplx>() * s;
  for (int r = 0; r < sv.size(); ++r)
    require(sv(r).real() > 0.0, Errc::OutsideDomain, "Re S(s) must be positive");
  cplx out = 0.0;
  for (int r = 0; r < w.num_rows(); ++r) out += w.m(r) * alpha_kappa(sv(r), w.kappa(r), 0);
  return out;
}

struct SaddleProblem {
  GammaWeights weights;
  Vec y;  // gradient target; callers pass n*y when working at scaled arguments
};

struct SaddleResult {
  Vec sigma;
  Vec y;                     // the target the problem was solved at
  double objective = 0.0;    // F_y(sigma) = alpha(sigma) - y.sigma
  double alpha_value = 0.0;  // alpha(sigma)
  double residual = 0.0;     // ||grad alpha(sigma) - y||_inf
  Mat hessian;               // Hessian of alpha at sigma (positive definite)
  int iterations = 0;
};

struct SaddleSettings {
  double tol = 1e-11;
  int max_iterations = 200;
  double boundary_fraction = 0.95;
  Vec start;  // optional: overrides the default start when sized k
};

// Damped Newton with a fraction-to-boundary rule; log Gamma itself is the
// barrier at the boundary S_v = 0.
inline SaddleResult solve_saddle(const SaddleProblem& prob, const SaddleSettings& st = {}) {
  const GammaWeights& w = prob.weights;
  const int k = w.k();
  require(prob.y.size() == k, Errc::LengthMismatch, "y must have k coordinates");
  require(prob.y.allFinite(), Errc::DomainError, "y must be finite");

  const double n = w.n(), r2 = w.r2();
  Vec sigma = Vec::Zero(k);
  sigma(0) = std::max(digamma_inverse(prob.y(0) / n) + r2 / (2.0 * n), 1e-3);
  if (st.start.size() == k && domain_check(w, st.start)) sigma = st.start;

  AlphaEval ae = alpha_eval(w, sigma);
  double f = ae.value - prob.y.dot(sigma);
  double res = (ae.gradient - prob.y).lpNorm<Eigen::Infinity>();
  int it = 0;
  for (; it < st.max_iterations && res > st.tol; ++it) {
    Vec grad = ae.gradient - prob.y;
    Vec dir = ae.hessian.ldlt().solve(-grad);

    // fraction-to-boundary clip
    Vec sv = w.rows * sigma, sd = w.rows * dir;
    double tmax = 1.0;
    for (int r = 0; r < sv.size(); ++r)
      if (sd(r) < 0.0) tmax = std::min(tmax, st.boundary_fraction * (-sv(r) / sd(r)));
    double t = tmax;

    bool accepted = false;
    for (int bt = 0; bt < 60 && !accepted; ++bt, t *= 0.5) {
      Vec cand = sigma + t * dir;
      if (!domain_check(w, cand)) continue;
      AlphaEval cae = alpha_eval(w, cand);
      double cf = cae.value - prob.y.dot(cand);
      double cres = (cae.gradient - prob.y).lpNorm<Eigen::Infinity>();
      if (cres < res || cf < f + 1e-4 * t * grad.dot(dir)) {
        sigma = cand;
        ae = cae;
        f = cf;
        res = cres;
        accepted = true;
      }
    }
    if (!accepted) break;
  }
  if (!(res < 10.0 * st.tol))
    fail(Errc::MaxIterations,
         "saddle solve stalled at residual " + std::to_string(res) + " after " +
             std::to_string(it) + " iterations");

  SaddleResult out;
  out.sigma = sigma;
  out.y = prob.y;
  out.objective = f;
  out.alpha_value = ae.value;
  out.residual = res;
  out.hessian = ae.hessian;
  out.iterations = it;
  return out;
}

// y vector attached to a field element and a scale t > 0:
//   y_1 = log t + (2/n) log|Norm(a)|,   y_j = (2/n) sum_v e_v q_jv log|a|_v.
inline Vec y_at(const SubgroupGeometry& geo, const FieldElement& a, double t) {
  require(t > 0.0, Errc::DomainError, "t must be positive");
  require(!a.is_zero(), Errc::ZeroElement, "y_at of zero");
  const double n = geo.n;
  LogVector lg = log_embed(a, LogFlavor::PlainLog);
  Vec y(geo.k);
  double log_norm = 0.0;
  for (int v = 0; v < lg.values.size(); ++v) log_norm += geo.e(v) * lg.values(v);
  y(0) = std::log(t) + (2.0 / n) * log_norm;
  for (int j = 1; j < geo.k; ++j)
    y(j) = (2.0 / n) * (geo.e.array() * geo.Q.col(j).array() * lg.values.array()).sum();
  return y;
}

inline Vec y_at_one(const SubgroupGeometry& geo, double t) {
  require(t > 0.0, Errc::DomainError, "t must be positive");
  Vec y = Vec::Zero(geo.k);
  y(0) = std::log(t);
  return y;
}

// Inequalities at the critical point. The result must have been solved at
// target n*y with y_1 >= t0 for the per-row lower bound to apply.
struct SaddleBounds {
  double sigma1_margin = 0.0;      // sigma_1 - (psi^-1(y_1/n) - r2/(2n))
  double alpha_margin = 0.0;       // alpha(sigma) - n log Gamma(sigma_1 + r2/(2n))
  std::vector<double> row_margins; // S_u - min(2/5, lower bound)
  bool all_pass = true;
};

inline SaddleBounds saddle_bounds(const GammaWeights& w, const SaddleResult& result, double t0) {
  const double n = w.n(), r2 = w.r2();
  const double y1 = result.y(0) / n;
  SaddleBounds out;

  double sigma1 = result.sigma(0);
  out.sigma1_margin = sigma1 - (digamma_inverse(y1) - r2 / (2.0 * n));
  out.all_pass = out.all_pass && out.sigma1_margin >= -1e-9;

  double alpha_lb = n * log_gamma(sigma1 + r2 / (2.0 * n));
  out.alpha_margin = result.alpha_value - alpha_lb;
  out.all_pass = out.all_pass && out.alpha_margin >= -1e-9 * std::max(1.0, std::abs(alpha_lb));

  require(n >= 2.0, Errc::PreconditionViolated, "row bound needs n >= 2");
  require(y1 >= t0 - 1e-12, Errc::PreconditionViolated, "row bound needs y_1 >= t0");
  Vec sv = w.rows * result.sigma;
  for (int r = 0; r < sv.size(); ++r) {
    double margin;
    if (sv(r) >= 2.0 / 5.0) {
      margin = sv(r) - 2.0 / 5.0;
    } else {
      double denom = (n - 1.0) * std::log(2.0 * sigma1 + 0.5) - n * t0;
      if (!(denom > 0.0)) {
        out.all_pass = false;
        out.row_margins.push_back(-1.0);
        continue;
      }
      margin = sv(r) - 1.0 / denom;
      out.all_pass = out.all_pass && margin >= -1e-12;
    }
    out.row_margins.push_back(margin);
  }
  if (!out.all_pass)
    fail(Errc::BoundViolated, "a critical-point inequality failed (implementation error)");
  return out;
}

// Certified constant C with ||S(sigma)||_inf >= C ||sigma||_2: smallest
// singular value of diag(sqrt(m)) * rows divided by sqrt(n).
inline double steepness_constant(const GammaWeights& w) {
  Mat scaled = w.m.array().sqrt().matrix().asDiagonal() * w.rows;
  Eigen::JacobiSVD<Mat> svd(scaled);
  return svd.singularValues().minCoeff() / std::sqrt(w.n());
}

}  // namespace covol
