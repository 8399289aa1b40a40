// Acceptance suite: every criterion prints one pass/fail line with its
// runtime. Run as a single process so the final budget line can account for
// the whole suite.

#include <catch2/catch.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>

#include "covol/asymptotics.hpp"
#include "covol/mahler.hpp"
#include "covol/parallel.hpp"
#include "oracles.hpp"

using namespace covol;

namespace {

std::string data_path(const std::string& name) { return std::string(COVOL_DATA_DIR) + "/" + name; }

const std::vector<CorpusEntry>& corpus() {
  static auto c = load_corpus(data_path("fields.json"));
  return c;
}

const CorpusEntry& corpus_entry(const std::string& label) {
  for (const auto& e : corpus())
    if (e.field().label == label) return e;
  FAIL("corpus entry not found: " << label);
  return corpus().front();
}

double& total_seconds() {
  static double t = 0.0;
  return t;
}

class Criterion {
 public:
  Criterion(int number, std::string what, double limit_seconds)
      : number_(number), what_(std::move(what)), limit_(limit_seconds),
        start_(std::chrono::steady_clock::now()) {}

  void expect(bool cond, const char* detail = "") {
    if (!cond && detail[0]) std::printf("    criterion %02d detail: %s\n", number_, detail);
    ok_ = ok_ && cond;
    CHECK(cond);
  }

  ~Criterion() {
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    total_seconds() += secs;
    bool in_budget = secs < limit_;
    std::printf("criterion %02d [%s] %-58s (%6.2fs / limit %gs)\n", number_,
                (ok_ && in_budget) ? "PASS" : "FAIL", what_.c_str(), secs, limit_);
    std::fflush(stdout);
    CHECK(in_budget);
  }

 private:
  int number_;
  std::string what_;
  double limit_;
  std::chrono::steady_clock::time_point start_;
  bool ok_ = true;
};

std::vector<GammaWeights> geometry_pool_k4() {
  std::vector<GammaWeights> pool;
  for (const auto& entry : corpus()) {
    for (std::size_t take = 0; take <= entry.units.size(); ++take) {
      std::vector<FieldElement> sub(entry.units.begin(),
                                    entry.units.begin() + static_cast<long>(take));
      try {
        auto geo = complement_basis(entry.field(), sub);
        if (geo.k <= 4) pool.push_back(weights_per_place(geo));
      } catch (const Error&) {
      }
    }
  }
  return pool;
}

}  // namespace

TEST_CASE("criterion 01: product formula and unit log sums") {
  Criterion cr(1, "product formula on 200 random elements, >= 5 fields", 5.0);
  REQUIRE(corpus().size() >= 5);
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<int> num(-4, 4), den(1, 3);
  int checked = 0;
  std::size_t field_i = 0;
  while (checked < 200) {
    const auto& entry = corpus()[field_i++ % corpus().size()];
    const auto& f = entry.field();
    std::vector<Rat> coords;
    for (int i = 0; i < f.degree; ++i) coords.push_back(Rat(num(rng), den(rng)));
    auto a = make_element(f, coords);
    if (a.is_zero()) continue;
    auto av = abs_values(a);
    double exact = std::abs(to_double(av.norm_exact));
    if (exact == 0.0) continue;
    cr.expect(std::abs(av.norm_float - exact) / exact < 1e-9, "product formula");
    ++checked;
  }
  for (const auto& entry : corpus())
    for (const auto& u : entry.units)
      cr.expect(std::abs(log_embed(u).values.sum()) < 1e-9, "unit log sum");
}

TEST_CASE("criterion 02: trinomial units have small euclidean log norm") {
  Criterion cr(2, "||LOG(eps)||_2 <= sqrt(2) log p / sqrt(p), p in {5,7,11}", 1.0);
  const char* labels[] = {"quintic-trinomial", "septic-trinomial", "deg11-trinomial"};
  int ps[] = {5, 7, 11};
  for (int i = 0; i < 3; ++i) {
    const auto& entry = corpus_entry(labels[i]);
    double norm2 = log_embed(entry.units[0]).values.norm();
    double bound = std::sqrt(2.0) * std::log(static_cast<double>(ps[i])) /
                   std::sqrt(static_cast<double>(ps[i]));
    cr.expect(norm2 <= bound, labels[i]);
  }
}

TEST_CASE("criterion 03: totally real lower bounds with positive margin") {
  Criterion cr(3, "per-unit, covolume, and 1-norm bounds on the totally real corpus", 5.0);
  int fields = 0;
  for (const auto& entry : corpus()) {
    if (!entry.field().totally_real() || entry.units.empty()) continue;
    ++fields;
    auto rep = pohst_check(entry.field(), entry.units);
    cr.expect(rep.all_pass, entry.field().label.c_str());
    for (const auto& r : rep.records) cr.expect(r.margin > -1e-12);
  }
  cr.expect(fields >= 4, "need totally real fields of degrees 2..5");
}

TEST_CASE("criterion 04: saddle solver residuals and critical-point bounds") {
  Criterion cr(4, "500 random (geometry, y), k <= 4: residual + inequalities", 60.0);
  auto pool = geometry_pool_k4();
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> uy(-2.5, 1.5);
  int samples = 0;
  while (samples < 500) {
    const auto& w = pool[static_cast<std::size_t>(rng() % pool.size())];
    Vec y(w.k());
    y(0) = uy(rng);
    for (int i = 1; i < w.k(); ++i) y(i) = 0.5 * uy(rng);
    SaddleResult res;
    try {
      res = solve_saddle({w, w.n() * y});
    } catch (const Error&) {
      continue;
    }
    cr.expect(res.residual < 1e-10, "residual");
    try {
      auto sb = saddle_bounds(w, res, y(0));
      cr.expect(sb.all_pass, "bounds");
    } catch (const Error&) {
      cr.expect(false, "saddle_bounds threw");
    }
    ++samples;
  }
}

TEST_CASE("criterion 05: psi triple agreement") {
  Criterion cr(5, "psi: direct / closed-transform / contour agree to 1e-6", 30.0);
  const auto& entry = corpus_entry("real-quadratic-sqrt2");
  auto geo = complement_basis(entry.field(), entry.units);
  Vec s_probe(1);
  s_probe << 2.0;
  for (double hval : {0.5, 0.8, 1.0, 1.4, 2.1}) {
    Vec h(1);
    h << hval;
    auto pt = psi_triple(geo, h, s_probe);
    cr.expect(pt.max_rel_spread < 1e-6, "three-way spread");
    cr.expect(std::abs(pt.mt_closed - pt.mt_quadrature) <
                  1e-6 * std::max(1.0, std::abs(pt.mt_closed)),
              "transform vs quadrature");
  }
}

TEST_CASE("criterion 06: determinant of H two ways") {
  Criterion cr(6, "det H direct vs minor expansion, 1000 random instances", 10.0);
  std::mt19937_64 rng(606);
  std::uniform_real_distribution<double> uq(-1.5, 1.5), um(1.0, 40.0), uk(0.5, 1.0),
      us(-0.3, 0.3);
  int done = 0;
  while (done < 1000) {
    int k = 1 + static_cast<int>(rng() % 4);
    int nw = k + static_cast<int>(rng() % static_cast<unsigned>(7 - k));
    Mat q(nw, k);
    Vec m(nw), kap(nw);
    for (int w = 0; w < nw; ++w) {
      q(w, 0) = 1.0;
      for (int j = 1; j < k; ++j) q(w, j) = uq(rng);
      m(w) = std::floor(um(rng));
      kap(w) = uk(rng);
    }
    PlaceDataSet pd;
    try {
      pd = make_place_data(q, m, kap);
    } catch (const Error&) {
      continue;
    }
    Vec sigma = Vec::Zero(k);
    sigma(0) = 1.4 + us(rng);
    for (int j = 1; j < k; ++j) sigma(j) = us(rng);
    if (!((pd.Qcal * sigma).array() > 0.05).all()) continue;
    auto dh = det_h(pd, sigma);
    cr.expect(std::abs(dh.direct - dh.cauchy_binet) <= 1e-10 * std::max(1.0, dh.direct),
              "det H routes disagree");
    ++done;
  }
}

TEST_CASE("criterion 07: gaussian moment identities") {
  Criterion cr(7, "moments vs quadrature (k<=2) and QMC (k=3)", 60.0);
  std::mt19937_64 rng(707);
  std::uniform_real_distribution<double> uq(-1.5, 1.5), ub(0.5, 3.0);
  // k in {1, 2} against nested adaptive Simpson.
  for (int k = 1; k <= 2; ++k) {
    for (int inst = 0; inst < 3; ++inst) {
      int nw = k + 2;
      Mat q(nw, k);
      Vec b(nw);
      for (int w = 0; w < nw; ++w) {
        q(w, 0) = 1.0;
        for (int j = 1; j < k; ++j) q(w, j) = uq(rng);
        b(w) = ub(rng);
      }
      // Marginal/conditional windows so the nested rule tracks the Gaussian
      // ridge even when the form is ill-conditioned.
      Mat h = q.transpose() * b.asDiagonal() * q;
      double w1 = (k == 1) ? 13.0 / std::sqrt(h(0, 0))
                           : 13.0 * std::sqrt(h.inverse()(0, 0));
      for (auto which : {GaussianMoment::Zeroth, GaussianMoment::FourthAt}) {
        auto got = gaussian_moments(b, q, which, 0);
        auto f2 = [&](double t1, double t2) {
          Vec t(k);
          t(0) = t1;
          if (k == 2) t(1) = t2;
          Vec st = q * t;
          double qf = (b.array() * st.array().square()).sum();
          double wgt = (which == GaussianMoment::FourthAt) ? std::pow(st(0), 4.0) : 1.0;
          return wgt * std::exp(-0.5 * qf);
        };
        double oracle_val;
        if (k == 1) {
          oracle_val = oracle::simpson([&](double t1) { return f2(t1, 0.0); }, -w1, w1, 1e-12, 30);
        } else {
          double w2 = 13.0 / std::sqrt(h(1, 1));
          oracle_val = oracle::simpson(
              [&](double t1) {
                double center = -h(0, 1) / h(1, 1) * t1;
                return oracle::simpson([&](double t2) { return f2(t1, t2); }, center - w2,
                                       center + w2, 1e-12, 28);
              },
              -w1, w1, 1e-9, 24);
        }
        cr.expect(std::abs(got.value - oracle_val) <= 1e-6 * std::max(1.0, std::abs(oracle_val)),
                  "moment vs quadrature");
      }
    }
  }
  // k = 3 against QMC in whitened coordinates.
  {
    int k = 3, nw = 5;
    Mat q(nw, k);
    Vec b(nw);
    for (int w = 0; w < nw; ++w) {
      q(w, 0) = 1.0;
      for (int j = 1; j < k; ++j) q(w, j) = uq(rng);
      b(w) = ub(rng);
    }
    Eigen::JacobiSVD<Mat> svd(q);
    if (svd.singularValues().minCoeff() > 1e-3) {
      Mat h = q.transpose() * b.asDiagonal() * q;
      Eigen::SelfAdjointEigenSolver<Mat> es(h);
      auto got = gaussian_moments(b, q, GaussianMoment::FourthAt, 1);
      Mat half = es.eigenvectors() *
                 es.eigenvalues().array().sqrt().inverse().matrix().asDiagonal() *
                 es.eigenvectors().transpose();
      double jac = 1.0;
      for (int i = 0; i < 3; ++i) jac /= std::sqrt(es.eigenvalues()(i));
      const double big = 9.0;
      const std::uint64_t npts = 1 << 17;
      double acc = 0.0;
      for (std::uint64_t i = 0; i < npts; ++i) {
        auto x = oracle::halton_point(i, 3);
        Vec u(3);
        for (int d = 0; d < 3; ++d) u(d) = (2.0 * x[static_cast<std::size_t>(d)] - 1.0) * big;
        Vec t = half * u;
        Vec st = q * t;
        acc += std::pow(st(1), 4.0) * std::exp(-0.5 * (b.array() * st.array().square()).sum());
      }
      double qmc = acc / static_cast<double>(npts) * std::pow(2.0 * big, 3.0) * jac;
      cr.expect(std::abs(got.value - qmc) <= 1e-2 * std::max(1.0, std::abs(qmc)), "moment vs QMC");
    }
  }
}

TEST_CASE("criterion 08: one-dimensional gamma-line estimates on the grid") {
  Criterion cr(8, "line and tail estimates over m x kappa x r x D", 300.0);
  struct Cell {
    double m, kappa, r, d;
    GammaLineCheck which;
    bool pass = false;
  };
  std::vector<Cell> cells;
  for (double m : {1000.0, 2000.0})
    for (double kappa : {0.5, 0.75, 1.0})
      for (double r : {0.1, 0.51, 1.0, 4.0}) {
        cells.push_back({m, kappa, r, 0.0, GammaLineCheck::Line});
        cells.push_back({m, kappa, r, 0.0, GammaLineCheck::LineWeighted});
        for (double d : {1.0, 2.0}) {
          cells.push_back({m, kappa, r, d, GammaLineCheck::TailLine});
          cells.push_back({m, kappa, r, d, GammaLineCheck::TailGauss});
        }
      }
  parallel_for(static_cast<int>(cells.size()), [&](int i) {
    Cell& c = cells[static_cast<std::size_t>(i)];
    c.pass = onedim_gamma_line(c.m, c.kappa, c.r, c.d, c.which).pass;
  });
  for (const auto& c : cells) cr.expect(c.pass, "a grid cell failed");
}

TEST_CASE("criterion 09: taylor remainder claims on random samples") {
  Criterion cr(9, "cubic/quartic/parity/positivity claims, 1e5 samples", 30.0);
  std::mt19937_64 rng(909);
  std::uniform_real_distribution<double> uq(-1.5, 1.5), um(1.0, 40.0), uk(0.5, 1.0),
      ut(-0.8, 0.8), us(-0.3, 0.3);
  double worst = 0.0;
  int samples = 0;
  while (samples < 100000) {
    int k = 1 + static_cast<int>(rng() % 2);
    int nw = k + 1;
    Mat q(nw, k);
    Vec m(nw), kap(nw);
    for (int w = 0; w < nw; ++w) {
      q(w, 0) = 1.0;
      for (int j = 1; j < k; ++j) q(w, j) = uq(rng);
      m(w) = std::floor(um(rng));
      kap(w) = uk(rng);
    }
    PlaceDataSet pd;
    try {
      pd = make_place_data(q, m, kap);
    } catch (const Error&) {
      continue;
    }
    Vec sigma = Vec::Zero(k);
    sigma(0) = 1.0 + us(rng);
    for (int j = 1; j < k; ++j) sigma(j) = us(rng);
    if (!((pd.Qcal * sigma).array() > 0.05).all()) continue;
    for (int rep = 0; rep < 100 && samples < 100000; ++rep, ++samples) {
      Vec t(k);
      for (int j = 0; j < k; ++j) t(j) = ut(rng);
      worst = std::min(worst, rho_remainder(pd, sigma, t).worst_violation);
    }
  }
  cr.expect(worst >= 0.0, "a remainder claim failed");
}

TEST_CASE("criterion 10: dominant minor inequality") {
  Criterion cr(10, "1000 random (M, a) with 1000 T samples each", 30.0);
  std::mt19937_64 rng(1010);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> ua(0.1, 5.0);
  int done = 0;
  while (done < 1000) {
    int k = 1 + static_cast<int>(rng() % 3);
    int rows = k + 1 + static_cast<int>(rng() % 4);
    Mat m(rows, k);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < k; ++j) m(i, j) = g(rng);
    Vec a(rows);
    for (int i = 0; i < rows; ++i) a(i) = ua(rng);
    std::vector<Vec> ts;
    for (int s = 0; s < 1000; ++s) {
      Vec t(k);
      for (int j = 0; j < k; ++j) t(j) = g(rng);
      ts.push_back(std::move(t));
    }
    try {
      auto res = max_minor_property(m, a, ts);
      cr.expect(res.pass, "minor inequality violated");
    } catch (const Error&) {
      continue;  // rank-deficient draw
    }
    ++done;
  }
}

TEST_CASE("criterion 11: contour decomposition closes") {
  Criterion cr(11, "|direct - I1| within I2+I3+I4, budget <= 0.05", 120.0);
  for (double m : {1000.0, 4000.0}) {
    for (double kappa : {0.5, 1.0}) {
      PlaceDataSet pd = single_fiber(m, kappa);
      Vec y(1);
      y << digamma(2.0);
      auto bd = asymptotic_breakdown(pd, y, 1.0);
      auto ct = direct_contour(pd, y);
      cr.expect(std::abs(ct.ratio_to_i1 - 1.0) <= bd.error_budget(), "closure");
      cr.expect(bd.error_budget() <= 0.05, "budget");
    }
  }
}

TEST_CASE("criterion 12: rate constants") {
  Criterion cr(12, "f(0) >= log 2.3, f(1/4) > 1/10, e^0.0955 > 1.1", 1.0);
  cr.expect(rate_exponent(0.0) >= std::log(2.3));
  cr.expect(rate_exponent(0.25) > 0.1);
  cr.expect(std::exp(0.0955) > 1.1);
}

TEST_CASE("criterion 13: certified pipeline sanity on the corpus") {
  Criterion cr(13, "sigma1 >= 0.51, y1 in (-2,-1), bound <= covolume", 30.0);
  int full = 0;
  for (const auto& entry : corpus()) {
    SubgroupGeometry geo;
    try {
      geo = complement_basis(entry.field(), entry.units);
    } catch (const Error&) {
      continue;
    }
    if (geo.k != 1) continue;  // needs full unit data
    ++full;
    auto cb = certified_lower_bound(with_fibers(std::move(geo), trivial_partition(entry.field())),
                                    1000.0);
    cr.expect(cb.sigma1_ok, "sigma1");
    cr.expect(cb.y1 > -2.0 && cb.y1 < -1.0, "y1 window");
    cr.expect(cb.y1_ok, "y1 vs psi window");
    cr.expect(!cb.precondition_met, "desk fields must flag conditional");
    if (!entry.units.empty())
      cr.expect(cb.covolume.has_value() && cb.bound <= *cb.covolume, "bound vs covolume");
  }
  cr.expect(full >= 5, "full-unit corpus coverage");
}

TEST_CASE("criterion 14: pure wedge extraction round trips") {
  Criterion cr(14, "exact integer round trip, 200 random instances n <= 5", 10.0);
  std::mt19937_64 rng(1414);
  std::uniform_int_distribution<int> entry_d(-9, 9), dim_d(2, 5);
  for (int trial = 0; trial < 200; ++trial) {
    int n = dim_d(rng);
    std::vector<Int> omega(static_cast<std::size_t>(n));
    bool zero = true;
    for (auto& c : omega) {
      c = entry_d(rng);
      zero = zero && (c == 0);
    }
    if (zero) omega[0] = 1;
    auto pw = pure_wedge_extract(imat_identity(n), omega);
    IMat rows(pw.basis.begin(), pw.basis.end() - 1);
    auto got = integer_wedge_coords(rows);
    bool exact = true;
    for (std::size_t i = 0; i < omega.size(); ++i) exact = exact && (pw.d * got[i] == omega[i]);
    cr.expect(exact, "wedge reproduction");
    cr.expect(boost::multiprecision::abs(imat_det(pw.basis)) == 1, "basis unimodular");
  }
}

TEST_CASE("criterion 15: mahler measures") {
  Criterion cr(15, "x-1 exact, Lehmer 1e-6, QMC vs Jensen 1e-3, faces, limits", 300.0);
  auto xm1 = make_laurent(1, {{{0}, Int(-1)}, {{1}, Int(1)}});
  cr.expect(mahler_univariate(xm1) == 0.0, "m(x-1) must be exactly zero");

  auto lehmer = load_polynomial(data_path("lehmer.json"));
  cr.expect(std::abs(mahler_univariate(lehmer) - 0.1623576) < 1e-6, "Lehmer value");

  auto smyth = load_polynomial(data_path("smyth.json"));
  auto qm = mahler_qmc(smyth);  // default 2^20 points, 8 shifts
  auto fj = mahler_fiber_jensen(smyth);
  cr.expect(std::abs(fj.value - 0.3230659) < 1e-4, "Jensen value");
  cr.expect(std::abs(qm.value - fj.value) < 1e-3, "QMC vs Jensen");

  for (const char* name : {"smyth.json", "split_product.json", "lehmer.json"}) {
    auto p = load_polynomial(data_path(name));
    auto mr = mahler_measure(p);
    for (const auto& rec : face_inequality_report(p, mr.value, mr.error))
      cr.expect(rec.pass, "face inequality");
  }

  auto steps = boyd_limit(smyth, {1, 1}, {32});
  cr.expect(std::abs(steps[0].measure - 0.3230659) < 5e-3, "one-variable limit at k = 32");
}

TEST_CASE("criterion 16: bloch-wigner relations") {
  Criterion cr(16, "antisymmetry, five-term, and the quadratic-field identity", 30.0);
  std::mt19937_64 rng(1616);
  std::uniform_real_distribution<double> ur(-3.0, 3.0);
  for (int i = 0; i < 1000; ++i) {
    cplx z(ur(rng), ur(rng));
    cr.expect(std::abs(bloch_relation_residual(BlochRelation::Antisymmetry, z)) < 1e-12);
  }
  int pairs = 0;
  while (pairs < 100) {
    cplx x(ur(rng), ur(rng)), y(ur(rng), ur(rng));
    if (std::abs(1.0 - x * y) < 1e-3) continue;
    cr.expect(std::abs(bloch_relation_residual(BlochRelation::FiveTerm, x, y)) < 1e-10);
    ++pairs;
  }
  cr.expect(std::abs(bloch_relation_residual(BlochRelation::Identity32)) < 1e-9);
}

TEST_CASE("criterion 17: total runtime budget") {
  double total = total_seconds();
  bool ok = total < 900.0;
  std::printf("criterion 17 [%s] full suite runtime %.1fs (budget 900s)\n", ok ? "PASS" : "FAIL",
              total);
  CHECK(ok);
}
