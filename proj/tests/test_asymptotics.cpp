#include <catch2/catch.hpp>

#include <cmath>
#include <random>

#include "covol/asymptotics.hpp"
#include "oracles.hpp"

using namespace covol;

namespace {

std::string data_path(const std::string& name) { return std::string(COVOL_DATA_DIR) + "/" + name; }

const CorpusEntry& corpus_entry(const std::string& label) {
  static auto corpus = load_corpus(data_path("fields.json"));
  for (const auto& e : corpus)
    if (e.field().label == label) return e;
  FAIL("corpus entry not found: " << label);
  return corpus.front();
}

PlaceDataSet random_place_data(std::mt19937_64& rng, int nw, int k, double m_lo = 1.0,
                               double m_hi = 40.0) {
  std::uniform_real_distribution<double> uq(-1.5, 1.5), um(m_lo, m_hi), uk(0.5, 1.0);
  while (true) {
    Mat q(nw, k);
    for (int w = 0; w < nw; ++w) {
      q(w, 0) = 1.0;
      for (int j = 1; j < k; ++j) q(w, j) = uq(rng);
    }
    Vec m(nw), kap(nw);
    for (int w = 0; w < nw; ++w) {
      m(w) = std::floor(um(rng));
      kap(w) = uk(rng);
    }
    try {
      return make_place_data(q, m, kap);
    } catch (const Error&) {
      continue;
    }
  }
}

Vec domain_sigma(const PlaceDataSet& pd, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ur(-0.3, 0.3);
  while (true) {
    Vec sigma = Vec::Zero(pd.k());
    sigma(0) = 0.7 + ur(rng) + 0.7;
    for (int j = 1; j < pd.k(); ++j) sigma(j) = ur(rng);
    if (((pd.Qcal * sigma).array() > 0.05).all()) return sigma;
  }
}

}  // namespace

TEST_CASE("det H closed cases") {
  std::mt19937_64 rng(1);
  {
    PlaceDataSet pd = random_place_data(rng, 4, 1);
    Vec sigma(1);
    sigma << 1.2;
    auto dh = det_h(pd, sigma);
    double want = 0.0;
    for (int w = 0; w < 4; ++w) want += pd.m_w(w) * alpha_kappa(1.2, pd.kappa_w(w), 2);
    CHECK(dh.direct == Approx(want).epsilon(1e-12));
    CHECK(dh.cauchy_binet == Approx(want).epsilon(1e-12));
  }
  {
    PlaceDataSet pd = random_place_data(rng, 3, 3);
    Vec sigma = domain_sigma(pd, rng);
    auto dh = det_h(pd, sigma);
    Vec sv = pd.Qcal * sigma;
    double prod = 1.0;
    for (int w = 0; w < 3; ++w) prod *= pd.m_w(w) * alpha_kappa(sv(w), pd.kappa_w(w), 2);
    double d = pd.Qcal.determinant();
    CHECK(dh.direct == Approx(d * d * prod).epsilon(1e-10));
  }
}

TEST_CASE("det H two routes agree on random data") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 300; ++trial) {
    int k = 1 + static_cast<int>(rng() % 4);
    int nw = k + static_cast<int>(rng() % static_cast<unsigned>(7 - k));
    PlaceDataSet pd = random_place_data(rng, nw, k);
    Vec sigma = domain_sigma(pd, rng);
    auto dh = det_h(pd, sigma);
    CHECK(dh.direct > 0.0);
    CHECK(dh.direct == Approx(dh.cauchy_binet).epsilon(1e-10));
  }
}

TEST_CASE("main term closed form at k = 1") {
  PlaceDataSet pd = single_fiber(7.0, 1.0);
  Vec y(1);
  y << digamma(2.0);
  auto mt = main_term_i1(pd, y);
  CHECK(mt.saddle.sigma(0) == Approx(2.0).epsilon(1e-12));
  double want = std::sqrt(2.0 * M_PI) *
                std::exp(7.0 * log_gamma(2.0) - 7.0 * 2.0 * digamma(2.0)) /
                std::sqrt(7.0 * polygamma(2.0, 1));
  CHECK(mt.i1() == Approx(want).epsilon(1e-10));
}

TEST_CASE("main term is invariant under rotations of the trailing columns") {
  std::mt19937_64 rng(3);
  PlaceDataSet pd = random_place_data(rng, 5, 3);
  Vec y = Vec::Zero(3);
  y(0) = -0.8;
  auto base = main_term_i1(pd, y);

  std::uniform_real_distribution<double> ua(0.0, 2.0 * M_PI);
  for (int trial = 0; trial < 5; ++trial) {
    double a = ua(rng);
    Mat rot = Mat::Identity(3, 3);
    rot(1, 1) = std::cos(a);
    rot(1, 2) = -std::sin(a);
    rot(2, 1) = std::sin(a);
    rot(2, 2) = std::cos(a);
    PlaceDataSet rotated = pd;
    rotated.Qcal = pd.Qcal * rot;
    auto mt = main_term_i1(rotated, y);  // y has zero trailing part
    CHECK(mt.log_i1 == Approx(base.log_i1).epsilon(1e-9));

    Vec y2(3);
    y2 << -0.8, 0.15, -0.2;
    auto b2 = main_term_i1(pd, y2);
    Vec y2r = rot.transpose() * y2;
    auto m2 = main_term_i1(rotated, y2r);
    CHECK(m2.log_i1 == Approx(b2.log_i1).epsilon(1e-9));
  }
}

TEST_CASE("gaussian moments closed forms") {
  Mat q1(1, 1);
  q1 << 1.0;
  Vec b1(1);
  b1 << 2.7;
  auto m0 = gaussian_moments(b1, q1, GaussianMoment::Zeroth);
  CHECK(m0.value == Approx(std::sqrt(2.0 * M_PI / 2.7)).epsilon(1e-13));
  auto m4 = gaussian_moments(b1, q1, GaussianMoment::FourthAt, 0);
  CHECK(m4.value == Approx(3.0 * std::sqrt(2.0 * M_PI) * std::pow(2.7, -2.5)).epsilon(1e-13));
}

TEST_CASE("gaussian moments match quadrature at k = 2") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 5; ++trial) {
    PlaceDataSet pd = random_place_data(rng, 4, 2);
    Vec b(4);
    std::uniform_real_distribution<double> ub(0.5, 3.0);
    for (int w = 0; w < 4; ++w) b(w) = ub(rng);
    const Mat& q = pd.Qcal;
    Mat h = q.transpose() * b.asDiagonal() * q;
    // marginal width for the outer axis, conditional window for the inner one
    double w1 = 13.0 * std::sqrt(h.inverse()(0, 0));
    double w2 = 13.0 / std::sqrt(h(1, 1));
    const int w0 = 1;
    for (auto which : {GaussianMoment::Zeroth, GaussianMoment::FourthAt, GaussianMoment::SixthAt}) {
      auto got = gaussian_moments(b, q, which, w0);
      auto f = [&](double t1, double t2) {
        Vec t(2);
        t << t1, t2;
        Vec st = q * t;
        double qf = (b.array() * st.array().square()).sum();
        double weight = 1.0;
        if (which == GaussianMoment::FourthAt) weight = std::pow(st(w0), 4.0);
        if (which == GaussianMoment::SixthAt) weight = std::pow(st(w0), 6.0);
        return weight * std::exp(-0.5 * qf);
      };
      double oracle_val = oracle::simpson(
          [&](double t1) {
            double center = -h(0, 1) / h(1, 1) * t1;
            return oracle::simpson([&](double t2) { return f(t1, t2); }, center - w2, center + w2,
                                   1e-12, 28);
          },
          -w1, w1, 1e-9, 24);
      INFO("moment kind " << static_cast<int>(which));
      CHECK(got.value == Approx(oracle_val).epsilon(1e-6));
      CHECK(got.value <= got.bound * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("gaussian moments match QMC at k = 3") {
  std::mt19937_64 rng(5);
  PlaceDataSet pd = random_place_data(rng, 5, 3);
  Vec b(5);
  std::uniform_real_distribution<double> ub(0.6, 2.0);
  for (int w = 0; w < 5; ++w) b(w) = ub(rng);
  const Mat& q = pd.Qcal;
  Mat h = q.transpose() * b.asDiagonal() * q;
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  Mat half = es.eigenvectors() *
             es.eigenvalues().array().sqrt().inverse().matrix().asDiagonal() *
             es.eigenvectors().transpose();
  const double L = 9.0;
  const int w0 = 2;
  auto got = gaussian_moments(b, q, GaussianMoment::FourthAt, w0);
  // Importance-style QMC: sample u in the box [-L, L]^3 in whitened
  // coordinates, weight by the Jacobian of T = half * u.
  double jac = 1.0;
  for (int i = 0; i < 3; ++i) jac /= std::sqrt(es.eigenvalues()(i));
  const std::uint64_t npts = 1 << 17;
  double acc = 0.0;
  for (std::uint64_t i = 0; i < npts; ++i) {
    auto x = oracle::halton_point(i, 3);
    Vec u(3);
    for (int d = 0; d < 3; ++d) u(d) = (2.0 * x[static_cast<std::size_t>(d)] - 1.0) * L;
    Vec t = half * u;
    Vec st = q * t;
    double qf = (b.array() * st.array().square()).sum();
    acc += std::pow(st(w0), 4.0) * std::exp(-0.5 * qf);
  }
  double vol = std::pow(2.0 * L, 3.0) * jac;
  double qmc = acc / static_cast<double>(npts) * vol;
  CHECK(got.value == Approx(qmc).epsilon(1e-2));
}

TEST_CASE("tail bounds evaluate the cited formulas") {
  PlaceDataSet pd = single_fiber(1000.0, 1.0);
  Vec y(1);
  y << digamma(2.0);
  auto tb = tail_bounds_i2_i3(pd, y, 1.0);
  CHECK(tb.i3_over_i1 == Approx(3.67 / 1000.0).epsilon(1e-12));
  CHECK(tb.i2_over_i1 == Approx((1e-76 + 41.43) / 1000.0).epsilon(1e-12));
  REQUIRE(tb.eta0 == std::vector<int>{0});
  CHECK(tb.delta_w[0] ==
        Approx(1.0 / (std::cbrt(1000.0) * std::sqrt(polygamma(2.0, 1)))).epsilon(1e-12));

  auto tb2 = tail_bounds_i2_i3(pd, y, 2.0);
  CHECK(tb2.i2_over_i1 < tb.i2_over_i1);
  CHECK(tb2.i3_over_i1 < tb.i3_over_i1);

  CHECK_THROWS_AS(tail_bounds_i2_i3(single_fiber(500.0, 1.0), y, 1.0), Error);
  CHECK_THROWS_AS(tail_bounds_i2_i3(pd, y, 8.0), Error);  // D >= m^(1/3)/sqrt2
}

TEST_CASE("inner bound and derivative bound formulas") {
  PlaceDataSet pd = single_fiber(1000.0, 1.0);
  auto ib = inner_bound_i4(pd, 1.0);
  double x = 0.1;
  CHECK(ib.z == Approx((std::exp(x) - 1.0) / x).epsilon(1e-12));
  CHECK(ib.i4_over_i1 == Approx((5.0 / 3.0 + 1.5 * ib.z) / 1000.0).epsilon(1e-12));

  auto ib_small = inner_bound_i4(single_fiber(1000.0, 1.0), 1e-4);
  CHECK(ib_small.z == Approx(1.0).margin(1e-8));

  // doubling |A_K| more than doubles the bound
  std::mt19937_64 rng(6);
  PlaceDataSet two = random_place_data(rng, 2, 1, 1000.0, 1500.0);
  two.m_scale = 1000.0;
  auto ib2 = inner_bound_i4(two, 1.0);
  PlaceDataSet four = random_place_data(rng, 4, 1, 1000.0, 1500.0);
  four.m_scale = 1000.0;
  auto ib4 = inner_bound_i4(four, 1.0);
  CHECK(ib4.i4_over_i1 > 2.0 * ib2.i4_over_i1);

  PlaceDataSet big = single_fiber(1000000.0, 1.0);
  CHECK(deriv_term_bound(big, 0.51) == Approx(1.66 * 0.51 / 1000.0).epsilon(1e-12));
  CHECK(deriv_term_bound(single_fiber(4000.0, 1.0), 1.0) ==
        Approx(0.5 * deriv_term_bound(single_fiber(1000.0, 1.0), 1.0)).epsilon(1e-12));
  CHECK(deriv_term_bound(big, 1.02) == Approx(2.0 * deriv_term_bound(big, 0.51)).epsilon(1e-12));
}

TEST_CASE("one-dimensional gamma-line estimates") {
  // int |Gamma(1+it)|^1000 dt against 1.0021 sqrt(2pi)/sqrt(1000 pi^2/6).
  auto r1 = onedim_gamma_line(1000.0, 1.0, 1.0, 0.0, GammaLineCheck::Line);
  CHECK(r1.pass);
  CHECK(r1.lhs > 0.9);  // the Gaussian approximation is tight here

  auto r2 = onedim_gamma_line(1000.0, 0.5, 0.51, 0.0, GammaLineCheck::LineWeighted);
  CHECK(r2.pass);
  CHECK(r2.rhs == Approx(0.83));

  auto r3 = onedim_gamma_line(1000.0, 1.0, 1.0, 2.0, GammaLineCheck::TailLine);
  CHECK(r3.pass);

  auto r4 = onedim_gamma_line(1000.0, 1.0, 1.0, 2.0, GammaLineCheck::TailGauss);
  CHECK(r4.pass);
  CHECK(r4.rhs == Approx(3.67 / (1000.0 * 64.0)).epsilon(1e-12));

  CHECK_THROWS_AS(onedim_gamma_line(100.0, 1.0, 1.0, 1.0, GammaLineCheck::Line), Error);
}

TEST_CASE("taylor remainder claims") {
  std::mt19937_64 rng(7);
  PlaceDataSet pd = random_place_data(rng, 4, 2);
  Vec sigma = domain_sigma(pd, rng);
  Vec zero = Vec::Zero(2);
  auto rc0 = rho_remainder(pd, sigma, zero);
  for (const auto& r : rc0.rho_w) CHECK(std::abs(r) < 1e-14);

  std::uniform_real_distribution<double> ut(-0.8, 0.8);
  int samples = 0;
  while (samples < 10000) {
    Vec t(2);
    t << ut(rng), ut(rng);
    auto rc = rho_remainder(pd, sigma, t);
    CHECK(rc.worst_violation >= 0.0);
    ++samples;
    if (samples % 1000 == 0) sigma = domain_sigma(pd, rng);
  }
}

TEST_CASE("rho aggregates to the full exponent difference") {
  std::mt19937_64 rng(8);
  PlaceDataSet pd = random_place_data(rng, 3, 2, 2.0, 9.0);
  // Geometry-shaped data: trailing columns weighted-orthogonal to the ones
  // column, as for any Qcal derived from a complement basis.
  for (int j = 1; j < pd.k(); ++j) {
    double shift = (pd.m_w.array() * pd.Qcal.col(j).array()).sum() / pd.m_w.sum();
    pd.Qcal.col(j).array() -= shift;
  }
  GammaWeights w = pd.weights();
  Vec y(2);
  y << -0.9, 0.1;
  auto sr = solve_saddle({w, pd.n() * y});
  std::uniform_real_distribution<double> ut(-0.5, 0.5);
  for (int trial = 0; trial < 200; ++trial) {
    Vec t(2);
    t << ut(rng), ut(rng);
    auto rc = rho_remainder(pd, sr.sigma, t);

    CVec s(2);
    for (int i = 0; i < 2; ++i) s(i) = cplx(sr.sigma(i), t(i));
    cplx lhs = alpha_eval_complex(w, s);
    for (int i = 0; i < 2; ++i) lhs -= cplx(0.0, 1.0) * (pd.n() * y(i)) * t(i);
    lhs -= sr.alpha_value;
    // alpha(sigma+iT) - i ny.T - alpha(sigma) = -H(T)/2 + rho(T)
    Vec st = pd.Qcal * t;
    double ht = 0.0;
    for (int w_i = 0; w_i < 3; ++w_i)
      ht += pd.m_w(w_i) * alpha_kappa((pd.Qcal * sr.sigma)(w_i), pd.kappa_w(w_i), 2) * st(w_i) *
            st(w_i);
    cplx want = -0.5 * ht + rc.rho_total;
    CHECK(std::abs(lhs - want) < 1e-10 * std::max(1.0, std::abs(want)));

    // n T_1 = sum m_w S_w(T)
    CHECK(pd.n() * t(0) == Approx((pd.m_w.array() * st.array()).sum()).margin(1e-12));
  }
}

TEST_CASE("dominant minor inequality") {
  Mat m(2, 1);
  m << 1.0, 2.0;
  Vec a(2);
  a << 1.0, 1.0;
  std::vector<Vec> ts;
  Vec t1(1);
  t1 << 0.7;
  ts.push_back(t1);
  auto res = max_minor_property(m, a, ts);
  CHECK(res.eta0 == std::vector<int>{1});
  CHECK(res.pass);

  std::mt19937_64 rng(9);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> ua(0.1, 5.0);
  for (int trial = 0; trial < 30; ++trial) {
    Mat mm(6, 3);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 3; ++j) mm(i, j) = g(rng);
    Vec aa(6);
    for (int i = 0; i < 6; ++i) aa(i) = ua(rng);
    std::vector<Vec> samples;
    for (int s = 0; s < 200; ++s) {
      Vec t(3);
      for (int j = 0; j < 3; ++j) t(j) = g(rng);
      samples.push_back(t);
    }
    auto r = max_minor_property(mm, aa, samples);
    CHECK(r.pass);
    auto r_scaled = max_minor_property(mm, 3.7 * aa, samples);
    CHECK(r_scaled.eta0 == r.eta0);
  }

  Mat rank_def(3, 2);
  rank_def << 1, 2, 2, 4, 3, 6;
  CHECK_THROWS_AS(max_minor_property(rank_def, Vec::Ones(3), ts), Error);
}

TEST_CASE("contour closure at k = 1") {
  for (double m : {1000.0, 4000.0}) {
    for (double kappa : {0.5, 1.0}) {
      PlaceDataSet pd = single_fiber(m, kappa);
      Vec y(1);
      y << digamma(2.0);
      auto bd = asymptotic_breakdown(pd, y, 1.0);
      auto ct = direct_contour(pd, y);
      INFO("m=" << m << " kappa=" << kappa << " ratio=" << ct.ratio_to_i1);
      CHECK(std::abs(ct.ratio_to_i1 - 1.0) <= bd.error_budget());
      CHECK(bd.error_budget() <= 0.05);
      CHECK(ct.imag_rel < 1e-9);
      CHECK(ct.tail_estimate < 1e-10);
    }
  }
}

TEST_CASE("tiny-m contour closes the Mellin loop") {
  // phi(x) := direct(y)/(2pi) with x = e^(3y) must Mellin-transform back to
  // Gamma(sigma)^3.
  PlaceDataSet pd = single_fiber(3.0, 1.0);
  auto phi = [&](double u) {  // u = log x
    Vec y(1);
    y << u / 3.0;
    auto ct = direct_contour(pd, y);
    return ct.ratio_to_i1 * std::exp(ct.log_i1) / (2.0 * M_PI);
  };
  double sigma_probe = 1.1;
  quad::Options opt;
  opt.rel_tol = 1e-8;
  opt.abs_tol = 1e-12;
  double got = quad::integrate_line<double>(
      [&](double u) { return phi(u) * std::exp(sigma_probe * u); }, 2.0, opt);
  double want = std::exp(3.0 * log_gamma(sigma_probe));
  CHECK(got == Approx(want).epsilon(1e-6));
}

TEST_CASE("psi triple agreement for the real quadratic field") {
  const auto& entry = corpus_entry("real-quadratic-sqrt2");
  auto geo = complement_basis(entry.field(), entry.units);
  Vec s_probe(1);
  s_probe << 2.0;
  for (double hval : {0.6, 1.0, 1.7}) {
    Vec h(1);
    h << hval;
    auto pt = psi_triple(geo, h, s_probe);
    INFO("h=" << hval << " direct=" << pt.direct << " im=" << pt.inverse_mellin
              << " rt=" << pt.mellin_roundtrip);
    CHECK(pt.max_rel_spread < 1e-6);
    if (hval == 1.0) {
      // closed transform at s = 2: sqrt(2)/4
      CHECK(pt.mt_closed == Approx(std::sqrt(2.0) / 4.0).epsilon(1e-12));
    }
    CHECK(pt.mt_closed == Approx(pt.mt_quadrature).epsilon(1e-6));
  }
}

TEST_CASE("psi of the trivial subgroup is a pure Gaussian value") {
  const auto& entry = corpus_entry("real-quadratic-sqrt2");
  auto geo = complement_basis(entry.field(), {});
  REQUIRE(geo.k == 2);
  Vec h(2);
  h << 1.3, 0.8;
  Vec s_probe(2);
  s_probe << 1.1, 0.4;
  auto pt = psi_triple(geo, h, s_probe);
  Vec sh = splitting_image(geo, h);
  double want = std::exp(-(geo.e.array() * sh.array().square()).sum());
  CHECK(pt.direct == Approx(want).epsilon(1e-12));
  CHECK(pt.max_rel_spread < 1e-6);
  CHECK(pt.mt_closed == Approx(pt.mt_quadrature).epsilon(1e-5));
}

TEST_CASE("rate constants of the final bound") {
  CHECK(rate_exponent(0.0) >= std::log(2.3));
  CHECK(rate_exponent(0.25) > 0.1);
  CHECK(std::exp(0.0955) > 1.1);
  // cross-check f(0) against the oracle stack
  oracle::mpreal x("0.51");
  double f0 = static_cast<double>(oracle::log_gamma(x) - oracle::mpreal("0.51") * oracle::polygamma(x, 0)) -
              std::log(2.0);
  CHECK(rate_exponent(0.0) == Approx(f0).epsilon(1e-12));
}

TEST_CASE("certified pipeline on the corpus") {
  for (const char* label : {"real-quadratic-sqrt2", "cubic-totally-real", "quintic-trinomial"}) {
    const auto& entry = corpus_entry(label);
    auto geo = complement_basis(entry.field(), entry.units);
    REQUIRE(geo.k == 1);  // full-rank unit data
    auto geof = with_fibers(std::move(geo), trivial_partition(entry.field()));
    auto cb = certified_lower_bound(geof, 1000.0);
    INFO(label << ": bound=" << cb.bound << " covol="
               << (cb.covolume ? *cb.covolume : -1.0) << " sigma1=" << cb.sigma1);
    CHECK(cb.sigma1_ok);
    CHECK(cb.y1_ok);
    CHECK(cb.y1 > -2.0);
    CHECK(cb.y1 < -1.0);
    CHECK(!cb.precondition_met);  // desk-scale fields are far below N0
    REQUIRE(cb.covolume.has_value());
    CHECK(cb.consistent);
    CHECK(cb.bound <= *cb.covolume);
    CHECK(cb.rate > 1.0);
  }
  auto geo_nofib = complement_basis(corpus_entry("real-quadratic-sqrt2").field(),
                                    corpus_entry("real-quadratic-sqrt2").units);
  CHECK_THROWS_AS(certified_lower_bound(geo_nofib, 1000.0), Error);
}

TEST_CASE("rank limits of the quadrature routes") {
  std::mt19937_64 rng(77);
  PlaceDataSet pd = random_place_data(rng, 5, 3);
  Vec y = Vec::Zero(3);
  y(0) = -0.5;
  CHECK_THROWS_AS(direct_contour(pd, y), Error);

  const auto& entry = corpus_entry("quintic-totally-real");
  auto geo = complement_basis(entry.field(), {entry.units[0]});  // k = 4
  Vec h = Vec::Ones(geo.k);
  Vec s_probe = Vec::Ones(geo.k);
  CHECK_THROWS_AS(psi_triple(geo, h, s_probe), Error);
}

TEST_CASE("bounds shrink as m grows") {
  Vec y(1);
  y << digamma(2.0);
  double prev2 = 1e300, prev3 = 1e300, prev4 = 1e300;
  for (double m : {1000.0, 2000.0, 4000.0, 8000.0}) {
    PlaceDataSet pd = single_fiber(m, 0.75);
    auto tb = tail_bounds_i2_i3(pd, y, 1.0);
    auto ib = inner_bound_i4(pd, 1.0);
    CHECK(tb.i2_over_i1 >= 0.0);
    CHECK(tb.i2_over_i1 < prev2);
    CHECK(tb.i3_over_i1 < prev3);
    CHECK(ib.i4_over_i1 < prev4);
    prev2 = tb.i2_over_i1;
    prev3 = tb.i3_over_i1;
    prev4 = ib.i4_over_i1;
  }
}
