// covol: batch verification front end. Every subcommand reads JSON inputs,
// runs its checks, prints a human summary, and writes a JSON report (CSV for
// grids). Exit status: 0 all checks pass, 1 a check failed, 2 bad input.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "covol/asymptotics.hpp"
#include "covol/mahler.hpp"
#include "covol/parallel.hpp"
#include "covol/report.hpp"

using namespace covol;

namespace {

constexpr std::uint64_t kDefaultSeed = 0x5eed5eedULL;

void print_summary(const Report& rep) {
  for (const auto& r : rep.records) {
    std::printf("[%s] %-46s lhs=%-14.6g rhs=%-14.6g margin=%.3g\n", r.pass ? "PASS" : "FAIL",
                r.check.c_str(), r.lhs, r.rhs, r.margin);
  }
  std::printf("%s: %zu checks, %s\n", rep.command.c_str(), rep.records.size(),
              rep.all_pass() ? "all passed" : "FAILURES PRESENT");
}

int finish(Report& rep, const std::string& out_path) {
  print_summary(rep);
  if (!out_path.empty()) {
    rep.write(out_path);
    std::printf("report written to %s\n", out_path.c_str());
  }
  return rep.all_pass() ? 0 : 1;
}

std::vector<double> parse_grid_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(std::stod(tok));
  }
  require(!out.empty(), Errc::ParseError, "empty grid list");
  return out;
}

// ---------- field ----------

int run_field(const std::string& corpus_path, int samples, std::uint64_t seed,
              const std::string& out_path) {
  auto corpus = load_corpus(corpus_path);
  Report rep;
  rep.command = "field";
  rep.config = {{"corpus", corpus_path}, {"samples", samples}, {"seed", seed}};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> num(-4, 4), den(1, 3);
  for (const auto& entry : corpus) {
    const auto& f = entry.field();
    nlohmann::json params = {{"field", f.label}};
    rep.records.push_back(record_le("degree_split_r1_2r2", std::abs(f.r1 + 2 * f.r2 - f.degree),
                                    0.0, params));
    double max_res = 0.0;
    for (const auto& z : f.roots) max_res = std::max(max_res, std::abs(poly_eval(f.min_poly.coeffs, z)));
    rep.records.push_back(record_le("root_residual", max_res, 1e-10, params));

    double worst_rel = 0.0;
    for (int s = 0; s < samples; ++s) {
      std::vector<Rat> coords;
      for (int i = 0; i < f.degree; ++i) coords.push_back(Rat(num(rng), den(rng)));
      auto a = make_element(f, coords);
      if (a.is_zero()) continue;
      auto av = abs_values(a);
      double exact = std::abs(to_double(av.norm_exact));
      if (exact == 0.0) continue;
      worst_rel = std::max(worst_rel, std::abs(av.norm_float - exact) / exact);
    }
    rep.records.push_back(record_le("product_formula_rel_err", worst_rel, 1e-9, params));

    double worst_sum = 0.0;
    bool all_units = true;
    for (const auto& u : entry.units) {
      all_units = all_units && classify_unit(u) == UnitClass::Unit;
      worst_sum = std::max(worst_sum, std::abs(log_embed(u).values.sum()));
    }
    rep.records.push_back(record_le("unit_log_sum", worst_sum, 1e-9, params));
    rep.records.push_back(record_ge("units_classified", all_units ? 1.0 : 0.0, 1.0, params));
  }
  return finish(rep, out_path);
}

// ---------- units ----------

int run_units(const std::string& corpus_path, int mu_bound, std::uint64_t seed,
              const std::string& out_path) {
  auto corpus = load_corpus(corpus_path);
  Report rep;
  rep.command = "units";
  rep.config = {{"corpus", corpus_path}, {"mu_bound", mu_bound}, {"seed", seed}};
  for (const auto& entry : corpus) {
    if (entry.units.empty()) continue;
    const auto& f = entry.field();
    nlohmann::json params = {{"field", f.label}};
    auto lat = unit_log_lattice(entry.units);
    auto wn = wedge_norms(lat.basis);
    rep.records.push_back(record_ge("wedge_one_ge_two", wn.one_norm, wn.two_norm, params, 1e-12));
    if (f.totally_real()) {
      auto pr = pohst_check(f, entry.units);
      for (const auto& c : pr.records) {
        ReportRecord r;
        r.check = "pohst/" + c.check;
        r.params = params;
        r.lhs = c.value;
        r.rhs = c.bound;
        r.margin = c.margin;
        r.pass = c.pass;
        rep.records.push_back(std::move(r));
      }
    }
    double mu1 = mu_1k_search(lat, 1, mu_bound);
    rep.records.push_back(record_ge("mu_11_search_ge_two_norm_min", mu1, 0.0, params));
  }

  // Exact pure-wedge round trips on seeded random lattices.
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> entry_d(-9, 9), dim_d(2, 5);
  int failures = 0;
  for (int trial = 0; trial < 50; ++trial) {
    int n = dim_d(rng);
    IMat basis = imat_identity(n);
    std::vector<Int> omega(static_cast<std::size_t>(n));
    bool zero = true;
    for (auto& c : omega) {
      c = entry_d(rng);
      zero = zero && (c == 0);
    }
    if (zero) omega[0] = 1;
    try {
      auto pw = pure_wedge_extract(basis, omega);
      IMat rows(pw.basis.begin(), pw.basis.end() - 1);
      auto got = integer_wedge_coords(rows);
      for (std::size_t i = 0; i < omega.size(); ++i)
        if (pw.d * got[i] != omega[i]) ++failures;
    } catch (const Error&) {
      ++failures;
    }
  }
  rep.records.push_back(record_le("pure_wedge_round_trip_failures", failures, 0.0));
  return finish(rep, out_path);
}

// ---------- geometry ----------

int run_geometry(const std::string& corpus_path, const std::string& out_path) {
  auto corpus = load_corpus(corpus_path);
  Report rep;
  rep.command = "geometry";
  rep.config = {{"corpus", corpus_path}};
  for (const auto& entry : corpus) {
    const auto& f = entry.field();
    nlohmann::json params = {{"field", f.label}};
    auto geo = complement_basis(f, entry.units);
    params["k"] = geo.k;
    params["det_qtq"] = det_qtq(geo);
    params["c"] = geo.c;
    double worst = 0.0;
    for (int i = 0; i < geo.k; ++i)
      for (int j = i + 1; j < geo.k; ++j)
        worst = std::max(worst, std::abs(weighted_inner(geo.e, geo.Q.col(i), geo.Q.col(j))));
    rep.records.push_back(record_le("q_orthogonality_residual", worst, 1e-10, params));

    if (entry.subfield_fibers && geo.k >= 2) {
      try {
        auto fd = fiber_reduce(geo, *entry.subfield_fibers);
        double lhs = det_qtq(geo);
        double rhs = (fd.Qcal.transpose() * fd.Qcal).determinant();
        for (std::size_t w = 0; w < fd.fibers.size(); ++w) rhs *= fd.r1w[w] + fd.r2w[w];
        rep.records.push_back(
            record_le("fiber_det_identity_rel_err", std::abs(lhs - rhs) / std::max(1.0, lhs),
                      1e-9, params));
      } catch (const Error& e) {
        ReportRecord r;
        r.check = "fiber_reduce";
        r.params = params;
        r.extra = {{"note", std::string("skipped: ") + e.what()}};
        r.pass = true;
        rep.records.push_back(std::move(r));
      }
    }
  }
  return finish(rep, out_path);
}

// ---------- saddle ----------

int run_saddle(const std::string& corpus_path, int samples, std::uint64_t seed,
               const std::string& out_path) {
  auto corpus = load_corpus(corpus_path);
  Report rep;
  rep.command = "saddle";
  rep.config = {{"corpus", corpus_path}, {"samples", samples}, {"seed", seed}};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uy(-2.0, 1.0);
  for (const auto& entry : corpus) {
    const auto& f = entry.field();
    auto geo = complement_basis(f, entry.units);
    auto w = weights_per_place(geo);
    double worst_res = 0.0, worst_sigma1 = 1e300, worst_alpha = 1e300, worst_row = 1e300;
    int solved = 0;
    for (int s = 0; s < samples; ++s) {
      Vec y(geo.k);
      y(0) = uy(rng);
      for (int i = 1; i < geo.k; ++i) y(i) = 0.4 * uy(rng);
      SaddleResult res;
      try {
        res = solve_saddle({w, w.n() * y});
      } catch (const Error&) {
        continue;
      }
      ++solved;
      worst_res = std::max(worst_res, res.residual);
      auto sb = saddle_bounds(w, res, y(0));
      worst_sigma1 = std::min(worst_sigma1, sb.sigma1_margin);
      worst_alpha = std::min(worst_alpha, sb.alpha_margin);
      for (double m : sb.row_margins) worst_row = std::min(worst_row, m);
    }
    nlohmann::json params = {{"field", f.label}, {"solved", solved}};
    rep.records.push_back(record_le("saddle_residual", worst_res, 1e-10, params));
    rep.records.push_back(record_ge("sigma1_lower_margin", worst_sigma1, 0.0, params, 1e-9));
    rep.records.push_back(record_ge("alpha_lower_margin", worst_alpha, 0.0, params, 1e-9));
    rep.records.push_back(record_ge("row_lower_margin", worst_row, 0.0, params, 1e-12));
  }
  return finish(rep, out_path);
}

// ---------- verify-asymptotics ----------

int run_verify(const std::vector<double>& ms, const std::vector<double>& kappas,
               const std::vector<double>& rs, const std::vector<double>& ds, int samples,
               double t_max, std::uint64_t seed, const std::string& out_path,
               const std::string& csv_path) {
  Report rep;
  rep.command = "verify-asymptotics";
  rep.config = {{"m", ms},     {"kappa", kappas},    {"r", rs},    {"D", ds},
                {"samples", samples}, {"tmax", t_max}, {"seed", seed}};

  struct Cell {
    double m, kappa, r, d;
    GammaLineCheck which;
    GammaLineResult result;
  };
  std::vector<Cell> cells;
  for (double m : ms)
    for (double kappa : kappas)
      for (double r : rs) {
        cells.push_back({m, kappa, r, 0.0, GammaLineCheck::Line, {}});
        cells.push_back({m, kappa, r, 0.0, GammaLineCheck::LineWeighted, {}});
        for (double d : ds) {
          cells.push_back({m, kappa, r, d, GammaLineCheck::TailLine, {}});
          cells.push_back({m, kappa, r, d, GammaLineCheck::TailGauss, {}});
        }
      }
  parallel_for(static_cast<int>(cells.size()), [&](int i) {
    Cell& c = cells[static_cast<std::size_t>(i)];
    c.result = onedim_gamma_line(c.m, c.kappa, c.r, c.d, c.which);
  });
  const char* names[] = {"gamma_line", "gamma_line_weighted", "gamma_tail_line",
                         "gamma_tail_gauss"};
  for (const auto& c : cells) {
    nlohmann::json params = {{"m", c.m}, {"kappa", c.kappa}, {"r", c.r}};
    if (c.d > 0.0) params["D"] = c.d;
    rep.records.push_back(
        record_le(names[static_cast<int>(c.which)], c.result.lhs, c.result.rhs, params));
  }

  // det H agreement, moment inequalities, rho claims, minor lemma.
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uq(-1.5, 1.5), um(1.0, 40.0), uk(0.5, 1.0),
      ub(0.5, 3.0), ut(-0.8, 0.8);
  double worst_det_rel = 0.0, worst_rho = 1e300, worst_minor = 1e300;
  bool moments_ok = true;
  for (int s = 0; s < samples; ++s) {
    int k = 1 + static_cast<int>(rng() % 3);
    int nw = k + 1 + static_cast<int>(rng() % 3);
    Mat q(nw, k);
    Vec m(nw), kap(nw), b(nw);
    for (int w = 0; w < nw; ++w) {
      q(w, 0) = 1.0;
      for (int j = 1; j < k; ++j) q(w, j) = uq(rng);
      m(w) = std::floor(um(rng));
      kap(w) = uk(rng);
      b(w) = ub(rng);
    }
    PlaceDataSet pd;
    try {
      pd = make_place_data(q, m, kap);
    } catch (const Error&) {
      continue;
    }
    Vec sigma = Vec::Zero(k);
    sigma(0) = 1.1;
    if (!((pd.Qcal * sigma).array() > 0.05).all()) continue;
    auto dh = det_h(pd, sigma);
    worst_det_rel = std::max(worst_det_rel, std::abs(dh.direct - dh.cauchy_binet) /
                                                std::max(1.0, dh.direct));
    auto m4 = gaussian_moments(b, q, GaussianMoment::FourthAt, 0);
    auto m6 = gaussian_moments(b, q, GaussianMoment::SixthAt, 0);
    moments_ok = moments_ok && m4.value <= m4.bound * (1.0 + 1e-12) &&
                 m6.value <= m6.bound * (1.0 + 1e-12);
    Vec t(k);
    for (int j = 0; j < k; ++j) t(j) = ut(rng);
    auto rc = rho_remainder(pd, sigma, t);
    worst_rho = std::min(worst_rho, rc.worst_violation);

    Vec a(nw);
    for (int w = 0; w < nw; ++w) a(w) = std::abs(ub(rng));
    std::vector<Vec> tsamples;
    for (int j = 0; j < 20; ++j) {
      Vec tt(k);
      for (int c = 0; c < k; ++c) tt(c) = uq(rng);
      tsamples.push_back(tt);
    }
    auto mm = max_minor_property(q, a, tsamples);
    worst_minor = std::min(worst_minor, mm.min_margin);
  }
  rep.records.push_back(record_le("det_h_two_route_rel_err", worst_det_rel, 1e-10));
  rep.records.push_back(record_ge("gaussian_moment_inequalities", moments_ok ? 1.0 : 0.0, 1.0));
  rep.records.push_back(record_ge("rho_claims_min_margin", worst_rho, 0.0));
  rep.records.push_back(record_ge("max_minor_min_margin", worst_minor, 0.0, {}, 1e-9));

  // Contour closure at k = 1 for the m values that satisfy the preconditions.
  for (double m : ms) {
    if (m < 1000.0) continue;
    for (double kappa : kappas) {
      PlaceDataSet pd = single_fiber(m, kappa);
      Vec y(1);
      y << digamma(2.0);
      double d_param = ds.empty() ? 1.0 : ds.front();
      auto bd = asymptotic_breakdown(pd, y, d_param);
      ContourOptions copt;
      copt.t_max = t_max;
      auto ct = direct_contour(pd, y, copt);
      nlohmann::json params = {{"m", m}, {"kappa", kappa}, {"D", d_param}};
      rep.records.push_back(record_le("contour_closure", std::abs(ct.ratio_to_i1 - 1.0),
                                      bd.error_budget(), params));
    }
  }

  if (!csv_path.empty()) {
    std::ofstream csv(csv_path);
    csv << "check,m,kappa,r,D,lhs,rhs,margin,pass\n";
    for (const auto& c : cells) {
      csv << names[static_cast<int>(c.which)] << ',' << c.m << ',' << c.kappa << ',' << c.r << ','
          << c.d << ',' << c.result.lhs << ',' << c.result.rhs << ','
          << (c.result.rhs - c.result.lhs) << ',' << (c.result.pass ? 1 : 0) << "\n";
    }
    std::printf("grid CSV written to %s\n", csv_path.c_str());
  }
  return finish(rep, out_path);
}

// ---------- bound ----------

int run_bound(const std::string& corpus_path, double d_param, double n0,
              const std::string& out_path) {
  auto corpus = load_corpus(corpus_path);
  Report rep;
  rep.command = "bound";
  rep.config = {{"corpus", corpus_path}, {"D", d_param}, {"N0", n0}};
  for (const auto& entry : corpus) {
    const auto& f = entry.field();
    nlohmann::json params = {{"field", f.label}};
    SubgroupGeometry geo;
    try {
      geo = complement_basis(f, entry.units);
    } catch (const Error& e) {
      ReportRecord r;
      r.check = "bound";
      r.params = params;
      r.extra = {{"note", std::string("skipped: ") + e.what()}};
      r.pass = true;
      rep.records.push_back(std::move(r));
      continue;
    }
    std::vector<std::vector<int>> partition;
    if (geo.k == 1) partition = trivial_partition(f);
    else if (entry.subfield_fibers) partition = *entry.subfield_fibers;
    else {
      ReportRecord r;
      r.check = "bound";
      r.params = params;
      r.extra = {{"note", "skipped: units not full rank and no subfield fibers"}};
      r.pass = true;
      rep.records.push_back(std::move(r));
      continue;
    }
    auto cb = certified_lower_bound(with_fibers(std::move(geo), partition), n0);
    params["t"] = cb.t;
    params["sigma1"] = cb.sigma1;
    params["L"] = cb.l_const;
    params["rate"] = cb.rate;
    nlohmann::json extra = {{"conditional", !cb.precondition_met},
                            {"m", cb.m},
                            {"K_degree", cb.k_degree}};
    auto r1 = record_ge("sigma1_ge_0.51", cb.sigma1, 0.51, params, 1e-9);
    r1.extra = extra;
    rep.records.push_back(std::move(r1));
    rep.records.push_back(record_ge("y1_gt_-2", cb.y1, -2.0, params));
    rep.records.push_back(record_le("y1_lt_-1", cb.y1, -1.0, params));
    if (cb.covolume) {
      auto r2 = record_le("bound_le_covolume", cb.bound, *cb.covolume, params);
      r2.extra = extra;
      rep.records.push_back(std::move(r2));
    }
  }
  return finish(rep, out_path);
}

// ---------- mahler ----------

int run_mahler(const std::string& poly_path, const std::string& method, int log2_points,
               bool faces, const std::string& boyd_dir, const std::string& boyd_ks,
               std::uint64_t seed, const std::string& out_path) {
  auto p = load_polynomial(poly_path);
  Report rep;
  rep.command = "mahler";
  rep.config = {{"poly", poly_path},   {"method", method}, {"qmc_log2_points", log2_points},
                {"faces", faces},      {"boyd", boyd_dir}, {"boyd_k", boyd_ks},
                {"seed", seed}};
  QmcOptions qopt;
  qopt.log2_points = log2_points;
  qopt.seed = seed;

  nlohmann::json params = {{"vars", p.nvars}, {"terms", p.terms.size()}};
  double m_value = 0.0, m_error = 0.0;
  if (p.nvars == 1 || method == "auto") {
    auto mr = mahler_measure(p, qopt);
    m_value = mr.value;
    m_error = mr.error;
    params["method"] = (mr.method == MahlerMethod::ExactUnivariate)  ? "univariate"
                       : (mr.method == MahlerMethod::FiberJensen) ? "fiber-jensen"
                                                                  : "qmc";
  } else if (method == "qmc") {
    auto qm = mahler_qmc(p, qopt);
    m_value = qm.value;
    m_error = 3.0 * qm.std_error;
    params["method"] = "qmc";
  } else if (method == "jensen") {
    auto fj = mahler_fiber_jensen(p);
    m_value = fj.value;
    m_error = fj.error_estimate;
    params["method"] = "fiber-jensen";
  } else {
    fail(Errc::ParseError, "unknown method " + method);
  }
  auto rec = record_ge("mahler_measure_nonnegative", m_value, 0.0, params, m_error + 1e-9);
  rec.extra = {{"value", m_value}, {"error", m_error}};
  rep.records.push_back(std::move(rec));

  auto flags = reciprocal_and_kronecker(p);
  ReportRecord fr;
  fr.check = "flags";
  fr.params = params;
  fr.pass = true;
  fr.extra = {{"reciprocal", flags.reciprocal},
              {"numerically_cyclotomic", flags.numerically_cyclotomic}};
  rep.records.push_back(std::move(fr));

  if (faces) {
    QmcOptions face_opt = qopt;
    face_opt.log2_points = std::min(log2_points, 16);
    for (const auto& fi : face_inequality_report(p, m_value, m_error, face_opt)) {
      nlohmann::json fparams = {{"dim", fi.face.dim}, {"points", fi.face.point_indices.size()}};
      rep.records.push_back(record_le("face_measure_le_total", fi.face_measure,
                                      m_value + m_error + fi.face_error, fparams, 1e-9));
    }
  }
  if (!boyd_dir.empty()) {
    std::vector<long long> a, ks;
    for (double x : parse_grid_list(boyd_dir)) a.push_back(static_cast<long long>(x));
    for (double x : parse_grid_list(boyd_ks.empty() ? "8,16,32" : boyd_ks))
      ks.push_back(static_cast<long long>(x));
    for (const auto& step : boyd_limit(p, a, ks)) {
      nlohmann::json bp = {{"k", step.k}};
      rep.records.push_back(record_le("boyd_step_deviation", std::abs(step.measure - m_value),
                                      std::max(0.2, 40.0 / static_cast<double>(step.k)), bp));
    }
  }
  return finish(rep, out_path);
}

// ---------- bloch ----------

int run_bloch(int samples, std::uint64_t seed, const std::string& out_path) {
  Report rep;
  rep.command = "bloch";
  rep.config = {{"samples", samples}, {"seed", seed}};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ur(-3.0, 3.0);
  double worst_anti = 0.0, worst_five = 0.0;
  for (int s = 0; s < samples; ++s) {
    cplx z(ur(rng), ur(rng));
    worst_anti = std::max(worst_anti,
                          std::abs(bloch_relation_residual(BlochRelation::Antisymmetry, z)));
  }
  int pairs = 0;
  while (pairs < samples / 10 + 1) {
    cplx x(ur(rng), ur(rng)), y(ur(rng), ur(rng));
    if (std::abs(1.0 - x * y) < 1e-3) continue;
    worst_five = std::max(worst_five,
                          std::abs(bloch_relation_residual(BlochRelation::FiveTerm, x, y)));
    ++pairs;
  }
  rep.records.push_back(record_le("antisymmetry_residual", worst_anti, 1e-12));
  rep.records.push_back(record_le("five_term_residual", worst_five, 1e-10));
  rep.records.push_back(record_le("dilog_combination_residual",
                                  std::abs(bloch_relation_residual(BlochRelation::Identity32)),
                                  1e-9));
  auto rec = record_le("catalan_value", std::abs(bloch_wigner(cplx(0.0, 1.0)) - 0.9159655941772190),
                       1e-12);
  rep.records.push_back(std::move(rec));
  return finish(rep, out_path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"covol: unit-lattice covolume bounds, saddle-point asymptotics, and Mahler measures"};
  app.require_subcommand(1);

  std::string corpus_path, out_path, csv_path, poly_path;
  std::string method = "auto", boyd_dir, boyd_ks;
  std::string grid_m = "1000,2000", grid_kappa = "0.5,1", grid_r = "0.51,1", grid_d = "1";
  std::vector<std::string> grid_kv;
  int samples = 50, mu_bound = 3, log2_points = 20;
  bool faces = false;
  double d_param = 1.0, n0 = 1000.0, t_max = 0.0;
  std::uint64_t seed = kDefaultSeed;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--out", out_path, "JSON report path");
    cmd->add_option("--seed", seed, "RNG seed (recorded in the report)");
  };

  auto* c_field = app.add_subcommand("field", "build fields and verify norms/embeddings");
  c_field->add_option("--corpus", corpus_path, "corpus JSON")->required();
  c_field->add_option("--samples", samples, "random elements per field");
  add_common(c_field);

  auto* c_units = app.add_subcommand("units", "wedge norms, Pohst checks, pure wedges, mu search");
  c_units->add_option("--corpus", corpus_path, "corpus JSON")->required();
  c_units->add_option("--mu-bound", mu_bound, "coefficient bound for the mu search");
  add_common(c_units);

  auto* c_geom = app.add_subcommand("geometry", "complement bases and fiber reductions");
  c_geom->add_option("--corpus", corpus_path, "corpus JSON")->required();
  add_common(c_geom);

  auto* c_saddle = app.add_subcommand("saddle", "solve saddle problems and check the inequalities");
  c_saddle->add_option("--corpus", corpus_path, "corpus JSON")->required();
  c_saddle->add_option("--samples", samples, "y samples per geometry");
  add_common(c_saddle);

  auto* c_verify = app.add_subcommand("verify-asymptotics", "grid checks of the estimates");
  c_verify->add_option("--m", grid_m, "comma list of m values");
  c_verify->add_option("--kappa", grid_kappa, "comma list of kappa values");
  c_verify->add_option("--r", grid_r, "comma list of r values");
  c_verify->add_option("--D", grid_d, "comma list of D values");
  c_verify->add_option("--grid", grid_kv, "key=values pairs, e.g. m=1000,2000 kappa=0.5,1");
  c_verify->add_option("--samples", samples, "random instances for the pointwise checks");
  c_verify->add_option("--tmax", t_max, "fixed contour truncation window (0 = adaptive)");
  c_verify->add_option("--csv", csv_path, "CSV export of the grid");
  add_common(c_verify);

  auto* c_bound = app.add_subcommand("bound", "certified covolume lower bounds");
  c_bound->add_option("--corpus", corpus_path, "corpus JSON")->required();
  c_bound->add_option("--D", d_param, "tail tuning parameter (recorded)");
  c_bound->add_option("--N0", n0, "validity threshold N0");
  add_common(c_bound);

  auto* c_mahler = app.add_subcommand("mahler", "Mahler measures, faces, one-variable limits");
  c_mahler->add_option("--poly", poly_path, "polynomial JSON")->required();
  c_mahler->add_option("--method", method, "auto | qmc | jensen");
  c_mahler->add_option("--qmc-log2-points", log2_points, "log2 of QMC points");
  c_mahler->add_flag("--faces", faces, "enumerate Newton polytope faces");
  c_mahler->add_option("--boyd", boyd_dir, "direction a1,a2,... for one-variable limits");
  c_mahler->add_option("--k", boyd_ks, "comma list of k values for --boyd");
  add_common(c_mahler);

  auto* c_bloch = app.add_subcommand("bloch", "Bloch-Wigner dilogarithm relations");
  c_bloch->add_option("--samples", samples, "random sample count");
  add_common(c_bloch);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(c_field)) return run_field(corpus_path, samples, seed, out_path);
    if (app.got_subcommand(c_units)) return run_units(corpus_path, mu_bound, seed, out_path);
    if (app.got_subcommand(c_geom)) return run_geometry(corpus_path, out_path);
    if (app.got_subcommand(c_saddle)) return run_saddle(corpus_path, samples, seed, out_path);
    if (app.got_subcommand(c_verify)) {
      for (const auto& kv : grid_kv) {
        auto eq = kv.find('=');
        require(eq != std::string::npos, Errc::ParseError, "--grid entries must be key=values");
        std::string key = kv.substr(0, eq), vals = kv.substr(eq + 1);
        if (key == "m") grid_m = vals;
        else if (key == "kappa") grid_kappa = vals;
        else if (key == "r") grid_r = vals;
        else if (key == "D") grid_d = vals;
        else fail(Errc::ParseError, "unknown grid key " + key);
      }
      return run_verify(parse_grid_list(grid_m), parse_grid_list(grid_kappa),
                        parse_grid_list(grid_r), parse_grid_list(grid_d), samples, t_max, seed,
                        out_path, csv_path);
    }
    if (app.got_subcommand(c_bound)) return run_bound(corpus_path, d_param, n0, out_path);
    if (app.got_subcommand(c_mahler))
      return run_mahler(poly_path, method, log2_points, faces, boyd_dir, boyd_ks, seed, out_path);
    if (app.got_subcommand(c_bloch)) return run_bloch(samples, seed, out_path);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.code() == Errc::ParseError ? 2 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
