#pragma once

// Number fields from integer polynomials: archimedean places with their
// multipliers, element absolute values, exact norms via resultants, and the
// two logarithmic embeddings (with and without the place multiplier).

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "covol/common.hpp"
#include "covol/exactlin.hpp"
#include "covol/specfun.hpp"

namespace covol {

struct IntPolynomial {
  std::vector<Int> coeffs;  // constant term first

  int degree() const { return poly_deg(coeffs); }
};

struct Place {
  PlaceKind kind;
  cplx root;  // one representative root (Im > 0 for complex places)
  int e;      // 1 or 2
};

struct NumberField {
  IntPolynomial min_poly;
  int degree = 0;
  std::vector<cplx> roots;  // all degree() roots
  std::vector<Place> places;
  int r1 = 0, r2 = 0;
  std::string label;

  int num_places() const { return static_cast<int>(places.size()); }
  bool totally_real() const { return r2 == 0; }
};

struct FieldElement {
  const NumberField* field = nullptr;
  std::vector<Rat> coords;  // length = degree, constant term first

  bool is_zero() const {
    for (const auto& c : coords)
      if (c != 0) return false;
    return true;
  }
};

enum class LogFlavor { WeightedLog, PlainLog };  // with / without the e_v factor

struct LogVector {
  Vec values;  // per place
  LogFlavor flavor = LogFlavor::WeightedLog;
};

enum class UnitClass { NotUnit, Unit, RootOfUnity };

namespace detail {

// Deterministic classification of a root list into real roots and conjugate
// pairs. Order-independent: reals sorted by value, complex representatives by
// (Re, Im), so (r1, r2) never depends on the input ordering.
inline std::vector<Place> classify_roots(std::vector<cplx> roots) {
  double scale = 0.0;
  for (const auto& z : roots) scale = std::max(scale, std::abs(z));
  scale = std::max(scale, 1.0);
  const double tol = 1e-8 * scale;

  std::vector<cplx> reals, uppers;
  for (const auto& z : roots) {
    double im = std::abs(z.imag());
    if (im <= tol) {
      reals.push_back(cplx(z.real(), 0.0));
    } else if (im <= 10.0 * tol) {
      fail(Errc::AmbiguousPairing, "root with borderline imaginary part " + std::to_string(im));
    } else if (z.imag() > 0.0) {
      uppers.push_back(z);
    }
  }
  const int n = static_cast<int>(roots.size());
  int r1 = static_cast<int>(reals.size());
  int r2 = static_cast<int>(uppers.size());
  if (r1 + 2 * r2 != n)
    fail(Errc::AmbiguousPairing, "conjugate pairing failed: r1=" + std::to_string(r1) +
                                     " r2=" + std::to_string(r2) + " n=" + std::to_string(n));
  std::sort(reals.begin(), reals.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
  std::sort(uppers.begin(), uppers.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  std::vector<Place> places;
  for (const auto& z : reals) places.push_back({PlaceKind::Real, z, 1});
  for (const auto& z : uppers) places.push_back({PlaceKind::Complex, z, 2});
  return places;
}

}  // namespace detail

// Companion-matrix roots with one Newton polish per root.
inline std::vector<cplx> poly_roots(const std::vector<Int>& coeffs) {
  std::vector<Int> p = coeffs;
  poly_trim(p);
  const int n = poly_deg(p);
  require(n >= 1, Errc::DomainError, "degree must be >= 1");
  Mat comp = Mat::Zero(n, n);
  double lead = to_double(p.back());
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) comp(i, n - 1) = -to_double(p[static_cast<std::size_t>(i)]) / lead;
  Eigen::EigenSolver<Mat> es(comp, /*computeEigenvectors=*/false);
  std::vector<cplx> roots;
  std::vector<Int> dp = poly_derivative(p);
  for (int i = 0; i < n; ++i) {
    cplx z = es.eigenvalues()(i);
    for (int it = 0; it < 3; ++it) {
      cplx f = poly_eval(p, z), df = poly_eval(dp, z);
      if (std::abs(df) == 0.0) break;
      z -= f / df;
    }
    roots.push_back(z);
  }
  return roots;
}

inline NumberField build_field(const IntPolynomial& min_poly, const std::string& label = "") {
  std::vector<Int> p = min_poly.coeffs;
  poly_trim(p);
  require(poly_deg(p) >= 1, Errc::DomainError, "min_poly must have degree >= 1");
  require(poly_squarefree(p), Errc::NotSquarefree, "min_poly has a repeated factor");

  NumberField f;
  f.min_poly.coeffs = p;
  f.degree = poly_deg(p);
  f.roots = poly_roots(p);
  f.label = label;

  double cscale = 0.0;
  for (const auto& c : p) cscale = std::max(cscale, std::abs(to_double(c)));
  for (const auto& z : f.roots) {
    double res = std::abs(poly_eval(p, z));
    double zpow = std::pow(std::max(1.0, std::abs(z)), f.degree);
    if (!(res < 1e-10 * cscale * zpow))
      fail(Errc::RootFindingFailed, "root residual " + std::to_string(res));
  }
  f.places = detail::classify_roots(f.roots);
  for (const auto& pl : f.places) (pl.kind == PlaceKind::Real ? f.r1 : f.r2) += 1;
  return f;
}

inline FieldElement make_element(const NumberField& f, std::vector<Rat> coords) {
  require(static_cast<int>(coords.size()) == f.degree, Errc::LengthMismatch,
          "coordinate length must equal the field degree");
  return FieldElement{&f, std::move(coords)};
}

inline FieldElement element_one(const NumberField& f) {
  std::vector<Rat> c(static_cast<std::size_t>(f.degree), Rat(0));
  c[0] = 1;
  return FieldElement{&f, std::move(c)};
}

// Exact norm: Res(f, num(g)) / (lc(f)^deg(g) * den^degree).
inline Rat norm_exact(const FieldElement& a) {
  const NumberField& f = *a.field;
  Int den = 1;
  for (const auto& c : a.coords) den = boost::multiprecision::lcm(den, boost::multiprecision::denominator(c));
  std::vector<Int> g;
  for (const auto& c : a.coords)
    g.push_back(boost::multiprecision::numerator(c) * (den / boost::multiprecision::denominator(c)));
  poly_trim(g);
  if (g.empty()) return Rat(0);
  Rat out(resultant(f.min_poly.coeffs, g));
  out /= Rat(boost::multiprecision::pow(f.min_poly.coeffs.back(), static_cast<unsigned>(poly_deg(g))));
  out /= Rat(boost::multiprecision::pow(den, static_cast<unsigned>(f.degree)));
  return out;
}

struct AbsValues {
  Vec abs_v;          // |a|_v per place
  double norm_float;  // prod |a|_v^(e_v)
  Rat norm_exact;     // signed exact norm
};

inline AbsValues abs_values(const FieldElement& a) {
  require(!a.is_zero(), Errc::ZeroElement, "abs_values of zero");
  const NumberField& f = *a.field;
  AbsValues out;
  out.abs_v.resize(f.num_places());
  double prod = 1.0;
  for (int i = 0; i < f.num_places(); ++i) {
    double av = std::abs(poly_eval(a.coords, f.places[static_cast<std::size_t>(i)].root));
    out.abs_v(i) = av;
    prod *= std::pow(av, f.places[static_cast<std::size_t>(i)].e);
  }
  out.norm_float = prod;
  out.norm_exact = norm_exact(a);
  return out;
}

inline LogVector log_embed(const FieldElement& a, LogFlavor flavor = LogFlavor::WeightedLog) {
  require(!a.is_zero(), Errc::ZeroElement, "log_embed of zero");
  const NumberField& f = *a.field;
  LogVector lv;
  lv.flavor = flavor;
  lv.values.resize(f.num_places());
  for (int i = 0; i < f.num_places(); ++i) {
    double av = std::abs(poly_eval(a.coords, f.places[static_cast<std::size_t>(i)].root));
    double e = (flavor == LogFlavor::WeightedLog) ? f.places[static_cast<std::size_t>(i)].e : 1;
    lv.values(i) = e * std::log(av);
  }
  return lv;
}

inline UnitClass classify_unit(const FieldElement& a) {
  require(!a.is_zero(), Errc::ZeroElement, "classify_unit of zero");
  const NumberField& f = *a.field;
  Rat nm = norm_exact(a);
  if (boost::multiprecision::abs(nm) != 1) return UnitClass::NotUnit;

  for (int i = 0; i < f.num_places(); ++i) {
    double av = std::abs(poly_eval(a.coords, f.places[static_cast<std::size_t>(i)].root));
    if (std::abs(av - 1.0) > 1e-10) return UnitClass::Unit;
  }
  // All absolute values numerically 1: check a^m == 1 exactly, m <= 2 n^2.
  std::vector<Rat> one(static_cast<std::size_t>(f.degree), Rat(0));
  one[0] = 1;
  std::vector<Rat> pw = one;
  const int bound = 2 * f.degree * f.degree;
  for (int m = 1; m <= bound; ++m) {
    pw = poly_mulmod(pw, a.coords, f.min_poly.coeffs);
    poly_trim(pw);
    if (pw.size() == 1 && pw[0] == 1) return UnitClass::RootOfUnity;
  }
  return UnitClass::Unit;
}

// ---------- corpus files ----------

struct CorpusEntry {
  std::shared_ptr<const NumberField> field_ptr;  // stable address for the units below
  std::vector<FieldElement> units;
  std::optional<std::vector<std::vector<int>>> subfield_fibers;
  std::optional<Int> discriminant;  // accepted as metadata, not used numerically

  const NumberField& field() const { return *field_ptr; }
};

namespace detail {

inline Rat parse_rational(const nlohmann::json& j) {
  if (j.is_number_integer()) return Rat(j.get<long long>());
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rat(Int(s));
    return Rat(Int(s.substr(0, slash)), Int(s.substr(slash + 1)));
  }
  fail(Errc::ParseError, "rational entries must be integers or \"p/q\" strings");
}

inline CorpusEntry parse_corpus_entry(const nlohmann::json& j) {
  require(j.contains("min_poly"), Errc::ParseError, "corpus entry needs min_poly");
  IntPolynomial mp;
  for (const auto& c : j.at("min_poly")) {
    if (c.is_number_integer()) mp.coeffs.push_back(Int(c.get<long long>()));
    else mp.coeffs.push_back(Int(c.get<std::string>()));
  }
  CorpusEntry entry;
  entry.field_ptr =
      std::make_shared<const NumberField>(build_field(mp, j.value("label", std::string{})));
  if (j.contains("units")) {
    for (const auto& u : j.at("units")) {
      std::vector<Rat> coords;
      for (const auto& c : u) coords.push_back(parse_rational(c));
      coords.resize(static_cast<std::size_t>(entry.field().degree), Rat(0));
      entry.units.push_back(make_element(entry.field(), coords));
    }
  }
  if (j.contains("subfield_fibers"))
    entry.subfield_fibers = j.at("subfield_fibers").get<std::vector<std::vector<int>>>();
  if (j.contains("discriminant")) {
    const auto& d = j.at("discriminant");
    entry.discriminant = d.is_number_integer() ? Int(d.get<long long>()) : Int(d.get<std::string>());
  }
  return entry;
}

}  // namespace detail

inline std::vector<CorpusEntry> load_corpus(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), Errc::ParseError, "cannot open corpus file " + path);
  nlohmann::json doc = nlohmann::json::parse(in);
  std::vector<CorpusEntry> out;
  const nlohmann::json* list = &doc;
  if (doc.is_object() && doc.contains("fields")) list = &doc.at("fields");
  if (list->is_array()) {
    for (const auto& j : *list) out.push_back(detail::parse_corpus_entry(j));
  } else {
    out.push_back(detail::parse_corpus_entry(*list));
  }
  return out;
}

}  // namespace covol
