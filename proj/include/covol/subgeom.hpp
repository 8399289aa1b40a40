#pragma once

// Geometry of a unit subgroup E inside the unit lattice of a number field:
// the e_v-weighted inner product, the orthogonal-complement basis Q with
// q_1 = (1,...,1), the measure constant c, the linear maps S_v, the domain
// D = { sigma : S_v(sigma) > 0 }, and reduction to subfield fibers.

#include <cmath>
#include <optional>
#include <vector>

#include "covol/common.hpp"
#include "covol/numfield.hpp"

namespace covol {

inline double weighted_inner(const Vec& e, const Vec& beta, const Vec& gamma) {
  require(beta.size() == gamma.size() && beta.size() == e.size(), Errc::LengthMismatch,
          "weighted_inner needs equal lengths");
  return (e.array() * beta.array() * gamma.array()).sum();
}

inline Vec place_multipliers(const NumberField& f) {
  Vec e(f.num_places());
  for (int i = 0; i < f.num_places(); ++i) e(i) = f.places[static_cast<std::size_t>(i)].e;
  return e;
}

inline double weighted_inner(const NumberField& f, const Vec& beta, const Vec& gamma) {
  return weighted_inner(place_multipliers(f), beta, gamma);
}

struct FiberData {
  std::vector<std::vector<int>> fibers;  // partition of the places of L
  std::vector<int> r1w, r2w, m_w;
  std::vector<double> kappa_w;
  Mat Qcal;  // |A_K| x k, rows are the common fiber rows of Q
};

struct SubgroupGeometry {
  const NumberField* field = nullptr;
  std::vector<FieldElement> units;  // generators of E
  int rank_e = 0;                   // j = rank of E
  int k = 0;                        // 1 + rank(O_L^* / E) = |A_L| - j
  Mat Q;           // |A_L| x k; first column all ones; <q_i, q_j> = 0 for i != j
  Vec d;           // d_j = <q_j, q_j>; d_1 = n, d_j = 1 for j >= 2
  double c = 0.0;  // 2^r2 sqrt(det(Q^T Q))
  Vec e;           // per-place multipliers
  int n = 0;       // field degree = sum of e_v
  std::optional<FiberData> fibers;
};

// Canonical complement basis: the kernel of the LOG(E) row matrix is fixed as
// a subspace, and Gram-Schmidt under <,> runs over the fixed candidate
// sequence (all-ones, P delta_0, P delta_1, ...), so the result does not
// depend on the order of the generators.
inline SubgroupGeometry complement_basis(const NumberField& field,
                                         const std::vector<FieldElement>& units) {
  SubgroupGeometry geo;
  geo.field = &field;
  geo.units = units;
  geo.e = place_multipliers(field);
  geo.n = field.degree;
  const int amb = field.num_places();

  Mat logs(amb, static_cast<int>(units.size()));
  for (std::size_t i = 0; i < units.size(); ++i)
    logs.col(static_cast<int>(i)) = log_embed(units[i], LogFlavor::WeightedLog).values;

  int j = 0;
  Mat proj = Mat::Identity(amb, amb);  // standard-orthogonal projector onto kernel
  if (!units.empty()) {
    Eigen::JacobiSVD<Mat> svd(logs, Eigen::ComputeFullU);
    double smax = svd.singularValues().maxCoeff();
    j = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()(i) > 1e-9 * smax) ++j;
    require(j == static_cast<int>(units.size()), Errc::DependentUnits,
            "unit generators are numerically dependent");
    Mat u1 = svd.matrixU().leftCols(j);
    proj -= u1 * u1.transpose();
  }
  require(j <= amb - 1, Errc::TrivialComplement, "units cannot span the whole place space");
  geo.rank_e = j;
  geo.k = amb - j;

  // Fixed candidate sequence: all-ones first, then projected coordinate axes.
  std::vector<Vec> qs;
  Vec ones = Vec::Ones(amb);
  require((proj * ones - ones).norm() < 1e-8 * std::sqrt(static_cast<double>(amb)),
          Errc::DependentUnits, "all-ones vector must lie in the complement (unit norms != 1?)");
  qs.push_back(ones);
  for (int axis = 0; axis < amb && static_cast<int>(qs.size()) < geo.k; ++axis) {
    Vec v = proj.col(axis);
    for (const Vec& q : qs) v -= (weighted_inner(geo.e, v, q) / weighted_inner(geo.e, q, q)) * q;
    double nrm2 = weighted_inner(geo.e, v, v);
    if (nrm2 > 1e-16 * static_cast<double>(amb)) qs.push_back(v / std::sqrt(nrm2));
  }
  require(static_cast<int>(qs.size()) == geo.k, Errc::DependentUnits,
          "complement basis construction degenerated");

  geo.Q.resize(amb, geo.k);
  geo.d.resize(geo.k);
  for (int i = 0; i < geo.k; ++i) {
    geo.Q.col(i) = qs[static_cast<std::size_t>(i)];
    geo.d(i) = weighted_inner(geo.e, geo.Q.col(i), geo.Q.col(i));
  }
  double det_qtq = (geo.Q.transpose() * geo.Q).determinant();
  geo.c = std::pow(2.0, field.r2) * std::sqrt(det_qtq);
  return geo;
}

inline double det_qtq(const SubgroupGeometry& geo) {
  return (geo.Q.transpose() * geo.Q).determinant();
}

// S(s) = Q s per place; with FiberData, Qcal s per fiber.
enum class SLevel { PerPlace, PerFiber };

inline CVec s_map(const SubgroupGeometry& geo, const CVec& s, SLevel level = SLevel::PerPlace) {
  require(s.size() == geo.k, Errc::LengthMismatch, "s must have k coordinates");
  if (level == SLevel::PerPlace) return geo.Q.cast<cplx>() * s;
  require(geo.fibers.has_value(), Errc::MissingFiberData, "fiber-level S needs FiberData");
  return geo.fibers->Qcal.cast<cplx>() * s;
}

inline Vec s_map(const SubgroupGeometry& geo, const Vec& sigma, SLevel level = SLevel::PerPlace) {
  require(sigma.size() == geo.k, Errc::LengthMismatch, "sigma must have k coordinates");
  if (level == SLevel::PerPlace) return geo.Q * sigma;
  require(geo.fibers.has_value(), Errc::MissingFiberData, "fiber-level S needs FiberData");
  return geo.fibers->Qcal * sigma;
}

inline bool domain_check(const SubgroupGeometry& geo, const Vec& sigma) {
  Vec sv = s_map(geo, sigma);
  return (sv.array() > 0.0).all();
}

// The explicit splitting (sigma(h))_v = prod_j h_j^(q_jv / d_j), h positive.
inline Vec splitting_image(const SubgroupGeometry& geo, const Vec& h) {
  require(h.size() == geo.k, Errc::LengthMismatch, "h must have k coordinates");
  Vec out = Vec::Zero(geo.Q.rows());
  for (int v = 0; v < geo.Q.rows(); ++v) {
    double acc = 0.0;
    for (int j = 0; j < geo.k; ++j) acc += std::log(h(j)) * geo.Q(v, j) / geo.d(j);
    out(v) = std::exp(acc);
  }
  return out;
}

// Validates the partition and assembles the fiber-level data. The identity
// det(Q^T Q) = det(Qcal^T Qcal) * prod_w (r1_w + r2_w) is asserted.
inline FiberData fiber_reduce(const SubgroupGeometry& geo,
                              const std::vector<std::vector<int>>& partition) {
  const NumberField& f = *geo.field;
  const int amb = f.num_places();
  std::vector<int> seen(static_cast<std::size_t>(amb), 0);
  for (const auto& fiber : partition) {
    require(!fiber.empty(), Errc::NotFiberConstant, "empty fiber");
    for (int v : fiber) {
      require(v >= 0 && v < amb, Errc::NotFiberConstant, "place index out of range");
      seen[static_cast<std::size_t>(v)] += 1;
    }
  }
  for (int v = 0; v < amb; ++v)
    require(seen[static_cast<std::size_t>(v)] == 1, Errc::NotFiberConstant,
            "partition must cover every place exactly once");

  FiberData fd;
  fd.fibers = partition;
  const int nw = static_cast<int>(partition.size());
  fd.Qcal.resize(nw, geo.k);
  double col_scale = geo.Q.cwiseAbs().maxCoeff();
  for (int w = 0; w < nw; ++w) {
    const auto& fiber = partition[static_cast<std::size_t>(w)];
    int r1 = 0, r2 = 0;
    for (int v : fiber)
      (f.places[static_cast<std::size_t>(v)].kind == PlaceKind::Real ? r1 : r2) += 1;
    fd.r1w.push_back(r1);
    fd.r2w.push_back(r2);
    fd.m_w.push_back(r1 + 2 * r2);
    fd.kappa_w.push_back(static_cast<double>(r1 + r2) / (r1 + 2 * r2));
    for (int j = 0; j < geo.k; ++j) {
      double ref = geo.Q(fiber[0], j);
      for (int v : fiber)
        require(std::abs(geo.Q(v, j) - ref) <= 1e-8 * std::max(1.0, col_scale),
                Errc::NotFiberConstant,
                "Q is not constant on the given fibers (E does not contain the relative units?)");
      fd.Qcal(w, j) = ref;
    }
  }
  require(geo.k <= nw, Errc::NotFiberConstant, "k exceeds the number of fibers");
  int n_total = 0;
  for (int w = 0; w < nw; ++w) n_total += fd.m_w[static_cast<std::size_t>(w)];
  require(n_total == geo.n, Errc::NotFiberConstant, "fiber degrees do not add to n");

  double lhs = det_qtq(geo);
  double rhs = (fd.Qcal.transpose() * fd.Qcal).determinant();
  for (int w = 0; w < nw; ++w) rhs *= fd.r1w[static_cast<std::size_t>(w)] + fd.r2w[static_cast<std::size_t>(w)];
  require(std::abs(lhs - rhs) <= 1e-9 * std::max(1.0, std::abs(lhs)), Errc::BoundViolated,
          "fiber determinant identity failed");
  return fd;
}

inline SubgroupGeometry with_fibers(SubgroupGeometry geo,
                                    const std::vector<std::vector<int>>& partition) {
  geo.fibers = fiber_reduce(geo, partition);
  return geo;
}

// Single-fiber partition (base field Q); valid whenever E has full rank.
inline std::vector<std::vector<int>> trivial_partition(const NumberField& f) {
  std::vector<int> all;
  for (int v = 0; v < f.num_places(); ++v) all.push_back(v);
  return {all};
}

// One fiber per place (K = L).
inline std::vector<std::vector<int>> discrete_partition(const NumberField& f) {
  std::vector<std::vector<int>> out;
  for (int v = 0; v < f.num_places(); ++v) out.push_back({v});
  return out;
}

}  // namespace covol
