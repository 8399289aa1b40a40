#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace covol {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using cplx = std::complex<double>;

enum class Errc {
  DomainError,
  NotSquarefree,
  RootFindingFailed,
  AmbiguousPairing,
  ZeroElement,
  DependentVectors,
  NotTotallyReal,
  ZeroWedge,
  LengthMismatch,
  DependentUnits,
  TrivialComplement,
  NotFiberConstant,
  OutsideDomain,
  MaxIterations,
  BoundViolated,
  PreconditionViolated,
  DegenerateForm,
  QuadratureNotConverged,
  RankDeficient,
  RankTooLarge,
  MissingFiberData,
  VanishingOnTorusSuspected,
  DegenerateSubstitution,
  HullDegenerate,
  ParseError,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::DomainError: return "DomainError";
    case Errc::NotSquarefree: return "NotSquarefree";
    case Errc::RootFindingFailed: return "RootFindingFailed";
    case Errc::AmbiguousPairing: return "AmbiguousPairing";
    case Errc::ZeroElement: return "ZeroElement";
    case Errc::DependentVectors: return "DependentVectors";
    case Errc::NotTotallyReal: return "NotTotallyReal";
    case Errc::ZeroWedge: return "ZeroWedge";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::DependentUnits: return "DependentUnits";
    case Errc::TrivialComplement: return "TrivialComplement";
    case Errc::NotFiberConstant: return "NotFiberConstant";
    case Errc::OutsideDomain: return "OutsideDomain";
    case Errc::MaxIterations: return "MaxIterations";
    case Errc::BoundViolated: return "BoundViolated";
    case Errc::PreconditionViolated: return "PreconditionViolated";
    case Errc::DegenerateForm: return "DegenerateForm";
    case Errc::QuadratureNotConverged: return "QuadratureNotConverged";
    case Errc::RankDeficient: return "RankDeficient";
    case Errc::RankTooLarge: return "RankTooLarge";
    case Errc::MissingFiberData: return "MissingFiberData";
    case Errc::VanishingOnTorusSuspected: return "VanishingOnTorusSuspected";
    case Errc::DegenerateSubstitution: return "DegenerateSubstitution";
    case Errc::HullDegenerate: return "HullDegenerate";
    case Errc::ParseError: return "ParseError";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, Errc code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace covol
