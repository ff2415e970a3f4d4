#pragma once

#include <stdexcept>
#include <string>

namespace ccm {

enum class Err {
  NotNormalized,
  NotCritical,
  DegenerateTwoRegular,
  GammaOutOfRange,
  Infeasible,
  EvenSumTimeout,
  PsiDomain,
  OddDegreeSum,
  MalformedWalk,
  IndexOutOfRange,
  SimplicityTimeout,
  HorizonExceedsN,
  QuadratureFailure,
  EpsTooSmall,
  EmptySample,
  NotSorted,
  BadConfig,
  InternalInvariant,
};

class Error : public std::runtime_error {
 public:
  Error(Err code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  Err code() const noexcept { return code_; }

 private:
  Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& msg) { throw Error(code, msg); }

inline const char* err_name(Err code) {
  switch (code) {
    case Err::NotNormalized: return "NotNormalized";
    case Err::NotCritical: return "NotCritical";
    case Err::DegenerateTwoRegular: return "DegenerateTwoRegular";
    case Err::GammaOutOfRange: return "GammaOutOfRange";
    case Err::Infeasible: return "Infeasible";
    case Err::EvenSumTimeout: return "EvenSumTimeout";
    case Err::PsiDomain: return "PsiDomain";
    case Err::OddDegreeSum: return "OddDegreeSum";
    case Err::MalformedWalk: return "MalformedWalk";
    case Err::IndexOutOfRange: return "IndexOutOfRange";
    case Err::SimplicityTimeout: return "SimplicityTimeout";
    case Err::HorizonExceedsN: return "HorizonExceedsN";
    case Err::QuadratureFailure: return "QuadratureFailure";
    case Err::EpsTooSmall: return "EpsTooSmall";
    case Err::EmptySample: return "EmptySample";
    case Err::NotSorted: return "NotSorted";
    case Err::BadConfig: return "BadConfig";
    case Err::InternalInvariant: return "InternalInvariant";
  }
  return "Unknown";
}

}  // namespace ccm
