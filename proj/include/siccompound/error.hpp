#pragma once

#include <stdexcept>
#include <string>

namespace siccompound {

// Base for every error raised by the library. The CLI maps these onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define SICCOMPOUND_DEFINE_ERROR(Name)         \
  class Name : public Error {                  \
   public:                                     \
    explicit Name(const std::string& what)     \
        : Error(#Name ": " + what) {}          \
  };

// corelinalg
SICCOMPOUND_DEFINE_ERROR(NotPositive)
SICCOMPOUND_DEFINE_ERROR(NotDensityMatrix)
SICCOMPOUND_DEFINE_ERROR(DimensionMismatch)
// whgroup
SICCOMPOUND_DEFINE_ERROR(ClosureTooLarge)
// compound
SICCOMPOUND_DEFINE_ERROR(PropertyViolation)
SICCOMPOUND_DEFINE_ERROR(OrbitStructureBroken)
// discrimination
SICCOMPOUND_DEFINE_ERROR(SingularGram)
SICCOMPOUND_DEFINE_ERROR(UnbiasednessViolation)
// search
SICCOMPOUND_DEFINE_ERROR(ParseError)
// certification
SICCOMPOUND_DEFINE_ERROR(InvalidModel)
// qkd
SICCOMPOUND_DEFINE_ERROR(InvalidParams)
SICCOMPOUND_DEFINE_ERROR(ZeroSuccessProbability)
SICCOMPOUND_DEFINE_ERROR(NoSignChange)
SICCOMPOUND_DEFINE_ERROR(Infeasible)

#undef SICCOMPOUND_DEFINE_ERROR

// Raised when an ingested vector does not generate a SIC under the clock/shift orbit.
class NotAFiducial : public Error {
 public:
  NotAFiducial(std::size_t index, double worst_deviation)
      : Error("NotAFiducial: vector " + std::to_string(index) +
              " has worst overlap deviation " + std::to_string(worst_deviation)),
        index_(index),
        worst_deviation_(worst_deviation) {}

  std::size_t index() const noexcept { return index_; }
  double worst_deviation() const noexcept { return worst_deviation_; }

 private:
  std::size_t index_;
  double worst_deviation_;
};

}  // namespace siccompound
