#pragma once

#include <stdexcept>
#include <string>

namespace acctime {

// Base of all toolkit errors. code() is a stable machine-readable
// identifier used by the CLI for JSON error reports.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

#define ACCTIME_DEFINE_ERROR(Name)                          \
  class Name : public Error {                               \
   public:                                                  \
    explicit Name(const std::string& what)                  \
        : Error(#Name, what) {}                             \
  }

// scene
ACCTIME_DEFINE_ERROR(NonpositiveParameter);
ACCTIME_DEFINE_ERROR(HoleOutsideDomain);
ACCTIME_DEFINE_ERROR(HolesOverlapping);
ACCTIME_DEFINE_ERROR(GrowthConditionViolated);

// special
ACCTIME_DEFINE_ERROR(ArgumentOutOfRange);

// greens-disc
ACCTIME_DEFINE_ERROR(CoincidentPoints);
ACCTIME_DEFINE_ERROR(SeriesNotConverged);

// asymptotics
ACCTIME_DEFINE_ERROR(SingularSystem);
ACCTIME_DEFINE_ERROR(EvaluationInsideHole);
ACCTIME_DEFINE_ERROR(EvaluationAtSingularPoint);
ACCTIME_DEFINE_ERROR(NonConvergedExtrapolation);

// spectral
ACCTIME_DEFINE_ERROR(NoRootBracketed);
ACCTIME_DEFINE_ERROR(UnsupportedHoleCount);

// oracle-fd
ACCTIME_DEFINE_ERROR(HoleUnresolved);
ACCTIME_DEFINE_ERROR(CGNotConverged);
ACCTIME_DEFINE_ERROR(GridMismatch);

// morphogen-1d
ACCTIME_DEFINE_ERROR(QuadratureNotConverged);

#undef ACCTIME_DEFINE_ERROR

}  // namespace acctime
