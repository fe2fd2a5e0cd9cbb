#ifndef RHOSTAR_ERROR_HPP
#define RHOSTAR_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace rhostar {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  // model
  NotSymmetric,
  EntryOutOfRange,
  DuplicateRows,
  InvalidSimplex,
  RankDeficiencyAmbiguous,
  NotTwoBlock,
  RankOneInput,
  ParameterOrder,
  // limits
  DegenerateDistribution,
  InnerProductOutOfRange,
  NonpositiveDegree,
  IllConditioned,
  // chernoff
  SingularInterpolate,
  InvalidSampleSize,
  DegenerateEqualRows,
  NonpositiveDenominator,
  SingularInput,
  SingularInterpolant,
  // montecarlo
  EigensolverFailure,
  IsolatedVertex,
  AlignmentIllConditioned,
  EmDegenerate,
  GraphTooLarge,
  // sweep
  UnknownFamily,
  EmptyLevelSet,
  IoFailure,
  NotTwoDimensional,
};

/// Stable upper-snake-case name, e.g. DuplicateRows -> "DUPLICATE_ROWS".
std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rhostar

#endif
