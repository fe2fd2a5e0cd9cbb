#include "rhostar/error.hpp"

namespace rhostar {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::DimensionMismatch: return "DIMENSION_MISMATCH";
    case ErrorCode::NotSymmetric: return "NOT_SYMMETRIC";
    case ErrorCode::EntryOutOfRange: return "ENTRY_OUT_OF_RANGE";
    case ErrorCode::DuplicateRows: return "DUPLICATE_ROWS";
    case ErrorCode::InvalidSimplex: return "INVALID_SIMPLEX";
    case ErrorCode::RankDeficiencyAmbiguous: return "RANK_DEFICIENCY_AMBIGUOUS";
    case ErrorCode::NotTwoBlock: return "NOT_TWO_BLOCK";
    case ErrorCode::RankOneInput: return "RANK_ONE_INPUT";
    case ErrorCode::ParameterOrder: return "PARAMETER_ORDER";
    case ErrorCode::DegenerateDistribution: return "DEGENERATE_DISTRIBUTION";
    case ErrorCode::InnerProductOutOfRange: return "INNER_PRODUCT_OUT_OF_RANGE";
    case ErrorCode::NonpositiveDegree: return "NONPOSITIVE_DEGREE";
    case ErrorCode::IllConditioned: return "ILL_CONDITIONED";
    case ErrorCode::SingularInterpolate: return "SINGULAR_INTERPOLATE";
    case ErrorCode::InvalidSampleSize: return "INVALID_SAMPLE_SIZE";
    case ErrorCode::DegenerateEqualRows: return "DEGENERATE_EQUAL_ROWS";
    case ErrorCode::NonpositiveDenominator: return "NONPOSITIVE_DENOMINATOR";
    case ErrorCode::SingularInput: return "SINGULAR_INPUT";
    case ErrorCode::SingularInterpolant: return "SINGULAR_INTERPOLANT";
    case ErrorCode::EigensolverFailure: return "EIGENSOLVER_FAILURE";
    case ErrorCode::IsolatedVertex: return "ISOLATED_VERTEX";
    case ErrorCode::AlignmentIllConditioned: return "ALIGNMENT_ILL_CONDITIONED";
    case ErrorCode::EmDegenerate: return "EM_DEGENERATE";
    case ErrorCode::GraphTooLarge: return "GRAPH_TOO_LARGE";
    case ErrorCode::UnknownFamily: return "UNKNOWN_FAMILY";
    case ErrorCode::EmptyLevelSet: return "EMPTY_LEVEL_SET";
    case ErrorCode::IoFailure: return "IO_FAILURE";
    case ErrorCode::NotTwoDimensional: return "NOT_TWO_DIMENSIONAL";
  }
  return "UNKNOWN";
}

}  // namespace rhostar
