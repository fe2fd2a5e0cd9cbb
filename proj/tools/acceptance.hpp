#ifndef RHOSTAR_TOOLS_ACCEPTANCE_HPP
#define RHOSTAR_TOOLS_ACCEPTANCE_HPP

#include <iosfwd>
#include <set>
#include <string>
#include <vector>

namespace rhostar::acceptance {

struct Outcome {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
};

struct Options {
  /// Empty runs every criterion.
  std::set<int> only;
  /// Extra diagnostic lines (prefixed INFO) alongside the verdict lines.
  bool info = true;
};

inline constexpr int kCriterionCount = 15;

/// Runs the battery, printing one "PASS <id> ..." or "FAIL <id> ..." line per
/// criterion as it completes.
std::vector<Outcome> run(std::ostream& out, const Options& options = {});

}  // namespace rhostar::acceptance

#endif
