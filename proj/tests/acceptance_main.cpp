#include "acceptance.hpp"

#include <algorithm>
#include <cstdlib>
#include <iostream>

// Runs every criterion, or only the ids given as arguments.
int main(int argc, char** argv) {
  rhostar::acceptance::Options options;
  for (int i = 1; i < argc; ++i) options.only.insert(std::atoi(argv[i]));
  const auto outcomes = rhostar::acceptance::run(std::cout, options);
  const bool ok = std::all_of(outcomes.begin(), outcomes.end(), [](const auto& o) { return o.pass; });
  return ok ? 0 : 1;
}
