#pragma once

#include <string>
#include <vector>

namespace dezin {

struct Check {
  std::string name;
  bool passed = false;
  double value = 0.0;  // measured error or statistic
  double limit = 0.0;  // threshold it was held to
};

/// Mittag-Leffler identities, a reduced oracle matrix and an inverse round
/// trip. Needs no configuration.
std::vector<Check> run_selftest();

}  // namespace dezin
