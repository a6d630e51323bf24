// Test driver for the acceptance gate: prints the pass/fail lines to
// stdout and exits nonzero when any criterion fails.

#include <iostream>
#include <string>

#include <klcells/acceptance.hpp>

int main() {
  std::string golden = std::string(KLCELLS_SOURCE_DIR) + "/tests/golden";
  int failures = klcells::run_acceptance(std::cout, golden, 12345);
  return failures == 0 ? 0 : 1;
}
