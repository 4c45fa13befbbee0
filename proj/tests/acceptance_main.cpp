#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include "pkirch/acceptance.hpp"

int main(int argc, char** argv) {
  int only = -1;
  if (argc > 1) {
    only = std::atoi(argv[1]);
    if (only < 1 || only > pkirch::kCriterionCount) {
      std::cerr << "usage: acceptance [criterion 1.." << pkirch::kCriterionCount
                << "] [scratch dir]\n";
      return 2;
    }
  }
  const std::filesystem::path scratch = argc > 2 ? argv[2] : "acceptance_scratch";
  std::filesystem::create_directories(scratch);
  const int failures = pkirch::run_acceptance(std::cout, scratch, only);
  return failures == 0 ? 0 : 1;
}
