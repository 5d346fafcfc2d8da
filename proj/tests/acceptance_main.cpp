// runs acceptance criteria by id (all when no ids are given); exit 1 if any fails
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "affq/acceptance.hpp"

int main(int argc, char** argv) {
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));
  if (ids.empty())
    for (int i = 1; i <= affq::criterion_count; ++i) ids.push_back(i);
  bool ok = true;
  for (int id : ids) {
    const auto r = affq::run_criterion(id);
    std::cout << affq::criterion_line(r) << std::endl;
    ok = ok && r.passed;
  }
  return ok ? 0 : 1;
}
