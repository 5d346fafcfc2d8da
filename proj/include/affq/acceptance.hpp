#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "affq/io.hpp"

namespace affq {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  double seconds = 0;
  double budget_seconds = 0;
  std::string summary;
  ojson metrics;
};

constexpr int criterion_count = 13;

CriterionResult run_criterion(int id, std::uint64_t seed = 20240531);

ojson criterion_json(const CriterionResult& r);
std::string criterion_line(const CriterionResult& r);

}  // namespace affq
