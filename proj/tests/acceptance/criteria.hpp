#pragma once

#include <functional>
#include <string>
#include <vector>

namespace acceptance {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  bool slow;  // multi-hour training runs
  std::function<Outcome()> run;
};

std::vector<Criterion> formula_criteria();   // 1, 2
std::vector<Criterion> env_criteria();       // 3, 4, 9, 10, 13
std::vector<Criterion> learning_criteria();  // 5, 6, 7, 8, 11, 12

}  // namespace acceptance
