// Acceptance runner: one PASS/FAIL line per criterion.
//
//   acceptance [--fast | --slow | --all] [--only N]...
//
// --fast (default) runs the criteria that finish in minutes, --slow the
// multi-run training comparisons, --all both.

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <set>

#include "criteria.hpp"

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  bool fast = false, slow = false, all = false;
  std::vector<int> only;
  auto* g = app.add_option_group("selection");
  g->add_flag("--fast", fast, "quick criteria only");
  g->add_flag("--slow", slow, "training comparisons only");
  g->add_flag("--all", all, "every criterion");
  g->require_option(0, 1);
  app.add_option("--only", only, "run just these criterion numbers");
  CLI11_PARSE(app, argc, argv);

  std::vector<acceptance::Criterion> criteria;
  for (auto&& group : {acceptance::formula_criteria(), acceptance::env_criteria(), acceptance::learning_criteria()})
    criteria.insert(criteria.end(), group.begin(), group.end());
  std::sort(criteria.begin(), criteria.end(), [](const auto& a, const auto& b) { return a.id < b.id; });

  const std::set<int> wanted(only.begin(), only.end());
  int failures = 0, ran = 0;
  for (const auto& c : criteria) {
    if (!wanted.empty()) {
      if (!wanted.count(c.id)) continue;
    } else if (!all && (slow ? !c.slow : c.slow)) {
      continue;
    }
    const auto t0 = std::chrono::steady_clock::now();
    acceptance::Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.1f s", secs);
    std::cout << "CRITERION " << c.id << ' ' << (out.pass ? "PASS" : "FAIL") << ": " << c.title << " [" << timing
              << "] (" << out.detail << ")" << std::endl;
    failures += !out.pass;
    ++ran;
  }
  std::cout << ran - failures << "/" << ran << " criteria passed" << std::endl;
  return failures == 0 ? 0 : 1;
}
