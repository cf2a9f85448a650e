// Acceptance suite: one PASS/FAIL line per criterion.
//   acceptance            run criteria 1-10
//   acceptance 3 8        run only the listed criteria
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "sosim/validation.hpp"

int main(int argc, char** argv) {
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) {
    char* end = nullptr;
    const long id = std::strtol(argv[i], &end, 10);
    if (*end != '\0' || id < 1 || id > sosim::kCriterionCount) {
      std::fprintf(stderr, "usage: %s [criterion 1-%d ...]\n", argv[0], sosim::kCriterionCount);
      return 2;
    }
    ids.push_back(static_cast<int>(id));
  }
  if (ids.empty())
    for (int id = 1; id <= sosim::kCriterionCount; ++id) ids.push_back(id);

  sosim::HygieneLog log;
  int failed = 0;
  for (int id : ids) {
    const auto r = sosim::run_criterion(id, log);
    std::printf("%s\n", sosim::format_result_line(r).c_str());
    std::fflush(stdout);
    if (!r.passed) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(ids.size()) - failed, ids.size());
  return failed == 0 ? 0 : 1;
}
