// One line per acceptance criterion. Exit status is 0 when every failure is a
// criterion the construction is known not to reach (see the README); pass
// --strict to fail on those too. Optional arguments select criteria by id.

#include "nearsphere/selftest.hpp"

#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

int main(int argc, char** argv) {
  bool strict = false;
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--strict") == 0) strict = true;
    else ids.push_back(std::stoi(argv[i]));
  }
  if (ids.empty())
    for (int i = 1; i <= nsph::kNumCriteria; ++i) ids.push_back(i);

  int unexpected = 0;
  for (int id : ids) {
    const auto r = nsph::run_criterion(id);
    const bool expected_fail = nsph::known_unattainable(id);
    const char* tag = r.passed ? "PASS" : "FAIL";
    std::printf("criterion %2d %s  %-32s %8.2fs  %s%s\n", r.id, tag, r.name.c_str(), r.seconds, r.detail.c_str(),
                !r.passed && expected_fail ? "  (known unattainable)" : "");
    std::fflush(stdout);
    if (!r.passed && (strict || !expected_fail)) ++unexpected;
  }
  return unexpected == 0 ? 0 : 1;
}
