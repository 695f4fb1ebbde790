#include <cstdio>

#include "ahvol/acceptance.hpp"

int main() {
  int failed = 0;
  for (int id = 1; id <= ahvol::acceptance::kCriterionCount; ++id) {
    const auto r = ahvol::acceptance::run_criterion(id);
    std::printf("%s\n", ahvol::acceptance::format_line(r).c_str());
    for (const auto& p : r.parts)
      std::printf("       %s %-40s %.3e <= %.1e\n", p.pass ? "ok  " : "FAIL", p.label.c_str(), p.value,
                  p.tolerance);
    std::fflush(stdout);
    if (!r.pass) ++failed;
  }
  std::printf("%d of %d criteria passed\n", ahvol::acceptance::kCriterionCount - failed,
              ahvol::acceptance::kCriterionCount);
  return failed == 0 ? 0 : 1;
}
