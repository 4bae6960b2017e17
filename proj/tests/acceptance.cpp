// One PASS/FAIL line per acceptance criterion; failing rows are listed underneath.
#include <cstdio>

#include "geoflow/verify.hpp"

int main() {
  using namespace geoflow;
  constexpr std::uint64_t kSeed = 42;
  int failed = 0;
  for (int id = 1; id <= kCriterionCount; ++id) {
    const CheckGroup g = acceptance_criterion(id, kSeed);
    const bool ok = g.criterion_pass();
    std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, g.title.c_str());
    if (ok) continue;
    ++failed;
    for (const auto& r : g.rows) {
      if (r.role == RowRole::corrected || r.pass()) continue;
      std::printf("    %s: %.6g exceeds %.3g\n", r.name.c_str(), r.value, r.threshold);
    }
  }
  std::printf("%d of %d criteria passed\n", kCriterionCount - failed, kCriterionCount);
  return failed == 0 ? 0 : 1;
}
