#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace geoflow {

// literal rows compare against a reference value that the computation contradicts; they decide the
// acceptance criterion but not the verify exit status. corrected rows carry the value the
// computation supports and count only for verify. Everything else counts for both.
enum class RowRole { shared, literal, corrected };

struct CheckRow {
  std::string name;
  double value = 0;      // residual or mismatch count
  double threshold = 0;  // passes when value <= threshold
  RowRole role = RowRole::shared;
  bool pass() const { return value <= threshold; }  // NaN fails
};

struct CheckGroup {
  int criterion = 0;  // 1..8 for acceptance criteria, 0 for module invariants
  std::string title;
  std::vector<CheckRow> rows;
  bool criterion_pass() const;
  bool verify_pass() const;
};

// One acceptance criterion, id in 1..8.
CheckGroup acceptance_criterion(int id, std::uint64_t seed);
inline constexpr int kCriterionCount = 8;

// Module invariants not already covered by the criteria.
std::vector<CheckGroup> invariant_suite(std::uint64_t seed);

struct VerifyReport {
  std::vector<CheckGroup> groups;
  bool pass() const;
};

VerifyReport run_verification(std::uint64_t seed);
// Fixed-width residual table, one line per row.
void write_report(std::ostream& os, const VerifyReport& r);

}  // namespace geoflow
