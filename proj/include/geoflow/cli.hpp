#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "geoflow/core.hpp"

namespace geoflow {

struct RunConfig {
  std::string command;
  Case symmetry = Case::c22;
  std::vector<double> alphas;  // distinct values; empty means the case default
  double h = 1.0;
  std::optional<double> j, j1, j2;
  double tol = 0;           // 0 means the command default
  std::size_t grid = 0;     // 0 means the command default
  double t_end = 0;         // 0 means the command default
  std::size_t samples = 1000;
  std::size_t trajectories = 20;
  std::string out, svg, mesh;
  std::uint64_t seed = 0;
};

// Distinct semi-axes used when --alphas is omitted: the figure parameters of each case.
std::vector<double> default_alphas(Case c);
// Expanded spec; throws usage on a wrong count of distinct values, invalid_spec on bad values.
EllipsoidSpec validated_spec(const RunConfig& cfg);

// Exit status: 0 success, 1 failed verification, 2 usage or input error, 3 I/O or internal error.
int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace geoflow
