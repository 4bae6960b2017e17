#pragma once

#include <cmath>
#include <random>

#include "geoflow/core.hpp"

namespace testing_support {

inline geoflow::EllipsoidSpec spec(geoflow::Case c, std::vector<double> distinct) {
  return geoflow::expand_spec(c, distinct);
}

inline std::vector<std::pair<geoflow::Case, std::vector<double>>> all_cases() {
  using geoflow::Case;
  return {{Case::generic, {0.25, 0.5, 1, 2}}, {Case::c22, {1, 2}},    {Case::c112, {1, 2, 3}},
          {Case::c211, {1, 2, 3}},            {Case::c13, {1, 2}},    {Case::c31, {1, 2}}};
}

inline double max_abs(const geoflow::State& s) { return s.cwiseAbs().maxCoeff(); }

}  // namespace testing_support
