#pragma once

#include "hypbend/traintrack.hpp"

namespace fixtures {

/// Two switches joined by b1 on one side and by b2, b3 on the other:
/// b1 = b2 + b3 at both switches. {b1, b2} is a loop; b3 is the only branch
/// leaving it.
inline hypbend::TrainTrack three_branch_track() {
  using hypbend::Switch;
  return hypbend::TrainTrack({"b1", "b2", "b3"},
                             {Switch{"s1", {{"b1", 0}}, {{"b2", 1}, {"b3", 0}}},
                              Switch{"s2", {{"b1", 1}}, {{"b2", 0}, {"b3", 1}}}});
}

}  // namespace fixtures

#include <cmath>
#include <numbers>
#include <vector>

#include "hypbend/rquotient.hpp"

namespace fixtures {

/// {closed c: pi + sign/n, open d: d_of(n)} at indices n = 10^(k/4) up to
/// 10^10, so the last ten terms sit within 1e-7 of their limits.
template <class DOf>
std::vector<hypbend::AbstractLamination> pi_family(double sign, DOf d_of) {
  std::vector<hypbend::AbstractLamination> seq;
  for (int k = 0; k <= 40; ++k) {
    const double n = std::round(std::pow(10.0, k / 4.0));
    seq.push_back(hypbend::AbstractLamination(
        {{"c", true, std::numbers::pi + sign / n}, {"d", false, d_of(n)}}));
  }
  return seq;
}

inline std::vector<hypbend::TestArc> cd_arcs() {
  return {hypbend::TestArc({{"c", 1}}), hypbend::TestArc({{"d", 1}}), hypbend::TestArc({{"c", 1}, {"d", 2}})};
}

}  // namespace fixtures
