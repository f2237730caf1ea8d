// Copyright 2026 The coherence-lab developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cohlab/qmat.hpp"

namespace cohlab {

// Sum of absolute off-diagonal entries.
double l1_coherence(const DensityMatrix& rho);

// Remove every off-diagonal entry.
DensityMatrix full_dephase(const DensityMatrix& rho);

// Best overlap with the maximally coherent state over diagonal-phase rotations.
// certified is set when a global phase alignment makes the (1 + l1)/d closed
// form exact, in which case value and phases come from that closed form.
struct FractionResult {
  double value = 0.0;
  std::vector<double> phases;  // in [0, 2*pi), first entry pinned to 0
  bool certified = false;
};
FractionResult coherence_fraction(const DensityMatrix& rho, std::size_t grid = 8,
                                  std::size_t refine_iters = 300);

// Least total weight of a diagonal matrix dominating rho, minus one.
// value is always attained by a feasible dominating matrix, so it upper-bounds
// the exact optimum; lower_bound comes from the unit-diagonal dual ascent.
struct RobustnessResult {
  double value = 0.0;
  double lower_bound = 0.0;
  double gap = 0.0;
  bool converged = false;
  std::size_t iterations = 0;
};
RobustnessResult robustness_solve(const DensityMatrix& rho);
double robustness(const DensityMatrix& rho);

// Largest phase-discrimination advantage supported by rho: 1 + robustness.
double advantage_ratio(const DensityMatrix& rho);

struct MeasureReport {
  double l1 = 0.0;
  double robustness = 0.0;
  double fraction = 0.0;
  std::vector<double> fraction_phases;
  bool certified = false;
};
MeasureReport measure(const DensityMatrix& rho);
std::string report_to_json(const MeasureReport& report);

}  // namespace cohlab
