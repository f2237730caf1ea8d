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
#include <vector>

#include "cohlab/qmat.hpp"

namespace cohlab {

// Ensemble of relative-phase rotations drawn with the given priors.
struct PhaseGame {
  std::vector<double> phases;
  std::vector<double> priors;
};
void validate_game(const PhaseGame& game, double tol = default_tol);

using Povm = std::vector<ComplexMatrix>;
void validate_povm(const Povm& povm, std::size_t dim, double tol = default_tol);

// Conjugation by diag(1, e^{i phi}, e^{2 i phi}, ...).
DensityMatrix encode(const DensityMatrix& rho, double phi);

// Probability of naming the drawn phase when measuring `povm`.
double success_probability(const DensityMatrix& rho, const PhaseGame& game,
                           const Povm& povm);

// value is achieved by povm; certificate upper-bounds the true optimum, so
// certificate - value brackets the distance from optimality.
struct DiscriminationResult {
  double value = 0.0;
  Povm povm;
  double certificate = 0.0;
  bool converged = false;
  std::size_t iterations = 0;
};

// Closed-form two-state discrimination: (1 + || pa A - pb B ||_1) / 2 with the
// positive-eigenspace projector as the first outcome.
DiscriminationResult helstrom_pair(const DensityMatrix& a, const DensityMatrix& b,
                                   double pa, double pb);

// Fixed-point iteration for the best measurement over any number of weighted
// states, with a dual certificate extracted from the final iterate. The
// flat-guess measurement is always kept as a fallback candidate.
DiscriminationResult discrimination_fixed_point(
    const std::vector<DensityMatrix>& states, const std::vector<double>& priors,
    std::size_t max_iters = 5000);

// Best probability of naming the phase applied to rho: two-outcome games use
// the closed form, larger ones the fixed-point iteration.
DiscriminationResult optimal_success(const DensityMatrix& rho, const PhaseGame& game);

// Phase rotations fix diagonal states, so without coherence the best play is
// guessing the likeliest phase.
double incoherent_baseline(const PhaseGame& game);

// Ratio of the optimal success probability to the incoherent baseline.
double empirical_advantage(const DensityMatrix& rho, const PhaseGame& game);

}  // namespace cohlab
