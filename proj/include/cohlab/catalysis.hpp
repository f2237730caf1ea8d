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

// Classical-quantum state: a flag register holding k with probability
// weights[k], correlated with a quantum block whose register layout is
// dims[k]. Blocks may differ in layout but every weight vector sums to one.
struct CQBlockState {
  std::vector<double> weights;
  std::vector<DensityMatrix> blocks;
  std::vector<std::vector<std::size_t>> dims;
};
void validate_cq(const CQBlockState& state, double tol = default_tol);

// Total-variation-style distance between two flag-diagonal states:
// sum_k (1/2) || w_k A_k - v_k B_k ||_1. Requires matching block layouts.
double cq_distance(const CQBlockState& a, const CQBlockState& b);

// Reduction of `joint` onto its last `count` registers; count = 0 gives the
// trivial one-dimensional state.
DensityMatrix tail_marginal(const DensityMatrix& joint,
                            const std::vector<std::size_t>& dims,
                            std::size_t count);

// n-fold tensor power.
DensityMatrix tensor_power(const DensityMatrix& rho, std::size_t n);

// Flag-averaged mixture of blocks k = 1..n carrying rho^(k-1) next to the
// tail marginal of `target` on n-k registers. Every block spans n-1
// registers of rho's dimension; `target` must live on n such registers.
CQBlockState build_catalyst(const DensityMatrix& rho, const DensityMatrix& target,
                            std::size_t n);

// Prepend a fresh system register to every block.
CQBlockState attach_system(const DensityMatrix& rho, const CQBlockState& catalyst);

// Conditioned on the flag reading n, swap the n system copies for `target`.
CQBlockState step1_measure_apply(const CQBlockState& state, const DensityMatrix& target);

// Shift the flag cyclically: new block k is old block k-1, new block 1 is old
// block n.
CQBlockState step2_cycle_flag(const CQBlockState& state);

// Conditioned on the flag reading k, cycle the first k registers: the k-th
// register moves to the front and the first k-1 slide back by one.
CQBlockState step3_cycle_systems(const CQBlockState& state);

// Reduction onto the first register, averaged over the flag.
DensityMatrix processed_state(const CQBlockState& state);

// Reduction onto everything except the first register of every block.
CQBlockState drop_system(const CQBlockState& state);

struct ProtocolTrace {
  std::size_t n = 0;
  CQBlockState catalyst;
  CQBlockState attached;
  CQBlockState after_step1;
  CQBlockState after_step2;
  CQBlockState after_step3;
  DensityMatrix processed = DensityMatrix(ComplexMatrix::identity(1));
  double catalyst_restored_error = 0.0;
};
// Full round: build, attach, measure-apply, flag cycle, register cycle.
// Restoration of the catalyst holds exactly for any rho and target; the
// first register ends up in the flag-averaged single-register marginal of
// `target`.
ProtocolTrace run_protocol(const DensityMatrix& rho, const DensityMatrix& target,
                           std::size_t n);

// Two-qutrit pure state with amplitudes sqrt(z/3) on |00>, |01>, |02> and
// sqrt(1-z) on |12>.
DensityMatrix correlated_pair_state(double z);
// (|0> + |1>)/sqrt(2) embedded in a qutrit.
DensityMatrix two_level_plus_state();
// Closed form of the protocol output for the qutrit pair family.
ComplexMatrix closed_form_rho_prime(double z);

// Protocol run on the qutrit pair family followed by dephasing noise of
// strength p on both arms. Requires z >= 3/4: below that the amplitude vector
// of the correlated pair stops dominating the two-copy input and the
// measure-apply step has no incoherent implementation; such z throw.
struct QutritExampleResult {
  double z = 0.0;
  double p = 0.0;
  ProtocolTrace trace;
  double cf_direct = 0.0;
  double cf_processed = 0.0;
};
QutritExampleResult run_qutrit_example(double z, double p);

}  // namespace cohlab
