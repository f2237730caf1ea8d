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

#include "cohlab/catalysis.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "cohlab/channels.hpp"
#include "cohlab/measures.hpp"

namespace cohlab {

namespace {

std::size_t layout_dim(const std::vector<std::size_t>& dims) {
  std::size_t d = 1;
  for (std::size_t v : dims) d *= v;
  return d;
}

}  // namespace

void validate_cq(const CQBlockState& state, double tol) {
  const std::size_t n = state.weights.size();
  if (n == 0) throw std::invalid_argument("cq state needs at least one block");
  if (state.blocks.size() != n || state.dims.size() != n)
    throw std::invalid_argument("cq state arrays must share one length");
  double total = 0.0;
  for (double w : state.weights) {
    if (w < -tol) throw std::invalid_argument("cq weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > tol)
    throw std::invalid_argument("cq weights must sum to one");
  for (std::size_t k = 0; k < n; ++k)
    if (state.blocks[k].dim() != layout_dim(state.dims[k]))
      throw std::invalid_argument("cq block dimension does not match its layout");
}

double cq_distance(const CQBlockState& a, const CQBlockState& b) {
  validate_cq(a);
  validate_cq(b);
  if (a.weights.size() != b.weights.size())
    throw std::invalid_argument("cq distance needs matching flag dimensions");
  double acc = 0.0;
  for (std::size_t k = 0; k < a.weights.size(); ++k) {
    if (a.blocks[k].dim() != b.blocks[k].dim())
      throw std::invalid_argument("cq distance needs matching block dimensions");
    const ComplexMatrix delta = a.blocks[k].mat() * cx(a.weights[k], 0.0) -
                                b.blocks[k].mat() * cx(b.weights[k], 0.0);
    acc += 0.5 * trace_norm(delta);
  }
  return acc;
}

DensityMatrix tail_marginal(const DensityMatrix& joint,
                            const std::vector<std::size_t>& dims,
                            std::size_t count) {
  if (count > dims.size())
    throw std::invalid_argument("tail marginal wider than the state");
  if (count == 0) return DensityMatrix(ComplexMatrix::identity(1));
  if (count == dims.size()) return joint;
  std::vector<std::size_t> keep(count);
  std::iota(keep.begin(), keep.end(), dims.size() - count);
  return partial_trace(joint, dims, keep);
}

DensityMatrix tensor_power(const DensityMatrix& rho, std::size_t n) {
  if (n == 0) return DensityMatrix(ComplexMatrix::identity(1));
  DensityMatrix out = rho;
  for (std::size_t k = 1; k < n; ++k) out = tensor(out, rho);
  return out;
}

CQBlockState build_catalyst(const DensityMatrix& rho, const DensityMatrix& target,
                            std::size_t n) {
  if (n < 2) throw std::invalid_argument("catalyst needs n >= 2");
  const std::size_t d = rho.dim();
  std::size_t dn = 1;
  for (std::size_t k = 0; k < n; ++k) dn *= d;
  if (target.dim() != dn)
    throw std::invalid_argument("target must span n copies of the system");
  const std::vector<std::size_t> target_dims(n, d);

  CQBlockState cat;
  for (std::size_t k = 1; k <= n; ++k) {
    const DensityMatrix head = tensor_power(rho, k - 1);
    const DensityMatrix tail = tail_marginal(target, target_dims, n - k);
    DensityMatrix block = head;
    if (head.dim() == 1)
      block = tail;
    else if (tail.dim() > 1)
      block = tensor(head, tail);
    cat.weights.push_back(1.0 / static_cast<double>(n));
    cat.blocks.push_back(block);
    cat.dims.emplace_back(n - 1, d);
  }
  validate_cq(cat);
  return cat;
}

CQBlockState attach_system(const DensityMatrix& rho, const CQBlockState& catalyst) {
  validate_cq(catalyst);
  CQBlockState out;
  out.weights = catalyst.weights;
  for (std::size_t k = 0; k < catalyst.blocks.size(); ++k) {
    out.blocks.push_back(tensor(rho, catalyst.blocks[k]));
    std::vector<std::size_t> dims = {rho.dim()};
    dims.insert(dims.end(), catalyst.dims[k].begin(), catalyst.dims[k].end());
    out.dims.push_back(std::move(dims));
  }
  return out;
}

CQBlockState step1_measure_apply(const CQBlockState& state, const DensityMatrix& target) {
  validate_cq(state);
  CQBlockState out = state;
  const std::size_t last = out.blocks.size() - 1;
  if (out.blocks[last].dim() != target.dim())
    throw std::invalid_argument("measure-apply target dimension mismatch");
  out.blocks[last] = target;
  return out;
}

CQBlockState step2_cycle_flag(const CQBlockState& state) {
  validate_cq(state);
  CQBlockState out;
  const std::size_t n = state.blocks.size();
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = (k + n - 1) % n;
    out.weights.push_back(state.weights[src]);
    out.blocks.push_back(state.blocks[src]);
    out.dims.push_back(state.dims[src]);
  }
  return out;
}

CQBlockState step3_cycle_systems(const CQBlockState& state) {
  validate_cq(state);
  CQBlockState out;
  out.weights = state.weights;
  for (std::size_t k = 0; k < state.blocks.size(); ++k) {
    const std::vector<std::size_t>& dims = state.dims[k];
    const std::size_t cycle = k + 1;  // flag value, 1-indexed
    if (cycle > dims.size())
      throw std::invalid_argument("register cycle exceeds the block layout");
    std::vector<std::size_t> perm(dims.size());
    perm[0] = cycle - 1;
    for (std::size_t j = 1; j < cycle; ++j) perm[j] = j - 1;
    for (std::size_t j = cycle; j < dims.size(); ++j) perm[j] = j;
    std::vector<std::size_t> new_dims(dims.size());
    for (std::size_t j = 0; j < dims.size(); ++j) new_dims[j] = dims[perm[j]];
    out.blocks.push_back(
        DensityMatrix(permute_registers(state.blocks[k].mat(), dims, perm)));
    out.dims.push_back(std::move(new_dims));
  }
  return out;
}

DensityMatrix processed_state(const CQBlockState& state) {
  validate_cq(state);
  const std::size_t d = state.dims.front().front();
  ComplexMatrix acc(d);
  for (std::size_t k = 0; k < state.blocks.size(); ++k) {
    if (state.dims[k].front() != d)
      throw std::invalid_argument("blocks disagree on the front register");
    const ComplexMatrix part =
        partial_trace(state.blocks[k].mat(), state.dims[k], {0});
    acc += part * cx(state.weights[k], 0.0);
  }
  return DensityMatrix(acc);
}

CQBlockState drop_system(const CQBlockState& state) {
  validate_cq(state);
  CQBlockState out;
  out.weights = state.weights;
  for (std::size_t k = 0; k < state.blocks.size(); ++k) {
    const std::vector<std::size_t>& dims = state.dims[k];
    if (dims.size() < 2)
      throw std::invalid_argument("dropping the system needs a second register");
    std::vector<std::size_t> keep(dims.size() - 1);
    std::iota(keep.begin(), keep.end(), 1);
    out.blocks.push_back(partial_trace(state.blocks[k], dims, keep));
    out.dims.emplace_back(dims.begin() + 1, dims.end());
  }
  return out;
}

ProtocolTrace run_protocol(const DensityMatrix& rho, const DensityMatrix& target,
                           std::size_t n) {
  ProtocolTrace trace;
  trace.n = n;
  trace.catalyst = build_catalyst(rho, target, n);
  trace.attached = attach_system(rho, trace.catalyst);
  trace.after_step1 = step1_measure_apply(trace.attached, target);
  trace.after_step2 = step2_cycle_flag(trace.after_step1);
  trace.after_step3 = step3_cycle_systems(trace.after_step2);
  trace.processed = processed_state(trace.after_step3);
  trace.catalyst_restored_error =
      cq_distance(drop_system(trace.after_step3), trace.catalyst);
  return trace;
}

DensityMatrix correlated_pair_state(double z) {
  if (z < 0.0 || z > 1.0)
    throw std::invalid_argument("pair-state weight must lie in [0, 1]");
  const double a = std::sqrt(z / 3.0);
  const double b = std::sqrt(1.0 - z);
  const double amps[9] = {a, a, a, 0.0, 0.0, b, 0.0, 0.0, 0.0};
  ComplexMatrix m(9);
  for (std::size_t i = 0; i < 9; ++i)
    for (std::size_t j = 0; j < 9; ++j) m.at(i, j) = cx(amps[i] * amps[j], 0.0);
  return DensityMatrix(m);
}

DensityMatrix two_level_plus_state() {
  ComplexMatrix m(3);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) m.at(i, j) = cx(0.5, 0.0);
  return DensityMatrix(m);
}

ComplexMatrix closed_form_rho_prime(double z) {
  if (z < 0.0 || z > 1.0)
    throw std::invalid_argument("pair-state weight must lie in [0, 1]");
  ComplexMatrix m(3);
  const double root = std::sqrt(z * (1.0 - z));
  m.at(0, 0) = cx(2.0 * z / 3.0, 0.0);
  m.at(1, 1) = cx((3.0 - 2.0 * z) / 6.0, 0.0);
  m.at(2, 2) = cx((3.0 - 2.0 * z) / 6.0, 0.0);
  m.at(0, 1) = cx(z / 6.0 + root / (2.0 * std::sqrt(3.0)), 0.0);
  m.at(0, 2) = cx(z / 6.0, 0.0);
  m.at(1, 2) = cx(z / 6.0, 0.0);
  m.at(1, 0) = m.at(0, 1);
  m.at(2, 0) = m.at(0, 2);
  m.at(2, 1) = m.at(1, 2);
  return m;
}

QutritExampleResult run_qutrit_example(double z, double p) {
  if (z < 0.0 || z > 1.0)
    throw std::invalid_argument("pair-state weight must lie in [0, 1]");
  if (p < 0.0 || p > 1.0)
    throw std::invalid_argument("dephasing strength must lie in [0, 1]");
  // Amplitude vectors in display order: the correlated pair against two
  // copies of the flat two-level input. Prefix dominance is the exact
  // feasibility condition for the measure-apply step, sharp at z = 3/4.
  const std::vector<double> pair_weights = {z / 3.0, z / 3.0, z / 3.0, 1.0 - z};
  const std::vector<double> input_weights = {0.25, 0.25, 0.25, 0.25};
  if (!majorizes(pair_weights, input_weights))
    throw std::invalid_argument(
        "pair-state weight too small: the correlated pair is not reachable "
        "from two input copies by incoherent means (needs z >= 3/4)");

  QutritExampleResult res;
  res.z = z;
  res.p = p;
  const DensityMatrix input = two_level_plus_state();
  const DensityMatrix target = correlated_pair_state(z);
  res.trace = run_protocol(input, target, 2);

  const KrausChannel noise = dephasing_channel(p, 3);
  res.cf_direct = coherence_fraction(noise.apply(input)).value;
  res.cf_processed = coherence_fraction(noise.apply(res.trace.processed)).value;
  return res;
}

}  // namespace cohlab
