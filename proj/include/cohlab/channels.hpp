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

// Completely positive trace-preserving map in operator-sum form.
class KrausChannel {
 public:
  explicit KrausChannel(std::vector<ComplexMatrix> ops, double tol = default_tol);

  std::size_t dim() const { return dim_; }
  const std::vector<ComplexMatrix>& ops() const { return ops_; }

  DensityMatrix apply(const DensityMatrix& rho) const;
  ComplexMatrix apply_linear(const ComplexMatrix& x) const;

 private:
  std::vector<ComplexMatrix> ops_;
  std::size_t dim_;
};

// Every Kraus operator has at most one nonzero entry per column (entries are
// measured against 1e-10 times the operator's largest magnitude).
bool is_io(const KrausChannel& channel);
// Additionally at most one nonzero entry per row.
bool is_sio(const KrausChannel& channel);

// Entrywise-product channel: X -> P (coeff . X) P^dag with coeff a positive
// semidefinite unit-diagonal matrix and P the permutation i -> perm[i].
struct SchurChannel {
  ComplexMatrix coeff = ComplexMatrix::identity(1);
  std::vector<std::size_t> perm = {0};
};
SchurChannel make_schur(const ComplexMatrix& coeff,
                        const std::vector<std::size_t>& perm,
                        double tol = default_tol);
ComplexMatrix schur_apply(const SchurChannel& channel, const ComplexMatrix& x);
DensityMatrix schur_apply(const SchurChannel& channel, const DensityMatrix& rho);
// Operator-sum form assembled from the eigenvectors of the coefficient matrix.
KrausChannel schur_kraus(const SchurChannel& channel);

// Probe a channel with matrix units to decide whether it acts by entrywise
// multiplication plus relabeling, and recover that form when it does.
struct ClassifyResult {
  bool is_schur = false;
  SchurChannel schur;
  bool is_mio_on_basis = false;  // every basis projector maps to a diagonal state
};
ClassifyResult classify_channel(const KrausChannel& channel);

// Squared Frobenius norm of E(rho) E(sigma) - E(rho sigma); sigma must be
// diagonal so that the product form is the natural comparison point.
double multiplicativity_deviation(const KrausChannel& channel,
                                  const DensityMatrix& rho,
                                  const DensityMatrix& sigma);

// Keeps each off-diagonal entry with weight 1 - p.
KrausChannel dephasing_channel(double p, std::size_t dim = 3);
// Relaxation toward the first basis state with strength gamma.
KrausChannel amplitude_damping_channel(double gamma);

// Weighted mean-plus-commutator combination with the fixed state sigma:
//   alpha rho + (1 - alpha) sigma - i sqrt(alpha (1 - alpha)) [rho, sigma].
ComplexMatrix addition_linear(double alpha, const DensityMatrix& sigma,
                              const ComplexMatrix& x);
DensityMatrix addition_channel_commutator(double alpha, const DensityMatrix& sigma,
                                          const DensityMatrix& rho);
// Same map realized by a joint rotation with an ancilla in state sigma.
DensityMatrix addition_channel_stinespring(double alpha, const DensityMatrix& sigma,
                                           const DensityMatrix& rho);
// Operator-sum form; requires sigma diagonal.
KrausChannel addition_channel_kraus(double alpha, const DensityMatrix& sigma);

// Matrix acting on row-major vectorized operators: vec(E(X)) = S vec(X).
ComplexMatrix superoperator(const KrausChannel& channel);
bool channels_commute(const KrausChannel& a, const KrausChannel& b,
                      double tol = 1e-10);

std::string channel_to_json(const KrausChannel& channel);
KrausChannel channel_from_json(const std::string& text);
KrausChannel load_channel(const std::string& path);
void save_channel(const KrausChannel& channel, const std::string& path);
std::string schur_to_json(const SchurChannel& channel);
SchurChannel schur_from_json(const std::string& text);

}  // namespace cohlab
