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

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace cohlab {

using cx = std::complex<double>;

inline constexpr double default_tol = 1e-9;

// Thrown when an iterative routine exhausts its budget without converging.
struct solver_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Dense square complex matrix, row-major storage.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}
  ComplexMatrix(std::size_t dim, std::vector<cx> data);

  static ComplexMatrix identity(std::size_t dim);

  std::size_t dim() const { return dim_; }
  cx& at(std::size_t i, std::size_t j) { return data_[i * dim_ + j]; }
  const cx& at(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }
  const std::vector<cx>& data() const { return data_; }

  ComplexMatrix adjoint() const;
  ComplexMatrix conjugate() const;
  ComplexMatrix transpose() const;
  cx trace() const;

  bool is_hermitian(double tol = default_tol) const;

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(cx s);
  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(cx s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(ComplexMatrix a, cx s) { return a *= s; }
  ComplexMatrix operator*(const ComplexMatrix& o) const;

 private:
  std::size_t dim_ = 0;
  std::vector<cx> data_;
};

// Eigenvalues sorted descending; vectors holds the matching eigenvectors as columns.
struct Spectrum {
  std::vector<double> values;
  ComplexMatrix vectors;
};

// Validated quantum state: Hermitian, unit trace, positive semidefinite within tol.
// Eigenvalues in (-tol, 0) are clamped to zero on construction.
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix m, double tol = default_tol);

  std::size_t dim() const { return mat_.dim(); }
  const ComplexMatrix& mat() const { return mat_; }
  const cx& at(std::size_t i, std::size_t j) const { return mat_.at(i, j); }

 private:
  ComplexMatrix mat_;
};

double frobenius_norm(const ComplexMatrix& a);
// Sum of singular values; Hermitian inputs go through their eigenvalues.
double trace_norm(const ComplexMatrix& a, double tol = default_tol);
double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b, double tol = default_tol);

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);
ComplexMatrix hadamard(const ComplexMatrix& a, const ComplexMatrix& b);

// Reduce onto the subsystems listed in keep (strictly ascending indices into dims).
ComplexMatrix partial_trace(const ComplexMatrix& m, const std::vector<std::size_t>& dims,
                            const std::vector<std::size_t>& keep);
DensityMatrix partial_trace(const DensityMatrix& m, const std::vector<std::size_t>& dims,
                            const std::vector<std::size_t>& keep);

// Conjugate by the register permutation sending old register perm[j] to slot j.
ComplexMatrix permute_registers(const ComplexMatrix& m, const std::vector<std::size_t>& dims,
                                const std::vector<std::size_t>& perm);

// Cyclic Jacobi eigensolver for Hermitian matrices; throws solver_error if the
// off-diagonal mass fails to drop below 1e-12 * ||a||_F within the sweep budget.
Spectrum eig_hermitian(const ComplexMatrix& a, double tol = default_tol);

// Prefix-sum dominance of p over q after zero-padding to a common length.
// Both inputs must be probability vectors within tol.
bool majorizes(std::vector<double> p, std::vector<double> q, double tol = default_tol);

// Matrix literal serialization: {"dim": n, "re": [[..]], "im": [[..]]}.
// Readers reject ragged rows, dimension mismatches, and non-numeric entries.
ComplexMatrix matrix_from_json(const std::string& text);
std::string matrix_to_json(const ComplexMatrix& m);
ComplexMatrix load_matrix(const std::string& path);
void save_matrix(const ComplexMatrix& m, const std::string& path);

}  // namespace cohlab
