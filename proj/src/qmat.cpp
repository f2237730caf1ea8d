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

#include "cohlab/qmat.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace cohlab {

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<cx> data) : dim_(dim), data_(std::move(data)) {
  if (data_.size() != dim_ * dim_) throw std::invalid_argument("matrix data size does not match dimension");
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m.at(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix r(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) r.at(i, j) = std::conj(at(j, i));
  return r;
}

ComplexMatrix ComplexMatrix::conjugate() const {
  ComplexMatrix r(dim_);
  for (std::size_t i = 0; i < dim_ * dim_; ++i) r.data_[i] = std::conj(data_[i]);
  return r;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix r(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) r.at(i, j) = at(j, i);
  return r;
}

cx ComplexMatrix::trace() const {
  cx t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += at(i, i);
  return t;
}

bool ComplexMatrix::is_hermitian(double tol) const {
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = i; j < dim_; ++j)
      if (std::abs(at(i, j) - std::conj(at(j, i))) > tol) return false;
  return true;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  if (dim_ != o.dim_) throw std::invalid_argument("dimension mismatch in matrix addition");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  if (dim_ != o.dim_) throw std::invalid_argument("dimension mismatch in matrix subtraction");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cx s) {
  for (auto& v : data_) v *= s;
  return *this;
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix& o) const {
  if (dim_ != o.dim_) throw std::invalid_argument("dimension mismatch in matrix product");
  ComplexMatrix r(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t k = 0; k < dim_; ++k) {
      const cx aik = at(i, k);
      if (aik == cx{}) continue;
      for (std::size_t j = 0; j < dim_; ++j) r.at(i, j) += aik * o.at(k, j);
    }
  return r;
}

double frobenius_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (const auto& v : a.data()) s += std::norm(v);
  return std::sqrt(s);
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t da = a.dim(), db = b.dim();
  ComplexMatrix r(da * db);
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t j = 0; j < da; ++j) {
      const cx aij = a.at(i, j);
      if (aij == cx{}) continue;
      for (std::size_t k = 0; k < db; ++k)
        for (std::size_t l = 0; l < db; ++l) r.at(i * db + k, j * db + l) = aij * b.at(k, l);
    }
  return r;
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  return DensityMatrix(tensor(a.mat(), b.mat()));
}

ComplexMatrix hadamard(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("dimension mismatch in hadamard product");
  ComplexMatrix r(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) r.at(i, j) = a.at(i, j) * b.at(i, j);
  return r;
}

namespace {

std::size_t dims_product(const std::vector<std::size_t>& dims) {
  std::size_t p = 1;
  for (std::size_t d : dims) {
    if (d == 0) throw std::invalid_argument("zero subsystem dimension");
    p *= d;
  }
  return p;
}

// Row-major strides: the last subsystem varies fastest.
std::vector<std::size_t> strides_of(const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> s(dims.size(), 1);
  for (std::size_t k = dims.size(); k-- > 1;) s[k - 1] = s[k] * dims[k];
  return s;
}

}  // namespace

ComplexMatrix partial_trace(const ComplexMatrix& m, const std::vector<std::size_t>& dims,
                            const std::vector<std::size_t>& keep) {
  if (dims_product(dims) != m.dim()) throw std::invalid_argument("subsystem dimensions do not factor the matrix");
  for (std::size_t k = 0; k < keep.size(); ++k) {
    if (keep[k] >= dims.size()) throw std::invalid_argument("keep index out of range");
    if (k > 0 && keep[k] <= keep[k - 1]) throw std::invalid_argument("keep indices must be strictly ascending");
  }
  std::vector<std::size_t> traced;
  for (std::size_t k = 0; k < dims.size(); ++k)
    if (std::find(keep.begin(), keep.end(), k) == keep.end()) traced.push_back(k);

  const auto strides = strides_of(dims);
  std::size_t keep_dim = 1, traced_dim = 1;
  for (std::size_t k : keep) keep_dim *= dims[k];
  for (std::size_t k : traced) traced_dim *= dims[k];

  // Flat offsets contributed by every keep / traced multi-index.
  std::vector<std::size_t> keep_off(keep_dim, 0), traced_off(traced_dim, 0);
  for (std::size_t idx = 0; idx < keep_dim; ++idx) {
    std::size_t rem = idx, off = 0;
    for (std::size_t k = keep.size(); k-- > 0;) {
      off += (rem % dims[keep[k]]) * strides[keep[k]];
      rem /= dims[keep[k]];
    }
    keep_off[idx] = off;
  }
  for (std::size_t idx = 0; idx < traced_dim; ++idx) {
    std::size_t rem = idx, off = 0;
    for (std::size_t k = traced.size(); k-- > 0;) {
      off += (rem % dims[traced[k]]) * strides[traced[k]];
      rem /= dims[traced[k]];
    }
    traced_off[idx] = off;
  }

  ComplexMatrix r(keep_dim);
  for (std::size_t i = 0; i < keep_dim; ++i)
    for (std::size_t j = 0; j < keep_dim; ++j) {
      cx s = 0.0;
      for (std::size_t t = 0; t < traced_dim; ++t) s += m.at(keep_off[i] + traced_off[t], keep_off[j] + traced_off[t]);
      r.at(i, j) = s;
    }
  return r;
}

DensityMatrix partial_trace(const DensityMatrix& m, const std::vector<std::size_t>& dims,
                            const std::vector<std::size_t>& keep) {
  return DensityMatrix(partial_trace(m.mat(), dims, keep));
}

ComplexMatrix permute_registers(const ComplexMatrix& m, const std::vector<std::size_t>& dims,
                                const std::vector<std::size_t>& perm) {
  if (dims_product(dims) != m.dim()) throw std::invalid_argument("subsystem dimensions do not factor the matrix");
  if (perm.size() != dims.size()) throw std::invalid_argument("permutation length mismatch");
  std::vector<bool> seen(dims.size(), false);
  for (std::size_t p : perm) {
    if (p >= dims.size() || seen[p]) throw std::invalid_argument("invalid register permutation");
    seen[p] = true;
  }
  std::vector<std::size_t> new_dims(dims.size());
  for (std::size_t j = 0; j < perm.size(); ++j) new_dims[j] = dims[perm[j]];
  const auto old_strides = strides_of(dims);
  const auto new_strides = strides_of(new_dims);

  // map[new flat index] = old flat index carrying the same register contents.
  const std::size_t n = m.dim();
  std::vector<std::size_t> map(n, 0);
  for (std::size_t idx = 0; idx < n; ++idx) {
    std::size_t rem = idx, off = 0;
    for (std::size_t j = 0; j < perm.size(); ++j) {
      const std::size_t digit = rem / new_strides[j];
      rem %= new_strides[j];
      off += digit * old_strides[perm[j]];
    }
    map[idx] = off;
  }
  ComplexMatrix r(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r.at(i, j) = m.at(map[i], map[j]);
  return r;
}

Spectrum eig_hermitian(const ComplexMatrix& a, double tol) {
  const std::size_t d = a.dim();
  if (d == 0) throw std::invalid_argument("empty matrix");
  if (!a.is_hermitian(tol)) throw std::invalid_argument("eig_hermitian requires a Hermitian matrix");

  ComplexMatrix w = a;
  // Symmetrize so accumulated roundoff cannot feed asymmetry into the sweeps.
  for (std::size_t i = 0; i < d; ++i) {
    w.at(i, i) = cx(w.at(i, i).real(), 0.0);
    for (std::size_t j = i + 1; j < d; ++j) {
      const cx v = 0.5 * (w.at(i, j) + std::conj(w.at(j, i)));
      w.at(i, j) = v;
      w.at(j, i) = std::conj(v);
    }
  }
  ComplexMatrix v = ComplexMatrix::identity(d);
  const double target = 1e-12 * frobenius_norm(a);

  auto off_mass = [&]() {
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i + 1; j < d; ++j) s += 2.0 * std::norm(w.at(i, j));
    return std::sqrt(s);
  };

  const int max_sweeps = 60;
  int sweep = 0;
  while (off_mass() > target) {
    if (++sweep > max_sweeps) throw solver_error("jacobi eigensolver failed to converge");
    for (std::size_t p = 0; p < d; ++p)
      for (std::size_t q = p + 1; q < d; ++q) {
        const cx g = w.at(p, q);
        const double ag = std::abs(g);
        if (ag == 0.0) continue;
        // Phase factor turning the pivot real, then a real Jacobi rotation.
        const cx phase = g / ag;
        const double app = w.at(p, p).real();
        const double aqq = w.at(q, q).real();
        const double tau = (aqq - app) / (2.0 * ag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const cx jpq = s * phase;          // J = [[c, s*phase], [-s*conj(phase), c]] on (p,q)
        const cx jqp = -s * std::conj(phase);

        for (std::size_t k = 0; k < d; ++k) {  // W <- W J on columns p, q
          const cx wp = w.at(k, p), wq = w.at(k, q);
          w.at(k, p) = c * wp + jqp * wq;
          w.at(k, q) = jpq * wp + c * wq;
        }
        for (std::size_t k = 0; k < d; ++k) {  // W <- J† W on rows p, q
          const cx wp = w.at(p, k), wq = w.at(q, k);
          w.at(p, k) = c * wp + std::conj(jqp) * wq;
          w.at(q, k) = std::conj(jpq) * wp + c * wq;
        }
        for (std::size_t k = 0; k < d; ++k) {  // V <- V J
          const cx vp = v.at(k, p), vq = v.at(k, q);
          v.at(k, p) = c * vp + jqp * vq;
          v.at(k, q) = jpq * vp + c * vq;
        }
        w.at(p, q) = 0.0;
        w.at(q, p) = 0.0;
        w.at(p, p) = cx(w.at(p, p).real(), 0.0);
        w.at(q, q) = cx(w.at(q, q).real(), 0.0);
      }
  }

  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return w.at(i, i).real() > w.at(j, j).real(); });
  Spectrum spectrum;
  spectrum.values.resize(d);
  spectrum.vectors = ComplexMatrix(d);
  for (std::size_t k = 0; k < d; ++k) {
    spectrum.values[k] = w.at(order[k], order[k]).real();
    for (std::size_t i = 0; i < d; ++i) spectrum.vectors.at(i, k) = v.at(i, order[k]);
  }
  return spectrum;
}

double trace_norm(const ComplexMatrix& a, double tol) {
  if (a.is_hermitian(tol)) {
    const Spectrum s = eig_hermitian(a, tol);
    double sum = 0.0;
    for (double v : s.values) sum += std::abs(v);
    return sum;
  }
  const Spectrum s = eig_hermitian(a.adjoint() * a, 1e-6);
  double sum = 0.0;
  for (double v : s.values) sum += std::sqrt(std::max(v, 0.0));
  return sum;
}

double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
  return 0.5 * trace_norm(a - b, tol);
}

DensityMatrix::DensityMatrix(ComplexMatrix m, double tol) : mat_(std::move(m)) {
  if (mat_.dim() == 0) throw std::invalid_argument("empty density matrix");
  if (!mat_.is_hermitian(tol)) throw std::invalid_argument("density matrix must be Hermitian");
  if (std::abs(mat_.trace() - cx(1.0)) > tol) throw std::invalid_argument("density matrix must have unit trace");
  const Spectrum s = eig_hermitian(mat_, tol);
  const double min_ev = s.values.back();
  if (min_ev < -tol) throw std::invalid_argument("density matrix must be positive semidefinite");
  if (min_ev < 0.0) {
    // Clamp roundoff-level negative eigenvalues and rebuild.
    const std::size_t d = mat_.dim();
    ComplexMatrix r(d);
    for (std::size_t k = 0; k < d; ++k) {
      const double lam = std::max(s.values[k], 0.0);
      if (lam == 0.0) continue;
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
          r.at(i, j) += lam * s.vectors.at(i, k) * std::conj(s.vectors.at(j, k));
    }
    mat_ = std::move(r);
  }
}

bool majorizes(std::vector<double> p, std::vector<double> q, double tol) {
  const std::size_t n = std::max(p.size(), q.size());
  p.resize(n, 0.0);
  q.resize(n, 0.0);
  auto check = [&](const std::vector<double>& v) {
    double sum = 0.0;
    for (double x : v) {
      if (x < -tol) throw std::invalid_argument("majorizes requires nonnegative entries");
      sum += x;
    }
    if (std::abs(sum - 1.0) > tol) throw std::invalid_argument("majorizes requires probability vectors");
  };
  check(p);
  check(q);
  double cp = 0.0, cq = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    cp += p[k];
    cq += q[k];
    if (cp < cq - tol) return false;
  }
  return true;
}

namespace {

using nlohmann::json;

double number_at(const json& v, const char* field) {
  if (!v.is_number()) throw std::invalid_argument(std::string("non-numeric entry in ") + field);
  return v.get<double>();
}

std::vector<std::vector<double>> grid_from(const json& j, const char* field, std::size_t dim) {
  if (!j.is_array() || j.size() != dim)
    throw std::invalid_argument(std::string(field) + " must be an array of dim rows");
  std::vector<std::vector<double>> out(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    const json& row = j[i];
    if (!row.is_array() || row.size() != dim)
      throw std::invalid_argument(std::string(field) + " has a ragged or misdimensioned row");
    out[i].reserve(dim);
    for (const auto& v : row) out[i].push_back(number_at(v, field));
  }
  return out;
}

}  // namespace

ComplexMatrix matrix_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("invalid matrix JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("dim") || !j["dim"].is_number_unsigned())
    throw std::invalid_argument("matrix literal requires an unsigned \"dim\"");
  const std::size_t dim = j["dim"].get<std::size_t>();
  if (dim == 0) throw std::invalid_argument("matrix dimension must be positive");
  if (!j.contains("re")) throw std::invalid_argument("matrix literal requires \"re\"");
  const auto re = grid_from(j["re"], "re", dim);
  std::vector<std::vector<double>> im;
  if (j.contains("im")) im = grid_from(j["im"], "im", dim);
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t k = 0; k < dim; ++k) m.at(i, k) = cx(re[i][k], im.empty() ? 0.0 : im[i][k]);
  return m;
}

std::string matrix_to_json(const ComplexMatrix& m) {
  json re = json::array(), im = json::array();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    json rrow = json::array(), irow = json::array();
    for (std::size_t j = 0; j < m.dim(); ++j) {
      rrow.push_back(m.at(i, j).real());
      irow.push_back(m.at(i, j).imag());
    }
    re.push_back(std::move(rrow));
    im.push_back(std::move(irow));
  }
  json j{{"dim", m.dim()}, {"re", std::move(re)}, {"im", std::move(im)}};
  return j.dump();
}

ComplexMatrix load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open matrix file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return matrix_from_json(ss.str());
}

void save_matrix(const ComplexMatrix& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write matrix file: " + path);
  out << matrix_to_json(m) << '\n';
}

}  // namespace cohlab
