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

#include "cohlab/channels.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace cohlab {

namespace {

// Matrix with a single unit entry at (i, j).
ComplexMatrix matrix_unit(std::size_t d, std::size_t i, std::size_t j) {
  ComplexMatrix m(d);
  m.at(i, j) = cx(1.0, 0.0);
  return m;
}

double max_abs_entry(const ComplexMatrix& m) {
  double top = 0.0;
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j)
      top = std::max(top, std::abs(m.at(i, j)));
  return top;
}

bool ops_entrywise_sparse(const KrausChannel& channel, bool rows_too) {
  for (const ComplexMatrix& k : channel.ops()) {
    const std::size_t d = k.dim();
    const double cut = 1e-10 * max_abs_entry(k);
    for (std::size_t j = 0; j < d; ++j) {
      std::size_t in_col = 0;
      for (std::size_t i = 0; i < d; ++i)
        if (std::abs(k.at(i, j)) > cut) ++in_col;
      if (in_col > 1) return false;
    }
    if (!rows_too) continue;
    for (std::size_t i = 0; i < d; ++i) {
      std::size_t in_row = 0;
      for (std::size_t j = 0; j < d; ++j)
        if (std::abs(k.at(i, j)) > cut) ++in_row;
      if (in_row > 1) return false;
    }
  }
  return true;
}

void require_permutation(const std::vector<std::size_t>& perm, std::size_t d) {
  if (perm.size() != d)
    throw std::invalid_argument("permutation size does not match dimension");
  std::vector<char> seen(d, 0);
  for (std::size_t p : perm) {
    if (p >= d || seen[p])
      throw std::invalid_argument("perm is not a permutation");
    seen[p] = 1;
  }
}

nlohmann::json channel_json(const KrausChannel& channel) {
  nlohmann::json j;
  j["dim"] = channel.dim();
  j["kraus"] = nlohmann::json::array();
  for (const ComplexMatrix& k : channel.ops())
    j["kraus"].push_back(nlohmann::json::parse(matrix_to_json(k)));
  return j;
}

KrausChannel channel_from(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("kraus"))
    throw std::invalid_argument("channel json needs dim and kraus");
  if (!j["kraus"].is_array() || j["kraus"].empty())
    throw std::invalid_argument("channel json kraus must be a nonempty array");
  const auto d = j["dim"].get<std::size_t>();
  std::vector<ComplexMatrix> ops;
  for (const nlohmann::json& item : j["kraus"]) {
    ComplexMatrix k = matrix_from_json(item.dump());
    if (k.dim() != d)
      throw std::invalid_argument("kraus operator dimension mismatch");
    ops.push_back(std::move(k));
  }
  return KrausChannel(std::move(ops));
}

}  // namespace

KrausChannel::KrausChannel(std::vector<ComplexMatrix> ops, double tol)
    : ops_(std::move(ops)), dim_(0) {
  if (ops_.empty()) throw std::invalid_argument("channel needs at least one operator");
  dim_ = ops_.front().dim();
  for (const ComplexMatrix& k : ops_)
    if (k.dim() != dim_)
      throw std::invalid_argument("channel operators must share one dimension");
  ComplexMatrix sum(dim_);
  for (const ComplexMatrix& k : ops_) sum += k.adjoint() * k;
  for (std::size_t i = 0; i < dim_; ++i) sum.at(i, i) -= cx(1.0, 0.0);
  if (max_abs_entry(sum) > tol)
    throw std::invalid_argument("channel operators do not resolve the identity");
}

DensityMatrix KrausChannel::apply(const DensityMatrix& rho) const {
  return DensityMatrix(apply_linear(rho.mat()));
}

ComplexMatrix KrausChannel::apply_linear(const ComplexMatrix& x) const {
  if (x.dim() != dim_) throw std::invalid_argument("channel input dimension mismatch");
  ComplexMatrix out(dim_);
  for (const ComplexMatrix& k : ops_) out += k * x * k.adjoint();
  return out;
}

bool is_io(const KrausChannel& channel) { return ops_entrywise_sparse(channel, false); }

bool is_sio(const KrausChannel& channel) { return ops_entrywise_sparse(channel, true); }

SchurChannel make_schur(const ComplexMatrix& coeff,
                        const std::vector<std::size_t>& perm, double tol) {
  const std::size_t d = coeff.dim();
  require_permutation(perm, d);
  if (!coeff.is_hermitian(tol))
    throw std::invalid_argument("coefficient matrix must be hermitian");
  for (std::size_t i = 0; i < d; ++i)
    if (std::abs(coeff.at(i, i) - cx(1.0, 0.0)) > tol)
      throw std::invalid_argument("coefficient matrix needs a unit diagonal");
  const Spectrum s = eig_hermitian(coeff);
  if (s.values.back() < -tol)
    throw std::invalid_argument("coefficient matrix must be positive semidefinite");
  SchurChannel sc;
  sc.coeff = coeff;
  sc.perm = perm;
  return sc;
}

ComplexMatrix schur_apply(const SchurChannel& channel, const ComplexMatrix& x) {
  const std::size_t d = channel.coeff.dim();
  if (x.dim() != d) throw std::invalid_argument("schur input dimension mismatch");
  ComplexMatrix out(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      out.at(channel.perm[i], channel.perm[j]) = channel.coeff.at(i, j) * x.at(i, j);
  return out;
}

DensityMatrix schur_apply(const SchurChannel& channel, const DensityMatrix& rho) {
  return DensityMatrix(schur_apply(channel, rho.mat()));
}

KrausChannel schur_kraus(const SchurChannel& channel) {
  const std::size_t d = channel.coeff.dim();
  const Spectrum s = eig_hermitian(channel.coeff);
  const double top = std::max(s.values.front(), 1.0);
  std::vector<ComplexMatrix> ops;
  for (std::size_t k = 0; k < d; ++k) {
    if (s.values[k] <= 1e-12 * top) continue;
    const double w = std::sqrt(s.values[k]);
    ComplexMatrix op(d);
    for (std::size_t i = 0; i < d; ++i)
      op.at(channel.perm[i], i) = w * s.vectors.at(i, k);
    ops.push_back(std::move(op));
  }
  return KrausChannel(std::move(ops));
}

ClassifyResult classify_channel(const KrausChannel& channel) {
  const std::size_t d = channel.dim();
  const double cut = 1e-9;
  ClassifyResult res;

  std::vector<std::size_t> perm(d, 0);
  std::vector<char> taken(d, 0);
  bool schur_ok = true;
  bool diagonal_outputs = true;
  for (std::size_t i = 0; i < d; ++i) {
    const ComplexMatrix probe = channel.apply_linear(matrix_unit(d, i, i));
    std::size_t hits = 0;
    std::size_t where = 0;
    for (std::size_t a = 0; a < d; ++a) {
      for (std::size_t b = 0; b < d; ++b) {
        if (std::abs(probe.at(a, b)) <= cut) continue;
        if (a != b) {
          diagonal_outputs = false;
          schur_ok = false;
          continue;
        }
        ++hits;
        where = a;
      }
    }
    if (hits != 1) schur_ok = false;
    if (schur_ok) {
      if (taken[where]) {
        schur_ok = false;
      } else {
        taken[where] = 1;
        perm[i] = where;
      }
    }
  }
  res.is_mio_on_basis = diagonal_outputs;
  if (!schur_ok) return res;

  ComplexMatrix coeff = ComplexMatrix::identity(d);
  for (std::size_t i = 0; i < d && schur_ok; ++i) {
    for (std::size_t j = 0; j < d && schur_ok; ++j) {
      if (i == j) continue;
      const ComplexMatrix probe = channel.apply_linear(matrix_unit(d, i, j));
      for (std::size_t a = 0; a < d && schur_ok; ++a)
        for (std::size_t b = 0; b < d && schur_ok; ++b)
          if (std::abs(probe.at(a, b)) > cut &&
              !(a == perm[i] && b == perm[j]))
            schur_ok = false;
      if (schur_ok) coeff.at(i, j) = probe.at(perm[i], perm[j]);
    }
  }
  if (!schur_ok) return res;

  coeff = (coeff + coeff.adjoint()) * cx(0.5, 0.0);
  try {
    res.schur = make_schur(coeff, perm, 1e-7);
  } catch (const std::invalid_argument&) {
    return res;
  }
  res.is_schur = true;
  return res;
}

double multiplicativity_deviation(const KrausChannel& channel,
                                  const DensityMatrix& rho,
                                  const DensityMatrix& sigma) {
  const std::size_t d = sigma.dim();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      if (i != j && std::abs(sigma.at(i, j)) > default_tol)
        throw std::invalid_argument("multiplicativity_deviation needs diagonal sigma");
  const ComplexMatrix lhs =
      channel.apply_linear(rho.mat()) * channel.apply_linear(sigma.mat());
  const ComplexMatrix rhs = channel.apply_linear(rho.mat() * sigma.mat());
  const double f = frobenius_norm(lhs - rhs);
  return f * f;
}

KrausChannel dephasing_channel(double p, std::size_t dim) {
  if (p < 0.0 || p > 1.0)
    throw std::invalid_argument("dephasing strength must lie in [0, 1]");
  if (dim == 0) throw std::invalid_argument("dephasing needs dim >= 1");
  std::vector<ComplexMatrix> ops;
  ComplexMatrix keep(dim);
  for (std::size_t i = 0; i < dim; ++i) keep.at(i, i) = cx(std::sqrt(1.0 - p), 0.0);
  ops.push_back(std::move(keep));
  for (std::size_t i = 0; i < dim; ++i) {
    ComplexMatrix pin(dim);
    pin.at(i, i) = cx(std::sqrt(p), 0.0);
    ops.push_back(std::move(pin));
  }
  return KrausChannel(std::move(ops));
}

KrausChannel amplitude_damping_channel(double gamma) {
  if (gamma < 0.0 || gamma > 1.0)
    throw std::invalid_argument("damping strength must lie in [0, 1]");
  ComplexMatrix keep(2);
  keep.at(0, 0) = cx(1.0, 0.0);
  keep.at(1, 1) = cx(std::sqrt(1.0 - gamma), 0.0);
  ComplexMatrix drop(2);
  drop.at(0, 1) = cx(std::sqrt(gamma), 0.0);
  return KrausChannel({keep, drop});
}

ComplexMatrix addition_linear(double alpha, const DensityMatrix& sigma,
                              const ComplexMatrix& x) {
  if (alpha < 0.0 || alpha > 1.0)
    throw std::invalid_argument("mixing weight must lie in [0, 1]");
  const std::size_t d = sigma.dim();
  if (x.dim() != d) throw std::invalid_argument("addition input dimension mismatch");
  const ComplexMatrix& s = sigma.mat();
  ComplexMatrix out = x * cx(alpha, 0.0);
  const cx tr = x.trace();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      out.at(i, j) += (1.0 - alpha) * tr * s.at(i, j);
  const ComplexMatrix comm = x * s - s * x;
  const double w = std::sqrt(alpha * (1.0 - alpha));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      out.at(i, j) -= cx(0.0, w) * comm.at(i, j);
  return out;
}

DensityMatrix addition_channel_commutator(double alpha, const DensityMatrix& sigma,
                                          const DensityMatrix& rho) {
  return DensityMatrix(addition_linear(alpha, sigma, rho.mat()));
}

DensityMatrix addition_channel_stinespring(double alpha, const DensityMatrix& sigma,
                                           const DensityMatrix& rho) {
  if (alpha < 0.0 || alpha > 1.0)
    throw std::invalid_argument("mixing weight must lie in [0, 1]");
  const std::size_t d = sigma.dim();
  if (rho.dim() != d) throw std::invalid_argument("addition input dimension mismatch");
  // Joint rotation sqrt(alpha) I + i sqrt(1 - alpha) S with S the swap.
  const std::size_t dd = d * d;
  ComplexMatrix u(dd);
  const double a = std::sqrt(alpha);
  const double b = std::sqrt(1.0 - alpha);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      u.at(i * d + j, i * d + j) += cx(a, 0.0);
      u.at(i * d + j, j * d + i) += cx(0.0, b);
    }
  }
  const ComplexMatrix joint = tensor(rho.mat(), sigma.mat());
  const ComplexMatrix evolved = u * joint * u.adjoint();
  return DensityMatrix(partial_trace(evolved, {d, d}, {0}));
}

KrausChannel addition_channel_kraus(double alpha, const DensityMatrix& sigma) {
  if (alpha < 0.0 || alpha > 1.0)
    throw std::invalid_argument("mixing weight must lie in [0, 1]");
  const std::size_t d = sigma.dim();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      if (i != j && std::abs(sigma.at(i, j)) > default_tol)
        throw std::invalid_argument("addition kraus form needs diagonal sigma");
  const double a = std::sqrt(alpha);
  const double b = std::sqrt(1.0 - alpha);
  std::vector<ComplexMatrix> ops;
  for (std::size_t bidx = 0; bidx < d; ++bidx) {
    for (std::size_t j = 0; j < d; ++j) {
      const double q = sigma.at(j, j).real();
      if (q <= 0.0) continue;
      ComplexMatrix k(d);
      if (bidx == j)
        for (std::size_t t = 0; t < d; ++t) k.at(t, t) = cx(a, 0.0);
      k.at(j, bidx) += cx(0.0, b);
      k *= cx(std::sqrt(q), 0.0);
      ops.push_back(std::move(k));
    }
  }
  return KrausChannel(std::move(ops));
}

ComplexMatrix superoperator(const KrausChannel& channel) {
  const std::size_t d = channel.dim();
  ComplexMatrix s(d * d);
  for (const ComplexMatrix& k : channel.ops()) s += tensor(k, k.conjugate());
  return s;
}

bool channels_commute(const KrausChannel& a, const KrausChannel& b, double tol) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("commutation check needs equal dimensions");
  const ComplexMatrix sa = superoperator(a);
  const ComplexMatrix sb = superoperator(b);
  return frobenius_norm(sa * sb - sb * sa) <= tol;
}

std::string channel_to_json(const KrausChannel& channel) {
  return channel_json(channel).dump(2);
}

KrausChannel channel_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("channel json parse failure: ") + e.what());
  }
  return channel_from(j);
}

KrausChannel load_channel(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open channel file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return channel_from_json(buf.str());
}

void save_channel(const KrausChannel& channel, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write channel file: " + path);
  out << channel_to_json(channel) << '\n';
}

std::string schur_to_json(const SchurChannel& channel) {
  nlohmann::json j;
  j["coeff"] = nlohmann::json::parse(matrix_to_json(channel.coeff));
  j["perm"] = channel.perm;
  return j.dump(2);
}

SchurChannel schur_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("schur json parse failure: ") + e.what());
  }
  if (!j.is_object() || !j.contains("coeff") || !j.contains("perm"))
    throw std::invalid_argument("schur json needs coeff and perm");
  const ComplexMatrix coeff = matrix_from_json(j["coeff"].dump());
  std::vector<std::size_t> perm;
  for (const nlohmann::json& p : j["perm"]) {
    if (!p.is_number_unsigned())
      throw std::invalid_argument("schur perm entries must be nonnegative integers");
    perm.push_back(p.get<std::size_t>());
  }
  return make_schur(coeff, perm);
}

}  // namespace cohlab
