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

#include "cohlab/phasedisc.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace cohlab {

namespace {

ComplexMatrix hermitize(const ComplexMatrix& m) {
  return (m + m.adjoint()) * cx(0.5, 0.0);
}

double real_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  // Re tr(a b) for same-dimension operators.
  cx acc(0.0, 0.0);
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) acc += a.at(i, j) * b.at(j, i);
  return acc.real();
}

// Dual repair: any Hermitian y yields the upper bound tr(y) + d * s with
// s the largest amount by which some weighted state pokes above y.
double dual_upper_bound(const std::vector<ComplexMatrix>& weighted,
                        const ComplexMatrix& y) {
  const std::size_t d = y.dim();
  double worst = 0.0;
  for (const ComplexMatrix& g : weighted) {
    const Spectrum s = eig_hermitian(hermitize(g - y));
    worst = std::max(worst, s.values.front());
  }
  return y.trace().real() + static_cast<double>(d) * std::max(0.0, worst);
}

}  // namespace

void validate_game(const PhaseGame& game, double tol) {
  if (game.phases.size() < 2)
    throw std::invalid_argument("game needs at least two phases");
  if (game.phases.size() != game.priors.size())
    throw std::invalid_argument("game needs one prior per phase");
  double total = 0.0;
  for (double p : game.priors) {
    if (p < -tol) throw std::invalid_argument("priors must be nonnegative");
    total += p;
  }
  if (std::abs(total - 1.0) > tol)
    throw std::invalid_argument("priors must sum to one");
}

void validate_povm(const Povm& povm, std::size_t dim, double tol) {
  if (povm.empty()) throw std::invalid_argument("povm needs at least one element");
  ComplexMatrix sum(dim);
  for (const ComplexMatrix& m : povm) {
    if (m.dim() != dim) throw std::invalid_argument("povm element dimension mismatch");
    if (!m.is_hermitian(tol))
      throw std::invalid_argument("povm elements must be hermitian");
    const Spectrum s = eig_hermitian(m);
    if (s.values.back() < -tol)
      throw std::invalid_argument("povm elements must be positive semidefinite");
    sum += m;
  }
  for (std::size_t i = 0; i < dim; ++i) sum.at(i, i) -= cx(1.0, 0.0);
  if (frobenius_norm(sum) > tol * static_cast<double>(dim))
    throw std::invalid_argument("povm elements must resolve the identity");
}

DensityMatrix encode(const DensityMatrix& rho, double phi) {
  const std::size_t d = rho.dim();
  ComplexMatrix out(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      out.at(i, j) = rho.at(i, j) *
                     std::polar(1.0, phi * (static_cast<double>(i) -
                                            static_cast<double>(j)));
  return DensityMatrix(out);
}

double success_probability(const DensityMatrix& rho, const PhaseGame& game,
                           const Povm& povm) {
  validate_game(game);
  if (povm.size() != game.phases.size())
    throw std::invalid_argument("povm needs one outcome per phase");
  validate_povm(povm, rho.dim());
  double acc = 0.0;
  for (std::size_t k = 0; k < game.phases.size(); ++k)
    acc += game.priors[k] *
           real_inner(povm[k], encode(rho, game.phases[k]).mat());
  return acc;
}

DiscriminationResult helstrom_pair(const DensityMatrix& a, const DensityMatrix& b,
                                   double pa, double pb) {
  if (pa < 0.0 || pb < 0.0 || std::abs(pa + pb - 1.0) > default_tol)
    throw std::invalid_argument("pair priors must be a distribution");
  if (a.dim() != b.dim())
    throw std::invalid_argument("pair states must share one dimension");
  const std::size_t d = a.dim();
  const ComplexMatrix delta = a.mat() * cx(pa, 0.0) - b.mat() * cx(pb, 0.0);
  const Spectrum s = eig_hermitian(delta);
  ComplexMatrix first(d);
  double positive_mass = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    if (s.values[k] <= 0.0) continue;
    positive_mass += s.values[k];
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        first.at(i, j) += s.vectors.at(i, k) * std::conj(s.vectors.at(j, k));
  }
  DiscriminationResult res;
  res.value = pb + positive_mass;  // equals (1 + trace norm of delta) / 2
  res.povm = {first, ComplexMatrix::identity(d) - first};
  res.certificate = res.value;
  res.converged = true;
  res.iterations = 0;
  return res;
}

DiscriminationResult discrimination_fixed_point(
    const std::vector<DensityMatrix>& states, const std::vector<double>& priors,
    std::size_t max_iters) {
  const std::size_t m = states.size();
  if (m < 2) throw std::invalid_argument("discrimination needs two or more states");
  if (priors.size() != m)
    throw std::invalid_argument("discrimination needs one prior per state");
  double total = 0.0;
  for (double p : priors) {
    if (p < -default_tol) throw std::invalid_argument("priors must be nonnegative");
    total += p;
  }
  if (std::abs(total - 1.0) > default_tol)
    throw std::invalid_argument("priors must sum to one");
  const std::size_t d = states.front().dim();
  for (const DensityMatrix& s : states)
    if (s.dim() != d)
      throw std::invalid_argument("discrimination states must share one dimension");

  std::vector<ComplexMatrix> weighted;
  for (std::size_t k = 0; k < m; ++k)
    weighted.push_back(states[k].mat() * cx(priors[k], 0.0));
  const std::size_t guess_idx = static_cast<std::size_t>(
      std::max_element(priors.begin(), priors.end()) - priors.begin());

  std::vector<ComplexMatrix> povm;
  for (std::size_t k = 0; k < m; ++k)
    povm.push_back(ComplexMatrix::identity(d) * cx(priors[k], 0.0));
  auto value_of = [&](const std::vector<ComplexMatrix>& ms) {
    double acc = 0.0;
    for (std::size_t k = 0; k < m; ++k) acc += real_inner(ms[k], weighted[k]);
    return acc;
  };

  double value = value_of(povm);
  // Any Hermitian probe yields a valid upper bound, so the running minimum
  // over checked iterates (and the flat-guess probe) is itself valid.
  double certificate = dual_upper_bound(weighted, weighted[guess_idx]);
  auto probe_certificate = [&]() {
    ComplexMatrix y(d);
    for (std::size_t k = 0; k < m; ++k) y += weighted[k] * povm[k];
    certificate = std::min(certificate, dual_upper_bound(weighted, hermitize(y)));
  };
  std::size_t used = 0;
  std::size_t stall = 0;
  for (std::size_t it = 0; it < max_iters; ++it) {
    ++used;
    std::vector<ComplexMatrix> squeezed;
    ComplexMatrix lambda(d);
    for (std::size_t k = 0; k < m; ++k) {
      squeezed.push_back(weighted[k] * povm[k] * weighted[k]);
      lambda += squeezed.back();
    }
    const Spectrum s = eig_hermitian(hermitize(lambda));
    const double top = std::max(s.values.front(), 0.0);
    ComplexMatrix root_inv(d);
    ComplexMatrix support(d);
    for (std::size_t k = 0; k < d; ++k) {
      if (s.values[k] <= 1e-14 * std::max(top, 1e-300)) continue;
      const double w = 1.0 / std::sqrt(s.values[k]);
      for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
          const cx outer = s.vectors.at(i, k) * std::conj(s.vectors.at(j, k));
          root_inv.at(i, j) += w * outer;
          support.at(i, j) += outer;
        }
      }
    }
    std::vector<ComplexMatrix> next;
    for (std::size_t k = 0; k < m; ++k)
      next.push_back(hermitize(root_inv * squeezed[k] * root_inv));
    const ComplexMatrix slack = ComplexMatrix::identity(d) - support;
    next[guess_idx] += slack;
    for (std::size_t k = 0; k < m; ++k)
      povm[k] = povm[k] * cx(0.5, 0.0) + next[k] * cx(0.5, 0.0);
    const double fresh = value_of(povm);
    stall = (std::abs(fresh - value) < 1e-13) ? stall + 1 : 0;
    value = fresh;
    if (it % 16 == 15 || stall >= 3 || it + 1 == max_iters) {
      probe_certificate();
      if (certificate - std::max(value, priors[guess_idx]) <= 1e-9) break;
      if (stall >= 3) break;
    }
  }
  probe_certificate();

  DiscriminationResult res;
  const double guess_value = priors[guess_idx];
  if (value >= guess_value) {
    res.value = value;
    res.povm = povm;
  } else {
    res.value = guess_value;
    Povm flat;
    for (std::size_t k = 0; k < m; ++k)
      flat.push_back(k == guess_idx ? ComplexMatrix::identity(d)
                                    : ComplexMatrix(d));
    res.povm = flat;
  }
  res.certificate = std::max(certificate, res.value);
  res.converged = res.certificate - res.value <= 1e-6;
  res.iterations = used;
  return res;
}

DiscriminationResult optimal_success(const DensityMatrix& rho, const PhaseGame& game) {
  validate_game(game);
  std::vector<DensityMatrix> states;
  for (double phi : game.phases) states.push_back(encode(rho, phi));
  if (game.phases.size() == 2)
    return helstrom_pair(states[0], states[1], game.priors[0], game.priors[1]);
  return discrimination_fixed_point(states, game.priors);
}

double incoherent_baseline(const PhaseGame& game) {
  validate_game(game);
  return *std::max_element(game.priors.begin(), game.priors.end());
}

double empirical_advantage(const DensityMatrix& rho, const PhaseGame& game) {
  return optimal_success(rho, game).value / incoherent_baseline(game);
}

}  // namespace cohlab
