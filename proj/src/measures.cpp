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

#include "cohlab/measures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>
#include <stdexcept>

#include "json.hpp"

namespace cohlab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double wrap_phase(double t) {
  double w = std::fmod(t, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

// splitmix64, used only to pick deterministic phase-lattice samples when the
// full lattice is too large to enumerate.
std::uint64_t splitmix64(std::uint64_t& s) {
  s += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = s;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Overlap of diag(e^{i theta}) |uniform> with rho, times d: v^dag rho v / d.
double phase_objective(const ComplexMatrix& m, const std::vector<double>& theta) {
  const std::size_t d = m.dim();
  double acc = 0.0;
  for (std::size_t i = 0; i < d; ++i) acc += m.at(i, i).real();
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) {
      const cx term = m.at(i, j) * std::polar(1.0, theta[j] - theta[i]);
      acc += 2.0 * term.real();
    }
  }
  return acc / static_cast<double>(d);
}

// One coordinate-ascent pass over theta[1..d-1]; theta[0] stays pinned at 0.
void ascent_sweep(const ComplexMatrix& m, std::vector<double>& theta) {
  const std::size_t d = m.dim();
  for (std::size_t i = 1; i < d; ++i) {
    cx s(0.0, 0.0);
    for (std::size_t j = 0; j < d; ++j) {
      if (j == i) continue;
      s += m.at(i, j) * std::polar(1.0, theta[j]);
    }
    if (std::abs(s) > 1e-300) theta[i] = std::arg(s);
  }
}

double run_ascent(const ComplexMatrix& m, std::vector<double>& theta,
                  std::size_t max_sweeps) {
  double val = phase_objective(m, theta);
  for (std::size_t it = 0; it < max_sweeps; ++it) {
    ascent_sweep(m, theta);
    const double next = phase_objective(m, theta);
    if (next - val < 1e-14) {
      val = std::max(val, next);
      break;
    }
    val = next;
  }
  return val;
}

bool lex_less(const std::vector<double>& a, const std::vector<double>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (a[i] > b[i]) return false;
  }
  return false;
}

// Phase assignment that makes every off-diagonal entry real nonnegative, when
// one exists. Found by spanning-tree propagation over the support graph and
// then verified against every pair, so a false positive cannot slip through.
bool aligned_phases(const ComplexMatrix& m, std::vector<double>& theta) {
  const std::size_t d = m.dim();
  double scale = 0.0;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      if (i != j) scale = std::max(scale, std::abs(m.at(i, j)));
  const double edge_cut = 1e-13 * std::max(1.0, scale);
  const double verify_tol = 1e-12 * std::max(1.0, scale);

  theta.assign(d, 0.0);
  std::vector<char> seen(d, 0);
  for (std::size_t root = 0; root < d; ++root) {
    if (seen[root]) continue;
    seen[root] = 1;
    std::queue<std::size_t> q;
    q.push(root);
    while (!q.empty()) {
      const std::size_t j = q.front();
      q.pop();
      for (std::size_t i = 0; i < d; ++i) {
        if (seen[i] || i == j) continue;
        const cx rij = m.at(i, j);
        if (std::abs(rij) <= edge_cut) continue;
        theta[i] = theta[j] + std::arg(rij);
        seen[i] = 1;
        q.push(i);
      }
    }
  }
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) {
      const cx rotated = m.at(i, j) * std::polar(1.0, theta[j] - theta[i]);
      if (std::abs(rotated - cx(std::abs(rotated), 0.0)) > verify_tol) return false;
    }
  }
  return true;
}

}  // namespace

double l1_coherence(const DensityMatrix& rho) {
  const ComplexMatrix& m = rho.mat();
  const std::size_t d = m.dim();
  double acc = 0.0;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      if (i != j) acc += std::abs(m.at(i, j));
  return acc;
}

DensityMatrix full_dephase(const DensityMatrix& rho) {
  const std::size_t d = rho.dim();
  ComplexMatrix out(d);
  for (std::size_t i = 0; i < d; ++i) out.at(i, i) = cx(rho.at(i, i).real(), 0.0);
  return DensityMatrix(out);
}

FractionResult coherence_fraction(const DensityMatrix& rho, std::size_t grid,
                                  std::size_t refine_iters) {
  if (grid < 2) throw std::invalid_argument("coherence_fraction: grid must be >= 2");
  if (refine_iters < 1)
    throw std::invalid_argument("coherence_fraction: refine_iters must be >= 1");
  const ComplexMatrix& m = rho.mat();
  const std::size_t d = m.dim();

  FractionResult res;
  if (d == 1) {
    res.value = 1.0;
    res.phases = {0.0};
    res.certified = true;
    return res;
  }

  std::vector<double> aligned;
  const bool has_alignment = aligned_phases(m, aligned);
  if (has_alignment) {
    res.value = (1.0 + l1_coherence(rho)) / static_cast<double>(d);
    res.phases.resize(d);
    for (std::size_t i = 0; i < d; ++i)
      res.phases[i] = wrap_phase(aligned[i] - aligned[0]);
    res.certified = true;
    return res;
  }

  // Seed list: flat phases, the spanning-tree assignment (still a strong seed
  // when global alignment fails), and a phase lattice with `grid` points per
  // free coordinate, subsampled deterministically when too large.
  std::vector<std::vector<double>> seeds;
  seeds.emplace_back(d, 0.0);
  for (double& t : aligned) t -= aligned[0];
  seeds.push_back(aligned);

  const std::size_t free_coords = d - 1;
  const double lattice_size =
      std::pow(static_cast<double>(grid), static_cast<double>(free_coords));
  const std::size_t max_lattice = 4096;
  if (lattice_size <= static_cast<double>(max_lattice)) {
    std::vector<std::size_t> digits(free_coords, 0);
    while (true) {
      std::vector<double> theta(d, 0.0);
      for (std::size_t i = 0; i < free_coords; ++i)
        theta[i + 1] = kTwoPi * static_cast<double>(digits[i]) / static_cast<double>(grid);
      seeds.push_back(std::move(theta));
      std::size_t pos = 0;
      while (pos < free_coords && ++digits[pos] == grid) digits[pos++] = 0;
      if (pos == free_coords) break;
    }
  } else {
    std::uint64_t state = 0x1234abcd5678ef90ULL;
    for (std::size_t n = 0; n < max_lattice; ++n) {
      std::vector<double> theta(d, 0.0);
      for (std::size_t i = 1; i < d; ++i) {
        const std::uint64_t r = splitmix64(state) % grid;
        theta[i] = kTwoPi * static_cast<double>(r) / static_cast<double>(grid);
      }
      seeds.push_back(std::move(theta));
    }
  }

  double best = -1.0;
  std::vector<double> best_theta(d, 0.0);
  for (std::vector<double>& theta : seeds) {
    const double val = run_ascent(m, theta, refine_iters);
    std::vector<double> norm(d);
    for (std::size_t i = 0; i < d; ++i) norm[i] = wrap_phase(theta[i] - theta[0]);
    if (val > best + 1e-12) {
      best = val;
      best_theta = norm;
    } else if (val > best - 1e-12) {
      best = std::max(best, val);
      if (lex_less(norm, best_theta)) best_theta = norm;
    }
  }
  res.value = best;
  res.phases = best_theta;
  res.certified = false;
  return res;
}

namespace {

// Dual ascent over unit-diagonal Gram matrices W = Y^dag Y: each column in
// turn moves to the unit vector maximizing Tr(W rho), which only grows the
// objective. Returns Tr(W rho) - 1, a certified lower bound.
double gram_ascent(const ComplexMatrix& m, std::vector<std::vector<cx>>& cols,
                   std::size_t& sweeps_used) {
  const std::size_t d = m.dim();
  const std::size_t r = cols.front().size();
  auto objective = [&]() {
    double acc = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        cx dot(0.0, 0.0);
        for (std::size_t k = 0; k < r; ++k) dot += std::conj(cols[i][k]) * cols[j][k];
        acc += (dot * m.at(j, i)).real();
      }
    }
    return acc;
  };
  double prev = objective();
  std::size_t flat = 0;
  const std::size_t max_sweeps = 5000;
  std::size_t it = 0;
  for (; it < max_sweeps; ++it) {
    for (std::size_t i = 0; i < d; ++i) {
      std::vector<cx> c(r, cx(0.0, 0.0));
      for (std::size_t j = 0; j < d; ++j) {
        if (j == i) continue;
        const cx w = m.at(j, i);
        for (std::size_t k = 0; k < r; ++k) c[k] += cols[j][k] * w;
      }
      double nrm = 0.0;
      for (std::size_t k = 0; k < r; ++k) nrm += std::norm(c[k]);
      nrm = std::sqrt(nrm);
      if (nrm > 1e-300) {
        for (std::size_t k = 0; k < r; ++k) cols[i][k] = c[k] / nrm;
      }
    }
    const double cur = objective();
    if (cur - prev < 1e-16 * (1.0 + std::abs(cur))) {
      if (++flat >= 2) {
        prev = std::max(prev, cur);
        break;
      }
    } else {
      flat = 0;
    }
    prev = cur;
  }
  sweeps_used += it + 1;
  return prev - 1.0;
}

// Smallest eigenvalue of diag(x) - rho together with its eigenvector weights.
double floor_gap(const ComplexMatrix& m, const std::vector<double>& x,
                 std::vector<double>& weights) {
  const std::size_t d = m.dim();
  ComplexMatrix a(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) a.at(i, j) = (i == j ? cx(x[i], 0.0) : cx(0, 0)) - m.at(i, j);
  const Spectrum s = eig_hermitian(a);
  weights.resize(d);
  for (std::size_t i = 0; i < d; ++i) weights[i] = std::norm(s.vectors.at(i, d - 1));
  return s.values.back();
}

}  // namespace

RobustnessResult robustness_solve(const DensityMatrix& rho) {
  const ComplexMatrix& m = rho.mat();
  const std::size_t d = m.dim();
  RobustnessResult res;
  if (d == 1) {
    res.converged = true;
    return res;
  }

  // Certified lower bound from two deterministic starts of the Gram ascent.
  std::size_t sweeps = 0;
  double lower = 0.0;
  std::vector<std::vector<cx>> best_cols;
  for (int start = 0; start < 2; ++start) {
    std::vector<std::vector<cx>> cols(d, std::vector<cx>(d, cx(0.0, 0.0)));
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t k = 0; k < d; ++k) {
        cx bump = (start == 0)
                      ? cx(0.3 / std::sqrt(static_cast<double>(d)), 0.0)
                      : 0.25 / std::sqrt(static_cast<double>(d)) *
                            std::polar(1.0, kTwoPi * static_cast<double>(k * (i + 1)) /
                                                static_cast<double>(d));
        cols[i][k] = (k == i ? cx(1.0, 0.0) : cx(0.0, 0.0)) + bump;
      }
      double nrm = 0.0;
      for (std::size_t k = 0; k < d; ++k) nrm += std::norm(cols[i][k]);
      nrm = std::sqrt(nrm);
      for (std::size_t k = 0; k < d; ++k) cols[i][k] /= nrm;
    }
    const double val = gram_ascent(m, cols, sweeps);
    if (best_cols.empty() || val > lower) {
      lower = val;
      best_cols = std::move(cols);
    }
  }
  lower = std::max(lower, 0.0);  // W = I is always admissible

  // Primal candidates: the diagonal matching the dual optimum through
  // complementary slackness, and the diagonally dominant envelope.
  std::vector<double> x_slack(d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    cx acc(0.0, 0.0);
    for (std::size_t j = 0; j < d; ++j) {
      cx dot(0.0, 0.0);
      for (std::size_t k = 0; k < d; ++k)
        dot += std::conj(best_cols[j][k]) * best_cols[i][k];
      acc += m.at(i, j) * dot;
    }
    x_slack[i] = acc.real();
  }
  std::vector<double> x_envelope(d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    double row = m.at(i, i).real();
    for (std::size_t j = 0; j < d; ++j)
      if (j != i) row += std::abs(m.at(i, j));
    x_envelope[i] = row;
  }

  std::size_t eigs = 0;
  std::vector<double> w;
  auto shifted_value = [&](std::vector<double>& x) {
    const double lam = floor_gap(m, x, w);
    ++eigs;
    for (double& xi : x) xi -= lam;  // exact: floor of diag(x) - rho moves by -lam
    double tr = 0.0;
    for (double xi : x) tr += xi;
    return tr - 1.0;
  };
  double best = shifted_value(x_slack);
  std::vector<double> x_best = x_slack;
  const double env_val = shifted_value(x_envelope);
  if (env_val < best) {
    best = env_val;
    x_best = x_envelope;
  }

  // Exact-penalty subgradient refinement with Polyak steps toward the dual
  // bound; every iterate is re-projected onto the feasible boundary so the
  // reported value always belongs to a dominating diagonal matrix.
  const double gap_goal = 1e-9 * std::max(1.0, std::abs(best));
  const double mu = static_cast<double>(d) + 1.0;
  std::vector<double> x = x_best;
  std::size_t stall = 0;
  const std::size_t budget = 10000;
  std::vector<double> x_raw = x;
  for (std::size_t it = 0; it < budget && eigs < budget; ++it) {
    if (best - lower <= gap_goal) break;
    const double lam = floor_gap(m, x, w);
    ++eigs;
    double tr = 0.0;
    for (double xi : x) tr += xi;
    const double feasible_val = (tr - static_cast<double>(d) * lam) - 1.0;
    if (feasible_val < best - 1e-15) {
      best = feasible_val;
      x_best = x;
      for (double& xi : x_best) xi -= lam;
      stall = 0;
    } else if (++stall > 600) {
      break;
    }
    const double f = tr - 1.0;
    if (lam >= 0.0) {
      const double step = (f - lower) / static_cast<double>(d);
      for (double& xi : x) xi -= step;
    } else {
      const double penalty = f - mu * lam;
      double gnorm2 = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        const double gi = 1.0 - mu * w[i];
        gnorm2 += gi * gi;
      }
      if (gnorm2 < 1e-300) break;
      const double step = (penalty - lower) / gnorm2;
      for (std::size_t i = 0; i < d; ++i) x[i] -= step * (1.0 - mu * w[i]);
    }
    x_raw = x;
  }

  // The raw iterate can sit slightly outside the feasible set with a smaller
  // trace; walk back toward the best feasible point to harvest that slack.
  {
    double tr_raw = 0.0;
    for (double xi : x_raw) tr_raw += xi;
    if (tr_raw - 1.0 < best) {
      double lo = 0.0, hi = 1.0;
      std::vector<double> probe(d);
      for (int step = 0; step < 40 && eigs < budget + 60; ++step) {
        const double s = 0.5 * (lo + hi);
        for (std::size_t i = 0; i < d; ++i)
          probe[i] = (1.0 - s) * x_best[i] + s * x_raw[i];
        const double lam = floor_gap(m, probe, w);
        ++eigs;
        if (lam >= 0.0)
          lo = s;
        else
          hi = s;
      }
      for (std::size_t i = 0; i < d; ++i)
        probe[i] = (1.0 - lo) * x_best[i] + lo * x_raw[i];
      const double val = shifted_value(probe);
      if (val < best) {
        best = val;
        x_best = probe;
      }
    }
  }

  res.value = std::max(best, 0.0);
  res.lower_bound = lower;
  res.gap = std::max(res.value - res.lower_bound, 0.0);
  res.converged = res.gap <= 1e-8 * std::max(1.0, res.value);
  res.iterations = sweeps + eigs;
  return res;
}

double robustness(const DensityMatrix& rho) { return robustness_solve(rho).value; }

double advantage_ratio(const DensityMatrix& rho) { return 1.0 + robustness(rho); }

MeasureReport measure(const DensityMatrix& rho) {
  MeasureReport rep;
  rep.l1 = l1_coherence(rho);
  rep.robustness = robustness_solve(rho).value;
  const FractionResult fr = coherence_fraction(rho);
  rep.fraction = fr.value;
  rep.fraction_phases = fr.phases;
  rep.certified = fr.certified;
  return rep;
}

std::string report_to_json(const MeasureReport& report) {
  nlohmann::json j;
  j["l1"] = report.l1;
  j["robustness"] = report.robustness;
  j["fraction"] = report.fraction;
  j["fraction_phases"] = report.fraction_phases;
  j["certified"] = report.certified;
  return j.dump(2);
}

}  // namespace cohlab
