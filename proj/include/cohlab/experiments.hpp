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
#include <cstdint>
#include <string>
#include <vector>

#include "cohlab/qmat.hpp"

namespace cohlab {

// xoshiro256++ with splitmix64 seeding and an explicit Box-Muller transform,
// so identical seeds give identical byte streams on every build.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  std::uint64_t next();
  double uniform();  // [0, 1)
  double normal();   // standard normal
  // Independent deterministic stream derived from this generator's seed.
  Rng fork(std::uint64_t stream) const;

 private:
  std::uint64_t state_[4];
  std::uint64_t seed_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Unit-trace positive matrix G G^dag from a square complex Gaussian G.
DensityMatrix ginibre_state(std::size_t dim, Rng& rng);

struct ZGrid {
  double lo = 0.75;
  double hi = 1.0;
  std::size_t steps = 50;
};

struct ExperimentConfig {
  std::uint64_t seed = 12345;
  std::size_t samples = 100;
  std::vector<double> p_values = {0.2, 0.5, 0.8};
  ZGrid z_grid;
  std::string out_dir = ".";
  std::string format = "both";  // csv, svg, or both
};
void validate_config(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig load_config(const std::string& path);

struct CurveRow {
  double p = 0.0;
  double z = 0.0;
  double direct = 0.0;
  double processed = 0.0;
};
struct Crossover {
  double p = 0.0;
  double z = 0.0;
  bool found = false;
};
struct CurvesResult {
  std::vector<CurveRow> rows;
  std::vector<Crossover> crossovers;
  std::string csv;
  std::string svg;
  std::string csv_path;  // empty when the format skipped it
  std::string svg_path;
};
// Direct and protocol-processed coherence fractions over the (p, z) grid.
CurvesResult figure_curves(const ExperimentConfig& cfg);

struct ViolationRecord {
  std::size_t index = 0;
  double deviation = 0.0;
};
struct ViolationResult {
  std::vector<ViolationRecord> records;
  double min = 0.0;
  double median = 0.0;
  double max = 0.0;
  double frac_above_1e3 = 0.0;  // fraction of samples with deviation > 1e-3
  std::string csv;
  std::string svg;
  std::string csv_path;
  std::string svg_path;
};
// Multiplicativity deviation of the relaxation fixture over random states.
ViolationResult violation_experiment(const ExperimentConfig& cfg);

// Human-readable classification of a channel stored as JSON.
std::string classify_report(const std::string& channel_path);

}  // namespace cohlab
