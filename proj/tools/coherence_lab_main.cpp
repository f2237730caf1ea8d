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

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cohlab/catalysis.hpp"
#include "cohlab/channels.hpp"
#include "cohlab/experiments.hpp"
#include "cohlab/measures.hpp"
#include "cohlab/phasedisc.hpp"
#include "cohlab/qmat.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitSolver = 3;

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

void run_figures(const std::string& config_path) {
  const cohlab::ExperimentConfig cfg = cohlab::load_config(config_path);
  const cohlab::CurvesResult res = cohlab::figure_curves(cfg);
  std::cout << "rows: " << res.rows.size() << '\n';
  for (const cohlab::Crossover& cross : res.crossovers) {
    std::cout << "crossover p=" << fmt(cross.p) << ": ";
    if (cross.found)
      std::cout << "z=" << fmt(cross.z) << '\n';
    else
      std::cout << "none\n";
  }
  if (!res.csv_path.empty()) std::cout << "wrote " << res.csv_path << '\n';
  if (!res.svg_path.empty()) std::cout << "wrote " << res.svg_path << '\n';
}

void run_violation(const std::string& config_path) {
  const cohlab::ExperimentConfig cfg = cohlab::load_config(config_path);
  const cohlab::ViolationResult res = cohlab::violation_experiment(cfg);
  std::cout << "samples: " << res.records.size() << '\n';
  std::cout << "min: " << fmt(res.min) << '\n';
  std::cout << "median: " << fmt(res.median) << '\n';
  std::cout << "max: " << fmt(res.max) << '\n';
  std::cout << "fraction above 1e-3: " << fmt(res.frac_above_1e3) << '\n';
  if (!res.csv_path.empty()) std::cout << "wrote " << res.csv_path << '\n';
  if (!res.svg_path.empty()) std::cout << "wrote " << res.svg_path << '\n';
}

void run_catalysis_demo(double z, double p, std::size_t n, const std::string& json_out) {
  if (n != 2)
    throw std::invalid_argument("catalysis-demo: only the two-block protocol is wired up");
  const cohlab::QutritExampleResult res = cohlab::run_qutrit_example(z, p);
  std::cout << "z: " << fmt(res.z) << '\n';
  std::cout << "p: " << fmt(res.p) << '\n';
  std::cout << "coherence fraction, direct use: " << fmt(res.cf_direct) << '\n';
  std::cout << "coherence fraction, processed pair: " << fmt(res.cf_processed) << '\n';
  std::cout << "enhancement: " << fmt(res.cf_processed - res.cf_direct) << '\n';
  std::cout << "catalyst restoration error: " << fmt(res.trace.catalyst_restored_error)
            << '\n';
  if (!json_out.empty()) {
    nlohmann::json j;
    j["z"] = res.z;
    j["p"] = res.p;
    j["cf_direct"] = res.cf_direct;
    j["cf_processed"] = res.cf_processed;
    j["catalyst_restored_error"] = res.trace.catalyst_restored_error;
    j["rho_prime"] = nlohmann::json::parse(
        cohlab::matrix_to_json(res.trace.processed.mat()));
    std::ofstream out(json_out);
    if (!out) throw std::invalid_argument("cannot write " + json_out);
    out << j.dump(2) << '\n';
    std::cout << "wrote " << json_out << '\n';
  }
}

int run_phase_disc(const std::string& state_path, const std::vector<double>& phases,
                   const std::vector<double>& priors, bool sweep) {
  const cohlab::DensityMatrix rho(cohlab::load_matrix(state_path));
  const cohlab::PhaseGame game{phases, priors};
  const cohlab::DiscriminationResult res = cohlab::optimal_success(rho, game);
  const double baseline = cohlab::incoherent_baseline(game);
  std::cout << "success probability: " << fmt(res.value) << '\n';
  std::cout << "upper certificate: " << fmt(res.certificate) << '\n';
  std::cout << "incoherent baseline: " << fmt(baseline) << '\n';
  std::cout << "advantage ratio: " << fmt(res.value / baseline) << '\n';
  std::cout << "iterations: " << res.iterations << '\n';
  if (!res.converged) {
    std::cerr << "error: discrimination solver did not converge\n";
    return kExitSolver;
  }
  if (sweep) {
    std::cout << "sweep over symmetric games:\n";
    for (std::size_t m = 2; m <= 6; ++m) {
      cohlab::PhaseGame sym;
      for (std::size_t k = 0; k < m; ++k) {
        sym.phases.push_back(2.0 * std::numbers::pi * static_cast<double>(k) /
                             static_cast<double>(m));
        sym.priors.push_back(1.0 / static_cast<double>(m));
      }
      const cohlab::DiscriminationResult r = cohlab::optimal_success(rho, sym);
      if (!r.converged) {
        std::cerr << "error: discrimination solver did not converge (m=" << m << ")\n";
        return kExitSolver;
      }
      std::cout << "  m=" << m << " value=" << fmt(r.value)
                << " baseline=" << fmt(1.0 / static_cast<double>(m))
                << " advantage=" << fmt(r.value * static_cast<double>(m)) << '\n';
    }
  }
  return kExitOk;
}

int run_measures(const std::string& state_path) {
  const cohlab::DensityMatrix rho(cohlab::load_matrix(state_path));
  const cohlab::RobustnessResult rob = cohlab::robustness_solve(rho);
  if (!rob.converged) {
    std::cerr << "error: robustness solver did not converge\n";
    return kExitSolver;
  }
  std::cout << cohlab::report_to_json(cohlab::measure(rho)) << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coherence-lab: catalytic protocols, channels, and coherence measures"};
  app.require_subcommand(1);

  std::string figures_config;
  CLI::App* figures = app.add_subcommand(
      "figures", "Direct vs processed coherence-fraction curves over the (p, z) grid");
  figures->add_option("--config", figures_config, "experiment config JSON")->required();

  std::string violation_config;
  CLI::App* violation = app.add_subcommand(
      "violation", "Multiplicativity deviation of the relaxation fixture on random states");
  violation->add_option("--config", violation_config, "experiment config JSON")->required();

  std::string classify_path;
  CLI::App* classify = app.add_subcommand(
      "classify", "Report a stored channel's structure and incoherence properties");
  classify->add_option("channel", classify_path, "channel JSON file")->required();

  double demo_z = 0.9;
  double demo_p = 0.5;
  std::size_t demo_n = 2;
  std::string demo_json_out;
  CLI::App* demo = app.add_subcommand(
      "catalysis-demo", "Run the correlated-pair protocol with dephasing noise");
  demo->add_option("--z", demo_z, "pair-state weight, needs z >= 3/4")->required();
  demo->add_option("--p", demo_p, "dephasing strength in [0, 1]")->required();
  demo->add_option("--n", demo_n, "protocol block count (only 2 supported)");
  demo->add_option("--json-out", demo_json_out, "optional JSON result file");

  std::string disc_state;
  std::vector<double> disc_phases;
  std::vector<double> disc_priors;
  bool disc_sweep = false;
  CLI::App* disc = app.add_subcommand(
      "phase-disc", "Optimal success probability for a phase discrimination game");
  disc->add_option("--state", disc_state, "density matrix JSON file")->required();
  disc->add_option("--phases", disc_phases, "game phases (radians)")
      ->required()
      ->expected(-2);
  disc->add_option("--priors", disc_priors, "game priors, must sum to 1")
      ->required()
      ->expected(-2);
  disc->add_flag("--sweep", disc_sweep, "also sweep symmetric m-phase games, m = 2..6");

  std::string measures_state;
  CLI::App* measures = app.add_subcommand(
      "measures", "Coherence measures of a stored density matrix as JSON");
  measures->add_option("state", measures_state, "density matrix JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (figures->parsed()) {
      run_figures(figures_config);
      return kExitOk;
    }
    if (violation->parsed()) {
      run_violation(violation_config);
      return kExitOk;
    }
    if (classify->parsed()) {
      std::cout << cohlab::classify_report(classify_path);
      return kExitOk;
    }
    if (demo->parsed()) {
      run_catalysis_demo(demo_z, demo_p, demo_n, demo_json_out);
      return kExitOk;
    }
    if (disc->parsed())
      return run_phase_disc(disc_state, disc_phases, disc_priors, disc_sweep);
    if (measures->parsed()) return run_measures(measures_state);
  } catch (const cohlab::solver_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSolver;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitInvalid;
}
