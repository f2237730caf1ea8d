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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "cohlab/catalysis.hpp"
#include "cohlab/measures.hpp"
#include "cohlab/qmat.hpp"

using cohlab::ComplexMatrix;
using cohlab::CQBlockState;
using cohlab::cx;
using cohlab::DensityMatrix;

namespace {

DensityMatrix random_state(std::size_t d, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  ComplexMatrix g(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) g.at(i, j) = cx(n(rng), n(rng));
  ComplexMatrix m = g * g.adjoint();
  const double tr = m.trace().real();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) m.at(i, j) /= tr;
  return DensityMatrix(m);
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  double top = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j)
      top = std::max(top, std::abs(a.at(i, j) - b.at(i, j)));
  return top;
}

}  // namespace

TEST_CASE("tail marginals of the correlated pair state") {
  const double z = 0.9;
  const DensityMatrix pair = cohlab::correlated_pair_state(z);
  const std::vector<std::size_t> dims = {3, 3};

  const DensityMatrix whole = cohlab::tail_marginal(pair, dims, 2);
  CHECK(max_abs_diff(whole.mat(), pair.mat()) < 1e-15);

  // Last-register marginal: flat z/3 block plus 1-z pinned on the corner.
  const DensityMatrix last = cohlab::tail_marginal(pair, dims, 1);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      double want = z / 3.0;
      if (i == 2 && j == 2) want += 1.0 - z;
      CHECK(std::abs(last.at(i, j) - cx(want, 0.0)) < 1e-12);
    }
  }

  const DensityMatrix none = cohlab::tail_marginal(pair, dims, 0);
  CHECK(none.dim() == 1);
  CHECK(none.at(0, 0).real() == doctest::Approx(1.0));
  CHECK_THROWS_AS(cohlab::tail_marginal(pair, dims, 3), std::invalid_argument);
}

TEST_CASE("catalyst layout for the two-copy protocol") {
  const DensityMatrix input = cohlab::two_level_plus_state();
  const DensityMatrix pair = cohlab::correlated_pair_state(0.9);
  const CQBlockState cat = cohlab::build_catalyst(input, pair, 2);
  REQUIRE(cat.blocks.size() == 2);
  CHECK(cat.weights[0] == doctest::Approx(0.5));
  CHECK(cat.weights[1] == doctest::Approx(0.5));
  // Block 1 carries the last-register marginal of the pair.
  const DensityMatrix last = cohlab::tail_marginal(pair, {3, 3}, 1);
  CHECK(max_abs_diff(cat.blocks[0].mat(), last.mat()) < 1e-12);
  // Block 2 carries one input copy.
  CHECK(max_abs_diff(cat.blocks[1].mat(), input.mat()) < 1e-15);
  CHECK(cat.dims[0] == std::vector<std::size_t>{3});
  CHECK(cat.dims[1] == std::vector<std::size_t>{3});

  CHECK_THROWS_AS(cohlab::build_catalyst(input, pair, 3), std::invalid_argument);
  CHECK_THROWS_AS(cohlab::build_catalyst(input, input, 2), std::invalid_argument);
}

TEST_CASE("attach and measure-apply reshape the right blocks") {
  const DensityMatrix input = cohlab::two_level_plus_state();
  const DensityMatrix pair = cohlab::correlated_pair_state(0.8);
  const CQBlockState cat = cohlab::build_catalyst(input, pair, 2);
  const CQBlockState joined = cohlab::attach_system(input, cat);
  REQUIRE(joined.blocks.size() == 2);
  CHECK(joined.dims[0] == std::vector<std::size_t>({3, 3}));
  CHECK(joined.blocks[0].dim() == 9);
  // Attaching tensors the system in front.
  const DensityMatrix expect0 = cohlab::tensor(input, cat.blocks[0]);
  CHECK(max_abs_diff(joined.blocks[0].mat(), expect0.mat()) < 1e-15);

  const CQBlockState after1 = cohlab::step1_measure_apply(joined, pair);
  // Block 1 untouched, block 2 swapped for the pair.
  CHECK(max_abs_diff(after1.blocks[0].mat(), joined.blocks[0].mat()) < 1e-15);
  CHECK(max_abs_diff(after1.blocks[1].mat(), pair.mat()) < 1e-15);

  const DensityMatrix wrong = cohlab::correlated_pair_state(0.8);
  CHECK_THROWS_AS(cohlab::step1_measure_apply(cat, wrong), std::invalid_argument);
}

TEST_CASE("flag cycle rotates blocks") {
  CQBlockState s;
  for (int k = 0; k < 3; ++k) {
    ComplexMatrix m(2);
    m.at(0, 0) = cx(0.25 * (k + 1), 0.0);
    m.at(1, 1) = cx(1.0 - 0.25 * (k + 1), 0.0);
    s.weights.push_back(k == 2 ? 0.5 : 0.25);
    s.blocks.emplace_back(m);
    s.dims.push_back({2});
  }
  const CQBlockState rolled = cohlab::step2_cycle_flag(s);
  CHECK(rolled.weights[0] == doctest::Approx(0.5));
  CHECK(rolled.weights[1] == doctest::Approx(0.25));
  CHECK(max_abs_diff(rolled.blocks[0].mat(), s.blocks[2].mat()) < 1e-15);
  CHECK(max_abs_diff(rolled.blocks[1].mat(), s.blocks[0].mat()) < 1e-15);
  CHECK(max_abs_diff(rolled.blocks[2].mat(), s.blocks[1].mat()) < 1e-15);
}

TEST_CASE("register cycle is the identity on the first block") {
  std::mt19937_64 rng(3);
  CQBlockState s;
  s.weights = {0.5, 0.5};
  s.blocks = {random_state(4, rng), random_state(4, rng)};
  s.dims = {{2, 2}, {2, 2}};
  const CQBlockState cycled = cohlab::step3_cycle_systems(s);
  CHECK(max_abs_diff(cycled.blocks[0].mat(), s.blocks[0].mat()) < 1e-15);
  // Second block gets the two registers swapped.
  const ComplexMatrix swapped =
      cohlab::permute_registers(s.blocks[1].mat(), {2, 2}, {1, 0});
  CHECK(max_abs_diff(cycled.blocks[1].mat(), swapped) < 1e-15);
}

TEST_CASE("protocol restores the catalyst exactly for arbitrary inputs") {
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 8; ++rep) {
    const std::size_t n = 2 + static_cast<std::size_t>(rep % 2);
    const std::size_t d = 2;
    std::size_t dn = 1;
    for (std::size_t k = 0; k < n; ++k) dn *= d;
    const DensityMatrix rho = random_state(d, rng);
    const DensityMatrix target = random_state(dn, rng);
    const cohlab::ProtocolTrace trace = cohlab::run_protocol(rho, target, n);
    CHECK(trace.catalyst_restored_error < 1e-12);

    // The first register ends in the flag average of single-register
    // marginals of the target.
    const std::vector<std::size_t> dims(n, d);
    ComplexMatrix want(d);
    for (std::size_t k = 0; k < n; ++k) {
      want += cohlab::partial_trace(target.mat(), dims, {k}) *
              cx(1.0 / static_cast<double>(n), 0.0);
    }
    CHECK(max_abs_diff(trace.processed.mat(), want) < 1e-12);
    CHECK(trace.processed.mat().trace().real() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("a flag-independent register cycle breaks restoration") {
  const DensityMatrix input = cohlab::two_level_plus_state();
  const DensityMatrix pair = cohlab::correlated_pair_state(0.9);
  const cohlab::ProtocolTrace good = cohlab::run_protocol(input, pair, 2);
  CHECK(good.catalyst_restored_error < 1e-12);

  // Replace the conditioned cycle with the same full swap on every block.
  CQBlockState uniform = good.after_step2;
  for (std::size_t k = 0; k < uniform.blocks.size(); ++k) {
    uniform.blocks[k] = DensityMatrix(
        cohlab::permute_registers(uniform.blocks[k].mat(), uniform.dims[k], {1, 0}));
  }
  const double err = cohlab::cq_distance(cohlab::drop_system(uniform), good.catalyst);
  CHECK(err > 0.01);
}

TEST_CASE("two-copy pipeline matches the closed form across z") {
  for (double z : {0.75, 0.8, 0.85, 0.9, 0.95, 1.0}) {
    const cohlab::ProtocolTrace trace = cohlab::run_protocol(
        cohlab::two_level_plus_state(), cohlab::correlated_pair_state(z), 2);
    const ComplexMatrix want = cohlab::closed_form_rho_prime(z);
    CHECK(max_abs_diff(trace.processed.mat(), want) < 1e-12);
    CHECK(trace.catalyst_restored_error < 1e-12);
  }
}

TEST_CASE("closed form output at the threshold weight") {
  const ComplexMatrix m = cohlab::closed_form_rho_prime(0.75);
  CHECK(m.at(0, 0).real() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(m.at(1, 1).real() == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(m.at(2, 2).real() == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(m.at(0, 1).real() == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(m.at(0, 2).real() == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(m.at(1, 2).real() == doctest::Approx(0.125).epsilon(1e-15));
  CHECK_NOTHROW(DensityMatrix{m});
  CHECK_THROWS_AS(cohlab::closed_form_rho_prime(1.2), std::invalid_argument);
}

TEST_CASE("qutrit example gates on the amplitude dominance threshold") {
  CHECK_THROWS_AS(cohlab::run_qutrit_example(0.74, 0.3), std::invalid_argument);
  CHECK_THROWS_AS(cohlab::run_qutrit_example(0.5, 0.0), std::invalid_argument);
  CHECK_NOTHROW(cohlab::run_qutrit_example(0.75, 0.3));
  CHECK_NOTHROW(cohlab::run_qutrit_example(1.0, 0.3));
  CHECK_THROWS_AS(cohlab::run_qutrit_example(0.9, 1.3), std::invalid_argument);
}

TEST_CASE("qutrit example reproduces both fraction formulas") {
  for (double z : {0.75, 0.8, 0.9, 1.0}) {
    for (double p : {0.0, 0.3, 0.7, 1.0}) {
      const cohlab::QutritExampleResult res = cohlab::run_qutrit_example(z, p);
      CHECK(res.cf_direct == doctest::Approx((2.0 - p) / 3.0).epsilon(1e-12));
      const double expect = 1.0 / 3.0 + (1.0 - p) * z / 3.0 +
                            (1.0 - p) * std::sqrt(z * (1.0 - z)) /
                                (3.0 * std::sqrt(3.0));
      CHECK(res.cf_processed == doctest::Approx(expect).epsilon(1e-10));
      // Strict enhancement only above the threshold and below full noise.
      if (z > 0.76 && z < 0.99 && p < 0.99)
        CHECK(res.cf_processed > res.cf_direct + 1e-4);
      if (p == 1.0)
        CHECK(res.cf_processed == doctest::Approx(res.cf_direct).epsilon(1e-12));
    }
  }
  // At the threshold weight the two arms tie for every noise strength.
  const cohlab::QutritExampleResult at_cut = cohlab::run_qutrit_example(0.75, 0.3);
  CHECK(at_cut.cf_processed == doctest::Approx(at_cut.cf_direct).epsilon(1e-10));
}

TEST_CASE("cq validation rejects malformed states") {
  CQBlockState bad;
  CHECK_THROWS_AS(cohlab::validate_cq(bad), std::invalid_argument);
  bad.weights = {0.5, 0.6};
  bad.blocks = {DensityMatrix(ComplexMatrix::identity(1)),
                DensityMatrix(ComplexMatrix::identity(1))};
  bad.dims = {{1}, {1}};
  CHECK_THROWS_AS(cohlab::validate_cq(bad), std::invalid_argument);
  bad.weights = {0.5, 0.5};
  CHECK_NOTHROW(cohlab::validate_cq(bad));
  bad.dims = {{1}, {2}};
  CHECK_THROWS_AS(cohlab::validate_cq(bad), std::invalid_argument);
}
