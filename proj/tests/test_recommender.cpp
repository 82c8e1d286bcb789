// Copyright 2026 The fleetmc Authors. All Rights Reserved.
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

#include <doctest.h>

#include <set>

#include "fleetmc/evaluation.hpp"
#include "fleetmc/recommender.hpp"

using namespace fleetmc;

namespace {

SyntheticFleetSpec protocol(std::uint64_t seed) {
  SyntheticFleetSpec spec;
  spec.seed = seed;
  spec.noise_std = 0.05;
  spec.noise_relative = true;
  spec.hide_optimum = true;
  return spec;
}

Matrixd row(std::initializer_list<double> xs) {
  Matrixd m(1, static_cast<Eigen::Index>(xs.size()));
  Eigen::Index j = 0;
  for (const double x : xs) m(0, j++) = x;
  return m;
}

// Every selection was unobserved when made, revealed the true value, and
// grew the support by exactly one.
void check_trace_consistency(const CampaignTrace& trace, const Matrixd& truth) {
  Mask seen = trace.initial_mask;
  std::size_t count = static_cast<std::size_t>(seen.count());
  for (const auto& round : trace.rounds) {
    for (const auto& s : round.selections) {
      CHECK_FALSE(seen(s.machine, s.column));
      seen(s.machine, s.column) = true;
      CHECK(s.acquired == truth(s.machine, s.column));
      ++count;
    }
    CHECK(round.observed_count == count);
  }
  CHECK((seen == trace.final_mask).all());
}

}  // namespace

TEST_CASE("full fleet selection") {
  const Matrixd p = row({0.1, 0.9, 0.5});
  CHECK(select_full_fleet(p, Mask::Constant(1, 3, false)) == std::vector<Selection>{{0, 1}});
  Mask m = Mask::Constant(1, 3, false);
  m(0, 1) = true;
  CHECK(select_full_fleet(p, m) == std::vector<Selection>{{0, 2}});
  CHECK(select_full_fleet(row({0.7, 0.7}), Mask::Constant(1, 2, false)) ==
        std::vector<Selection>{{0, 0}});
  // An exhausted machine makes no pick.
  CHECK(select_full_fleet(p, Mask::Constant(1, 3, true)).empty());
  CHECK_THROWS_AS(select_full_fleet(p, Mask::Constant(2, 3, false)), ValidationError);
}

TEST_CASE("limited fleet selection") {
  Matrixd p(3, 2);
  p << 0.9, 0.1, 0.2, 0.0, 0.5, 0.3;
  const Mask none = Mask::Constant(3, 2, false);
  const auto two = select_limited_fleet(p, none, 2);
  REQUIRE(two.size() == 2);
  CHECK(std::set<Eigen::Index>{two[0].machine, two[1].machine} == std::set<Eigen::Index>{0, 2});

  Matrixd tied(2, 1);
  tied << 0.9, 0.9;
  const auto one = select_limited_fleet(tied, Mask::Constant(2, 1, false), 1);
  REQUIRE(one.size() == 1);
  CHECK(one[0].machine == 0);

  CHECK_THROWS_AS(select_limited_fleet(p, none, 0), ValidationError);
  CHECK_THROWS_AS(select_limited_fleet(p, none, 4), ValidationError);
}

TEST_CASE("limited with c = K picks what the full fleet picks") {
  const auto fleet = generate_synthetic_fleet(protocol(3));
  const Matrixd p = predict_fleet(fleet.initial, CompletionConfig{});
  auto full = select_full_fleet(p, fleet.initial.mask());
  auto limited = select_limited_fleet(p, fleet.initial.mask(), 10);
  auto by_machine = [](const Selection& a, const Selection& b) { return a.machine < b.machine; };
  std::sort(limited.begin(), limited.end(), by_machine);
  CHECK(full == limited);
}

TEST_CASE("campaign config validation") {
  CampaignConfig cfg;
  CHECK_NOTHROW(cfg.validate(10));
  cfg.budget = -1;
  CHECK_THROWS_AS(cfg.validate(10), ValidationError);
  cfg = CampaignConfig{};
  cfg.mode = Participation::Limited;
  cfg.limited = 11;
  CHECK_THROWS_AS(cfg.validate(10), ValidationError);
  cfg.limited = 0;
  CHECK_THROWS_AS(cfg.validate(10), ValidationError);
  cfg = CampaignConfig{};
  cfg.local_rank = 0;
  CHECK_THROWS_AS(cfg.validate(10), ValidationError);
}

TEST_CASE("synthetic fleet") {
  SyntheticFleetSpec spec;
  spec.seed = 7;
  const auto fleet = generate_synthetic_fleet(spec);
  CHECK(observed_target(spec) == 158);
  CHECK(fleet.initial.observed_count() == 158);
  CHECK(fleet.ground_truth.rows() == 10);
  CHECK(fleet.ground_truth.cols() == 35);
  for (Eigen::Index k = 0; k < 10; ++k) CHECK(fleet.initial.row_observed(k) >= 1);

  // Noiseless truth has rank at most three.
  Eigen::JacobiSVD<Matrixd> svd(fleet.ground_truth);
  CHECK(svd.singularValues()(3) <= 1e-10 * svd.singularValues()(0));

  spec.mask_fraction = 0;
  CHECK(generate_synthetic_fleet(spec).initial.observed_count() == 350);

  // Same seed, same fleet.
  spec.mask_fraction = 0.55;
  const auto again = generate_synthetic_fleet(spec);
  CHECK(again.ground_truth == fleet.ground_truth);
  CHECK((again.initial.mask() == fleet.initial.mask()).all());
}

TEST_CASE("synthetic fleet options") {
  SyntheticFleetSpec spec = protocol(11);
  spec.min_row_observed = 3;
  spec.min_col_observed = 2;
  const auto fleet = generate_synthetic_fleet(spec);
  const auto best = true_optimum(fleet.ground_truth);
  for (Eigen::Index k = 0; k < 10; ++k) {
    CHECK_FALSE(fleet.initial.observed(k, best[static_cast<std::size_t>(k)]));
    CHECK(fleet.initial.row_observed(k) >= 3);
  }
  for (Eigen::Index j = 0; j < 35; ++j) CHECK(fleet.initial.col_observed(j) >= 2);

  SyntheticFleetSpec bad;
  bad.mask_fraction = 1.0;
  CHECK_THROWS_AS(generate_synthetic_fleet(bad), ValidationError);
  bad = SyntheticFleetSpec{};
  bad.machines = 0;
  CHECK_THROWS_AS(generate_synthetic_fleet(bad), ValidationError);
  bad = SyntheticFleetSpec{};
  bad.noise_std = -1;
  CHECK_THROWS_AS(generate_synthetic_fleet(bad), ValidationError);
  bad = SyntheticFleetSpec{};
  bad.min_col_observed = 11;
  CHECK_THROWS_AS(generate_synthetic_fleet(bad), ValidationError);
  // Two machines cannot each keep 30 of 35 cells when only 10 are kept.
  bad = SyntheticFleetSpec{};
  bad.machines = 2;
  bad.mask_fraction = 0.86;
  bad.min_row_observed = 30;
  CHECK_THROWS_AS(generate_synthetic_fleet(bad), ValidationError);
}

TEST_CASE("digest is sensitive to every bit") {
  Matrixd a = Matrixd::Zero(2, 2);
  const std::string d0 = matrix_digest(a);
  CHECK(d0.size() == 16);
  a(1, 1) = -0.0;
  CHECK(matrix_digest(a) != d0);
  CHECK(matrix_digest(Matrixd::Zero(1, 4)) != matrix_digest(Matrixd::Zero(4, 1)));
}

TEST_CASE("single machine prediction falls back to the imputed row") {
  Matrixd u = row({1.0, 3.0, 2.0});
  Mask mask(1, 3);
  mask << true, true, false;
  const Matrixd p = predict_fleet(MaskedMatrixd(u, mask), CompletionConfig{});
  CHECK(p(0, 0) == 1.0);
  CHECK(p(0, 2) == 2.0);  // global mean of the observed row
}

TEST_CASE("machine grid view") {
  const ParameterGrid grid = printer_speed_accel_grid();
  Matrixd v(2, 35);
  for (Eigen::Index j = 0; j < 35; ++j) {
    v(0, j) = static_cast<double>(j);
    v(1, j) = -static_cast<double>(j);
  }
  Mask mask = Mask::Constant(2, 35, true);
  mask(1, 9) = false;
  const MaskedMatrixd fleet(v, mask);
  const MaskedMatrixd local = machine_grid_view(fleet, 1, grid);
  CHECK(local.rows() == 5);
  CHECK(local.cols() == 7);
  CHECK(local(4, 6) == -34.0);
  CHECK_FALSE(local.observed(1, 2));
  CHECK_THROWS_AS(machine_grid_view(fleet, 0, index_grid(34)), ValidationError);
}

TEST_CASE("non-collaborative recommendation") {
  CampaignConfig cfg;
  Matrixd u(5, 7);
  for (Eigen::Index a = 0; a < 5; ++a) {
    for (Eigen::Index b = 0; b < 7; ++b) u(a, b) = -0.1 * static_cast<double>(a + b);
  }
  Mask all = Mask::Constant(5, 7, true);
  CHECK_FALSE(noncollab_recommend(MaskedMatrixd(u, all), cfg).has_value());

  Mask one = all;
  one(3, 4) = false;
  const auto single = noncollab_recommend(MaskedMatrixd(u, one), cfg);
  REQUIRE(single.has_value());
  CHECK(single->column == 3 * 7 + 4);

  CHECK_THROWS_AS(noncollab_recommend(MaskedMatrixd(5, 7), cfg), ValidationError);
}

TEST_CASE("non-collaborative recovers a rank-one grid") {
  Vectord a(5), b(7);
  a << 1.0, 1.5, 2.0, 1.2, 0.8;
  b << 0.3, 0.9, 0.4, 1.7, 0.2, 0.6, 1.1;
  const Matrixd u = a * b.transpose();
  // Checkerboard plus the first column, which ties the two halves together.
  Mask half(5, 7);
  for (Eigen::Index i = 0; i < 5; ++i) {
    for (Eigen::Index j = 0; j < 7; ++j) half(i, j) = (i + j) % 2 == 0 || j == 0;
  }
  CampaignConfig cfg;
  cfg.local_rank = 1;
  cfg.completion.lambda = 1e-9;
  const auto rec = noncollab_recommend(MaskedMatrixd(u, half), cfg);
  REQUIRE(rec.has_value());
  Eigen::Index ai = 0, bj = 0;
  u.maxCoeff(&ai, &bj);
  CHECK(rec->column == ai * 7 + bj);
  CHECK(rec->predicted == doctest::Approx(u(ai, bj)).epsilon(1e-4));
}

TEST_CASE("non-collaborative seeds empty grid rows") {
  Matrixd u = Matrixd::Constant(5, 7, -0.5);
  Mask sparse = Mask::Constant(5, 7, false);
  sparse(0, 0) = true;
  sparse(0, 1) = true;
  sparse(2, 1) = true;
  const auto rec = noncollab_recommend(MaskedMatrixd(u, sparse), CampaignConfig{});
  REQUIRE(rec.has_value());
  CHECK(rec->prediction.allFinite());
  CHECK_FALSE(sparse(rec->column / 7, rec->column % 7));
}

TEST_CASE("protocol campaign, full fleet") {
  const auto fleet = generate_synthetic_fleet(protocol(21));
  const ParameterGrid grid = printer_speed_accel_grid();
  CampaignConfig cfg;
  const CampaignTrace trace = run_campaign(fleet.ground_truth, fleet.initial.mask(), cfg, grid);
  CHECK(trace.kind == CampaignKind::Collaborative);
  CHECK(trace.rounds.size() == 19);
  const auto added = trace.final_mask.count() - trace.initial_mask.count();
  CHECK(added <= 190);
  for (const auto& r : trace.rounds) {
    CHECK(r.selections.size() <= 10);
    CHECK(r.prediction_digest.size() == 16);
    for (const auto& s : r.selections) {
      CHECK(s.parameters == grid.unflatten(static_cast<std::size_t>(s.column)).values);
    }
  }
  check_trace_consistency(trace, fleet.ground_truth);

  // Bit-identical on rerun and with more threads.
  CHECK(run_campaign(fleet.ground_truth, fleet.initial.mask(), cfg, grid) == trace);
  cfg.completion.threads = 3;
  CHECK(run_campaign(fleet.ground_truth, fleet.initial.mask(), cfg, grid) == trace);
}

TEST_CASE("protocol campaign, limited fleet") {
  const auto fleet = generate_synthetic_fleet(protocol(22));
  const ParameterGrid grid = printer_speed_accel_grid();
  CampaignConfig cfg;
  cfg.mode = Participation::Limited;
  cfg.limited = 5;
  const CampaignTrace trace = run_campaign(fleet.ground_truth, fleet.initial.mask(), cfg, grid);
  CHECK(trace.limited == 5);
  CHECK(trace.final_mask.count() - trace.initial_mask.count() <= 95);
  for (const auto& r : trace.rounds) CHECK(r.selections.size() <= 5);
  check_trace_consistency(trace, fleet.ground_truth);
}

TEST_CASE("warm start stays valid") {
  const auto fleet = generate_synthetic_fleet(protocol(23));
  CampaignConfig cfg;
  cfg.warm_start = true;
  const CampaignTrace trace =
      run_campaign(fleet.ground_truth, fleet.initial.mask(), cfg, printer_speed_accel_grid());
  CHECK(trace.rounds.size() == 19);
  check_trace_consistency(trace, fleet.ground_truth);
}

TEST_CASE("one machine, one unobserved cell") {
  const Matrixd u = row({-0.3, -0.1, -0.7});
  Mask mask(1, 3);
  mask << true, false, true;
  CampaignConfig cfg;
  cfg.budget = 1;
  const auto collab = run_campaign(u, mask, cfg, index_grid(3));
  REQUIRE(collab.rounds.size() == 1);
  REQUIRE(collab.rounds[0].selections.size() == 1);
  CHECK(collab.rounds[0].selections[0].column == 1);
  CHECK(collab.rounds[0].selections[0].acquired == -0.1);
  CHECK(collab.final_mask.all());

  const auto base = run_baseline_campaign(u, mask, cfg, index_grid(3));
  REQUIRE(base.rounds.size() == 1);
  CHECK(base.rounds[0].selections[0].column == 1);
}

TEST_CASE("campaign stops when every machine is exhausted") {
  const Matrixd u = row({-0.3, -0.1, -0.7});
  Mask mask(1, 3);
  mask << true, false, true;
  CampaignConfig cfg;
  cfg.budget = 5;
  CHECK(run_campaign(u, mask, cfg, index_grid(3)).rounds.size() == 1);
  CHECK(run_baseline_campaign(u, mask, cfg, index_grid(3)).rounds.size() == 1);
}

TEST_CASE("zero budget gives empty traces") {
  const auto fleet = generate_synthetic_fleet(protocol(24));
  CampaignConfig cfg;
  cfg.budget = 0;
  const ParameterGrid grid = printer_speed_accel_grid();
  const auto collab = run_campaign(fleet.ground_truth, fleet.initial.mask(), cfg, grid);
  const auto base = run_baseline_campaign(fleet.ground_truth, fleet.initial.mask(), cfg, grid);
  CHECK(collab.rounds.empty());
  CHECK(base.rounds.empty());
  CHECK((base.final_mask == fleet.initial.mask()).all());
}

TEST_CASE("campaign input validation") {
  const auto fleet = generate_synthetic_fleet(protocol(25));
  const ParameterGrid grid = printer_speed_accel_grid();
  Mask mask = fleet.initial.mask();
  mask.row(4).setConstant(false);
  CHECK_THROWS_AS(run_campaign(fleet.ground_truth, mask, CampaignConfig{}, grid), ValidationError);
  CHECK_THROWS_AS(run_campaign(fleet.ground_truth, fleet.initial.mask(), CampaignConfig{}, index_grid(30)),
                  ValidationError);
  CHECK_THROWS_AS(run_baseline_campaign(fleet.ground_truth, Mask::Constant(9, 35, true), CampaignConfig{}, grid),
                  ValidationError);
  Matrixd nan_truth = fleet.ground_truth;
  nan_truth(0, 0) = NAN;
  CHECK_THROWS_AS(run_baseline_campaign(nan_truth, fleet.initial.mask(), CampaignConfig{}, grid),
                  ValidationError);
}

TEST_CASE("baseline machines run independently") {
  const auto fleet = generate_synthetic_fleet(protocol(26));
  const ParameterGrid grid = printer_speed_accel_grid();
  CampaignConfig cfg;
  const auto base = run_baseline_campaign(fleet.ground_truth, fleet.initial.mask(), cfg, grid);
  CHECK(base.kind == CampaignKind::NonCollaborative);
  check_trace_consistency(base, fleet.ground_truth);

  // Changing machine 0's data must not move anyone else's picks.
  Matrixd other = fleet.ground_truth;
  other.row(0) = other.row(0).reverse().eval();
  const auto moved = run_baseline_campaign(other, fleet.initial.mask(), cfg, grid);
  REQUIRE(moved.rounds.size() == base.rounds.size());
  for (std::size_t t = 0; t < base.rounds.size(); ++t) {
    for (std::size_t s = 0; s < base.rounds[t].selections.size(); ++s) {
      const auto& a = base.rounds[t].selections[s];
      const auto& b = moved.rounds[t].selections[s];
      CHECK(a.machine == b.machine);
      if (a.machine != 0) CHECK(a.column == b.column);
    }
  }
}

TEST_CASE("limited baseline is reproducible for a fixed seed") {
  const auto fleet = generate_synthetic_fleet(protocol(27));
  const ParameterGrid grid = printer_speed_accel_grid();
  CampaignConfig cfg;
  cfg.mode = Participation::Limited;
  cfg.limited = 5;
  cfg.seed = 99;
  const auto a = run_baseline_campaign(fleet.ground_truth, fleet.initial.mask(), cfg, grid);
  const auto b = run_baseline_campaign(fleet.ground_truth, fleet.initial.mask(), cfg, grid);
  CHECK(a == b);
  for (const auto& r : a.rounds) CHECK(r.selections.size() == 5);
  cfg.completion.threads = 4;
  CHECK(run_baseline_campaign(fleet.ground_truth, fleet.initial.mask(), cfg, grid) == a);
  cfg.seed = 100;
  CHECK_FALSE(run_baseline_campaign(fleet.ground_truth, fleet.initial.mask(), cfg, grid) == a);
}

TEST_CASE("noiseless fleets reach every optimum within the budget") {
  int found_all = 0;
  const int seeds = 20;
  for (int seed = 0; seed < seeds; ++seed) {
    SyntheticFleetSpec spec;
    spec.seed = 600 + static_cast<std::uint64_t>(seed);
    spec.hide_optimum = true;
    const auto fleet = generate_synthetic_fleet(spec);
    const auto trace =
        run_campaign(fleet.ground_truth, fleet.initial.mask(), CampaignConfig{}, printer_speed_accel_grid());
    const auto outcomes = trials_to_optimum(trace, fleet.ground_truth);
    found_all += std::all_of(outcomes.begin(), outcomes.end(),
                             [](const TrialOutcome& o) { return o.is_hit(); });
  }
  CHECK(found_all >= 18);
}
