#include "cfmimo/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>

#include <gtest/gtest.h>

namespace cfmimo {
namespace {

ExperimentSpec small_spec(int realizations = 6) {
  ExperimentSpec spec;
  spec.cfg.num_aps = 24;
  spec.cfg.num_ues = 3;
  spec.cfg.num_realizations = realizations;
  spec.cfg.master_seed = 11;
  spec.threads = 2;
  return spec;
}

TEST(RunExperiment, MaxPowerOnlyRecords) {
  auto spec = small_spec(1);
  spec.algorithms = {Algorithm::kMaxPower};
  const auto result = run_experiment(spec);
  ASSERT_EQ(result.records.size(), 3u);
  for (const auto& r : result.records) {
    EXPECT_EQ(r.q, 1.0);
    EXPECT_TRUE(r.feasible);
    EXPECT_FALSE(r.target_se.has_value());
    EXPECT_GT(r.se, 0.0);
  }
}

TEST(RunExperiment, RecordCountAndOrder) {
  auto spec = small_spec(5);
  spec.target_se_list = {0.5, 1.0, 1.5};
  const auto result = run_experiment(spec);
  EXPECT_EQ(result.records.size(), 5u * 3u * (2u + 3u));
  for (std::size_t i = 1; i < result.records.size(); ++i) {
    const auto& a = result.records[i - 1];
    const auto& b = result.records[i];
    EXPECT_TRUE(std::tie(a.realization, a.ue) <= std::tie(b.realization, b.ue));
  }
}

TEST(RunExperiment, DeterministicAcrossThreadCounts) {
  auto spec = small_spec();
  const auto a = run_experiment(spec);
  spec.threads = 1;
  const auto b = run_experiment(spec);
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(a.records[i].q, b.records[i].q);
    EXPECT_EQ(a.records[i].se, b.records[i].se);
    EXPECT_EQ(a.records[i].ee, b.records[i].ee);
  }
  spec.cfg.master_seed = 12;
  const auto c = run_experiment(spec);
  EXPECT_NE(a.records[0].se, c.records[0].se);
}

TEST(RunExperiment, RecordsAreSelfConsistent) {
  auto spec = small_spec();
  const auto result = run_experiment(spec);
  for (const auto& r : result.records) {
    if (!r.feasible) continue;
    EXPECT_NEAR(r.power_w, spec.cfg.p_bar_w * r.q + spec.cfg.p_u_w, 1e-15);
    EXPECT_NEAR(r.ee, spec.cfg.bandwidth_hz * r.se / r.power_w, 1e-12 * r.ee);
    EXPECT_NEAR(r.se, std::log2(1.0 + r.sinr), 1e-12);
    EXPECT_GE(r.q, 0.0);
    EXPECT_LE(r.q, 1.0);
  }
}

TEST(RunExperiment, PerRealizationOrdering) {
  auto spec = small_spec(10);
  spec.cfg.target_se = 0.5;
  const auto result = run_experiment(spec);
  std::map<std::pair<int, Algorithm>, double> min_se;
  for (const auto& r : result.records) {
    if (!r.feasible) continue;
    auto [it, fresh] = min_se.try_emplace({r.realization, r.algorithm}, r.se);
    if (!fresh) it->second = std::min(it->second, r.se);
  }
  for (int n = 0; n < 10; ++n) {
    const double mp = min_se.at({n, Algorithm::kMaxPower});
    const double mmse = min_se.at({n, Algorithm::kMaxMinSe});
    EXPECT_GE(mmse, mp - 1e-6);
    const auto ee = min_se.find({n, Algorithm::kMaxMinEe});
    if (ee != min_se.end()) {
      EXPECT_GE(ee->second, spec.cfg.target_se * (1.0 - 1e-6));
      EXPECT_LE(ee->second, mmse + 1e-4);
    }
  }
}

TEST(RunExperiment, UnreachableTargetFlagsRecords) {
  auto spec = small_spec(2);
  spec.algorithms = {Algorithm::kMaxMinEe};
  spec.cfg.target_se = 60.0;
  const auto result = run_experiment(spec);
  EXPECT_EQ(result.infeasible_records, 6);
  for (const auto& r : result.records) EXPECT_FALSE(r.feasible);
}

TEST(SeriesLabel, SuffixOnlyForMultipleTargets) {
  auto spec = small_spec();
  EXPECT_EQ(series_label(spec, Algorithm::kMaxMinEe, 1.0), "max_min_ee");
  spec.target_se_list = {0.5, 2.0};
  EXPECT_EQ(series_label(spec, Algorithm::kMaxMinEe, 0.5), "max_min_ee_sr0.5");
  EXPECT_EQ(series_label(spec, Algorithm::kMaxPower, std::nullopt), "max_power");
}

TEST(GroupSeries, CollectsFeasibleValues) {
  auto spec = small_spec(3);
  const auto result = run_experiment(spec);
  const auto groups = group_series(spec, result.records);
  ASSERT_EQ(groups.size(), 3u);
  EXPECT_EQ(groups[0].label, "max_power");
  EXPECT_EQ(groups[0].se.size(), 9u);
}

TEST(FixedApPositions, SharedAcrossRealizations) {
  auto spec = small_spec(2);
  spec.fixed_ap_positions = true;
  spec.geom.shadowing_sigma_db = 0.0;
  spec.cfg.num_ues = 1;
  const ChannelSource source(spec);
  const auto a = source.realization(0);
  const auto b = source.realization(0);
  EXPECT_TRUE(a.h == b.h);
  EXPECT_FALSE(a.beta == source.realization(1).beta);
}

TEST(MeasurementInput, DrivesTheExperiment) {
  const std::string path = ::testing::TempDir() + "tensor.csv";
  {
    std::ofstream out(path);
    out << "instance,ap,ue,re,im,valid\n";
    std::mt19937_64 rng(2);
    std::normal_distribution<double> n(0.0, 1e-5);
    for (int i = 0; i < 3; ++i)
      for (int m = 0; m < 8; ++m)
        for (int k = 0; k < 2; ++k) out << i << ',' << m << ',' << k << ',' << n(rng) << ',' << n(rng) << ",1\n";
  }
  ExperimentSpec spec;
  spec.cfg.num_aps = 8;
  spec.cfg.num_ues = 2;
  spec.cfg.num_realizations = 4;
  spec.cfg.target_se = 0.1;
  spec.measurement_file = path;
  const auto result = run_experiment(spec);
  EXPECT_EQ(result.records.size(), 4u * 2u * 3u);
  EXPECT_EQ(result.infeasible_records, 0);

  spec.cfg.num_aps = 9;
  EXPECT_THROW(run_experiment(spec), IngestError);
  std::remove(path.c_str());
}

TEST(SweepPower, ShapeAndMaxPowerTrends) {
  auto spec = small_spec(8);
  spec.sweep_p_bar_w = {0.1, 0.2, 0.4};
  spec.sweep_p_u_w = {0.05, 0.2};
  spec.cfg.target_se = 0.5;
  const auto sweep = sweep_power(spec);
  EXPECT_EQ(sweep.total_records, 8 * 3 * 3 * 2 * 3);
  std::map<std::pair<double, double>, SweepRow> mp;
  for (const auto& row : sweep.rows) {
    if (row.algorithm == "max_power") mp.emplace(std::make_pair(row.p_bar_w, row.p_u_w), row);
  }
  ASSERT_EQ(mp.size(), 6u);
  auto at = [&](double p_bar, double p_u) { return mp.at(std::make_pair(p_bar, p_u)); };
  for (double p_bar : spec.sweep_p_bar_w) {
    EXPECT_EQ(at(p_bar, 0.05).median_se, at(p_bar, 0.2).median_se);
    EXPECT_GT(at(p_bar, 0.05).median_ee, at(p_bar, 0.2).median_ee);
  }
  EXPECT_LT(at(0.1, 0.05).median_se, at(0.4, 0.05).median_se);

  spec.sweep_p_u_w.clear();
  EXPECT_THROW(sweep_power(spec), ConfigError);
}

TEST(ParallelFor, CoversEveryIndexAndRethrows) {
  std::vector<int> hits(100, 0);
  parallel_for(100, 4, [&](int i) { ++hits[i]; });
  EXPECT_TRUE(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
  EXPECT_THROW(parallel_for(10, 3, [](int i) {
                 if (i == 7) throw std::runtime_error("boom");
               }),
               std::runtime_error);
}

}  // namespace
}  // namespace cfmimo
