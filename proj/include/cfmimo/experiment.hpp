#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cfmimo/channel.hpp"
#include "cfmimo/combining.hpp"
#include "cfmimo/estimation.hpp"
#include "cfmimo/stats.hpp"
#include "cfmimo/tpc.hpp"
#include "cfmimo/types.hpp"

namespace cfmimo {

struct ExperimentSpec {
  SystemConfig cfg;
  Geometry geom;
  SolverSettings solver;
  /// When set, realizations come from this tensor CSV instead of synthetic draws.
  std::string measurement_file;
  std::vector<Algorithm> algorithms{Algorithm::kMaxPower, Algorithm::kMaxMinSe,
                                    Algorithm::kMaxMinEe};
  /// Targets for max-min EE; empty falls back to cfg.target_se.
  std::vector<double> target_se_list;
  /// Power sweep grid, Cartesian product of the two lists.
  std::vector<double> sweep_p_bar_w;
  std::vector<double> sweep_p_u_w;
  /// Keep the pilot SNR at its base-config value while sweeping P_bar.
  bool freeze_pilot_snr = false;
  /// Draw AP positions once and reuse them for every realization.
  bool fixed_ap_positions = false;
  /// Worker threads; 0 uses the hardware concurrency.
  int threads = 0;

  std::vector<double> targets() const;
  void validate() const;
};

struct MetricRecord {
  int realization = 0;
  int ue = 0;
  Algorithm algorithm = Algorithm::kMaxPower;
  std::optional<double> target_se;  // max-min EE only
  bool feasible = true;
  double q = 0.0;
  double sinr = 0.0;
  double se = 0.0;
  double power_w = 0.0;
  double ee = 0.0;
};

struct ExperimentResult {
  std::vector<MetricRecord> records;
  int infeasible_records = 0;
};

/// Everything the power-control solvers need from one channel realization.
struct RealizationContext {
  InterferenceProfile profile;
  double rho = 0.0;
};

/// Channel source shared by all realizations of an experiment (synthetic
/// placement state or a loaded measurement tensor).
class ChannelSource {
 public:
  explicit ChannelSource(const ExperimentSpec& spec);
  ChannelRealization realization(int index) const;

 private:
  Geometry geom_;
  SystemConfig cfg_;
  std::optional<Placement> fixed_placement_;
  std::shared_ptr<const MeasurementTensor> tensor_;
  RMatrix tensor_beta_;
};

/// Pilot phase, MMSE, ZF and profile reduction for one realization.
RealizationContext prepare_realization(const ExperimentSpec& spec, const SystemConfig& cfg,
                                       const ChannelRealization& channel, int index);

/// Runs every requested algorithm on one context; records ordered by (ue, algorithm, target).
std::vector<MetricRecord> solve_realization(const ExperimentSpec& spec, const SystemConfig& cfg,
                                            const RealizationContext& ctx, int index);

/// One TpcResult per (algorithm, target) pair.
struct LabeledResult {
  Algorithm algorithm;
  std::optional<double> target_se;
  std::optional<TpcResult> result;  // empty when infeasible
  std::string error;
};
std::vector<LabeledResult> solve_all(const ExperimentSpec& spec, const SystemConfig& cfg,
                                     const RealizationContext& ctx);

ExperimentResult run_experiment(const ExperimentSpec& spec);

/// Series label: the algorithm name, suffixed with the target when several
/// max-min EE targets are requested.
std::string series_label(const ExperimentSpec& spec, Algorithm a, std::optional<double> target);

struct SeriesValues {
  std::string label;
  std::vector<double> se;
  std::vector<double> ee;
};
/// Feasible per-(realization, UE) values grouped by series, in request order.
std::vector<SeriesValues> group_series(const ExperimentSpec& spec,
                                       const std::vector<MetricRecord>& records);

struct SweepRow {
  double p_bar_w;
  double p_u_w;
  std::string algorithm;
  double median_se;
  double median_ee;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  int infeasible_records = 0;
  int total_records = 0;
};

SweepResult sweep_power(const ExperimentSpec& spec);

/// Runs fn(i) for i in [0, n) on up to `threads` workers; rethrows the first failure.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

}  // namespace cfmimo
