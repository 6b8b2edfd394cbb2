#include "cfmimo/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "cfmimo/io.hpp"

namespace cfmimo {
namespace {

enum SeedStream : std::uint64_t { kChannelStream = 1, kPilotStream = 2, kPlacementStream = 3 };

int worker_count(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

double pilot_snr_for(const SystemConfig& cfg) {
  return cfg.pilot_snr > 0.0 ? cfg.pilot_snr : transmit_snr(cfg);
}

PilotBook pilot_book_for(const SystemConfig& cfg) {
  const int tau = cfg.effective_pilot_len();
  CMatrix phi = CMatrix::Zero(cfg.num_ues, tau);
  for (int k = 0; k < cfg.num_ues; ++k) phi(k, k) = 1.0;
  return PilotBook{std::move(phi)};
}

void fill_metrics(std::vector<MetricRecord>& out, int index, Algorithm a,
                  std::optional<double> target, const std::vector<double>& q,
                  const PerUeMetrics& m) {
  for (std::size_t k = 0; k < q.size(); ++k) {
    MetricRecord r;
    r.realization = index;
    r.ue = static_cast<int>(k);
    r.algorithm = a;
    r.target_se = target;
    r.q = q[k];
    r.sinr = m.sinr[k];
    r.se = m.se[k];
    r.power_w = m.power_w[k];
    r.ee = m.ee[k];
    out.push_back(r);
  }
}

void fill_infeasible(std::vector<MetricRecord>& out, int index, int num_ues, Algorithm a,
                     std::optional<double> target) {
  for (int k = 0; k < num_ues; ++k) {
    MetricRecord r;
    r.realization = index;
    r.ue = k;
    r.algorithm = a;
    r.target_se = target;
    r.feasible = false;
    out.push_back(r);
  }
}

bool record_order(const MetricRecord& a, const MetricRecord& b) {
  if (a.realization != b.realization) return a.realization < b.realization;
  if (a.ue != b.ue) return a.ue < b.ue;
  if (a.algorithm != b.algorithm) return a.algorithm < b.algorithm;
  return a.target_se.value_or(-1.0) < b.target_se.value_or(-1.0);
}

// Requested (algorithm, target) pairs in output order.
std::vector<std::pair<Algorithm, std::optional<double>>> series_keys(const ExperimentSpec& spec) {
  std::vector<Algorithm> algs = spec.algorithms;
  std::sort(algs.begin(), algs.end());
  algs.erase(std::unique(algs.begin(), algs.end()), algs.end());
  std::vector<std::pair<Algorithm, std::optional<double>>> keys;
  for (Algorithm a : algs) {
    if (a == Algorithm::kMaxMinEe) {
      for (double t : spec.targets()) keys.emplace_back(a, t);
    } else {
      keys.emplace_back(a, std::nullopt);
    }
  }
  return keys;
}

// Unusable realizations (bad measurement instance, rank-deficient estimate)
// still emit one flagged record per requested series and UE.
struct RealizationOutcome {
  std::vector<MetricRecord> records;
};

RealizationOutcome run_one(const ExperimentSpec& spec, const SystemConfig& cfg,
                           const ChannelSource& source, int index) {
  RealizationOutcome out;
  try {
    const ChannelRealization channel = source.realization(index);
    const RealizationContext ctx = prepare_realization(spec, cfg, channel, index);
    out.records = solve_realization(spec, cfg, ctx, index);
  } catch (const IngestError&) {
    for (const auto& [a, t] : series_keys(spec)) fill_infeasible(out.records, index, cfg.num_ues, a, t);
  } catch (const RankDeficientError&) {
    for (const auto& [a, t] : series_keys(spec)) fill_infeasible(out.records, index, cfg.num_ues, a, t);
  }
  std::sort(out.records.begin(), out.records.end(), record_order);
  return out;
}

}  // namespace

std::vector<double> ExperimentSpec::targets() const {
  return target_se_list.empty() ? std::vector<double>{cfg.target_se} : target_se_list;
}

void ExperimentSpec::validate() const {
  cfg.validate();
  geom.validate();
  solver.validate();
  if (algorithms.empty()) throw ConfigError("experiment.algorithms must not be empty");
  for (double t : target_se_list) {
    if (!(t >= 0.0)) throw ConfigError("experiment.target_se_list entries must be non-negative");
  }
  for (double p : sweep_p_bar_w) {
    if (!(p > 0.0)) throw ConfigError("experiment.sweep_p_bar_w entries must be positive");
  }
  for (double p : sweep_p_u_w) {
    if (!(p > 0.0)) throw ConfigError("experiment.sweep_p_u_w entries must be positive");
  }
  if (threads < 0) throw ConfigError("experiment.threads must be non-negative");
}

ChannelSource::ChannelSource(const ExperimentSpec& spec) : geom_(spec.geom), cfg_(spec.cfg) {
  if (!spec.measurement_file.empty()) {
    auto tensor = std::make_shared<MeasurementTensor>(read_measurement_csv(spec.measurement_file));
    if (tensor->aps() != cfg_.num_aps || tensor->ues() != cfg_.num_ues) {
      throw IngestError("measurement tensor is " + std::to_string(tensor->aps()) + "x" +
                        std::to_string(tensor->ues()) + " but the config asks for M=" +
                        std::to_string(cfg_.num_aps) + ", K=" + std::to_string(cfg_.num_ues));
    }
    tensor_beta_ = beta_from_measurements(*tensor);
    tensor_ = std::move(tensor);
  } else if (spec.fixed_ap_positions) {
    std::mt19937_64 rng(derive_seed(cfg_.master_seed, 0, kPlacementStream));
    fixed_placement_ = Placement{};
    fixed_placement_->aps = draw_positions(geom_, cfg_.num_aps, geom_.ap_height_m, rng);
  }
}

ChannelRealization ChannelSource::realization(int index) const {
  const std::uint64_t seed = derive_seed(cfg_.master_seed, static_cast<std::uint64_t>(index),
                                         kChannelStream);
  if (tensor_) return realization_from_instance(*tensor_, index % tensor_->instances(), tensor_beta_);
  if (fixed_placement_) {
    std::mt19937_64 rng(seed);
    Placement p{fixed_placement_->aps, draw_positions(geom_, cfg_.num_ues, geom_.ue_height_m, rng)};
    return generate_channel(geom_, p, rng());
  }
  return generate_channel(geom_, cfg_, seed);
}

RealizationContext prepare_realization(const ExperimentSpec& spec, const SystemConfig& cfg,
                                       const ChannelRealization& channel, int index) {
  const std::uint64_t pilot_seed =
      derive_seed(spec.cfg.master_seed, static_cast<std::uint64_t>(index), kPilotStream);
  const ChannelEstimate est =
      estimate_channel(channel.h, channel.beta, pilot_book_for(cfg), pilot_snr_for(cfg), pilot_seed);
  const CMatrix w = zf_weights(est.h_hat);
  return RealizationContext{interference_profile(w, est.h_tilde), transmit_snr(cfg)};
}

std::vector<LabeledResult> solve_all(const ExperimentSpec& spec, const SystemConfig& cfg,
                                     const RealizationContext& ctx) {
  std::vector<LabeledResult> out;
  for (const auto& [a, target] : series_keys(spec)) {
    LabeledResult lr{a, target, std::nullopt, {}};
    switch (a) {
      case Algorithm::kMaxPower:
        lr.result = max_power(cfg.num_ues);
        break;
      case Algorithm::kMaxMinSe:
        lr.result = max_min_se(ctx.profile, ctx.rho, 1.0, spec.solver);
        break;
      case Algorithm::kMaxMinEe: {
        SystemConfig c = cfg;
        c.target_se = *target;
        try {
          lr.result = max_min_ee(ctx.profile, ctx.rho, c, spec.solver);
        } catch (const InfeasibleTargetSeError& e) {
          lr.error = e.what();
        }
        break;
      }
    }
    out.push_back(std::move(lr));
  }
  return out;
}

std::vector<MetricRecord> solve_realization(const ExperimentSpec& spec, const SystemConfig& cfg,
                                            const RealizationContext& ctx, int index) {
  std::vector<MetricRecord> out;
  for (const auto& lr : solve_all(spec, cfg, ctx)) {
    if (!lr.result) {
      fill_infeasible(out, index, cfg.num_ues, lr.algorithm, lr.target_se);
      continue;
    }
    const auto& q = lr.result->allocation.q;
    fill_metrics(out, index, lr.algorithm, lr.target_se, q, evaluate(ctx.profile, q, ctx.rho, cfg));
  }
  std::sort(out.begin(), out.end(), record_order);
  return out;
}

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  const int workers = std::min(worker_count(threads), std::max(n, 1));
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = n;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  const ChannelSource source(spec);
  std::vector<RealizationOutcome> outcomes(static_cast<std::size_t>(spec.cfg.num_realizations));
  parallel_for(spec.cfg.num_realizations, spec.threads,
               [&](int r) { outcomes[r] = run_one(spec, spec.cfg, source, r); });

  ExperimentResult result;
  for (auto& o : outcomes) {
    for (auto& rec : o.records) {
      if (!rec.feasible) ++result.infeasible_records;
      result.records.push_back(rec);
    }
  }
  return result;
}

std::string series_label(const ExperimentSpec& spec, Algorithm a, std::optional<double> target) {
  std::string label = to_string(a);
  if (a == Algorithm::kMaxMinEe && target && spec.targets().size() > 1) {
    label += "_sr" + format_number(*target);
  }
  return label;
}

std::vector<SeriesValues> group_series(const ExperimentSpec& spec,
                                       const std::vector<MetricRecord>& records) {
  const auto keys = series_keys(spec);
  std::vector<SeriesValues> out;
  for (const auto& [a, t] : keys) out.push_back({series_label(spec, a, t), {}, {}});
  for (const auto& rec : records) {
    if (!rec.feasible) continue;
    for (std::size_t i = 0; i < keys.size(); ++i) {
      if (keys[i].first == rec.algorithm && keys[i].second == rec.target_se) {
        out[i].se.push_back(rec.se);
        out[i].ee.push_back(rec.ee);
        break;
      }
    }
  }
  return out;
}

SweepResult sweep_power(const ExperimentSpec& spec) {
  spec.validate();
  if (spec.sweep_p_bar_w.empty() || spec.sweep_p_u_w.empty()) {
    throw ConfigError("sweep needs experiment.sweep_p_bar_w and experiment.sweep_p_u_w");
  }
  const ChannelSource source(spec);
  const int n = spec.cfg.num_realizations;
  const double base_pilot_snr = pilot_snr_for(spec.cfg);

  // Channels are shared by every grid point.
  std::vector<std::optional<ChannelRealization>> channels(static_cast<std::size_t>(n));
  parallel_for(n, spec.threads, [&](int r) {
    try {
      channels[r] = source.realization(r);
    } catch (const IngestError&) {
    }
  });

  SweepResult result;
  for (double p_bar : spec.sweep_p_bar_w) {
    SystemConfig cfg = spec.cfg;
    cfg.p_bar_w = p_bar;
    if (spec.freeze_pilot_snr) cfg.pilot_snr = base_pilot_snr;

    // Profiles are rebuilt per P_bar.
    std::vector<std::optional<RealizationContext>> contexts(static_cast<std::size_t>(n));
    parallel_for(n, spec.threads, [&](int r) {
      if (!channels[r]) return;
      try {
        contexts[r] = prepare_realization(spec, cfg, *channels[r], r);
      } catch (const RankDeficientError&) {
      }
    });

    for (double p_u : spec.sweep_p_u_w) {
      cfg.p_u_w = p_u;
      std::vector<std::vector<MetricRecord>> per(static_cast<std::size_t>(n));
      parallel_for(n, spec.threads, [&](int r) {
        if (contexts[r]) {
          per[r] = solve_realization(spec, cfg, *contexts[r], r);
        } else {
          for (const auto& [a, t] : series_keys(spec)) fill_infeasible(per[r], r, cfg.num_ues, a, t);
        }
      });
      std::vector<MetricRecord> records;
      for (auto& v : per) {
        for (auto& rec : v) {
          ++result.total_records;
          if (!rec.feasible) ++result.infeasible_records;
          records.push_back(rec);
        }
      }
      for (const auto& s : group_series(spec, records)) {
        if (s.se.empty()) continue;
        result.rows.push_back({p_bar, p_u, s.label, median(s.se), median(s.ee)});
      }
    }
  }
  return result;
}

}  // namespace cfmimo
