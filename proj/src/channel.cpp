#include "cfmimo/channel.hpp"

#include <cmath>
#include <string>

namespace cfmimo {

MeasurementTensor::MeasurementTensor(int instances, int aps, int ues)
    : f_(instances), m_(aps), k_(ues) {
  if (instances < 1 || aps < 1 || ues < 1) {
    throw IngestError("measurement tensor dimensions must be positive");
  }
  const auto n = static_cast<std::size_t>(f_) * m_ * k_;
  values_.assign(n, cplx{0.0, 0.0});
  valid_.assign(n, 0);
}

std::size_t MeasurementTensor::index(int i, int m, int k) const {
  if (i < 0 || i >= f_ || m < 0 || m >= m_ || k < 0 || k >= k_) {
    throw IngestError("measurement index out of range: (" + std::to_string(i) + "," +
                      std::to_string(m) + "," + std::to_string(k) + ")");
  }
  return (static_cast<std::size_t>(i) * m_ + m) * k_ + k;
}

void MeasurementTensor::set(int i, int m, int k, cplx v, bool is_valid) {
  const auto idx = index(i, m, k);
  values_[idx] = v;
  valid_[idx] = is_valid ? 1 : 0;
}

void MeasurementTensor::validate() const {
  for (int m = 0; m < m_; ++m) {
    for (int k = 0; k < k_; ++k) {
      bool any = false;
      for (int i = 0; i < f_ && !any; ++i) {
        any = valid(i, m, k) && std::isfinite(value(i, m, k).real()) &&
              std::isfinite(value(i, m, k).imag());
      }
      if (!any) {
        throw IngestError("no valid instance for ap " + std::to_string(m) + ", ue " +
                          std::to_string(k));
      }
    }
  }
}

double noise_power(const SystemConfig& cfg) {
  return kBoltzmann * cfg.temperature_k * cfg.bandwidth_hz *
         std::pow(10.0, cfg.noise_figure_db / 10.0);
}

double transmit_snr(const SystemConfig& cfg) { return cfg.p_bar_w / noise_power(cfg); }

double pathloss_db(const Geometry& geom, double distance_m) {
  return geom.pathloss_ref_db +
         10.0 * geom.pathloss_exponent * std::log10(distance_m / geom.ref_distance_m);
}

std::vector<Position> draw_positions(const Geometry& geom, int count, double height,
                                     std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, geom.area_side_m);
  std::vector<Position> out(static_cast<std::size_t>(count));
  for (auto& p : out) {
    p.x = u(rng);
    p.y = u(rng);
    p.z = height;
  }
  return out;
}

Placement draw_placement(const Geometry& geom, int num_aps, int num_ues, std::mt19937_64& rng) {
  Placement p;
  p.aps = draw_positions(geom, num_aps, geom.ap_height_m, rng);
  p.ues = draw_positions(geom, num_ues, geom.ue_height_m, rng);
  return p;
}

RMatrix large_scale_fading(const Geometry& geom, const Placement& placement,
                           std::mt19937_64& rng) {
  const auto m_count = static_cast<Eigen::Index>(placement.aps.size());
  const auto k_count = static_cast<Eigen::Index>(placement.ues.size());
  std::normal_distribution<double> shadow(0.0, 1.0);
  RMatrix beta(m_count, k_count);
  for (Eigen::Index m = 0; m < m_count; ++m) {
    for (Eigen::Index k = 0; k < k_count; ++k) {
      const auto& a = placement.aps[m];
      const auto& u = placement.ues[k];
      const double d = std::hypot(a.x - u.x, a.y - u.y, a.z - u.z);
      if (!(d > 0.0)) {
        throw PlacementError("AP " + std::to_string(m) + " and UE " + std::to_string(k) +
                             " are co-located");
      }
      // Drawn even when sigma = 0.
      const double x_db = geom.shadowing_sigma_db * shadow(rng);
      beta(m, k) = std::pow(10.0, (x_db - pathloss_db(geom, d)) / 10.0);
    }
  }
  return beta;
}

CMatrix small_scale_channel(const RMatrix& beta, std::mt19937_64& rng) {
  CMatrix h(beta.rows(), beta.cols());
  for (Eigen::Index m = 0; m < beta.rows(); ++m) {
    for (Eigen::Index k = 0; k < beta.cols(); ++k) {
      h(m, k) = std::sqrt(beta(m, k)) * draw_cn(rng);
    }
  }
  return h;
}

ChannelRealization generate_channel(const Geometry& geom, const Placement& placement,
                                    std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ChannelRealization r;
  r.beta = large_scale_fading(geom, placement, rng);
  r.h = small_scale_channel(r.beta, rng);
  return r;
}

ChannelRealization generate_channel(const Geometry& geom, const SystemConfig& cfg,
                                    std::uint64_t seed) {
  geom.validate();
  cfg.validate();
  std::mt19937_64 rng(seed);
  const Placement placement = draw_placement(geom, cfg.num_aps, cfg.num_ues, rng);
  ChannelRealization r;
  r.beta = large_scale_fading(geom, placement, rng);
  r.h = small_scale_channel(r.beta, rng);
  return r;
}

RMatrix beta_from_measurements(const MeasurementTensor& t) {
  t.validate();
  RMatrix beta(t.aps(), t.ues());
  for (int m = 0; m < t.aps(); ++m) {
    for (int k = 0; k < t.ues(); ++k) {
      double sum = 0.0;
      int count = 0;
      for (int i = 0; i < t.instances(); ++i) {
        if (t.valid(i, m, k)) {
          sum += std::norm(t.value(i, m, k));
          ++count;
        }
      }
      beta(m, k) = sum / count;
    }
  }
  return beta;
}

ChannelRealization realization_from_instance(const MeasurementTensor& t, int instance,
                                             const RMatrix& beta) {
  if (instance < 0 || instance >= t.instances()) {
    throw IngestError("instance " + std::to_string(instance) + " out of range [0, " +
                      std::to_string(t.instances()) + ")");
  }
  ChannelRealization r;
  r.h.resize(t.aps(), t.ues());
  for (int m = 0; m < t.aps(); ++m) {
    for (int k = 0; k < t.ues(); ++k) {
      if (!t.valid(instance, m, k)) {
        throw IngestError("instance " + std::to_string(instance) + " has an invalid entry at ap " +
                          std::to_string(m) + ", ue " + std::to_string(k));
      }
      r.h(m, k) = t.value(instance, m, k);
    }
  }
  r.beta = beta;
  return r;
}

ChannelRealization realization_from_instance(const MeasurementTensor& t, int instance) {
  if (instance < 0 || instance >= t.instances()) {
    throw IngestError("instance " + std::to_string(instance) + " out of range [0, " +
                      std::to_string(t.instances()) + ")");
  }
  return realization_from_instance(t, instance, beta_from_measurements(t));
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    static_cast<std::uint32_t>(stream)};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

}  // namespace cfmimo
