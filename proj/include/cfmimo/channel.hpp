#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "cfmimo/types.hpp"

namespace cfmimo {

/// True channel H (M x K) and its large-scale fading beta (M x K, linear).
struct ChannelRealization {
  CMatrix h;
  RMatrix beta;
};

struct Position {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

struct Placement {
  std::vector<Position> aps;
  std::vector<Position> ues;
};

/// Frequency-instance x AP x UE channel samples with a validity mask.
class MeasurementTensor {
 public:
  MeasurementTensor(int instances, int aps, int ues);

  int instances() const { return f_; }
  int aps() const { return m_; }
  int ues() const { return k_; }

  cplx value(int i, int m, int k) const { return values_[index(i, m, k)]; }
  bool valid(int i, int m, int k) const { return valid_[index(i, m, k)] != 0; }
  void set(int i, int m, int k, cplx v, bool is_valid = true);

  /// Checks that every (m,k) pair has at least one valid instance.
  void validate() const;

 private:
  std::size_t index(int i, int m, int k) const;

  int f_, m_, k_;
  std::vector<cplx> values_;
  std::vector<unsigned char> valid_;
};

double noise_power(const SystemConfig& cfg);
double transmit_snr(const SystemConfig& cfg);

double pathloss_db(const Geometry& geom, double distance_m);

/// Uniform AP and UE placement inside the square service area.
Placement draw_placement(const Geometry& geom, int num_aps, int num_ues, std::mt19937_64& rng);
std::vector<Position> draw_positions(const Geometry& geom, int count, double height, std::mt19937_64& rng);

/// Log-distance path loss with log-normal shadowing. Throws PlacementError on
/// a zero AP-UE distance.
RMatrix large_scale_fading(const Geometry& geom, const Placement& placement, std::mt19937_64& rng);

/// h = sqrt(beta) * p with p ~ CN(0, 1) i.i.d.
CMatrix small_scale_channel(const RMatrix& beta, std::mt19937_64& rng);

ChannelRealization generate_channel(const Geometry& geom, const SystemConfig& cfg, std::uint64_t seed);
ChannelRealization generate_channel(const Geometry& geom, const Placement& placement, std::uint64_t seed);

/// Average of |h|^2 over the valid instances of each (m,k).
RMatrix beta_from_measurements(const MeasurementTensor& t);
ChannelRealization realization_from_instance(const MeasurementTensor& t, int instance);
ChannelRealization realization_from_instance(const MeasurementTensor& t, int instance, const RMatrix& beta);

/// Circularly-symmetric complex Gaussian with unit variance.
inline cplx draw_cn(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, std::sqrt(0.5));
  double re = n(rng);
  double im = n(rng);
  return {re, im};
}

/// Independent stream seed for a (master, index, purpose) triple.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index, std::uint64_t stream);

}  // namespace cfmimo
