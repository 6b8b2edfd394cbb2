#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace cfmimo {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

// Boltzmann constant, exact SI value (J/K).
inline constexpr double kBoltzmann = 1.380649e-23;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct PlacementError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IngestError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct RankDeficientError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InfeasibleTargetSeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Scalar parameters shared by every stage of the uplink pipeline.
struct SystemConfig {
  int num_aps = 64;               // M
  int num_ues = 8;                // K
  double bandwidth_hz = 20e6;
  double temperature_k = 290.0;
  double noise_figure_db = 9.0;
  double p_bar_w = 0.2;           // maximum allowed transmit power
  double p_u_w = 0.1;             // circuit power per UE
  int pilot_len = 0;              // 0 selects orthogonal pilots of length K
  double pilot_snr = 0.0;         // linear; 0 means "follow the transmit SNR"
  double target_se = 1.0;         // bits/s/Hz
  std::vector<double> ue_weights; // empty means all ones
  std::uint64_t master_seed = 1;
  int num_realizations = 100;

  int effective_pilot_len() const { return pilot_len > 0 ? pilot_len : num_ues; }
  double weight(int k) const { return ue_weights.empty() ? 1.0 : ue_weights[k]; }

  /// Throws ConfigError on the first violated invariant.
  void validate() const;
};

/// Synthetic deployment and propagation parameters.
struct Geometry {
  double area_side_m = 200.0;
  double ap_height_m = 35.0;
  double ue_height_m = 1.5;
  double pathloss_exponent = 3.5;
  double pathloss_ref_db = 35.0;
  double ref_distance_m = 1.0;
  double shadowing_sigma_db = 8.0;

  void validate() const;
};

}  // namespace cfmimo
