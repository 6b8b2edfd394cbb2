#pragma once

#include <vector>

#include "cfmimo/types.hpp"

namespace cfmimo {

/// Fixed per-realization SINR constants under ZF combining.
///
/// g(k, k') = |w_k^H h~_k'|^2 is the leakage of UE k' into UE k's stream through
/// the estimation error; n(k) = ||w_k||^2 is the noise enhancement of stream k.
/// The diagonal of g is kept for diagnostics and never enters the SINR.
struct InterferenceProfile {
  RMatrix g;
  RVector n;

  int num_ues() const { return static_cast<int>(n.size()); }
};

struct PerUeMetrics {
  std::vector<double> sinr;
  std::vector<double> se;       // bits/s/Hz
  std::vector<double> power_w;
  std::vector<double> ee;       // bits/J
};

inline constexpr double kRankConditionLimit = 1e12;

/// W = (H^H H)^{-1} H^H, K x M. Row k is w_k^H. Throws RankDeficientError when
/// the Gram matrix's 2-norm condition number exceeds kRankConditionLimit.
CMatrix zf_weights(const CMatrix& h_hat);

InterferenceProfile interference_profile(const CMatrix& w, const CMatrix& h_tilde);

/// Fills sinr and se. q must lie in [0, 1]^K.
PerUeMetrics sinr_and_se(const InterferenceProfile& profile, const std::vector<double>& q,
                         double rho);

double sinr_of(const InterferenceProfile& profile, const std::vector<double>& q, double rho,
               int k);

/// Fills power_w and ee from an existing se vector.
void energy_efficiency(PerUeMetrics& metrics, const std::vector<double>& q,
                       const SystemConfig& cfg);

PerUeMetrics evaluate(const InterferenceProfile& profile, const std::vector<double>& q, double rho,
                      const SystemConfig& cfg);

}  // namespace cfmimo
