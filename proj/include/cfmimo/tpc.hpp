#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cfmimo/combining.hpp"
#include "cfmimo/types.hpp"

namespace cfmimo {

struct SolverSettings {
  double bisection_rel_tol = 1e-5;
  double fixedpoint_tol = 1e-10;
  int fixedpoint_max_iter = 500;
  int bisection_max_iter = 100;
  int nu_grid_points = 64;
  int nu_refine_rounds = 2;

  void validate() const;
};

enum class Algorithm { kMaxPower, kMaxMinSe, kMaxMinEe };

std::string to_string(Algorithm a);
Algorithm parse_algorithm(const std::string& name);

struct PowerAllocation {
  std::vector<double> q;
  int iterations = 0;
};

struct TpcResult {
  Algorithm algorithm = Algorithm::kMaxPower;
  PowerAllocation allocation;
  /// Max-min SE: the common SINR t. Max-min EE: min_k w_k B S_k / (P nu + P_U).
  double objective = 0.0;
  std::optional<double> nu_opt;
  std::optional<double> nu_star;
};

TpcResult max_power(int num_ues);

/// Componentwise-minimal q meeting SINR floors gamma with max_k q_k <= cap,
/// found by the standard-interference-function iteration from q = 0.
/// Returns nullopt when an iterate exceeds the cap or the iteration does not
/// settle within settings.fixedpoint_max_iter steps.
std::optional<PowerAllocation> min_power_for_sinr(const InterferenceProfile& profile, double rho,
                                                  const std::vector<double>& gamma, double cap,
                                                  const SolverSettings& settings = {});

/// Bisection on a common SINR target. objective is the minimum SINR achieved.
TpcResult max_min_se(const InterferenceProfile& profile, double rho, double cap,
                     const SolverSettings& settings = {});

/// Two-step max-min EE: nu* from the minimal-power solve at the target SE,
/// then a refined linear search over nu in [nu*, 1] with a max-min SE inner
/// solve capped at nu. Throws InfeasibleTargetSeError when the target SE is
/// not reachable with q <= 1.
TpcResult max_min_ee(const InterferenceProfile& profile, double rho, const SystemConfig& cfg,
                     const SolverSettings& settings = {});

/// min_k w_k * B * S_k / (P_bar * nu + P_U) for an allocation capped at nu.
double ee_search_objective(const std::vector<double>& se, double nu, const SystemConfig& cfg);

}  // namespace cfmimo
