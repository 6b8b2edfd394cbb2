#include "cfmimo/tpc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cfmimo {
namespace {

// Relative slack on the cap and on SINR floors.
constexpr double kCapSlack = 1e-12;
constexpr double kFloorSlack = 1e-9;

std::optional<PowerAllocation> fixed_point(const InterferenceProfile& profile, double rho,
                                           const std::vector<double>& gamma, double cap,
                                           std::vector<double> q, const SolverSettings& s) {
  const int k_count = profile.num_ues();
  std::vector<double> next(k_count);
  const double limit = cap * (1.0 + kCapSlack);
  for (int it = 1; it <= s.fixedpoint_max_iter; ++it) {
    double delta = 0.0;
    for (int k = 0; k < k_count; ++k) {
      double leak = 0.0;
      for (int j = 0; j < k_count; ++j) {
        if (j != k) leak += profile.g(k, j) * q[j];
      }
      next[k] = gamma[k] / rho * (rho * leak + profile.n(k));
      if (!(next[k] <= limit)) return std::nullopt;
      delta = std::max(delta, std::abs(next[k] - q[k]));
    }
    q.swap(next);
    if (delta < s.fixedpoint_tol) {
      for (auto& v : q) v = std::min(v, cap);
      return PowerAllocation{std::move(q), it};
    }
  }
  return std::nullopt;
}

double min_sinr(const InterferenceProfile& profile, const std::vector<double>& q, double rho) {
  double lo = std::numeric_limits<double>::infinity();
  for (int k = 0; k < profile.num_ues(); ++k) lo = std::min(lo, sinr_of(profile, q, rho, k));
  return lo;
}

void check_profile(const InterferenceProfile& profile) {
  if (profile.num_ues() < 1 || profile.g.rows() != profile.num_ues() ||
      profile.g.cols() != profile.num_ues()) {
    throw std::invalid_argument("malformed interference profile");
  }
}

}  // namespace

void SolverSettings::validate() const {
  if (!(bisection_rel_tol > 0.0) || !(fixedpoint_tol > 0.0)) {
    throw ConfigError("solver tolerances must be positive");
  }
  if (fixedpoint_max_iter < 1 || bisection_max_iter < 1 || nu_refine_rounds < 0) {
    throw ConfigError("solver iteration counts must be at least 1");
  }
  if (nu_grid_points < 3) throw ConfigError("solver.nu_grid_points must be at least 3");
}

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kMaxPower: return "max_power";
    case Algorithm::kMaxMinSe: return "max_min_se";
    case Algorithm::kMaxMinEe: return "max_min_ee";
  }
  return "unknown";
}

Algorithm parse_algorithm(const std::string& name) {
  if (name == "max_power") return Algorithm::kMaxPower;
  if (name == "max_min_se") return Algorithm::kMaxMinSe;
  if (name == "max_min_ee") return Algorithm::kMaxMinEe;
  throw ConfigError("unknown algorithm '" + name + "'");
}

TpcResult max_power(int num_ues) {
  if (num_ues < 1) throw std::invalid_argument("max_power: K must be positive");
  TpcResult r;
  r.algorithm = Algorithm::kMaxPower;
  r.allocation.q.assign(static_cast<std::size_t>(num_ues), 1.0);
  return r;
}

std::optional<PowerAllocation> min_power_for_sinr(const InterferenceProfile& profile, double rho,
                                                  const std::vector<double>& gamma, double cap,
                                                  const SolverSettings& settings) {
  check_profile(profile);
  if (static_cast<int>(gamma.size()) != profile.num_ues()) {
    throw std::invalid_argument("min_power_for_sinr: gamma length mismatch");
  }
  if (!(cap > 0.0) || cap > 1.0) throw std::invalid_argument("min_power_for_sinr: cap not in (0,1]");
  return fixed_point(profile, rho, gamma, cap,
                     std::vector<double>(static_cast<std::size_t>(profile.num_ues()), 0.0),
                     settings);
}

TpcResult max_min_se(const InterferenceProfile& profile, double rho, double cap,
                     const SolverSettings& settings) {
  check_profile(profile);
  if (!(cap > 0.0) || cap > 1.0) throw std::invalid_argument("max_min_se: cap not in (0,1]");
  const int k_count = profile.num_ues();

  double lo = 0.0;
  double hi = rho * cap / profile.n.minCoeff();
  std::vector<double> best(static_cast<std::size_t>(k_count), 0.0);
  int steps = 0;
  while (steps < settings.bisection_max_iter && hi - lo > settings.bisection_rel_tol * hi) {
    ++steps;
    const double mid = 0.5 * (lo + hi);
    // Warm start from the last feasible point.
    auto sol = fixed_point(profile, rho, std::vector<double>(k_count, mid), cap, best, settings);
    if (sol) {
      lo = mid;
      best = std::move(sol->q);
    } else {
      hi = mid;
    }
  }

  // Scale onto the cap.
  const double peak = *std::max_element(best.begin(), best.end());
  if (peak > 0.0) {
    for (auto& v : best) v = std::min(cap, v * (cap / peak));
  }

  TpcResult r;
  r.algorithm = Algorithm::kMaxMinSe;
  r.objective = min_sinr(profile, best, rho);
  r.allocation = PowerAllocation{std::move(best), steps};
  return r;
}

double ee_search_objective(const std::vector<double>& se, double nu, const SystemConfig& cfg) {
  double lo = std::numeric_limits<double>::infinity();
  const double denom = cfg.p_bar_w * nu + cfg.p_u_w;
  for (std::size_t k = 0; k < se.size(); ++k) {
    lo = std::min(lo, cfg.weight(static_cast<int>(k)) * cfg.bandwidth_hz * se[k] / denom);
  }
  return lo;
}

TpcResult max_min_ee(const InterferenceProfile& profile, double rho, const SystemConfig& cfg,
                     const SolverSettings& settings) {
  check_profile(profile);
  if (!(cfg.target_se >= 0.0)) throw std::invalid_argument("max_min_ee: negative target SE");
  const int k_count = profile.num_ues();
  const double gamma = std::exp2(cfg.target_se) - 1.0;

  // Step A: nu* is the peak of the minimal-power allocation meeting the target.
  auto floor_alloc =
      min_power_for_sinr(profile, rho, std::vector<double>(k_count, gamma), 1.0, settings);
  if (!floor_alloc) {
    throw InfeasibleTargetSeError("target SE " + std::to_string(cfg.target_se) +
                                  " bits/s/Hz is not reachable with full power");
  }
  const double nu_star = *std::max_element(floor_alloc->q.begin(), floor_alloc->q.end());

  struct Candidate {
    double nu = 0.0;
    double objective = -1.0;
    std::vector<double> q;
  };
  int evaluations = 0;
  auto evaluate_nu = [&](double nu) -> Candidate {
    ++evaluations;
    std::vector<double> q;
    if (nu <= nu_star) {
      nu = nu_star;
      q = floor_alloc->q;
    } else {
      q = max_min_se(profile, rho, nu, settings).allocation.q;
      if (min_sinr(profile, q, rho) < gamma * (1.0 - kFloorSlack)) return {nu, -1.0, {}};
    }
    const PerUeMetrics m = sinr_and_se(profile, q, rho);
    return {nu, ee_search_objective(m.se, nu, cfg), std::move(q)};
  };

  // Step B: linear search over nu; ties resolve toward the smaller nu.
  Candidate best = evaluate_nu(nu_star);
  double lo = nu_star;
  double hi = 1.0;
  for (int round = 0; round <= settings.nu_refine_rounds; ++round) {
    const int points = settings.nu_grid_points;
    const double step = (hi - lo) / (points - 1);
    if (!(step > 0.0)) break;
    for (int i = 0; i < points; ++i) {
      const double nu = (i == points - 1) ? hi : lo + step * i;
      Candidate c = evaluate_nu(nu);
      if (c.objective > best.objective || (c.objective == best.objective && c.nu < best.nu)) {
        best = std::move(c);
      }
    }
    lo = std::max(nu_star, best.nu - step);
    hi = std::min(1.0, best.nu + step);
  }

  TpcResult r;
  r.algorithm = Algorithm::kMaxMinEe;
  r.objective = best.objective;
  r.nu_opt = best.nu;
  r.nu_star = nu_star;
  r.allocation = PowerAllocation{std::move(best.q), evaluations};
  return r;
}

}  // namespace cfmimo
