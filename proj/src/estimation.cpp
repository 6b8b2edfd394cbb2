#include "cfmimo/estimation.hpp"

#include <cmath>
#include <random>

#include "cfmimo/channel.hpp"

namespace cfmimo {

PilotBook orthogonal_pilots(int num_ues) {
  if (num_ues < 1) throw ConfigError("pilot book needs at least one UE");
  return PilotBook{CMatrix::Identity(num_ues, num_ues)};
}

PilotBook make_pilot_book(CMatrix phi) {
  if (phi.rows() < 1 || phi.cols() < 1) throw ConfigError("empty pilot book");
  for (Eigen::Index k = 0; k < phi.rows(); ++k) {
    const double norm = phi.row(k).norm();
    if (!(norm > 0.0)) throw ConfigError("pilot sequence " + std::to_string(k) + " is zero");
    phi.row(k) /= norm;
  }
  return PilotBook{std::move(phi)};
}

PilotObservation pilot_phase(const CMatrix& h, const PilotBook& pilots, double pilot_snr,
                             std::optional<std::uint64_t> seed) {
  if (h.cols() != pilots.phi.rows()) {
    throw std::invalid_argument("pilot book does not match the channel's UE count");
  }
  const double gain = std::sqrt(pilot_snr * pilots.length());
  PilotObservation obs{gain * h * pilots.phi};
  if (seed) {
    std::mt19937_64 rng(*seed);
    for (Eigen::Index m = 0; m < obs.y_p.rows(); ++m) {
      for (Eigen::Index t = 0; t < obs.y_p.cols(); ++t) obs.y_p(m, t) += draw_cn(rng);
    }
  }
  return obs;
}

CMatrix mmse_estimate(const PilotObservation& obs, const RMatrix& beta, const PilotBook& pilots,
                      double pilot_snr) {
  const auto m_count = obs.y_p.rows();
  const auto k_count = pilots.phi.rows();
  if (obs.y_p.cols() != pilots.phi.cols() || beta.rows() != m_count || beta.cols() != k_count) {
    throw std::invalid_argument("mmse_estimate: inconsistent dimensions");
  }
  const double rho_tau = pilot_snr * pilots.length();
  // projected(m,k) = phi_k^H y_m
  const CMatrix projected = obs.y_p * pilots.phi.adjoint();
  const RMatrix overlap = (pilots.phi * pilots.phi.adjoint()).cwiseAbs2();
  const RMatrix denom = rho_tau * (beta * overlap.transpose()).array() + 1.0;

  CMatrix h_hat(m_count, k_count);
  for (Eigen::Index m = 0; m < m_count; ++m) {
    for (Eigen::Index k = 0; k < k_count; ++k) {
      h_hat(m, k) = (std::sqrt(rho_tau) * beta(m, k) / denom(m, k)) * projected(m, k);
    }
  }
  return h_hat;
}

CMatrix estimation_error(const CMatrix& h, const CMatrix& h_hat) {
  if (h.rows() != h_hat.rows() || h.cols() != h_hat.cols()) {
    throw std::invalid_argument("estimation_error: shape mismatch");
  }
  return h - h_hat;
}

ChannelEstimate estimate_channel(const CMatrix& h, const RMatrix& beta, const PilotBook& pilots,
                                 double pilot_snr, std::optional<std::uint64_t> seed) {
  const PilotObservation obs = pilot_phase(h, pilots, pilot_snr, seed);
  ChannelEstimate est;
  est.h_hat = mmse_estimate(obs, beta, pilots, pilot_snr);
  est.h_tilde = estimation_error(h, est.h_hat);
  return est;
}

}  // namespace cfmimo
