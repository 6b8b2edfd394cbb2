#pragma once

#include <cstdint>
#include <optional>

#include "cfmimo/types.hpp"

namespace cfmimo {

/// K x tau pilot book; row k holds phi_k^T with unit norm.
struct PilotBook {
  CMatrix phi;

  int num_ues() const { return static_cast<int>(phi.rows()); }
  int length() const { return static_cast<int>(phi.cols()); }
};

/// Received pilot signals, M x tau (row m is AP m).
struct PilotObservation {
  CMatrix y_p;
};

struct ChannelEstimate {
  CMatrix h_hat;
  CMatrix h_tilde;
};

PilotBook orthogonal_pilots(int num_ues);

/// Normalizes each row to unit norm. Throws ConfigError on a zero row.
PilotBook make_pilot_book(CMatrix phi);

/// y_p = sqrt(pilot_snr * tau) * H * phi + Z. A disengaged seed gives the
/// noiseless observation.
PilotObservation pilot_phase(const CMatrix& h, const PilotBook& pilots, double pilot_snr,
                             std::optional<std::uint64_t> seed);

/// Per-entry MMSE estimate from the projected pilot observation.
CMatrix mmse_estimate(const PilotObservation& obs, const RMatrix& beta, const PilotBook& pilots,
                      double pilot_snr);

CMatrix estimation_error(const CMatrix& h, const CMatrix& h_hat);

/// Pilot phase, MMSE estimate and error for one realization.
ChannelEstimate estimate_channel(const CMatrix& h, const RMatrix& beta, const PilotBook& pilots,
                                 double pilot_snr, std::optional<std::uint64_t> seed);

}  // namespace cfmimo
