#include "cfmimo/combining.hpp"

#include <cmath>
#include <string>

namespace cfmimo {

CMatrix zf_weights(const CMatrix& h_hat) {
  if (h_hat.cols() < 1 || h_hat.rows() < h_hat.cols()) {
    throw RankDeficientError("ZF needs at least as many AP antennas as UEs");
  }
  const CMatrix gram = h_hat.adjoint() * h_hat;
  const Eigen::SelfAdjointEigenSolver<CMatrix> eig(gram, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(hi > 0.0) || !(lo > 0.0) || hi / lo > kRankConditionLimit) {
    throw RankDeficientError("Gram matrix condition number " + std::to_string(hi / lo) +
                             " exceeds limit");
  }
  return gram.ldlt().solve(h_hat.adjoint());
}

InterferenceProfile interference_profile(const CMatrix& w, const CMatrix& h_tilde) {
  if (w.cols() != h_tilde.rows() || w.rows() != h_tilde.cols()) {
    throw std::invalid_argument("interference_profile: inconsistent dimensions");
  }
  InterferenceProfile p;
  p.g = (w * h_tilde).cwiseAbs2();
  p.n = w.rowwise().squaredNorm();
  return p;
}

double sinr_of(const InterferenceProfile& profile, const std::vector<double>& q, double rho,
               int k) {
  double leak = 0.0;
  for (int j = 0; j < profile.num_ues(); ++j) {
    if (j != k) leak += q[j] * profile.g(k, j);
  }
  return rho * q[k] / (rho * leak + profile.n(k));
}

PerUeMetrics sinr_and_se(const InterferenceProfile& profile, const std::vector<double>& q,
                         double rho) {
  const int k_count = profile.num_ues();
  if (static_cast<int>(q.size()) != k_count) {
    throw std::invalid_argument("power vector length does not match the profile");
  }
  PerUeMetrics out;
  out.sinr.resize(k_count);
  out.se.resize(k_count);
  for (int k = 0; k < k_count; ++k) {
    out.sinr[k] = sinr_of(profile, q, rho, k);
    out.se[k] = std::log2(1.0 + out.sinr[k]);
  }
  return out;
}

void energy_efficiency(PerUeMetrics& metrics, const std::vector<double>& q,
                       const SystemConfig& cfg) {
  const std::size_t k_count = metrics.se.size();
  metrics.power_w.resize(k_count);
  metrics.ee.resize(k_count);
  for (std::size_t k = 0; k < k_count; ++k) {
    metrics.power_w[k] = cfg.p_bar_w * q[k] + cfg.p_u_w;
    metrics.ee[k] = cfg.bandwidth_hz * metrics.se[k] / metrics.power_w[k];
  }
}

PerUeMetrics evaluate(const InterferenceProfile& profile, const std::vector<double>& q, double rho,
                      const SystemConfig& cfg) {
  PerUeMetrics m = sinr_and_se(profile, q, rho);
  energy_efficiency(m, q, cfg);
  return m;
}

}  // namespace cfmimo
