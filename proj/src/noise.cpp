#include "demonsim/noise.hpp"

#include <cmath>
#include <stdexcept>

namespace demonsim {

void NoiseParams::validate() const {
  if (t2 <= 0.0 || t2_star <= 0.0)
    throw std::invalid_argument("NoiseParams: coherence times must be > 0");
  if (protected_time < 0.0 || unprotected_gaps < 0.0)
    throw std::invalid_argument("NoiseParams: durations must be >= 0");
  if (p0 < 0.0 || p0 > 1.0)
    throw std::invalid_argument("NoiseParams: p0 must be in [0, 1]");
}

double decay_factor(double t, double T) {
  if (T <= 0.0) throw std::invalid_argument("decay_factor: T must be > 0");
  if (t < 0.0) throw std::invalid_argument("decay_factor: t must be >= 0");
  const double x = t / T;
  return std::exp(-x * x);
}

GateOp dephasing_channel(double lambda, const std::string& target) {
  if (lambda < 0.0 || lambda > 1.0)
    throw std::invalid_argument("dephasing_channel: lambda must be in [0, 1]");
  std::vector<Matrix> kraus;
  kraus.push_back(std::sqrt((1.0 + lambda) / 2.0) *
                  Eigen::Matrix2cd::Identity());
  kraus.push_back(std::sqrt((1.0 - lambda) / 2.0) * Matrix(pauli(Axis::Z)));
  return make_channel("dephase(" + std::to_string(lambda) + ") on " + target,
                      {target}, std::move(kraus));
}

GateOp bloch_contraction_channel(double l, const std::string& target) {
  if (l < 0.0 || l > 1.0)
    throw std::invalid_argument(
        "bloch_contraction_channel: L must be in [0, 1]");
  std::vector<Matrix> kraus;
  kraus.push_back(std::sqrt((1.0 + 3.0 * l) / 4.0) *
                  Eigen::Matrix2cd::Identity());
  for (Axis a : {Axis::X, Axis::Y, Axis::Z})
    kraus.push_back(std::sqrt((1.0 - l) / 4.0) * Matrix(pauli(a)));
  return make_channel("contract(" + std::to_string(l) + ") on " + target,
                      {target}, std::move(kraus));
}

DensityMatrix imperfect_polarization(const DensityMatrix& rho0, double p0) {
  if (rho0.n_qubits() != 1)
    throw std::invalid_argument(
        "imperfect_polarization: single-qubit states only");
  if (p0 < 0.0 || p0 > 1.0)
    throw std::invalid_argument("imperfect_polarization: p0 must be in [0, 1]");
  Matrix m = p0 * rho0.data() +
             (1.0 - p0) * 0.5 * Matrix::Identity(2, 2);
  return DensityMatrix(rho0.labels(), std::move(m));
}

NoiseBudget exp3_noise_budget(const NoiseParams& np, double s_initial_ref) {
  np.validate();
  NoiseBudget b;
  b.l_remaining = decay_factor(np.protected_time, np.t2) *
                  decay_factor(np.unprotected_gaps, np.t2_star);
  b.s_final = entropy_from_bloch(b.l_remaining);
  b.s_initial_ref = s_initial_ref;
  b.delta_s = s_initial_ref - b.s_final;
  return b;
}

UnsubtractedEntropies unsubtracted_entropies(double l0, double lf, double p0) {
  if (l0 < 0.0 || l0 > 1.0 || lf < 0.0 || lf > 1.0 || p0 < 0.0 || p0 > 1.0)
    throw std::invalid_argument(
        "unsubtracted_entropies: inputs must be in [0, 1]");
  UnsubtractedEntropies r;
  r.s0 = entropy_from_bloch(p0 * l0);
  r.sf = entropy_from_bloch(p0 * lf);
  r.delta_s = r.s0 - r.sf;
  return r;
}

DephasingClock::DephasingClock(const NoiseParams& np)
    : t2_(np.t2), t2_star_(np.t2_star) {
  np.validate();
}

namespace {

double incremental_factor(double& clock, double dt, double T) {
  if (dt <= 0.0) return 1.0;
  const double t0 = clock;
  clock += dt;
  return std::exp(-(clock * clock - t0 * t0) / (T * T));
}

}  // namespace

double DephasingClock::advance(const GateOp& g) {
  double f = 1.0;
  if (g.decoupled)
    f *= incremental_factor(t_protected_, g.duration, t2_);
  else
    f *= incremental_factor(t_unprotected_, g.duration, t2_star_);
  f *= incremental_factor(t_unprotected_, g.gap, t2_star_);
  return f;
}

double DephasingClock::total_factor() const {
  return decay_factor(t_protected_, t2_) *
         decay_factor(t_unprotected_, t2_star_);
}

}  // namespace demonsim
