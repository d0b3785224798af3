#pragma once

#include "demonsim/gates.hpp"
#include "demonsim/qmath.hpp"

#include <string>

namespace demonsim {

/// Dephasing and polarization parameters. Times are in seconds; the
/// defaults are the third experiment's reference values (T2 = 378 us
/// echo-protected, T2* = 2.5 us free induction, 190 us protected sequence
/// time, 1.2 us of unprotected gaps, 84% polarization).
struct NoiseParams {
  double t2 = 378e-6;
  double t2_star = 2.5e-6;
  double protected_time = 190e-6;
  double unprotected_gaps = 1.2e-6;
  double p0 = 0.84;

  void validate() const;
  static NoiseParams defaults() { return NoiseParams{}; }
};

/// Gaussian coherence decay exp(-(t/T)^2).
double decay_factor(double t, double T);

/// Phase-damping channel: multiplies the target qubit's off-diagonal
/// elements (energy basis) by lambda, populations unchanged.
GateOp dephasing_channel(double lambda, const std::string& target);

/// Bloch-vector contraction rho -> L rho + (1-L) I/2 as a channel
/// (direction preserving, length scaled by L).
GateOp bloch_contraction_channel(double l, const std::string& target);

/// p0 rho0 + (1-p0) I/2 on a single-qubit state.
DensityMatrix imperfect_polarization(const DensityMatrix& rho0, double p0);

struct NoiseBudget {
  double l_remaining = 0.0;
  double s_final = 0.0;
  double s_initial_ref = 0.0;
  double delta_s = 0.0;
};

/// Closed-form dephasing budget for the third experiment:
/// L = exp(-(tau/T2)^2) * exp(-(t_gap/T2*)^2), the single-qubit entropy at
/// that L, and the entropy decrease against a supplied initial entropy
/// (reference 0.90).
NoiseBudget exp3_noise_budget(const NoiseParams& np,
                              double s_initial_ref = 0.90);

struct UnsubtractedEntropies {
  double s0 = 0.0;
  double sf = 0.0;
  double delta_s = 0.0;
};

/// Entropies of Bloch lengths p0*L0 and p0*Lf (no background subtraction)
/// and their difference.
UnsubtractedEntropies unsubtracted_entropies(double l0, double lf, double p0);

/// Two-clock accumulator for the Gaussian dephasing envelopes. Decoupled
/// gate durations advance the echo-protected (T2) clock, everything else
/// the free-induction (T2*) clock; incremental factors telescope so the
/// total always equals the product formula regardless of gate granularity.
class DephasingClock {
public:
  explicit DephasingClock(const NoiseParams& np);

  /// Incremental coherence factor for one gate (duration + gap).
  double advance(const GateOp& g);

  double protected_elapsed() const { return t_protected_; }
  double unprotected_elapsed() const { return t_unprotected_; }
  /// Total coherence factor accumulated so far.
  double total_factor() const;

private:
  double t2_;
  double t2_star_;
  double t_protected_ = 0.0;
  double t_unprotected_ = 0.0;
};

}  // namespace demonsim
