#pragma once

#include "demonsim/gates.hpp"
#include "demonsim/qmath.hpp"
#include "demonsim/rng.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace demonsim {

/// Fluorescence calibration: mean photon counts per cycle for the electron
/// |0> and |-1> reference levels, and the number of experimental cycles per
/// count record.
struct Calibration {
  double c0 = 0.032;
  double c1 = 0.022;
  long long cycles = 4000000;

  void validate() const;
  static Calibration defaults() { return Calibration{}; }
};

/// One tomography setting: a measurement axis per register qubit. The
/// basis rotation pulses are X -> Ry(-pi/2), Y -> Rx(pi/2), Z -> identity;
/// nuclear-spin readout is an ideal mapping onto the electron, so a setting
/// reduces to these local rotations followed by counting.
struct MeasurementSetting {
  std::vector<Axis> axes;
};

/// Simulated photon counts: one record per (setting, computational
/// outcome), each drawn over the full cycle budget.
struct TomographyDataset {
  std::vector<std::string> labels;
  Calibration calibration;
  std::vector<MeasurementSetting> settings;
  std::vector<std::vector<long long>> counts;  // [setting][outcome]

  void validate() const;
  nlohmann::json to_json() const;
  static TomographyDataset from_json(const nlohmann::json& j);
};

/// All 3^n single-axis settings for an n-qubit register.
std::vector<MeasurementSetting> complete_settings(int n_qubits);

/// Rotation taking measurement axis `a` onto the readout (Z) axis.
Eigen::Matrix2cd basis_rotation(Axis a);

/// Poisson counts for one setting: rotate rho, take outcome populations
/// q_k, draw counts_k ~ Poisson(cycles * (q_k c0 + (1-q_k) c1)).
std::vector<long long> simulate_counts(const DensityMatrix& rho,
                                       const MeasurementSetting& setting,
                                       const Calibration& cal, RngStream& rng);

/// Full dataset over the complete setting family.
TomographyDataset simulate_dataset(const DensityMatrix& rho,
                                   const Calibration& cal,
                                   std::uint64_t seed);

/// q_hat = (counts/cycles - c1) / (c0 - c1); may leave [0, 1] under shot
/// noise (physicality is restored at reconstruction).
double estimate_population(long long counts, const Calibration& cal);

/// Pauli-string expectations estimated from the dataset. Strings are keyed
/// by axis codes (0 = I, 1 = X, 2 = Y, 3 = Z), one code per qubit; each
/// string is read from its canonical setting (I positions filled with Z).
std::map<std::vector<int>, double> pauli_expectations(
    const TomographyDataset& ds);

/// rho = 2^-n sum_P <P> P from expectations (identity term fixed to 1).
Matrix linear_inversion(int n_qubits,
                        const std::map<std::vector<int>, double>& exps);

/// Linear inversion followed by eigenvalue truncation-and-renormalization.
DensityMatrix reconstruct(const TomographyDataset& ds);

struct ConfidenceInterval {
  double point = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double level = 0.683;
};

enum class Statistic { Entropy, Fidelity, EntanglementFidelity, BlochLength };

/// Parametric bootstrap: resample every count from Poisson(observed),
/// re-run reconstruction + statistic, return the central `level` interval
/// around the point estimate. Deterministic for a fixed seed.
ConfidenceInterval monte_carlo_ci(
    const TomographyDataset& ds, Statistic stat, int n_resamples,
    std::uint64_t seed, const std::optional<DensityMatrix>& target_state = {},
    const std::optional<PureState>& target_pure = {}, double level = 0.683);

/// Evaluate a report statistic on a state.
double evaluate_statistic(const DensityMatrix& rho, Statistic stat,
                          const std::optional<DensityMatrix>& target_state,
                          const std::optional<PureState>& target_pure);

}  // namespace demonsim
