#pragma once

#include "demonsim/gates.hpp"
#include "demonsim/noise.hpp"
#include "demonsim/qmath.hpp"
#include "demonsim/tomography.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace demonsim {

enum class Mode { Analytic, Sampled };
enum class Observer { Outside, Inside };
enum class DetectionBasis { Diagonal, OffDiagonal };

struct SubsystemResult {
  std::string name;
  ConfidenceInterval entropy;
  std::optional<ConfidenceInterval> state_fidelity;  // vs ideal marginal
  std::optional<ConfidenceInterval> bloch;           // single qubits only
  /// Raw simulated counts (sampled mode), the interchange payload for
  /// offline analysis.
  std::optional<TomographyDataset> dataset;
};

struct StageResult {
  std::string stage;
  std::vector<SubsystemResult> subsystems;
  /// Fidelity of the full simulated register state against the ideal stage
  /// state (analytic mode only).
  std::optional<double> full_state_fidelity;
  /// <Phi_DA| rho_DA |Phi_DA> for the demon+ancilla pair (experiment 3).
  std::optional<ConfidenceInterval> entanglement_fidelity;

  const SubsystemResult& subsystem(const std::string& name) const;
};

/// Entropy decreases quoted the way the dephasing budget quotes them:
/// against the measured initial-entropy reference (default 0.90).
struct BudgetDelta {
  double s_initial_ref = 0.90;
  double l_remaining = 0.0;
  std::map<std::string, double> delta_s;
};

struct ExperimentReport {
  int experiment = 0;
  Mode mode = Mode::Analytic;
  std::optional<Observer> observer;
  std::optional<DetectionBasis> basis;
  std::optional<NoiseParams> noise;
  std::uint64_t seed = 0;
  std::vector<StageResult> stages;
  std::map<std::string, double> info_acquired;  // per step, experiment 1
  std::optional<BudgetDelta> noise_budget_delta;

  const StageResult& stage(const std::string& name) const;
  nlohmann::json to_json() const;
  std::string to_csv() const;
};

struct SamplingOptions {
  Calibration calibration{};
  int n_resamples = 1000;
  bool with_ci = true;
};

/// Successive demon operation on particles A (13C) and B (14N).
ExperimentReport run_experiment1(const std::optional<NoiseParams>& noise,
                                 Mode mode, std::uint64_t seed,
                                 const SamplingOptions& opts = {});

/// Demon prepared in an equal superposition; detection in the diagonal
/// and/or off-diagonal basis (both when `basis` is empty).
ExperimentReport run_experiment2(const std::optional<NoiseParams>& noise,
                                 Mode mode,
                                 std::optional<DetectionBasis> basis,
                                 std::uint64_t seed,
                                 const SamplingOptions& opts = {});

/// Demon entangled with the 14N ancilla; outside and/or inside observer
/// detection (both when `observer` is empty).
ExperimentReport run_experiment3(const std::optional<NoiseParams>& noise,
                                 Mode mode, std::optional<Observer> observer,
                                 std::uint64_t seed,
                                 const SamplingOptions& opts = {},
                                 double s_initial_ref = 0.90);

/// Closed-form ideal stage states. Stages: experiment 1 "begin", "step1",
/// "step2"; experiment 2 "begin", "final_diagonal", "final_offdiagonal";
/// experiment 3 "begin", "final_outside", "final_inside".
DensityMatrix ideal_stage_state(int experiment, const std::string& stage);

/// Demon entropy increase across the readout of `step` (1 or 2), read from
/// an experiment-1 report; equals the acquired information when the demon
/// starts pure.
double information_acquired(const ExperimentReport& report, int step);

// Circuit wiring (registers, initial states, named gates with the nominal
// schedule durations). Exposed for the property suites.
std::vector<std::string> exp1_register();  // {E, C, N}
std::vector<std::string> exp2_register();  // {E, C}
std::vector<std::string> exp3_register();  // {E, C, N}

DensityMatrix exp1_initial_state();
DensityMatrix exp2_initial_state();  // before the preparation pulse
DensityMatrix exp3_initial_state();  // before entangled-state preparation

GateOp exp1_readout_a();
GateOp exp1_feedback_a();
GateOp exp1_readout_b();
GateOp exp1_feedback_b();

GateOp exp2_prep();
GateOp exp2_readout();
GateOp exp2_feedback();
GateOp exp2_disentangler();

GateOp exp3_prep_rotation();
GateOp exp3_prep_entangle();
GateOp exp3_readout();
GateOp exp3_feedback();
GateOp exp3_fb_entangle();
GateOp exp3_fb_readout();
GateOp exp3_disentangler();
/// The full inside-observer sequence in order.
std::vector<GateOp> exp3_sequence();

}  // namespace demonsim
