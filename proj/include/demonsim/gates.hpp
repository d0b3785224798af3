#pragma once

#include "demonsim/qmath.hpp"

#include <string>
#include <vector>

namespace demonsim {

enum class Axis { X, Y, Z };

Eigen::Matrix2cd pauli(Axis axis);

/// exp(-i angle sigma_axis / 2).
Eigen::Matrix2cd rotation_matrix(Axis axis, double angle);

/// Pulse-phase convention for the conditional gates. A conditional pi pulse
/// acts as exp(-i pi sigma_axis / 2) = -i sigma_axis on the selected control
/// branch; the amplitude transfer phase is -i. Control value 1 selects the
/// logical-one branch (|down> for 13C, |-1> for the electron, |1> for 14N).
/// The overall signs are locked by the three-spin post-demon-op state oracle.
struct PhaseConvention {
  Complex pulse_phase{0.0, -1.0};
  Axis flip_axis = Axis::X;
  int control_value = 1;
};

PhaseConvention phase_convention();

enum class GateKind { Unitary, KrausChannel };

/// A unitary or Kraus channel on a subset of register qubits, tagged with
/// its nominal pulse duration, the unprotected rise/fall gap around it, and
/// whether dynamical decoupling covers the pulse itself.
struct GateOp {
  GateKind kind = GateKind::Unitary;
  std::vector<Matrix> ops;  // one entry for a unitary
  std::vector<std::string> acts_on;
  std::string name;
  double duration = 0.0;  // seconds
  double gap = 0.0;       // seconds, outside decoupling protection
  bool decoupled = false;
};

GateOp make_unitary(std::string name, std::vector<std::string> acts_on,
                    Matrix u, double duration = 0.0, double gap = 0.0,
                    bool decoupled = false);
GateOp make_channel(std::string name, std::vector<std::string> acts_on,
                    std::vector<Matrix> kraus);

/// Single-qubit rotation gate exp(-i angle sigma_axis / 2) on `label`.
GateOp rotation(const std::string& label, Axis axis, double angle,
                double duration = 0.0, double gap = 0.0,
                bool decoupled = false);

/// Block unitary: identity on the non-selected control branch, `action`
/// (a single-qubit unitary) on the branch where the control qubit equals
/// control_value.
GateOp conditional_gate(const std::string& control, int control_value,
                        const std::string& target, const GateOp& action);

/// Conditional pi pulse (the experiments' C_ctrl-NOT_target realization):
/// applies exp(-i pi sigma_axis / 2) on the target when the control is in
/// `control_value`.
GateOp conditional_flip(const std::string& control, const std::string& target,
                        Axis axis = Axis::X, int control_value = 1,
                        double duration = 0.0, double gap = 0.0,
                        bool decoupled = false);

/// Embed an operator acting on `acts_on` (in that order) into the full
/// register `reg_labels`.
Matrix embed(const Matrix& op, const std::vector<std::string>& acts_on,
             const std::vector<std::string>& reg_labels);

/// U rho U^dag (or sum_i K_i rho K_i^dag) on the matching tensor factors.
DensityMatrix apply(const DensityMatrix& rho, const GateOp& g);

/// Convenience: apply a gate sequence left to right.
DensityMatrix apply_all(DensityMatrix rho, const std::vector<GateOp>& gates);

}  // namespace demonsim
