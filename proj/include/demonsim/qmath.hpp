#pragma once

#include <Eigen/Dense>

#include <complex>
#include <string>
#include <vector>

namespace demonsim {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Validation tolerances for state invariants.
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kEigenvalueFloor = -1e-10;

/// Pure state over a labeled register of qubits. Amplitudes are stored in
/// tensor order: label 0 is the most significant bit of the basis index.
class PureState {
public:
  PureState(std::vector<std::string> labels, Vector amplitudes);

  const std::vector<std::string>& labels() const { return labels_; }
  const Vector& amplitudes() const { return amps_; }
  int n_qubits() const { return static_cast<int>(labels_.size()); }
  int dim() const { return static_cast<int>(amps_.size()); }

  /// Index of `label` in the register; throws if absent.
  int label_index(const std::string& label) const;

  /// Computational basis state |k> on the given register.
  static PureState basis(std::vector<std::string> labels, int k);

private:
  std::vector<std::string> labels_;
  Vector amps_;
};

/// Density matrix over a labeled register of qubits. Construction validates
/// Hermiticity, unit trace and positive semidefiniteness.
class DensityMatrix {
public:
  DensityMatrix(std::vector<std::string> labels, Matrix data);

  const std::vector<std::string>& labels() const { return labels_; }
  const Matrix& data() const { return data_; }
  int n_qubits() const { return static_cast<int>(labels_.size()); }
  int dim() const { return static_cast<int>(data_.rows()); }
  std::vector<int> dims() const { return std::vector<int>(labels_.size(), 2); }

  int label_index(const std::string& label) const;
  bool has_label(const std::string& label) const;

  static DensityMatrix from_pure(const PureState& psi);
  static DensityMatrix maximally_mixed(std::vector<std::string> labels);
  /// |k><k| on the given register.
  static DensityMatrix basis(std::vector<std::string> labels, int k);

private:
  std::vector<std::string> labels_;
  Matrix data_;
};

// Kronecker products over disjoint registers; throws on label collision.
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);
PureState tensor(const PureState& a, const PureState& b);

/// Reduced state on `keep` (original register order is preserved).
DensityMatrix partial_trace(const DensityMatrix& rho,
                            const std::vector<std::string>& keep);

/// Shannon entropy in bits of a probability/eigenvalue vector; entries in
/// [kEigenvalueFloor, 0] are clamped to zero, entries below throw.
double shannon_entropy(const std::vector<double>& probs);

/// von Neumann entropy in bits, S = -sum_i p_i log2 p_i over eigenvalues.
double von_neumann_entropy(const DensityMatrix& rho);

/// Uhlmann fidelity F = [tr sqrt(sqrt(rho_id) rho_e sqrt(rho_id))]^2.
double fidelity(const DensityMatrix& rho_id, const DensityMatrix& rho_e);

/// <phi|rho|phi>.
double entanglement_fidelity(const DensityMatrix& rho, const PureState& phi);

/// Bloch vector (x, y, z) of a single-qubit state.
Eigen::Vector3d bloch_vector(const DensityMatrix& rho);

/// Bloch vector length L = |2p - 1| for single-qubit eigenvalues {p, 1-p}.
double bloch_length(const DensityMatrix& rho);

/// 1 - [(1+L)log2(1+L) + (1-L)log2(1-L)]/2, the single-qubit entropy at
/// Bloch length L.
double entropy_from_bloch(double l);

/// Hermitian matrix square root; eigenvalues in [kEigenvalueFloor, 0] are
/// clamped to zero, lower ones throw.
Matrix matrix_sqrt_psd(const Matrix& m);

}  // namespace demonsim
