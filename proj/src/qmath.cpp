#include "demonsim/qmath.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <limits>
#include <cmath>
#include <set>
#include <stdexcept>

namespace demonsim {

namespace {

void check_labels_unique(const std::vector<std::string>& labels) {
  std::set<std::string> seen(labels.begin(), labels.end());
  if (seen.size() != labels.size())
    throw std::invalid_argument("register labels must be unique");
  if (labels.empty()) throw std::invalid_argument("register must be non-empty");
}

double xlog2x(double x) {
  return x > 0.0 ? x * std::log2(x) : 0.0;
}

}  // namespace

PureState::PureState(std::vector<std::string> labels, Vector amplitudes)
    : labels_(std::move(labels)), amps_(std::move(amplitudes)) {
  check_labels_unique(labels_);
  if (amps_.size() != (Eigen::Index{1} << labels_.size()))
    throw std::invalid_argument("amplitude vector size does not match register");
  if (std::abs(amps_.squaredNorm() - 1.0) > kTraceTol)
    throw std::invalid_argument("pure state is not normalized");
}

int PureState::label_index(const std::string& label) const {
  for (size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] == label) return static_cast<int>(i);
  throw std::invalid_argument("unknown subsystem label: " + label);
}

PureState PureState::basis(std::vector<std::string> labels, int k) {
  Vector v = Vector::Zero(Eigen::Index{1} << labels.size());
  v(k) = 1.0;
  return PureState(std::move(labels), std::move(v));
}

DensityMatrix::DensityMatrix(std::vector<std::string> labels, Matrix data)
    : labels_(std::move(labels)), data_(std::move(data)) {
  check_labels_unique(labels_);
  const Eigen::Index dim = Eigen::Index{1} << labels_.size();
  if (data_.rows() != dim || data_.cols() != dim)
    throw std::invalid_argument("density matrix size does not match register");
  if ((data_ - data_.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol)
    throw std::invalid_argument("density matrix is not Hermitian");
  if (std::abs(data_.trace().real() - 1.0) > kTraceTol ||
      std::abs(data_.trace().imag()) > kTraceTol)
    throw std::invalid_argument("density matrix does not have unit trace");
  Eigen::SelfAdjointEigenSolver<Matrix> es(data_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < kEigenvalueFloor)
    throw std::invalid_argument("density matrix is not positive semidefinite");
}

int DensityMatrix::label_index(const std::string& label) const {
  for (size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] == label) return static_cast<int>(i);
  throw std::invalid_argument("unknown subsystem label: " + label);
}

bool DensityMatrix::has_label(const std::string& label) const {
  return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  return DensityMatrix(psi.labels(),
                       psi.amplitudes() * psi.amplitudes().adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(std::vector<std::string> labels) {
  const Eigen::Index dim = Eigen::Index{1} << labels.size();
  return DensityMatrix(std::move(labels),
                       Matrix::Identity(dim, dim) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::basis(std::vector<std::string> labels, int k) {
  const Eigen::Index dim = Eigen::Index{1} << labels.size();
  Matrix m = Matrix::Zero(dim, dim);
  m(k, k) = 1.0;
  return DensityMatrix(std::move(labels), std::move(m));
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  for (const auto& l : b.labels())
    if (a.has_label(l))
      throw std::invalid_argument("tensor: label collision on " + l);
  std::vector<std::string> labels = a.labels();
  labels.insert(labels.end(), b.labels().begin(), b.labels().end());
  Matrix out(a.dim() * b.dim(), a.dim() * b.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j)
      out.block(i * b.dim(), j * b.dim(), b.dim(), b.dim()) =
          a.data()(i, j) * b.data();
  return DensityMatrix(std::move(labels), std::move(out));
}

PureState tensor(const PureState& a, const PureState& b) {
  for (const auto& l : b.labels()) {
    for (const auto& m : a.labels())
      if (l == m) throw std::invalid_argument("tensor: label collision on " + l);
  }
  std::vector<std::string> labels = a.labels();
  labels.insert(labels.end(), b.labels().begin(), b.labels().end());
  Vector out(a.dim() * b.dim());
  for (int i = 0; i < a.dim(); ++i)
    out.segment(i * b.dim(), b.dim()) = a.amplitudes()(i) * b.amplitudes();
  return PureState(std::move(labels), std::move(out));
}

DensityMatrix partial_trace(const DensityMatrix& rho,
                            const std::vector<std::string>& keep) {
  if (keep.empty())
    throw std::invalid_argument("partial_trace: keep set must be non-empty");
  std::vector<int> keep_pos;
  for (const auto& l : keep) keep_pos.push_back(rho.label_index(l));

  const int n = rho.n_qubits();
  std::vector<int> keep_sorted = keep_pos;
  std::sort(keep_sorted.begin(), keep_sorted.end());
  if (std::adjacent_find(keep_sorted.begin(), keep_sorted.end()) !=
      keep_sorted.end())
    throw std::invalid_argument("partial_trace: duplicate label in keep set");

  std::vector<int> traced;
  for (int q = 0; q < n; ++q)
    if (!std::binary_search(keep_sorted.begin(), keep_sorted.end(), q))
      traced.push_back(q);

  // Kept subsystems stay in their original register order.
  std::vector<std::string> out_labels;
  std::vector<int> kept_in_order;
  for (int q = 0; q < n; ++q)
    if (std::binary_search(keep_sorted.begin(), keep_sorted.end(), q)) {
      kept_in_order.push_back(q);
      out_labels.push_back(rho.labels()[q]);
    }

  const int m = static_cast<int>(kept_in_order.size());
  const int out_dim = 1 << m;
  const int tr_dim = 1 << static_cast<int>(traced.size());

  auto full_index = [&](int kept_bits, int traced_bits) {
    int idx = 0;
    for (int a = 0; a < m; ++a) {
      const int bit = (kept_bits >> (m - 1 - a)) & 1;
      idx |= bit << (n - 1 - kept_in_order[a]);
    }
    for (size_t a = 0; a < traced.size(); ++a) {
      const int bit = (traced_bits >> (traced.size() - 1 - a)) & 1;
      idx |= bit << (n - 1 - traced[a]);
    }
    return idx;
  };

  Matrix out = Matrix::Zero(out_dim, out_dim);
  for (int i = 0; i < out_dim; ++i)
    for (int j = 0; j < out_dim; ++j)
      for (int t = 0; t < tr_dim; ++t)
        out(i, j) += rho.data()(full_index(i, t), full_index(j, t));
  return DensityMatrix(std::move(out_labels), std::move(out));
}

double shannon_entropy(const std::vector<double>& probs) {
  double s = 0.0;
  for (double p : probs) {
    if (p < kEigenvalueFloor)
      throw std::invalid_argument("shannon_entropy: negative probability");
    s -= xlog2x(std::max(p, 0.0));
  }
  return std::max(0.0, s);
}

double von_neumann_entropy(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.data(), Eigen::EigenvaluesOnly);
  std::vector<double> evs(es.eigenvalues().data(),
                          es.eigenvalues().data() + es.eigenvalues().size());
  return shannon_entropy(evs);
}

Matrix matrix_sqrt_psd(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  Eigen::VectorXd ev = es.eigenvalues();
  // Eigenvalues at rounding-noise scale square-root into ~1e-8 artifacts;
  // cut them at the numerical rank threshold instead.
  const double cutoff =
      64.0 * std::numeric_limits<double>::epsilon() *
      std::max(std::abs(ev.maxCoeff()), std::abs(ev.minCoeff()));
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < kEigenvalueFloor)
      throw std::invalid_argument("matrix_sqrt_psd: matrix is not PSD");
    ev(i) = ev(i) <= cutoff ? 0.0 : std::sqrt(ev(i));
  }
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

double fidelity(const DensityMatrix& rho_id, const DensityMatrix& rho_e) {
  if (rho_id.labels() != rho_e.labels())
    throw std::invalid_argument("fidelity: register mismatch");
  // tr sqrt(sqrt(rho_id) rho_e sqrt(rho_id)) equals the trace norm of
  // sqrt(rho_id) sqrt(rho_e); singular values avoid the precision loss of
  // square-rooting near-zero eigenvalues.
  const Matrix prod =
      matrix_sqrt_psd(rho_id.data()) * matrix_sqrt_psd(rho_e.data());
  Eigen::JacobiSVD<Matrix> svd(prod);
  const double tr = svd.singularValues().sum();
  return std::clamp(tr * tr, 0.0, 1.0);
}

double entanglement_fidelity(const DensityMatrix& rho, const PureState& phi) {
  if (rho.labels() != phi.labels())
    throw std::invalid_argument("entanglement_fidelity: register mismatch");
  const Complex v =
      (phi.amplitudes().adjoint() * rho.data() * phi.amplitudes())(0, 0);
  return std::clamp(v.real(), 0.0, 1.0);
}

Eigen::Vector3d bloch_vector(const DensityMatrix& rho) {
  if (rho.n_qubits() != 1)
    throw std::invalid_argument("bloch_vector: single-qubit states only");
  const Matrix& d = rho.data();
  return {2.0 * d(0, 1).real(), -2.0 * d(0, 1).imag(),
          (d(0, 0) - d(1, 1)).real()};
}

double bloch_length(const DensityMatrix& rho) {
  if (rho.n_qubits() != 1)
    throw std::invalid_argument("bloch_length: single-qubit states only");
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.data(), Eigen::EigenvaluesOnly);
  const double p = es.eigenvalues().maxCoeff();
  return std::clamp(std::abs(2.0 * p - 1.0), 0.0, 1.0);
}

double entropy_from_bloch(double l) {
  if (l < -kTraceTol || l > 1.0 + kTraceTol)
    throw std::invalid_argument("entropy_from_bloch: L must be in [0, 1]");
  l = std::clamp(l, 0.0, 1.0);
  return std::max(0.0, 1.0 - 0.5 * (xlog2x(1.0 + l) + xlog2x(1.0 - l)));
}

}  // namespace demonsim
