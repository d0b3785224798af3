#include "demonsim/gates.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace demonsim {

namespace {

constexpr Complex kI{0.0, 1.0};

void check_unitary(const Matrix& u) {
  const Matrix d = u.adjoint() * u - Matrix::Identity(u.rows(), u.cols());
  if (d.cwiseAbs().maxCoeff() > kHermitianTol)
    throw std::invalid_argument("gate matrix is not unitary");
}

void check_trace_preserving(const std::vector<Matrix>& kraus) {
  if (kraus.empty()) throw std::invalid_argument("empty Kraus list");
  Matrix sum = Matrix::Zero(kraus[0].rows(), kraus[0].cols());
  for (const auto& k : kraus) sum += k.adjoint() * k;
  const Matrix d = sum - Matrix::Identity(sum.rows(), sum.cols());
  if (d.cwiseAbs().maxCoeff() > kHermitianTol)
    throw std::invalid_argument("Kraus operators are not trace preserving");
}

}  // namespace

Eigen::Matrix2cd pauli(Axis axis) {
  Eigen::Matrix2cd m;
  switch (axis) {
    case Axis::X: m << 0, 1, 1, 0; break;
    case Axis::Y: m << 0, -kI, kI, 0; break;
    case Axis::Z: m << 1, 0, 0, -1; break;
  }
  return m;
}

Eigen::Matrix2cd rotation_matrix(Axis axis, double angle) {
  return std::cos(angle / 2) * Eigen::Matrix2cd::Identity() -
         kI * std::sin(angle / 2) * pauli(axis);
}

PhaseConvention phase_convention() { return PhaseConvention{}; }

GateOp make_unitary(std::string name, std::vector<std::string> acts_on,
                    Matrix u, double duration, double gap, bool decoupled) {
  check_unitary(u);
  if (u.rows() != (Eigen::Index{1} << acts_on.size()))
    throw std::invalid_argument("gate matrix size does not match acts_on");
  return GateOp{GateKind::Unitary, {std::move(u)}, std::move(acts_on),
                std::move(name), duration, gap, decoupled};
}

GateOp make_channel(std::string name, std::vector<std::string> acts_on,
                    std::vector<Matrix> kraus) {
  check_trace_preserving(kraus);
  if (kraus[0].rows() != (Eigen::Index{1} << acts_on.size()))
    throw std::invalid_argument("Kraus size does not match acts_on");
  return GateOp{GateKind::KrausChannel, std::move(kraus), std::move(acts_on),
                std::move(name), 0.0, 0.0, false};
}

GateOp rotation(const std::string& label, Axis axis, double angle,
                double duration, double gap, bool decoupled) {
  const char axis_name[] = {'X', 'Y', 'Z'};
  return make_unitary("R(" + std::string(1, axis_name[static_cast<int>(axis)]) +
                          ") on " + label,
                      {label}, rotation_matrix(axis, angle), duration, gap,
                      decoupled);
}

GateOp conditional_gate(const std::string& control, int control_value,
                        const std::string& target, const GateOp& action) {
  if (control == target)
    throw std::invalid_argument("conditional_gate: control equals target");
  if (control_value != 0 && control_value != 1)
    throw std::invalid_argument("conditional_gate: control value must be 0/1");
  if (action.kind != GateKind::Unitary || action.ops[0].rows() != 2)
    throw std::invalid_argument(
        "conditional_gate: action must be a single-qubit unitary");
  Eigen::Matrix2cd sel = Eigen::Matrix2cd::Zero();
  sel(control_value, control_value) = 1.0;
  const Eigen::Matrix2cd rest = Eigen::Matrix2cd::Identity() - sel;
  Matrix u = Matrix::Zero(4, 4);
  // Tensor order (control, target).
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      u.block(2 * i, 2 * j, 2, 2) =
          sel(i, j) * action.ops[0] +
          rest(i, j) * Eigen::Matrix2cd::Identity();
    }
  return make_unitary("C_" + control + "(" + std::to_string(control_value) +
                          ")-" + action.name,
                      {control, target}, std::move(u), action.duration,
                      action.gap, action.decoupled);
}

GateOp conditional_flip(const std::string& control, const std::string& target,
                        Axis axis, int control_value, double duration,
                        double gap, bool decoupled) {
  GateOp pi_pulse = rotation(target, axis, M_PI, duration, gap, decoupled);
  return conditional_gate(control, control_value, target, pi_pulse);
}

Matrix embed(const Matrix& op, const std::vector<std::string>& acts_on,
             const std::vector<std::string>& reg_labels) {
  const int n = static_cast<int>(reg_labels.size());
  const int m = static_cast<int>(acts_on.size());

  std::vector<int> pos;
  std::set<int> used;
  for (const auto& l : acts_on) {
    int p = -1;
    for (int q = 0; q < n; ++q)
      if (reg_labels[q] == l) p = q;
    if (p < 0) throw std::invalid_argument("embed: unknown label " + l);
    if (!used.insert(p).second)
      throw std::invalid_argument("embed: duplicate label " + l);
    pos.push_back(p);
  }

  std::vector<int> rest;
  for (int q = 0; q < n; ++q)
    if (!used.count(q)) rest.push_back(q);

  const int dim = 1 << n;
  const int op_dim = 1 << m;
  const int rest_dim = 1 << static_cast<int>(rest.size());

  auto full_index = [&](int op_bits, int rest_bits) {
    int idx = 0;
    for (int a = 0; a < m; ++a)
      idx |= ((op_bits >> (m - 1 - a)) & 1) << (n - 1 - pos[a]);
    for (size_t a = 0; a < rest.size(); ++a)
      idx |= ((rest_bits >> (rest.size() - 1 - a)) & 1) << (n - 1 - rest[a]);
    return idx;
  };

  Matrix full = Matrix::Zero(dim, dim);
  for (int i = 0; i < op_dim; ++i)
    for (int j = 0; j < op_dim; ++j) {
      if (op(i, j) == Complex{0.0, 0.0}) continue;
      for (int r = 0; r < rest_dim; ++r)
        full(full_index(i, r), full_index(j, r)) = op(i, j);
    }
  return full;
}

DensityMatrix apply(const DensityMatrix& rho, const GateOp& g) {
  for (const auto& l : g.acts_on)
    if (!rho.has_label(l))
      throw std::invalid_argument("apply: state has no subsystem " + l);
  Matrix out = Matrix::Zero(rho.dim(), rho.dim());
  for (const auto& k : g.ops) {
    const Matrix full = embed(k, g.acts_on, rho.labels());
    out += full * rho.data() * full.adjoint();
  }
  out = 0.5 * (out + Matrix(out.adjoint()));  // scrub rounding asymmetry
  return DensityMatrix(rho.labels(), std::move(out));
}

DensityMatrix apply_all(DensityMatrix rho, const std::vector<GateOp>& gates) {
  for (const auto& g : gates) rho = apply(rho, g);
  return rho;
}

}  // namespace demonsim
