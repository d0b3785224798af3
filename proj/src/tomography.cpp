#include "demonsim/tomography.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace demonsim {

namespace {

constexpr const char* kAxisNames = "XYZ";

char axis_char(Axis a) { return kAxisNames[static_cast<int>(a)]; }

Axis axis_from_char(char c) {
  switch (c) {
    case 'X': return Axis::X;
    case 'Y': return Axis::Y;
    case 'Z': return Axis::Z;
  }
  throw std::invalid_argument(std::string("unknown axis: ") + c);
}

int parity_sign(int outcome, const std::vector<int>& string_codes, int n) {
  int sign = 1;
  for (int q = 0; q < n; ++q) {
    if (string_codes[q] == 0) continue;
    if ((outcome >> (n - 1 - q)) & 1) sign = -sign;
  }
  return sign;
}

Matrix pauli_string_matrix(const std::vector<int>& codes) {
  Matrix out = Matrix::Identity(1, 1);
  for (int c : codes) {
    Eigen::Matrix2cd p = c == 0 ? Eigen::Matrix2cd::Identity()
                                : Eigen::Matrix2cd(pauli(static_cast<Axis>(c - 1)));
    Matrix next(out.rows() * 2, out.cols() * 2);
    for (Eigen::Index i = 0; i < out.rows(); ++i)
      for (Eigen::Index j = 0; j < out.cols(); ++j)
        next.block(2 * i, 2 * j, 2, 2) = out(i, j) * p;
    out = std::move(next);
  }
  return out;
}

}  // namespace

void Calibration::validate() const {
  if (!(c0 > c1 && c1 > 0.0))
    throw std::invalid_argument("Calibration: requires c0 > c1 > 0");
  if (cycles < 1) throw std::invalid_argument("Calibration: cycles >= 1");
}

void TomographyDataset::validate() const {
  calibration.validate();
  if (labels.empty()) throw std::invalid_argument("dataset: empty register");
  if (settings.size() != counts.size())
    throw std::invalid_argument("dataset: one count record per setting");
  const size_t outcomes = size_t{1} << labels.size();
  for (size_t s = 0; s < settings.size(); ++s) {
    if (settings[s].axes.size() != labels.size())
      throw std::invalid_argument("dataset: setting arity mismatch");
    if (counts[s].size() != outcomes)
      throw std::invalid_argument("dataset: outcome count mismatch");
    for (long long c : counts[s])
      if (c < 0) throw std::invalid_argument("dataset: negative count");
  }
}

nlohmann::json TomographyDataset::to_json() const {
  nlohmann::json j;
  j["labels"] = labels;
  j["calibration"] = {{"c0", calibration.c0},
                      {"c1", calibration.c1},
                      {"cycles", calibration.cycles}};
  // Legend for the pulse sequence each axis stands for; nuclear readout is
  // an ideal map onto the electron followed by fluorescence counting.
  j["basis_rotations"] = {{"X", "Ry(-pi/2)"}, {"Y", "Rx(pi/2)"}, {"Z", "I"}};
  j["settings"] = nlohmann::json::array();
  for (size_t s = 0; s < settings.size(); ++s) {
    std::string basis;
    for (Axis a : settings[s].axes) basis.push_back(axis_char(a));
    j["settings"].push_back({{"basis", basis}, {"counts", counts[s]}});
  }
  return j;
}

TomographyDataset TomographyDataset::from_json(const nlohmann::json& j) {
  TomographyDataset ds;
  ds.labels = j.at("labels").get<std::vector<std::string>>();
  const auto& cal = j.at("calibration");
  ds.calibration.c0 = cal.at("c0").get<double>();
  ds.calibration.c1 = cal.at("c1").get<double>();
  ds.calibration.cycles = cal.at("cycles").get<long long>();
  for (const auto& s : j.at("settings")) {
    MeasurementSetting ms;
    for (char c : s.at("basis").get<std::string>())
      ms.axes.push_back(axis_from_char(c));
    ds.settings.push_back(std::move(ms));
    ds.counts.push_back(s.at("counts").get<std::vector<long long>>());
  }
  ds.validate();
  return ds;
}

std::vector<MeasurementSetting> complete_settings(int n_qubits) {
  std::vector<MeasurementSetting> out;
  int total = 1;
  for (int q = 0; q < n_qubits; ++q) total *= 3;
  for (int idx = 0; idx < total; ++idx) {
    MeasurementSetting s;
    int rem = idx;
    for (int q = 0; q < n_qubits; ++q) {
      s.axes.push_back(static_cast<Axis>(rem % 3));
      rem /= 3;
    }
    std::reverse(s.axes.begin(), s.axes.end());
    out.push_back(std::move(s));
  }
  return out;
}

Eigen::Matrix2cd basis_rotation(Axis a) {
  switch (a) {
    case Axis::X: return rotation_matrix(Axis::Y, -M_PI / 2);
    case Axis::Y: return rotation_matrix(Axis::X, M_PI / 2);
    case Axis::Z: return Eigen::Matrix2cd::Identity();
  }
  throw std::logic_error("unreachable");
}

std::vector<long long> simulate_counts(const DensityMatrix& rho,
                                       const MeasurementSetting& setting,
                                       const Calibration& cal,
                                       RngStream& rng) {
  cal.validate();
  const int n = rho.n_qubits();
  if (static_cast<int>(setting.axes.size()) != n)
    throw std::invalid_argument("simulate_counts: setting arity mismatch");

  Matrix rot = Matrix::Identity(1, 1);
  for (Axis a : setting.axes) {
    const Eigen::Matrix2cd w = basis_rotation(a);
    Matrix next(rot.rows() * 2, rot.cols() * 2);
    for (Eigen::Index i = 0; i < rot.rows(); ++i)
      for (Eigen::Index j = 0; j < rot.cols(); ++j)
        next.block(2 * i, 2 * j, 2, 2) = rot(i, j) * w;
    rot = std::move(next);
  }
  const Matrix rotated = rot * rho.data() * rot.adjoint();

  std::vector<long long> out;
  for (int k = 0; k < rho.dim(); ++k) {
    const double q = std::clamp(rotated(k, k).real(), 0.0, 1.0);
    const double mean =
        static_cast<double>(cal.cycles) * (q * cal.c0 + (1.0 - q) * cal.c1);
    out.push_back(rng.poisson(mean));
  }
  return out;
}

TomographyDataset simulate_dataset(const DensityMatrix& rho,
                                   const Calibration& cal,
                                   std::uint64_t seed) {
  TomographyDataset ds;
  ds.labels = rho.labels();
  ds.calibration = cal;
  ds.settings = complete_settings(rho.n_qubits());
  for (size_t s = 0; s < ds.settings.size(); ++s) {
    RngStream rng = RngStream::derived(seed, "setting/" + std::to_string(s));
    ds.counts.push_back(simulate_counts(rho, ds.settings[s], cal, rng));
  }
  return ds;
}

double estimate_population(long long counts, const Calibration& cal) {
  if (std::abs(cal.c0 - cal.c1) < 1e-15)
    throw std::invalid_argument("estimate_population: degenerate calibration");
  const double rate = static_cast<double>(counts) / cal.cycles;
  return (rate - cal.c1) / (cal.c0 - cal.c1);
}

std::map<std::vector<int>, double> pauli_expectations(
    const TomographyDataset& ds) {
  ds.validate();
  const int n = static_cast<int>(ds.labels.size());
  const int outcomes = 1 << n;

  // Index settings by axis signature; require the complete family.
  std::map<std::vector<int>, size_t> by_axes;
  for (size_t s = 0; s < ds.settings.size(); ++s) {
    std::vector<int> sig;
    for (Axis a : ds.settings[s].axes) sig.push_back(static_cast<int>(a) + 1);
    by_axes[sig] = s;
  }
  int expected = 1;
  for (int q = 0; q < n; ++q) expected *= 3;
  if (static_cast<int>(by_axes.size()) != expected)
    throw std::invalid_argument(
        "pauli_expectations: settings are not tomographically complete");

  std::map<std::vector<int>, double> exps;
  std::vector<int> codes(n, 0);
  const int strings = 1 << (2 * n);
  for (int raw = 0; raw < strings; ++raw) {
    int rem = raw;
    bool identity = true;
    for (int q = 0; q < n; ++q) {
      codes[q] = rem & 3;
      rem >>= 2;
      if (codes[q] != 0) identity = false;
    }
    if (identity) {
      exps[std::vector<int>(n, 0)] = 1.0;
      continue;
    }
    std::vector<int> canonical = codes;
    for (int& c : canonical)
      if (c == 0) c = 3;
    const size_t s = by_axes.at(canonical);
    double val = 0.0;
    for (int k = 0; k < outcomes; ++k) {
      const double q_hat = estimate_population(ds.counts[s][k], ds.calibration);
      val += parity_sign(k, codes, n) * q_hat;
    }
    exps[codes] = val;
  }
  return exps;
}

Matrix linear_inversion(int n_qubits,
                        const std::map<std::vector<int>, double>& exps) {
  const int dim = 1 << n_qubits;
  Matrix rho = Matrix::Zero(dim, dim);
  for (const auto& [codes, val] : exps) {
    if (static_cast<int>(codes.size()) != n_qubits)
      throw std::invalid_argument("linear_inversion: string arity mismatch");
    rho += val * pauli_string_matrix(codes);
  }
  return rho / static_cast<double>(dim);
}

DensityMatrix reconstruct(const TomographyDataset& ds) {
  const int n = static_cast<int>(ds.labels.size());
  const Matrix raw = linear_inversion(n, pauli_expectations(ds));

  Eigen::SelfAdjointEigenSolver<Matrix> es(raw);
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
  const double total = ev.sum();
  const int dim = 1 << n;
  Matrix rho;
  if (total < 1e-12) {
    rho = Matrix::Identity(dim, dim) / static_cast<double>(dim);
  } else {
    ev /= total;
    rho = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
    rho = 0.5 * (rho + Matrix(rho.adjoint()));
  }
  return DensityMatrix(ds.labels, std::move(rho));
}

double evaluate_statistic(const DensityMatrix& rho, Statistic stat,
                          const std::optional<DensityMatrix>& target_state,
                          const std::optional<PureState>& target_pure) {
  switch (stat) {
    case Statistic::Entropy:
      return von_neumann_entropy(rho);
    case Statistic::Fidelity:
      if (!target_state)
        throw std::invalid_argument("fidelity statistic needs a target state");
      return fidelity(*target_state, rho);
    case Statistic::EntanglementFidelity:
      if (!target_pure)
        throw std::invalid_argument(
            "entanglement fidelity statistic needs a target pure state");
      return entanglement_fidelity(rho, *target_pure);
    case Statistic::BlochLength:
      return bloch_length(rho);
  }
  throw std::logic_error("unreachable");
}

ConfidenceInterval monte_carlo_ci(
    const TomographyDataset& ds, Statistic stat, int n_resamples,
    std::uint64_t seed, const std::optional<DensityMatrix>& target_state,
    const std::optional<PureState>& target_pure, double level) {
  if (n_resamples < 100)
    throw std::invalid_argument("monte_carlo_ci: n_resamples must be >= 100");
  if (level <= 0.0 || level >= 1.0)
    throw std::invalid_argument("monte_carlo_ci: level must be in (0, 1)");
  ds.validate();

  ConfidenceInterval ci;
  ci.level = level;
  ci.point = evaluate_statistic(reconstruct(ds), stat, target_state,
                                target_pure);

  std::vector<double> samples;
  samples.reserve(n_resamples);
  TomographyDataset resampled = ds;
  for (int r = 0; r < n_resamples; ++r) {
    RngStream rng = RngStream::derived(seed, "resample/" + std::to_string(r));
    for (size_t s = 0; s < ds.counts.size(); ++s)
      for (size_t k = 0; k < ds.counts[s].size(); ++k)
        resampled.counts[s][k] =
            rng.poisson(static_cast<double>(ds.counts[s][k]));
    samples.push_back(evaluate_statistic(reconstruct(resampled), stat,
                                         target_state, target_pure));
  }
  std::sort(samples.begin(), samples.end());

  // Central percentile interval with linear interpolation between order
  // statistics; clamped so the interval always brackets the point.
  auto quantile = [&](double p) {
    const double pos = p * (samples.size() - 1);
    const size_t lo = static_cast<size_t>(std::floor(pos));
    const size_t hi = std::min(lo + 1, samples.size() - 1);
    const double w = pos - static_cast<double>(lo);
    return (1.0 - w) * samples[lo] + w * samples[hi];
  };
  ci.lower = std::min(quantile((1.0 - level) / 2.0), ci.point);
  ci.upper = std::max(quantile(1.0 - (1.0 - level) / 2.0), ci.point);
  return ci;
}

}  // namespace demonsim
