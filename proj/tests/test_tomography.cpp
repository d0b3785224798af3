#include "demonsim/tomography.hpp"

#include "demonsim/noise.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace demonsim;
using testutil::TestRng;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

PureState phi_da() {
  Vector v = Vector::Zero(4);
  v(0) = kInvSqrt2;
  v(3) = -kInvSqrt2;
  return PureState({"E", "N"}, v);
}

// Exact (infinite-count) dataset: counts set to the rounded Poisson means
// of a huge cycle budget so q-hat recovers the populations to ~1e-10.
TomographyDataset exact_dataset(const DensityMatrix& rho) {
  Calibration cal;
  cal.c0 = 0.5;
  cal.c1 = 0.25;
  cal.cycles = 4000000000000LL;  // 4e12
  TomographyDataset ds;
  ds.labels = rho.labels();
  ds.calibration = cal;
  ds.settings = complete_settings(rho.n_qubits());
  for (const auto& setting : ds.settings) {
    Matrix rot = Matrix::Identity(1, 1);
    for (Axis a : setting.axes)
      rot = testutil::kron_oracle(rot, Matrix(basis_rotation(a)));
    const Matrix rotated = rot * rho.data() * rot.adjoint();
    std::vector<long long> counts;
    for (int k = 0; k < rho.dim(); ++k) {
      const double q = rotated(k, k).real();
      counts.push_back(static_cast<long long>(
          std::llround(cal.cycles * (q * cal.c0 + (1.0 - q) * cal.c1))));
    }
    ds.counts.push_back(std::move(counts));
  }
  return ds;
}

}  // namespace

TEST_CASE("calibration validation") {
  Calibration cal;
  cal.c0 = 0.01;
  cal.c1 = 0.02;
  CHECK_THROWS_AS(cal.validate(), std::invalid_argument);
  cal = Calibration{};
  cal.cycles = 0;
  CHECK_THROWS_AS(cal.validate(), std::invalid_argument);
}

TEST_CASE("default calibration meets the photon budget") {
  const Calibration cal = Calibration::defaults();
  CHECK(cal.cycles >= 4000000);
  // Worst-case record (population fully dark) still collects >= 5e4 photons.
  CHECK(cal.cycles * cal.c1 >= 5e4);
}

TEST_CASE("simulate_counts means and determinism") {
  const Calibration cal = Calibration::defaults();
  // q = 1 on |0>, with 6-sigma statistical margin on the Poisson draw.
  const auto z0 = DensityMatrix::basis({"E"}, 0);
  RngStream rng(99);
  const auto counts = simulate_counts(z0, MeasurementSetting{{Axis::Z}}, cal,
                                      rng);
  const double mean0 = cal.cycles * cal.c0;
  const double mean1 = cal.cycles * cal.c1;
  CHECK(std::abs(counts[0] - mean0) < 6 * std::sqrt(mean0));
  CHECK(std::abs(counts[1] - mean1) < 6 * std::sqrt(mean1));

  // q = 1/2 on |+> measured along Z: both records at the midpoint level.
  Matrix plus(2, 2);
  plus << 0.5, 0.5, 0.5, 0.5;
  RngStream rng2(7);
  const auto half = simulate_counts(DensityMatrix({"E"}, plus),
                                    MeasurementSetting{{Axis::Z}}, cal, rng2);
  const double mid = cal.cycles * (cal.c0 + cal.c1) / 2.0;
  CHECK(std::abs(half[0] - mid) < 6 * std::sqrt(mid));
  CHECK(std::abs(half[1] - mid) < 6 * std::sqrt(mid));

  // Determinism for a fixed seed.
  RngStream ra(5), rb(5);
  CHECK(simulate_counts(z0, MeasurementSetting{{Axis::X}}, cal, ra) ==
        simulate_counts(z0, MeasurementSetting{{Axis::X}}, cal, rb));
}

TEST_CASE("estimate_population: calibration endpoints and midpoint") {
  Calibration cal;
  cal.c0 = 0.04;
  cal.c1 = 0.01;
  cal.cycles = 1000000;
  CHECK(estimate_population(static_cast<long long>(cal.cycles * cal.c0), cal) ==
        doctest::Approx(1.0));
  CHECK(estimate_population(static_cast<long long>(cal.cycles * cal.c1), cal) ==
        doctest::Approx(0.0));
  CHECK(estimate_population(
            static_cast<long long>(cal.cycles * (cal.c0 + cal.c1) / 2), cal) ==
        doctest::Approx(0.5));

  Calibration degenerate = cal;
  degenerate.c1 = degenerate.c0;
  CHECK_THROWS_AS(estimate_population(1000, degenerate),
                  std::invalid_argument);
}

TEST_CASE("estimate_population is affine invariant") {
  TestRng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    Calibration cal;
    cal.c0 = rng.uniform(0.02, 0.08);
    cal.c1 = rng.uniform(0.005, cal.c0 * 0.9);
    cal.cycles = 1000000;
    const long long counts =
        static_cast<long long>(rng.uniform(0, cal.cycles * cal.c0));
    // Integer scale keeps the rescaled counts exact.
    const long long scale = 2 + static_cast<long long>(rng.next_u64() % 7);
    Calibration scaled = cal;
    scaled.c0 *= scale;
    scaled.c1 *= scale;
    const double a = estimate_population(counts, cal);
    const double b = estimate_population(counts * scale, scaled);
    CHECK(std::abs(a - b) < 1e-9);
  }
}

TEST_CASE("background subtraction equivalence (calibrated chains cancel p0)") {
  // Measuring p0*rho + (1-p0)*I/2 against calibration levels taken from the
  // equally mixed reference states gives the same q-hat as measuring rho
  // against the pure-state levels, exactly.
  TestRng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    Calibration pure_cal;
    pure_cal.c0 = rng.uniform(0.02, 0.08);
    pure_cal.c1 = rng.uniform(0.005, pure_cal.c0 * 0.9);
    pure_cal.cycles = 1000000;
    const double p0 = rng.uniform(0.1, 1.0);
    const double q = rng.uniform(0.0, 1.0);

    // Mixed reference levels.
    const double q_ref0 = (1.0 + p0) / 2.0;
    Calibration mixed_cal = pure_cal;
    mixed_cal.c0 = q_ref0 * pure_cal.c0 + (1.0 - q_ref0) * pure_cal.c1;
    mixed_cal.c1 = (1.0 - q_ref0) * pure_cal.c0 + q_ref0 * pure_cal.c1;

    const double q_mixed = p0 * q + (1.0 - p0) / 2.0;
    const double rate =
        q_mixed * pure_cal.c0 + (1.0 - q_mixed) * pure_cal.c1;
    const double q_hat =
        (rate - mixed_cal.c1) / (mixed_cal.c0 - mixed_cal.c1);
    CHECK(std::abs(q_hat - q) < 1e-12);
  }
}

TEST_CASE("reconstruction is exact on analytic expectations") {
  TestRng rng(17);
  for (const int n : {1, 2}) {
    std::vector<std::string> labels;
    for (int q = 0; q < n; ++q) labels.push_back("q" + std::to_string(q));
    for (int trial = 0; trial < 10; ++trial) {
      const auto rho = testutil::random_density_matrix(rng, labels);
      const auto recon = reconstruct(exact_dataset(rho));
      CHECK(testutil::max_abs_diff(recon.data(), rho.data()) < 1e-9);
    }
  }
  // Maximally mixed special case.
  const auto mixed = DensityMatrix::maximally_mixed({"E", "N"});
  CHECK(testutil::max_abs_diff(reconstruct(exact_dataset(mixed)).data(),
                               mixed.data()) < 1e-9);
}

TEST_CASE("reconstruction output satisfies the state invariants") {
  TestRng rng(23);
  Calibration cal = Calibration::defaults();
  cal.cycles = 40000;  // deliberately noisy
  for (int trial = 0; trial < 30; ++trial) {
    const auto rho = testutil::random_density_matrix(rng, {"E", "N"});
    const auto ds = simulate_dataset(rho, cal, rng.next_u64());
    const auto recon = reconstruct(ds);  // DensityMatrix ctor validates
    CHECK(std::abs(recon.data().trace().real() - 1.0) < 1e-12);
  }
}

TEST_CASE("incomplete settings are rejected") {
  const auto rho = DensityMatrix::maximally_mixed({"E"});
  auto ds = simulate_dataset(rho, Calibration::defaults(), 1);
  ds.settings.pop_back();
  ds.counts.pop_back();
  CHECK_THROWS_AS(reconstruct(ds), std::invalid_argument);
}

TEST_CASE("sampled Bell-state reconstruction: median F_e over seeds") {
  const auto rho = DensityMatrix::from_pure(phi_da());
  const Calibration cal = Calibration::defaults();
  std::vector<double> fes;
  for (int seed = 0; seed < 40; ++seed) {
    const auto ds =
        simulate_dataset(rho, cal, derive_seed(9000, std::to_string(seed)));
    fes.push_back(entanglement_fidelity(reconstruct(ds), phi_da()));
  }
  std::sort(fes.begin(), fes.end());
  CHECK(fes[fes.size() / 2] >= 0.98);
}

TEST_CASE("entropy estimates of a pure state are biased upward") {
  // Shot noise can only raise the entropy of a pure state: the estimate is
  // never negative and is strictly positive whenever the reconstructed
  // Bloch vector lands inside the sphere (roughly half the draws; the
  // other half truncate onto the surface and return exactly zero).
  const Calibration cal = Calibration::defaults();
  const auto pure = DensityMatrix::basis({"E"}, 0);
  const int trials = 60;
  std::vector<double> est;
  for (int seed = 0; seed < trials; ++seed) {
    const auto ds =
        simulate_dataset(pure, cal, derive_seed(41, std::to_string(seed)));
    est.push_back(von_neumann_entropy(reconstruct(ds)));
  }
  double total = 0.0;
  for (double e : est) {
    CHECK(e >= 0.0);
    total += e;
  }
  CHECK(total / trials > 0.0);
  std::sort(est.begin(), est.end());
  CHECK(est[3 * trials / 4] > 0.0);  // well over a quarter of draws positive
}

TEST_CASE("monte carlo CI: degenerate data gives a degenerate interval") {
  // All-zero counts resample to all-zero counts with probability one.
  TomographyDataset ds;
  ds.labels = {"E"};
  ds.calibration = Calibration::defaults();
  ds.settings = complete_settings(1);
  ds.counts = {{0, 0}, {0, 0}, {0, 0}};
  const auto ci = monte_carlo_ci(ds, Statistic::Entropy, 200, 5);
  CHECK(ci.lower == ci.point);
  CHECK(ci.upper == ci.point);
}

TEST_CASE("monte carlo CI: near-pure entropy interval is right-skewed") {
  const auto pure = DensityMatrix::basis({"E"}, 0);
  const auto ds = simulate_dataset(pure, Calibration::defaults(), 2024);
  const auto ci = monte_carlo_ci(ds, Statistic::Entropy, 400, 77);
  CHECK(ci.upper - ci.point >= ci.point - ci.lower);
  CHECK(ci.lower <= ci.point);
  CHECK(ci.point <= ci.upper);
}

TEST_CASE("monte carlo CI is deterministic in the seed") {
  const auto rho =
      DensityMatrix({"E"}, testutil::state_from_bloch(0.3, 0.1, 0.4));
  const auto ds = simulate_dataset(rho, Calibration::defaults(), 15);
  const auto a = monte_carlo_ci(ds, Statistic::Entropy, 150, 88);
  const auto b = monte_carlo_ci(ds, Statistic::Entropy, 150, 88);
  CHECK(a.point == b.point);
  CHECK(a.lower == b.lower);
  CHECK(a.upper == b.upper);
  CHECK_THROWS_AS(monte_carlo_ci(ds, Statistic::Entropy, 50, 1),
                  std::invalid_argument);
}

TEST_CASE("dataset JSON round trip") {
  TestRng rng(31);
  const auto rho = testutil::random_density_matrix(rng, {"E", "N"});
  const auto ds = simulate_dataset(rho, Calibration::defaults(), 321);
  const auto back = TomographyDataset::from_json(ds.to_json());
  CHECK(back.labels == ds.labels);
  CHECK(back.counts == ds.counts);
  CHECK(back.calibration.c0 == ds.calibration.c0);
  CHECK(back.calibration.cycles == ds.calibration.cycles);
  for (size_t s = 0; s < ds.settings.size(); ++s)
    CHECK(back.settings[s].axes == ds.settings[s].axes);
  // Reconstruction from the round-tripped dataset is identical.
  CHECK(testutil::max_abs_diff(reconstruct(back).data(),
                               reconstruct(ds).data()) == 0.0);
}
