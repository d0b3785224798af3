#include "demonsim/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace demonsim;

TEST_CASE("streams are deterministic and path-separated") {
  RngStream a = RngStream::derived(42, "task/a");
  RngStream a2 = RngStream::derived(42, "task/a");
  RngStream b = RngStream::derived(42, "task/b");
  std::vector<std::uint64_t> va, va2, vb;
  for (int i = 0; i < 16; ++i) {
    va.push_back(a.next_u64());
    va2.push_back(a2.next_u64());
    vb.push_back(b.next_u64());
  }
  CHECK(va == va2);
  CHECK(va != vb);
}

TEST_CASE("uniform doubles land in [0, 1)") {
  RngStream r(7);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.next_double();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("poisson sampler: moments at small and large means") {
  for (double mean : {0.5, 3.0, 20.0, 900.0, 120000.0}) {
    RngStream r(static_cast<std::uint64_t>(mean * 1000) + 5);
    const int n = 20000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double k = static_cast<double>(r.poisson(mean));
      sum += k;
      sum2 += k * k;
    }
    const double m = sum / n;
    const double var = sum2 / n - m * m;
    // Sample mean within 6 standard errors, variance within 10%.
    CHECK(std::abs(m - mean) < 6.0 * std::sqrt(mean / n));
    CHECK(var == doctest::Approx(mean).epsilon(0.1));
  }
}

TEST_CASE("poisson edge cases") {
  RngStream r(1);
  CHECK(r.poisson(0.0) == 0);
  CHECK_THROWS_AS(r.poisson(-1.0), std::invalid_argument);
}
