#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "dmem/midas.hpp"
#include "support/oracles.hpp"

using namespace dmem;

TEST_CASE("flat beta weights are exactly uniform") {
  const auto w = beta_lag_weights({4, 1.0, 1.0});
  REQUIRE(w.size() == 4);
  for (const double v : w) CHECK(v == 0.25);
}

TEST_CASE("linear decay cases by hand") {
  // K=2, omega2=2: raw weights (1/2, 0) normalize to (1, 0)
  const auto w2 = beta_lag_weights({2, 1.0, 2.0});
  REQUIRE(w2.size() == 2);
  CHECK(w2[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(w2[1] == doctest::Approx(0.0).epsilon(1e-15));

  // K=3, omega2=2: raw (2/3, 1/3, 0)
  const auto w3 = beta_lag_weights({3, 1.0, 2.0});
  REQUIRE(w3.size() == 3);
  CHECK(w3[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(w3[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(w3[2] == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("single lag gets full weight regardless of shape") {
  CHECK(beta_lag_weights({1, 1.0, 1.0}) == std::vector<double>{1.0});
  CHECK(beta_lag_weights({1, 1.0, 7.5}) == std::vector<double>{1.0});
}

TEST_CASE("weighted sum contracts") {
  const double s = beta_weighted_sum(BetaLag{2, 1.0, 2.0}, {3.0, 0.0});
  CHECK(s == doctest::Approx(3.0).epsilon(1e-14));

  CHECK_THROWS(static_cast<void>(beta_weighted_sum(BetaLag{2, 1.0, 2.0}, {1.0, 2.0, 3.0})));
  CHECK_THROWS(static_cast<void>(beta_weighted_sum(std::vector<double>{0.5}, {1.0, 2.0})));

  // all lags equal c: any weight profile returns c
  const std::vector<double> lags(12, 2.5);
  CHECK(beta_weighted_sum(BetaLag{12, 1.0, 5.0}, lags) == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("invalid specs are rejected") {
  CHECK_THROWS(static_cast<void>(beta_lag_weights({0, 1.0, 1.0})));
  CHECK_THROWS(static_cast<void>(beta_lag_weights({-3, 1.0, 1.0})));
  CHECK_THROWS(static_cast<void>(beta_lag_weights({4, 0.5, 1.0})));
  CHECK_THROWS(static_cast<void>(beta_lag_weights({4, 1.0, 0.0})));
  CHECK_THROWS(static_cast<void>(beta_lag_weights({4, 1.0, std::nan("")})));
}

TEST_CASE("weights sum to one and stay nonnegative over random specs") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> kd(1, 200);
  std::uniform_real_distribution<double> wd(1.0, 40.0);
  for (int trial = 0; trial < 300; ++trial) {
    const BetaLag spec{kd(rng), 1.0, wd(rng)};
    const auto w = beta_lag_weights(spec);
    REQUIRE(static_cast<int>(w.size()) == spec.K);
    double sum = 0.0;
    for (const double v : w) {
      CHECK(v >= 0.0);
      sum += v;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("decaying shapes weight recent lags at least as much as older ones") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> kd(2, 100);
  std::uniform_real_distribution<double> wd(1.0, 25.0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto w = beta_lag_weights({kd(rng), 1.0, 1.0 + wd(rng)});
    for (std::size_t k = 1; k < w.size(); ++k) CHECK(w[k] <= w[k - 1] + 1e-15);
  }
}

TEST_CASE("weights match the raw-definition reference") {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> kd(2, 60);
  std::uniform_real_distribution<double> wd(1.0, 12.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int K = kd(rng);
    const double w1 = 1.0 + wd(rng) / 6.0;
    const double w2 = wd(rng);
    const auto lib = beta_lag_weights({K, w1, w2});
    const auto ref = oracle::beta_weights(K, w1, w2);
    REQUIRE(lib.size() == ref.size());
    for (std::size_t k = 0; k < lib.size(); ++k)
      CHECK(lib[k] == doctest::Approx(ref[k]).epsilon(1e-10));
  }
}

TEST_CASE("large lag counts and sharp shapes stay numerically stable") {
  const auto w = beta_lag_weights({500, 1.0, 80.0});
  double sum = 0.0;
  for (const double v : w) {
    REQUIRE(std::isfinite(v));
    sum += v;
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
  // mass concentrates on the most recent lag as omega2 grows
  CHECK(beta_lag_weights({12, 1.0, 300.0})[0] > 0.99);
}
