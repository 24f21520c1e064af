// Copyright 2026 The rbmlogic Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cmath>

#include "rbmlogic/error.hpp"
#include "rbmlogic/rbm.hpp"
#include "support.hpp"

using namespace rbmlogic;
using testing::bits_of;

TEST_CASE("energy matches its definition") {
  Rng rng = make_rng(1);
  for (int k = 0; k < 50; ++k) {
    const Rbm m = testing::random_rbm(rng, 4, 3, 2.0);
    for (std::uint64_t xm = 0; xm < 16; ++xm)
      for (std::uint64_t hm = 0; hm < 8; ++hm) {
        const auto x = bits_of(xm, 4), h = bits_of(hm, 3);
        CHECK(energy(m, x, h) == doctest::Approx(testing::oracle_energy(m, x, h)).epsilon(1e-12));
      }
  }
}

TEST_CASE("energy rank equals the minimum over hidden states") {
  Rng rng = make_rng(2);
  for (int k = 0; k < 100; ++k) {
    const Rbm m = testing::random_rbm(rng, 5, 4, 3.0);
    for (std::uint64_t xm = 0; xm < 32; ++xm) {
      const auto x = bits_of(xm, 5);
      const double rank = energy_rank(m, x);
      CHECK(std::abs(rank - testing::oracle_energy_rank(m, x)) <= 1e-9);
      CHECK(std::abs(energy(m, x, best_hidden(m, x)) - rank) <= 1e-9);
    }
  }
}

TEST_CASE("free energy matches enumeration and approaches the rank as tau -> 0") {
  Rng rng = make_rng(3);
  for (int k = 0; k < 50; ++k) {
    Rbm m = testing::random_rbm(rng, 4, 5, 2.0);
    m.temperature = 0.3 + uniform01(rng) * 2.0;
    for (std::uint64_t xm = 0; xm < 16; ++xm) {
      const auto x = bits_of(xm, 4);
      CHECK(std::abs(free_energy(m, x) - testing::oracle_free_energy(m, x)) <= 1e-9);
    }
  }
  Rbm m = testing::random_rbm(rng, 3, 3, 2.0);
  m.temperature = 1e-4;
  for (std::uint64_t xm = 0; xm < 8; ++xm) {
    const auto x = bits_of(xm, 3);
    CHECK(std::abs(free_energy(m, x) - energy_rank(m, x)) <= 3 * 1e-4 * std::log(2.0) + 1e-9);
  }
}

TEST_CASE("conditionals are logistic of the net input over tau") {
  Rbm m(2, 1);
  m.w(0, 0) = 2.0;
  m.w(1, 0) = -1.0;
  m.hidden_bias[0] = 0.5;
  m.visible_bias = {0.25, -0.75};
  m.temperature = 2.0;
  const BitVector x{1, 1};
  CHECK(p_hidden_given_visible(m, x)[0] == doctest::Approx(1.0 / (1.0 + std::exp(-1.5 / 2.0))));
  const BitVector h{1};
  const auto pv = p_visible_given_hidden(m, h);
  CHECK(pv[0] == doctest::Approx(1.0 / (1.0 + std::exp(-2.25 / 2.0))));
  CHECK(pv[1] == doctest::Approx(1.0 / (1.0 + std::exp(1.75 / 2.0))));
  m.temperature = 0.0;
  CHECK_THROWS_AS(p_hidden_given_visible(m, x), Error);
}

TEST_CASE("stable logistic and softplus") {
  CHECK(logistic(0.0) == 0.5);
  CHECK(logistic(800.0) == 1.0);
  CHECK(logistic(-800.0) >= 0.0);
  CHECK(softplus(-800.0) >= 0.0);
  CHECK(softplus(800.0) == doctest::Approx(800.0));
  CHECK(softplus(0.0) == doctest::Approx(std::log(2.0)));
}

TEST_CASE("partition function: zero-weight network") {
  Rbm m(3, 2);
  CHECK(partition_brute(m) == doctest::Approx(32.0));
  Rbm big(20, 6);
  CHECK_THROWS_AS(partition_brute(big), Error);
}

TEST_CASE("partition function is the sum of exp(-F/tau) over visible states") {
  Rng rng = make_rng(4);
  Rbm m = testing::random_rbm(rng, 4, 3, 1.0);
  m.temperature = 1.5;
  double z = 0.0;
  for (std::uint64_t xm = 0; xm < 16; ++xm) z += std::exp(-free_energy(m, bits_of(xm, 4)) / m.temperature);
  CHECK(partition_brute(m) == doctest::Approx(z).epsilon(1e-10));
}

TEST_CASE("gibbs step respects clamps and tau = 0 is deterministic") {
  Rng rng = make_rng(5);
  const Rbm m = testing::random_rbm(rng, 6, 4, 2.0);
  Assignment clamp(6);
  clamp.set(1, true);
  clamp.set(4, false);
  BitVector x{0, 1, 0, 1, 0, 1};
  for (int k = 0; k < 200; ++k) {
    x = gibbs_step(m, clamp, x, rng, 1.0);
    CHECK(x[1] == 1);
    CHECK(x[4] == 0);
  }
  Rng a = make_rng(9), b = make_rng(10);
  CHECK(gibbs_step(m, clamp, x, a, 0.0) == gibbs_step(m, clamp, x, b, 0.0));
  BitVector bad{0, 0, 0, 0, 0, 0};
  CHECK_THROWS_AS(gibbs_step(m, clamp, bad, rng, 1.0), Error);
  CHECK_THROWS_AS(gibbs_step(m, clamp, x, rng, -1.0), Error);
}

TEST_CASE("deterministic step ties switch units off") {
  Rbm m(1, 1);  // every net input is exactly zero
  Assignment clamp(1);
  Rng rng = make_rng(0);
  const BitVector one{1};
  CHECK(gibbs_step(m, clamp, one, rng, 0.0) == BitVector{0});
}

TEST_CASE("Gibbs sampling at tau = 1 matches the exact marginal of a tiny network") {
  Rbm m(2, 2);
  m.w(0, 0) = 1.5;
  m.w(1, 1) = -1.0;
  m.w(0, 1) = 0.5;
  m.visible_bias = {-0.5, 0.3};
  m.hidden_bias = {0.2, -0.4};
  double z = 0.0, p11 = 0.0;
  for (std::uint64_t xm = 0; xm < 4; ++xm) {
    const double w = std::exp(-free_energy(m, bits_of(xm, 2)));
    z += w;
    if (xm == 3) p11 = w;
  }
  p11 /= z;
  Rng rng = make_rng(77);
  Assignment clamp(2);
  BitVector x{0, 0};
  std::size_t hits = 0;
  const std::size_t n = 200000;
  for (std::size_t k = 0; k < 1000; ++k) x = gibbs_step(m, clamp, x, rng);
  for (std::size_t k = 0; k < n; ++k) {
    x = gibbs_step(m, clamp, x, rng);
    hits += x[0] && x[1];
  }
  CHECK(static_cast<double>(hits) / n == doctest::Approx(p11).epsilon(0.03));
}

TEST_CASE("random streams are reproducible and distinct") {
  Rng a = make_rng(42, 3), b = make_rng(42, 3), c = make_rng(42, 4);
  const auto x = a(), y = b(), z = c();
  CHECK(x == y);
  CHECK(x != z);
  Rng r = make_rng(1);
  for (int k = 0; k < 1000; ++k) {
    const double u = uniform01(r);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("add_hidden and validate") {
  Rbm m(2, 0);
  const std::vector<double> col{1.0, -2.0};
  m.add_hidden(col, 0.5);
  m.add_hidden(col, -0.5);
  CHECK(m.n_hidden == 2);
  CHECK(m.w(1, 0) == -2.0);
  CHECK(m.w(1, 1) == -2.0);
  CHECK(m.hidden_bias == std::vector<double>{0.5, -0.5});
  CHECK_NOTHROW(m.validate());
  m.weights[0] = std::nan("");
  CHECK_THROWS_AS(m.validate(), Error);
  const std::vector<double> short_col{1.0};
  CHECK_THROWS_AS(Rbm(2, 0).add_hidden(short_col, 0.0), Error);
}
