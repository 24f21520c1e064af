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

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "rbmlogic/formula.hpp"

namespace rbmlogic {

using BitVector = std::vector<std::uint8_t>;
using Rng = std::mt19937_64;

/// Generator for stream `stream` of a run seeded with `seed`. Distinct
/// streams are independent, so parallel chains can each own one.
Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0);
/// Uniform double in [0, 1) built from the top 53 bits; identical across
/// standard library implementations.
double uniform01(Rng& rng);
double uniform(Rng& rng, double lo, double hi);

double logistic(double z);
/// log(1 + exp(z)) without overflow.
double softplus(double z);

/// Restricted Boltzmann machine with energy
///   E(x, h) = -sum_ij w_ij x_i h_j - sum_i a_i x_i - sum_j b_j h_j + offset
/// and Gibbs distribution p(x, h) ~ exp(-E / temperature).
struct Rbm {
  Rbm() = default;
  Rbm(std::size_t n_visible, std::size_t n_hidden);

  std::size_t n_visible = 0;
  std::size_t n_hidden = 0;
  std::vector<double> weights;       // row-major, n_visible x n_hidden
  std::vector<double> visible_bias;  // a
  std::vector<double> hidden_bias;   // b
  double offset = 0.0;               // constant energy term
  double temperature = 1.0;

  double& w(std::size_t i, std::size_t j) { return weights[i * n_hidden + j]; }
  double w(std::size_t i, std::size_t j) const { return weights[i * n_hidden + j]; }

  /// Appends a hidden unit; `column` has one entry per visible unit.
  std::size_t add_hidden(std::span<const double> column, double bias);
  /// Throws on inconsistent sizes or non-finite parameters.
  void validate() const;

  bool operator==(const Rbm&) const = default;
};

double energy(const Rbm& m, std::span<const std::uint8_t> x, std::span<const std::uint8_t> h);

/// sum_i w_ij x_i + b_j for every hidden unit.
std::vector<double> hidden_net(const Rbm& m, std::span<const double> x);
std::vector<double> hidden_net(const Rbm& m, std::span<const std::uint8_t> x);
/// sum_j w_ij h_j + a_i for every visible unit.
std::vector<double> visible_net(const Rbm& m, std::span<const double> h);
std::vector<double> visible_net(const Rbm& m, std::span<const std::uint8_t> h);

/// min_h E(x, h) = offset - a.x - sum_j max(0, net_j(x)).
double energy_rank(const Rbm& m, std::span<const std::uint8_t> x);

/// Componentwise logistic(net / temperature). Throws if temperature <= 0.
std::vector<double> p_hidden_given_visible(const Rbm& m, std::span<const std::uint8_t> x);
std::vector<double> p_visible_given_hidden(const Rbm& m, std::span<const std::uint8_t> h);

/// -T log sum_h exp(-E(x,h)/T) = offset - a.x - T sum_j softplus(net_j / T).
double free_energy(const Rbm& m, std::span<const std::uint8_t> x);

constexpr std::size_t kPartitionLimit = 24;
/// Exact partition function by enumeration of all (x, h).
double partition_brute(const Rbm& m);

/// Samples h ~ p(h|x), then resamples the unclamped visibles from p(x|h).
/// With tau == 0 both half-steps are deterministic: a unit switches on iff its
/// net input is strictly positive.
BitVector gibbs_step(const Rbm& m, const Assignment& clamp, std::span<const std::uint8_t> state,
                     Rng& rng, double tau);
inline BitVector gibbs_step(const Rbm& m, const Assignment& clamp,
                            std::span<const std::uint8_t> state, Rng& rng) {
  return gibbs_step(m, clamp, state, rng, m.temperature);
}

/// Deterministic hidden configuration minimising E(x, .).
BitVector best_hidden(const Rbm& m, std::span<const std::uint8_t> x);

}  // namespace rbmlogic
