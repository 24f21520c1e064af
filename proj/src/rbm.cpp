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

#include "rbmlogic/rbm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rbmlogic/error.hpp"

namespace rbmlogic {

Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

double logistic(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double softplus(double z) {
  if (z > 0) return z + std::log1p(std::exp(-z));
  return std::log1p(std::exp(z));
}

Rbm::Rbm(std::size_t nv, std::size_t nh)
    : n_visible(nv),
      n_hidden(nh),
      weights(nv * nh, 0.0),
      visible_bias(nv, 0.0),
      hidden_bias(nh, 0.0) {}

std::size_t Rbm::add_hidden(std::span<const double> column, double bias) {
  if (column.size() != n_visible)
    fail(ErrorKind::invalid_argument, "hidden column length does not match visible count");
  std::vector<double> grown(n_visible * (n_hidden + 1));
  for (std::size_t i = 0; i < n_visible; ++i) {
    std::copy_n(weights.begin() + static_cast<std::ptrdiff_t>(i * n_hidden), n_hidden,
                grown.begin() + static_cast<std::ptrdiff_t>(i * (n_hidden + 1)));
    grown[i * (n_hidden + 1) + n_hidden] = column[i];
  }
  weights = std::move(grown);
  hidden_bias.push_back(bias);
  return n_hidden++;
}

void Rbm::validate() const {
  if (weights.size() != n_visible * n_hidden || visible_bias.size() != n_visible ||
      hidden_bias.size() != n_hidden)
    fail(ErrorKind::invalid_argument, "RBM parameter sizes are inconsistent");
  auto finite = [](double v) { return std::isfinite(v); };
  if (!std::all_of(weights.begin(), weights.end(), finite) ||
      !std::all_of(visible_bias.begin(), visible_bias.end(), finite) ||
      !std::all_of(hidden_bias.begin(), hidden_bias.end(), finite) || !std::isfinite(offset))
    fail(ErrorKind::invalid_argument, "RBM parameters must be finite");
  if (!std::isfinite(temperature) || temperature < 0)
    fail(ErrorKind::invalid_argument, "temperature must be finite and non-negative");
}

namespace {

void check_visible(const Rbm& m, std::size_t n) {
  if (n != m.n_visible)
    fail(ErrorKind::invalid_argument, "visible vector has length " + std::to_string(n) +
                                          ", expected " + std::to_string(m.n_visible));
}

void check_hidden(const Rbm& m, std::size_t n) {
  if (n != m.n_hidden)
    fail(ErrorKind::invalid_argument, "hidden vector has length " + std::to_string(n) +
                                          ", expected " + std::to_string(m.n_hidden));
}

template <typename T>
std::vector<double> hidden_net_impl(const Rbm& m, std::span<const T> x) {
  check_visible(m, x.size());
  std::vector<double> net(m.hidden_bias);
  for (std::size_t i = 0; i < m.n_visible; ++i) {
    const double xi = static_cast<double>(x[i]);
    if (xi == 0.0) continue;
    const double* row = m.weights.data() + i * m.n_hidden;
    for (std::size_t j = 0; j < m.n_hidden; ++j) net[j] += row[j] * xi;
  }
  return net;
}

template <typename T>
std::vector<double> visible_net_impl(const Rbm& m, std::span<const T> h) {
  check_hidden(m, h.size());
  std::vector<double> net(m.visible_bias);
  for (std::size_t i = 0; i < m.n_visible; ++i) {
    const double* row = m.weights.data() + i * m.n_hidden;
    double s = 0.0;
    for (std::size_t j = 0; j < m.n_hidden; ++j) s += row[j] * static_cast<double>(h[j]);
    net[i] += s;
  }
  return net;
}

double visible_linear(const Rbm& m, std::span<const std::uint8_t> x) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.n_visible; ++i)
    if (x[i]) s += m.visible_bias[i];
  return s;
}

void require_positive_temperature(double tau) {
  if (!(tau > 0)) fail(ErrorKind::precondition, "sampling requires temperature > 0");
}

}  // namespace

std::vector<double> hidden_net(const Rbm& m, std::span<const double> x) {
  return hidden_net_impl(m, x);
}
std::vector<double> hidden_net(const Rbm& m, std::span<const std::uint8_t> x) {
  return hidden_net_impl(m, x);
}
std::vector<double> visible_net(const Rbm& m, std::span<const double> h) {
  return visible_net_impl(m, h);
}
std::vector<double> visible_net(const Rbm& m, std::span<const std::uint8_t> h) {
  return visible_net_impl(m, h);
}

double energy(const Rbm& m, std::span<const std::uint8_t> x, std::span<const std::uint8_t> h) {
  check_hidden(m, h.size());
  const auto net = hidden_net(m, x);
  double e = m.offset - visible_linear(m, x);
  for (std::size_t j = 0; j < m.n_hidden; ++j)
    if (h[j]) e -= net[j];
  return e;
}

double energy_rank(const Rbm& m, std::span<const std::uint8_t> x) {
  const auto net = hidden_net(m, x);
  double e = m.offset - visible_linear(m, x);
  for (double n : net) e -= std::max(0.0, n);
  return e;
}

std::vector<double> p_hidden_given_visible(const Rbm& m, std::span<const std::uint8_t> x) {
  require_positive_temperature(m.temperature);
  auto net = hidden_net(m, x);
  for (double& n : net) n = logistic(n / m.temperature);
  return net;
}

std::vector<double> p_visible_given_hidden(const Rbm& m, std::span<const std::uint8_t> h) {
  require_positive_temperature(m.temperature);
  auto net = visible_net(m, h);
  for (double& n : net) n = logistic(n / m.temperature);
  return net;
}

double free_energy(const Rbm& m, std::span<const std::uint8_t> x) {
  require_positive_temperature(m.temperature);
  const double tau = m.temperature;
  const auto net = hidden_net(m, x);
  double f = m.offset - visible_linear(m, x);
  for (double n : net) f -= tau * softplus(n / tau);
  return f;
}

double partition_brute(const Rbm& m) {
  if (m.n_visible + m.n_hidden > kPartitionLimit)
    fail(ErrorKind::limit_exceeded, "partition function enumeration is limited to " +
                                        std::to_string(kPartitionLimit) + " units");
  require_positive_temperature(m.temperature);
  BitVector x(m.n_visible), h(m.n_hidden);
  double z = 0.0;
  const std::uint64_t nx = std::uint64_t{1} << m.n_visible;
  const std::uint64_t nh = std::uint64_t{1} << m.n_hidden;
  for (std::uint64_t xm = 0; xm < nx; ++xm) {
    for (std::size_t i = 0; i < m.n_visible; ++i) x[i] = (xm >> i) & 1U;
    for (std::uint64_t hm = 0; hm < nh; ++hm) {
      for (std::size_t j = 0; j < m.n_hidden; ++j) h[j] = (hm >> j) & 1U;
      z += std::exp(-energy(m, x, h) / m.temperature);
    }
  }
  return z;
}

BitVector best_hidden(const Rbm& m, std::span<const std::uint8_t> x) {
  const auto net = hidden_net(m, x);
  BitVector h(m.n_hidden);
  for (std::size_t j = 0; j < m.n_hidden; ++j) h[j] = net[j] > 0 ? 1 : 0;
  return h;
}

BitVector gibbs_step(const Rbm& m, const Assignment& clamp, std::span<const std::uint8_t> state,
                     Rng& rng, double tau) {
  check_visible(m, state.size());
  if (clamp.size() != m.n_visible)
    fail(ErrorKind::invalid_argument, "clamp assignment does not cover the visible layer");
  for (std::size_t i = 0; i < m.n_visible; ++i)
    if (clamp.assigned(i) && clamp.value(i) != (state[i] != 0))
      fail(ErrorKind::precondition, "state disagrees with clamped visible " + std::to_string(i));
  if (tau < 0 || !std::isfinite(tau)) fail(ErrorKind::precondition, "tau must be >= 0");

  const bool deterministic = tau == 0.0;
  auto fire = [&](double net) {
    if (deterministic) return net > 0 ? std::uint8_t{1} : std::uint8_t{0};
    return uniform01(rng) < logistic(net / tau) ? std::uint8_t{1} : std::uint8_t{0};
  };

  const auto hnet = hidden_net(m, state);
  BitVector h(m.n_hidden);
  for (std::size_t j = 0; j < m.n_hidden; ++j) h[j] = fire(hnet[j]);

  const auto vnet = visible_net(m, h);
  BitVector next(state.begin(), state.end());
  for (std::size_t i = 0; i < m.n_visible; ++i)
    if (!clamp.assigned(i)) next[i] = fire(vnet[i]);
  return next;
}

}  // namespace rbmlogic
