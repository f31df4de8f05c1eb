// Copyright 2026 The mnn-assoc Authors
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

#include "mnn/network.hpp"

#include <cmath>

#include "doctest.h"
#include "mnn/error.hpp"
#include "mnn/rng.hpp"
#include "test_util.hpp"

using namespace mnn;
using mnn_test::random_unit_vector;

namespace {

// Straight-line forward pass, written independently of the kernel path.
Vector naive_forward(const Network& net, const Vector& input) {
  Vector a = input;
  for (std::size_t l = 0; l + 1 < net.num_layers(); ++l) {
    const Matrix& w = net.weights[l];
    Vector z(w.rows, 0.0);
    for (std::size_t r = 0; r < w.rows; ++r) {
      double s = net.biases[l][r];
      for (std::size_t c = 0; c < w.cols; ++c) s += w(r, c) * a[c];
      z[r] = net.activations[l] == Activation::kTanh ? std::tanh(s) : s;
    }
    a = std::move(z);
  }
  return a;
}

Network zero_network(const std::vector<std::size_t>& sizes, Activation act) {
  Network net = init_network(sizes, act, 0);
  for (Matrix& w : net.weights) std::fill(w.data.begin(), w.data.end(), 0.0);
  return net;
}

}  // namespace

TEST_SUITE_BEGIN("network");

TEST_CASE("init_network draws bounded weights and zero biases") {
  const Network net = init_network({510, 20, 510}, Activation::kTanh, 7);
  REQUIRE(net.weights.size() == 2);
  CHECK(net.weights[0].rows == 20);
  CHECK(net.weights[0].cols == 510);
  CHECK(net.weights[1].rows == 510);
  CHECK(net.weights[1].cols == 20);

  const double bound0 = 1.0 / std::sqrt(510.0);
  for (double w : net.weights[0].data) {
    CHECK(std::abs(w) <= bound0);
  }
  const double bound1 = 1.0 / std::sqrt(20.0);
  for (double w : net.weights[1].data) {
    CHECK(std::abs(w) <= bound1);
  }
  for (const Vector& b : net.biases) {
    for (double v : b) CHECK(v == 0.0);
  }
}

TEST_CASE("init_network: 1-1 net weight bound is the fan-in bound") {
  const Network net = init_network({1, 1}, Activation::kTanh, 99);
  CHECK(std::abs(net.weights[0](0, 0)) <= 1.0);
  CHECK(net.biases[0][0] == 0.0);
}

TEST_CASE("init_network is deterministic") {
  const Network a = init_network({2, 3, 2}, Activation::kTanh, 42);
  const Network b = init_network({2, 3, 2}, Activation::kTanh, 42);
  CHECK(a == b);
  const Network c = init_network({2, 3, 2}, Activation::kTanh, 43);
  CHECK(a.weights[0].data != c.weights[0].data);
}

TEST_CASE("init_network rejects bad architectures") {
  CHECK_THROWS_AS(init_network({}, Activation::kTanh, 0), InvalidArgument);
  CHECK_THROWS_AS(init_network({5}, Activation::kTanh, 0), InvalidArgument);
  CHECK_THROWS_AS(init_network({5, 0, 5}, Activation::kTanh, 0),
                  InvalidArgument);
}

TEST_CASE("forward: zero net maps anything to zero under tanh") {
  const Network net = zero_network({4, 3, 4}, Activation::kTanh);
  Rng rng(1);
  const auto acts = forward(net, random_unit_vector(rng, 4));
  REQUIRE(acts.size() == 3);
  for (double v : acts.back()) CHECK(v == 0.0);
}

TEST_CASE("forward: scalar linear net computes w*x") {
  Network net = zero_network({1, 1}, Activation::kLinear);
  net.weights[0](0, 0) = 0.5;
  const auto acts = forward(net, {2.0});
  CHECK(acts.back()[0] == doctest::Approx(1.0));
}

TEST_CASE("forward matches an independent reimplementation") {
  const Network net = init_network({5, 3, 5}, Activation::kTanh, 11);
  const Vector input(5, 1.0);
  const auto acts = forward(net, input);
  const Vector expected = naive_forward(net, input);
  REQUIRE(acts.back().size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK(acts.back()[i] == doctest::Approx(expected[i]).epsilon(1e-12));
  }
}

TEST_CASE("forward rejects dimension mismatches") {
  const Network net = init_network({5, 3, 5}, Activation::kTanh, 0);
  CHECK_THROWS_AS(forward(net, Vector(4, 0.0)), ShapeError);
}

TEST_CASE("forward never produces off-shape activations") {
  Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::size_t> sizes;
    const std::size_t layers = 2 + rng.uniform_below(3);
    for (std::size_t i = 0; i < layers; ++i) {
      sizes.push_back(1 + rng.uniform_below(6));
    }
    const Network net = init_network(sizes, Activation::kTanh, rng.next_u64());
    const auto acts = forward(net, random_unit_vector(rng, sizes.front()));
    REQUIRE(acts.size() == sizes.size());
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      CHECK(acts[i].size() == sizes[i]);
    }
  }
}

TEST_CASE("backprop: zero loss and zero gradients at the optimum") {
  const Network net = init_network({3, 2, 3}, Activation::kTanh, 5);
  const Vector input = {0.1, -0.2, 0.3};
  const Vector target = forward(net, input).back();
  const BackpropResult res = backprop(net, input, target);
  CHECK(res.loss == 0.0);
  for (const Matrix& g : res.grads.weight_grads) {
    for (double v : g.data) CHECK(v == 0.0);
  }
  for (const Vector& g : res.grads.bias_grads) {
    for (double v : g) CHECK(v == 0.0);
  }
}

TEST_CASE("backprop: hand-differentiated scalar case") {
  Network net = zero_network({1, 1}, Activation::kLinear);
  net.weights[0](0, 0) = 1.0;
  const BackpropResult res = backprop(net, {1.0}, {0.0});
  CHECK(res.loss == doctest::Approx(1.0));
  CHECK(res.grads.weight_grads[0](0, 0) == doctest::Approx(2.0));
  CHECK(res.grads.bias_grads[0][0] == doctest::Approx(2.0));
}

TEST_CASE("backprop rejects bad shapes and non-finite input") {
  const Network net = init_network({3, 2, 3}, Activation::kTanh, 0);
  CHECK_THROWS_AS(backprop(net, Vector(2, 0.0), Vector(3, 0.0)), ShapeError);
  CHECK_THROWS_AS(backprop(net, Vector(3, 0.0), Vector(2, 0.0)), ShapeError);
  Vector bad(3, 0.0);
  bad[1] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(backprop(net, bad, Vector(3, 0.0)), DomainError);
}

TEST_CASE("check_gradients: zero net on zero input is exactly zero") {
  const Network net = zero_network({3, 2, 3}, Activation::kTanh);
  const Vector zero(3, 0.0);
  // Output stays 0 regardless of first-layer weights (tanh(0) chained), and
  // the target already matches, so analytic == numeric == 0 except for the
  // output layer, where both sides are 0 too.
  CHECK(check_gradients(net, zero, zero, 1e-5) == 0.0);
}

TEST_CASE("check_gradients: random 5-3-5 and 20-20-20 tanh nets") {
  Rng rng(17);
  const Network small = init_network({5, 3, 5}, Activation::kTanh, 23);
  CHECK(check_gradients(small, random_unit_vector(rng, 5),
                        random_unit_vector(rng, 5), 1e-5) < 1e-4);

  const Network mapper = init_network({20, 20, 20}, Activation::kTanh, 29);
  CHECK(check_gradients(mapper, random_unit_vector(rng, 20),
                        random_unit_vector(rng, 20), 1e-5) < 1e-4);
}

TEST_CASE("gradient exactness property: random small nets") {
  Rng rng(31);
  for (int trial = 0; trial < 12; ++trial) {
    // <= 100 parameters.
    const std::size_t in = 1 + rng.uniform_below(5);
    const std::size_t mid = 1 + rng.uniform_below(5);
    const std::size_t out = 1 + rng.uniform_below(5);
    const Network net =
        init_network({in, mid, out}, Activation::kTanh, rng.next_u64());
    const double rel = check_gradients(net, random_unit_vector(rng, in),
                                       random_unit_vector(rng, out), 1e-5);
    CAPTURE(in);
    CAPTURE(mid);
    CAPTURE(out);
    CHECK(rel < 1e-4);
  }
}

TEST_CASE("sgd_step: zero gradients leave the network unchanged") {
  Network net = init_network({3, 2, 3}, Activation::kTanh, 3);
  const Network before = net;
  Gradients zero = Gradients::zeros_like(net);
  Gradients velocity = Gradients::zeros_like(net);
  sgd_step(net, zero, TrainConfig(0.1, 1), velocity);
  CHECK(net == before);
}

TEST_CASE("sgd_step: plain and momentum arithmetic") {
  Network net = zero_network({1, 1}, Activation::kLinear);
  net.weights[0](0, 0) = 1.0;
  Gradients g = Gradients::zeros_like(net);
  g.weight_grads[0](0, 0) = 2.0;
  Gradients velocity = Gradients::zeros_like(net);
  sgd_step(net, g, TrainConfig(0.1, 1, 0, 0.0), velocity);
  CHECK(net.weights[0](0, 0) == doctest::Approx(0.8));

  // Two momentum steps with constant unit gradient from zero.
  Network net2 = zero_network({1, 1}, Activation::kLinear);
  Gradients g2 = Gradients::zeros_like(net2);
  g2.weight_grads[0](0, 0) = 1.0;
  Gradients v2 = Gradients::zeros_like(net2);
  const TrainConfig cfg(0.1, 1, 0, 0.5);
  sgd_step(net2, g2, cfg, v2);
  CHECK(net2.weights[0](0, 0) == doctest::Approx(-0.1));
  sgd_step(net2, g2, cfg, v2);
  CHECK(net2.weights[0](0, 0) == doctest::Approx(-0.25));
}

TEST_CASE("one small-lr step never increases single-sample loss") {
  Rng rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    Network net = init_network({4, 3, 4}, Activation::kTanh, rng.next_u64());
    const Vector input = random_unit_vector(rng, 4);
    const Vector target = random_unit_vector(rng, 4);
    const BackpropResult before = backprop(net, input, target);
    Gradients velocity = Gradients::zeros_like(net);
    sgd_step(net, before.grads, TrainConfig(1e-3, 1, 0, 0.0), velocity);
    const BackpropResult after = backprop(net, input, target);
    CHECK(after.loss <= before.loss);
  }
}

TEST_CASE("TrainConfig validation") {
  CHECK_THROWS_AS(TrainConfig(0.1, 0), InvalidArgument);
  CHECK_THROWS_AS(TrainConfig(0.0, 10), InvalidArgument);
  CHECK_THROWS_AS(TrainConfig(-0.1, 10), InvalidArgument);
  CHECK_THROWS_AS(TrainConfig(0.1, 10, 0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(TrainConfig(0.1, 10, 0, 0.9, 0), InvalidArgument);
  CHECK_NOTHROW(TrainConfig(0.1, 10, 0, 0.0));
}

TEST_CASE("train_epochs: validation, fixed point, determinism") {
  Network net = init_network({3, 2, 3}, Activation::kTanh, 1);

  SUBCASE("empty dataset") {
    CHECK_THROWS_AS(train_epochs(net, {}, {}, TrainConfig(0.1, 1)),
                    InsufficientData);
  }
  SUBCASE("length mismatch") {
    CHECK_THROWS_AS(train_epochs(net, {Vector(3, 0.0)}, {}, TrainConfig(0.1, 1)),
                    ShapeError);
  }
  SUBCASE("already-fitted sample leaves the net unchanged") {
    const Vector input = {0.2, -0.1, 0.4};
    const Vector target = forward(net, input).back();
    const Network before = net;
    const auto history = train_epochs(net, {input}, {target},
                                      TrainConfig(0.1, 5));
    REQUIRE(history.size() == 5);
    for (double l : history) CHECK(l == 0.0);
    CHECK(net == before);
  }
  SUBCASE("bit-identical retrains") {
    Rng rng(55);
    std::vector<Vector> inputs, targets;
    for (int i = 0; i < 8; ++i) {
      inputs.push_back(random_unit_vector(rng, 3));
      targets.push_back(random_unit_vector(rng, 3));
    }
    Network a = init_network({3, 2, 3}, Activation::kTanh, 9);
    Network b = init_network({3, 2, 3}, Activation::kTanh, 9);
    const auto ha = train_epochs(a, inputs, targets, TrainConfig(0.05, 20, 77));
    const auto hb = train_epochs(b, inputs, targets, TrainConfig(0.05, 20, 77));
    CHECK(a == b);
    CHECK(ha == hb);
  }
  SUBCASE("history length equals epochs and the callback fires") {
    Rng rng(56);
    std::vector<Vector> inputs = {random_unit_vector(rng, 3)};
    std::vector<std::size_t> seen;
    const auto history = train_epochs(
        net, inputs, inputs, TrainConfig(0.05, 10, 0, 0.9, 4),
        [&seen](std::size_t epoch, double) { seen.push_back(epoch); });
    CHECK(history.size() == 10);
    CHECK(seen == std::vector<std::size_t>{3, 7, 9});
  }
}

TEST_SUITE_END();
