/*******************************************************************************
 * Copyright 2026 the nnfir authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *******************************************************************************/

#include <doctest.h>

#include <cmath>

#include "nnfir/linop.hpp"
#include "nnfir/rng.hpp"
#include "nnfir/synth.hpp"

using nnfir::ImpulseResponse;
using nnfir::InputLaw;
using nnfir::NoiseModel;
using nnfir::SignalMatrix;

TEST_CASE("gen_inputs respects the law bounds and the stream") {
  InputLaw law;  // [0.1, 10]
  nnfir::RngStream s1 = nnfir::RngStream::derive(99, 0, 0, 0);
  nnfir::RngStream s2 = nnfir::RngStream::derive(99, 0, 0, 0);
  const SignalMatrix a = nnfir::gen_inputs(12, 4, law, s1);
  const SignalMatrix b = nnfir::gen_inputs(12, 4, law, s2);
  CHECK(a == b);
  for (std::size_t j = 0; j < 4; ++j)
    for (std::size_t i = 0; i < 13; ++i) {
      CHECK(a(i, j) >= 0.1);
      CHECK(a(i, j) <= 10.0);
    }

  nnfir::RngStream s3 = nnfir::RngStream::derive(99, 0, 1, 0);
  CHECK_FALSE(a == nnfir::gen_inputs(12, 4, law, s3));

  InputLaw bad{1.0, 1.0};
  CHECK_THROWS_AS(nnfir::gen_inputs(3, 1, bad, s1), std::invalid_argument);

  // near-degenerate width is allowed and nearly constant
  InputLaw narrow{1.0, 1.0 + 1e-12};
  const SignalMatrix c = nnfir::gen_inputs(3, 2, narrow, s1);
  for (std::size_t j = 0; j < 2; ++j)
    for (std::size_t i = 0; i < 4; ++i)
      CHECK(c(i, j) == doctest::Approx(1.0).epsilon(1e-11));
}

TEST_CASE("sigma = 0 reproduces the noiseless outputs exactly") {
  nnfir::RngStream su = nnfir::RngStream::derive(5, 0, 0, 0);
  nnfir::RngStream sd = nnfir::RngStream::derive(5, 0, 0, 1);
  const SignalMatrix u = nnfir::gen_inputs(9, 3, InputLaw{}, su);
  const ImpulseResponse h({0.4, 1.3, 0.2});
  const SignalMatrix y =
      nnfir::gen_noisy_outputs(h, u, NoiseModel{0.0}, sd);
  CHECK(y == nnfir::convolve(h, u));
}

TEST_CASE("the noise law is the mean-corrected lognormal") {
  // delta = exp(sigma Z - sigma^2/2); at sigma = 0.1 this is exp(Z/10 - 1/200)
  nnfir::RngStream sd = nnfir::RngStream::derive(123, 0, 0, 1);
  nnfir::RngStream z_stream = nnfir::RngStream::derive(123, 0, 0, 1);
  const SignalMatrix u(3, 1, 1.0);
  const ImpulseResponse h({1.0});
  const SignalMatrix y = nnfir::gen_noisy_outputs(h, u, NoiseModel{0.1}, sd);
  for (std::size_t i = 0; i < 3; ++i) {
    const double z = z_stream.next_normal();
    const double expected = std::exp(z / 10.0 - 1.0 / 200.0);
    CHECK(y(i, 0) == doctest::Approx(expected).epsilon(1e-15));
  }
}

TEST_CASE("noise factors have unit mean") {
  nnfir::RngStream sd = nnfir::RngStream::derive(321, 0, 0, 1);
  for (double sigma : {0.1, 0.5}) {
    nnfir::NoiseTally tally;
    const SignalMatrix u(100, 100, 1.0);  // 10^4 draws per batch
    const ImpulseResponse h({1.0});
    for (int batch = 0; batch < 100; ++batch)
      nnfir::gen_noisy_outputs(h, u, NoiseModel{sigma}, sd, &tally);
    CHECK(tally.count == 1000000);
    const double tol =
        sigma == 0.1 ? 0.001 : 3.0 * tally.stderr_of_mean();
    CHECK(std::abs(tally.mean() - 1.0) <= tol);
  }
}
