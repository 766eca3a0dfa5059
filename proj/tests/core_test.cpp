// Copyright 2026 The localpriv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cmath>
#include <random>

#include "localpriv/core.hpp"
#include "testutil.hpp"

namespace localpriv {
namespace {

Channel channel2(double a, double b, double c, double d) {
  Channel ch;
  ch.input = Alphabet::indexed("x", 2);
  ch.output = Alphabet::indexed("y", 2);
  ch.matrix.resize(2, 2);
  ch.matrix << a, b, c, d;
  return ch;
}

TEST_CASE("validate_channel accepts the identity matrix") {
  CHECK_NOTHROW(validate_channel(identity_channel(Alphabet::indexed("x", 2))));
}

TEST_CASE("validate_channel rejects a row summing to 1.1") {
  const Channel c = channel2(0.5, 0.6, 0.5, 0.5);
  CHECK_THROWS_WITH_AS(validate_channel(c), doctest::Contains("row 0"), Error);
  try {
    validate_channel(c);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kRowSumError);
  }
}

TEST_CASE("validate_channel rejects negative entries before row sums") {
  const Channel c = channel2(-0.1, 1.1, 0.5, 0.5);
  try {
    validate_channel(c);
    FAIL("expected NegativeEntry");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNegativeEntry);
  }
}

TEST_CASE("validate_channel rejects a shape mismatch") {
  Channel c = channel2(0.5, 0.5, 0.5, 0.5);
  c.output = Alphabet::indexed("y", 3);
  try {
    validate_channel(c);
    FAIL("expected ShapeMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kShapeMismatch);
  }
}

TEST_CASE("validate_channel tolerance edge: fuzzing around 1e-9") {
  // Perturb one entry of a clean row and check acceptance tracks the stated
  // row-sum tolerance.
  for (double delta : {1e-11, 5e-10, 9e-10}) {
    CHECK_NOTHROW(validate_channel(channel2(0.5 + delta, 0.5, 0.25, 0.75)));
  }
  for (double delta : {2e-9, 1e-8, 1e-6}) {
    CHECK_THROWS_AS(validate_channel(channel2(0.5 + delta, 0.5, 0.25, 0.75)),
                    Error);
  }
}

TEST_CASE("validate_alphabet rejects duplicates and empty alphabets") {
  CHECK_THROWS_AS(validate_alphabet(Alphabet{{"a", "a"}, std::nullopt}), Error);
  CHECK_THROWS_AS(validate_alphabet(Alphabet{{}, std::nullopt}), Error);
}

TEST_CASE("ensure_embedding parses numeric labels and rejects others") {
  const Alphabet grid = ensure_embedding(Alphabet{{"0", "1", "2.5"}, {}});
  CHECK((*grid.embedding)[2] == doctest::Approx(2.5));
  try {
    ensure_embedding(Alphabet{{"a", "b"}, std::nullopt});
    FAIL("expected NoEmbedding");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNoEmbedding);
  }
}

TEST_CASE("log_ratio conventions") {
  CHECK(log_ratio(0.5, 0.5) == 0.0);
  CHECK(std::isinf(log_ratio(0.3, 0.0)));
  CHECK(log_ratio(0.3, 0.0) > 0.0);
  CHECK(log_ratio(0.0, 0.3) < 0.0);
  CHECK(log_ratio(0.0, 0.0) == 0.0);
  CHECK(log_ratio(std::exp(1.0) * 0.1, 0.1) == doctest::Approx(1.0).epsilon(1e-12));
  // Sub-1e-12 dust counts as a structural zero.
  CHECK(std::isinf(log_ratio(0.3, 1e-13)));
  CHECK(log_ratio(1e-13, 1e-13) == 0.0);
}

TEST_CASE("output_dist on identity, constant, and randomized response") {
  const Alphabet a = Alphabet::indexed("x", 2);
  Prior p{a, Eigen::Vector2d(0.3, 0.7)};
  CHECK(output_dist(identity_channel(a), p).probs.isApprox(p.probs));

  const Channel constant = constant_channel(a, a, 0);
  const Prior q = output_dist(constant, p);
  CHECK(q.probs(0) == doctest::Approx(1.0));
  CHECK(q.probs(1) == doctest::Approx(0.0));

  const Channel rr = channel2(0.75, 0.25, 0.25, 0.75);
  Prior u{a, Eigen::Vector2d(0.5, 0.5)};
  const Prior out = output_dist(rr, u);
  CHECK(out.probs(0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(out.probs(1) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("output_dist rejects a mismatched prior") {
  const Channel c = channel2(0.5, 0.5, 0.5, 0.5);
  Prior p{Alphabet::indexed("z", 2), Eigen::Vector2d(0.5, 0.5)};
  try {
    output_dist(c, p);
    FAIL("expected AlphabetMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kAlphabetMismatch);
  }
}

TEST_CASE("posterior: identity gives a point mass, constant returns the prior") {
  const Alphabet a = Alphabet::indexed("x", 3);
  Prior p{a, Eigen::Vector3d(0.2, 0.5, 0.3)};
  const Prior point = posterior(identity_channel(a), p, "x1");
  CHECK(point.probs(1) == doctest::Approx(1.0));

  const Channel constant = constant_channel(a, a, 0);
  const Prior back = posterior(constant, p, "x0");
  CHECK(back.probs.isApprox(p.probs, 1e-12));
}

TEST_CASE("posterior hand-checked Bayes value") {
  const Channel c = channel2(0.8, 0.2, 0.4, 0.6);
  Prior p{c.input, Eigen::Vector2d(0.5, 0.5)};
  const Prior post = posterior(c, p, "y0");
  CHECK(post.probs(0) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(post.probs(1) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("posterior rejects an impossible output") {
  const Alphabet a = Alphabet::indexed("x", 2);
  const Channel c = constant_channel(a, a, 0);
  Prior p{a, Eigen::Vector2d(0.5, 0.5)};
  try {
    posterior(c, p, "x1");
    FAIL("expected ZeroMarginal");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kZeroMarginal);
  }
}

TEST_CASE("compose with identity and constant channels") {
  const Channel c = channel2(0.8, 0.2, 0.4, 0.6);
  const Channel id = identity_channel(c.output);
  CHECK(compose(c, id).matrix.isApprox(c.matrix));
  CHECK(compose(identity_channel(c.input), c).matrix.isApprox(c.matrix));

  const Channel constant = constant_channel(c.output, c.output, 1);
  const Channel absorbed = compose(c, constant);
  CHECK(absorbed.matrix.col(1).isApproxToConstant(1.0));
}

TEST_CASE("compose is associative on random triples") {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t a = 2 + gen() % 4;
    const std::size_t b = 2 + gen() % 4;
    const std::size_t c = 2 + gen() % 4;
    const std::size_t d = 2 + gen() % 4;
    Channel f = testutil::random_channel(gen, a, b);
    Channel g = testutil::random_channel(gen, b, c);
    g.input = f.output;
    Channel h = testutil::random_channel(gen, c, d);
    h.input = g.output;
    const Eigen::MatrixXd left = compose(compose(f, g), h).matrix;
    const Eigen::MatrixXd right = compose(f, compose(g, h)).matrix;
    CHECK((left - right).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("output_dist sums to one and posterior remixes to the prior") {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + gen() % 7;  // up to 8
    const std::size_t m = 2 + gen() % 7;
    const Channel c = testutil::random_channel(gen, n, m);
    const Prior p = testutil::random_prior(gen, c.input);
    const Prior q = output_dist(c, p);
    CHECK(std::abs(q.probs.sum() - 1.0) <= 1e-9);

    Eigen::VectorXd remix = Eigen::VectorXd::Zero(p.probs.size());
    for (std::size_t y = 0; y < m; ++y) {
      if (q.probs(static_cast<Eigen::Index>(y)) <= 0.0) continue;
      remix += q.probs(static_cast<Eigen::Index>(y)) *
               posterior_at(c, p, y).probs;
    }
    CHECK((remix - p.probs).cwiseAbs().maxCoeff() <= 1e-9);
  }
}

TEST_CASE("ExtReal ordering and infinity") {
  CHECK(ExtReal::finite(1.0) < ExtReal::infinity());
  CHECK(ExtReal::finite(0.0) == ExtReal::finite(0.0));
  CHECK(ExtReal::finite(-1e-12).value() == 0.0);  // dust clamps to zero
  CHECK_THROWS_AS(ExtReal::finite(-1.0), Error);
  CHECK(ExtReal::infinity().is_infinite());
}

TEST_CASE("validate_metric catches triangle violations") {
  MetricSpace m;
  m.alphabet = Alphabet::indexed("p", 3);
  m.dist.resize(3, 3);
  m.dist << 0, 1, 5,
            1, 0, 1,
            5, 1, 0;  // d(0,2) > d(0,1) + d(1,2)
  CHECK_THROWS_AS(validate_metric(m), Error);
  m.dist(0, 2) = m.dist(2, 0) = 2.0;
  CHECK_NOTHROW(validate_metric(m));
}

TEST_CASE("validate_secret_model rejects self-pairs and bad conditionals") {
  SecretModel sm;
  sm.secrets.symbols = {"A", "B"};
  sm.data = Alphabet::indexed("x", 2);
  sm.pairs = {{0, 0}};
  Eigen::MatrixXd theta(2, 2);
  theta << 0.5, 0.5, 0.2, 0.8;
  sm.scenarios.push_back(theta);
  CHECK_THROWS_AS(validate_secret_model(sm), Error);
  sm.pairs = {{0, 1}};
  CHECK_NOTHROW(validate_secret_model(sm));
  sm.scenarios[0](0, 0) = 0.7;  // row no longer sums to 1
  CHECK_THROWS_AS(validate_secret_model(sm), Error);
}

}  // namespace
}  // namespace localpriv
