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
#include <set>

#include "localpriv/auditors.hpp"
#include "localpriv/mechanisms.hpp"
#include "localpriv/optimizer.hpp"
#include "oracles.hpp"
#include "testutil.hpp"

namespace localpriv {
namespace {

TEST_CASE("make_rr closed form and limits") {
  const Channel c = make_rr(Alphabet::indexed("x", 2), std::log(3.0));
  CHECK(c.matrix(0, 0) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(c.matrix(0, 1) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(c.matrix(1, 1) == doctest::Approx(0.75).epsilon(1e-12));

  const Channel sharp = make_rr(Alphabet::indexed("x", 3), 50.0);
  CHECK(sharp.matrix(0, 0) >= 1.0 - 1e-9);
  CHECK(sharp.matrix(0, 1) <= 1e-9);

  const Channel flat = make_rr(Alphabet::indexed("x", 3), 0.0);
  CHECK(flat.matrix.isApproxToConstant(1.0 / 3.0, 1e-12));

  CHECK_THROWS_AS(make_rr(Alphabet::indexed("x", 1), 1.0), Error);
}

TEST_CASE("make_rr re-audits to its construction budget") {
  for (double eps : {0.1, 0.5, 1.0, 2.0, 5.0}) {
    for (std::size_t k = 2; k <= 8; ++k) {
      const Channel c = make_rr(Alphabet::indexed("x", k), eps);
      validate_channel(c);
      CHECK(audit_ldp(c).epsilon.value() == doctest::Approx(eps).epsilon(1e-9));
    }
  }
}

TEST_CASE("make_oue per-bit products") {
  const Channel c = make_oue(Alphabet::indexed("x", 2), std::log(3.0));
  validate_channel(c);
  // Input x1's own one-hot report is "01": true bit kept (1/2) times the
  // other bit staying off (1 - 1/4).
  const auto own = c.output.index_of("01");
  CHECK(c.matrix(1, static_cast<Eigen::Index>(own)) ==
        doctest::Approx(0.375).epsilon(1e-12));

  // All-zero report: 1/2 times (1-q)^(k-1).
  for (std::size_t k : {2u, 4u, 6u}) {
    const double eps = 1.3;
    const Channel ch = make_oue(Alphabet::indexed("x", k), eps);
    const double q = 1.0 / (std::exp(eps) + 1.0);
    const double expected =
        0.5 * std::pow(1.0 - q, static_cast<double>(k - 1));
    CHECK(ch.matrix(0, 0) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("make_oue re-audits to eps and enforces the size cap") {
  CHECK(audit_ldp(make_oue(Alphabet::indexed("x", 3), 1.0)).epsilon.value() ==
        doctest::Approx(1.0).epsilon(1e-6));
  for (std::size_t k : {2u, 4u, 6u}) {
    for (double eps : {0.5, 1.0, 3.0}) {
      const Channel c = make_oue(Alphabet::indexed("x", k), eps);
      validate_channel(c);
      CHECK(audit_ldp(c).epsilon.value() == doctest::Approx(eps).epsilon(1e-6));
    }
  }
  try {
    make_oue(Alphabet::indexed("x", 20), 1.0);
    FAIL("expected AlphabetTooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kAlphabetTooLarge);
  }
  // The cap itself is fine: 12 inputs, 4096 outputs.
  const Channel cap = make_oue(Alphabet::indexed("x", 12), 0.9);
  validate_channel(cap);
  CHECK(audit_ldp(cap).epsilon.value() == doctest::Approx(0.9).epsilon(1e-6));
}

TEST_CASE("make_sampling endpoints and the randomized-response identity") {
  const Alphabet a = Alphabet::indexed("x", 2);
  const Prior u = uniform_prior(a);
  CHECK(make_sampling(u, 1.0).matrix.isApprox(Eigen::MatrixXd::Identity(2, 2)));

  Prior skew{a, Eigen::Vector2d(0.2, 0.8)};
  const Channel constant = make_sampling(skew, 0.0);
  CHECK(constant.matrix.row(0).isApprox(skew.probs.transpose()));
  CHECK(constant.matrix.row(1).isApprox(skew.probs.transpose()));

  // Uniform prior, half-truth sampling is exactly RR at eps = ln 3.
  const Channel sampled = make_sampling(u, 0.5);
  const Channel rr = make_rr(a, std::log(3.0));
  CHECK((sampled.matrix - rr.matrix).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("make_geometric rows follow the geometric-series closed form") {
  const Channel c = make_geometric(Alphabet::integer_grid(0, 1), std::log(2.0));
  CHECK(c.matrix(0, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(c.matrix(0, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(c.matrix(1, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  // Independent series summation: fold the unclamped pmf numerically.
  const double eps = 0.7;
  const double alpha = std::exp(-eps);
  const Channel g = make_geometric(Alphabet::integer_grid(0, 4), eps);
  validate_channel(g);
  const double norm = (1.0 - alpha) / (1.0 + alpha);
  for (std::size_t p = 0; p < 5; ++p) {
    for (std::size_t j = 0; j < 5; ++j) {
      double expected = 0.0;
      for (long offset = -200; offset <= 200; ++offset) {
        const long target = static_cast<long>(p) + offset;
        const long folded = target < 0 ? 0 : (target > 4 ? 4 : target);
        if (folded != static_cast<long>(j)) continue;
        expected += norm * std::pow(alpha, std::abs(static_cast<double>(offset)));
      }
      CHECK(g.matrix(static_cast<Eigen::Index>(p),
                     static_cast<Eigen::Index>(j)) ==
            doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("make_geometric approaches identity for large eps") {
  const Channel c = make_geometric(Alphabet::integer_grid(0, 3), 20.0);
  for (Eigen::Index i = 0; i < 4; ++i) {
    CHECK(c.matrix(i, i) >= 1.0 - 1e-8);
  }
}

TEST_CASE("make_geometric re-audits under the line metric") {
  for (double eps : {0.4, 1.0, 2.5}) {
    const Channel c = make_geometric(Alphabet::integer_grid(0, 4), eps);
    MetricSpace m;
    m.alphabet = c.input;
    m.dist.resize(5, 5);
    for (Eigen::Index i = 0; i < 5; ++i) {
      for (Eigen::Index j = 0; j < 5; ++j) {
        m.dist(i, j) = std::abs(static_cast<double>(i - j));
      }
    }
    CHECK(audit_geo(c, m).epsilon.value() <= eps + 1e-9);
  }
}

TEST_CASE("make_geometric rejects non-grids") {
  try {
    make_geometric(Alphabet::indexed("x", 3), 1.0);
    FAIL("expected NotAGrid");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNotAGrid);
  }
  Alphabet skewed;
  skewed.symbols = {"0", "2"};
  skewed.embedding = std::vector<double>{0.0, 2.0};
  CHECK_THROWS_AS(make_geometric(skewed, 1.0), Error);
}

TEST_CASE("make_geo_exp symmetry, uniform limit, and collinear example") {
  MetricSpace flat;
  flat.alphabet = Alphabet::indexed("p", 4);
  flat.dist = Eigen::MatrixXd::Constant(4, 4, 2.0);
  flat.dist.diagonal().setZero();
  const Channel sym = make_geo_exp(flat, 1.5);
  for (Eigen::Index x = 0; x < 4; ++x) {
    for (Eigen::Index y = 0; y < 4; ++y) {
      if (x != y) {
        CHECK(sym.matrix(x, y) == doctest::Approx(sym.matrix(0, 1)).epsilon(1e-12));
      }
    }
  }

  const Channel uniform = make_geo_exp(flat, 0.0);
  CHECK(uniform.matrix.isApproxToConstant(0.25, 1e-12));

  MetricSpace line;
  line.alphabet = Alphabet::indexed("p", 3);
  line.dist.resize(3, 3);
  line.dist << 0, 1, 2,
               1, 0, 1,
               2, 1, 0;
  const Channel c = make_geo_exp(line, 2.0);
  const double z = 1.0 + std::exp(-1.0) + std::exp(-2.0);
  CHECK(c.matrix(0, 0) == doctest::Approx(1.0 / z).epsilon(1e-12));
  CHECK(c.matrix(0, 1) == doctest::Approx(std::exp(-1.0) / z).epsilon(1e-12));
  CHECK(c.matrix(0, 2) == doctest::Approx(std::exp(-2.0) / z).epsilon(1e-12));
  CHECK(audit_geo(c, line).epsilon.value() <= 2.0 + 1e-9);
}

TEST_CASE("make_geo_exp keeps the configured budget on random metrics") {
  std::mt19937_64 gen(89);
  for (int trial = 0; trial < 60; ++trial) {
    const MetricSpace m = testutil::random_metric(gen, 2 + gen() % 5);
    const double eps = 0.2 + 3.0 * static_cast<double>(gen() >> 11) * 0x1.0p-53;
    const Channel c = make_geo_exp(m, eps);
    validate_channel(c);
    CHECK(audit_geo(c, m).epsilon.value() <= eps + 1e-9);
  }
}

TEST_CASE("make_wasserstein: point masses, identical pairs, quantile shift") {
  // Point masses at 3 and 4: transport distance 1, plain geometric noise.
  SecretModel sm;
  sm.secrets.symbols = {"A", "B"};
  sm.data = Alphabet::integer_grid(3, 4);
  sm.pairs = {{0, 1}};
  Eigen::MatrixXd theta(2, 2);
  theta << 1, 0, 0, 1;
  sm.scenarios.push_back(theta);
  const double eps = 1.2;
  const Channel c = make_wasserstein(sm, eps, Alphabet::integer_grid(3, 4));
  const Channel plain = make_geometric(Alphabet::integer_grid(3, 4), eps);
  CHECK((c.matrix - plain.matrix).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(audit_pufferfish(c, sm).epsilon.value() <= eps + 1e-6);

  // Identical conditionals: zero distance, noiseless release, zero budget.
  Eigen::MatrixXd same(2, 2);
  same << 0.4, 0.6, 0.4, 0.6;
  SecretModel sm2 = sm;
  sm2.scenarios = {same};
  const Channel noiseless = make_wasserstein(sm2, eps, Alphabet::integer_grid(3, 4));
  CHECK(noiseless.matrix.isApprox(Eigen::MatrixXd::Identity(2, 2)));
  CHECK(audit_pufferfish(noiseless, sm2).epsilon.value() == 0.0);

  // Interleaved supports: quantile functions shift by exactly 1.
  SecretModel sm3;
  sm3.secrets.symbols = {"A", "B"};
  sm3.data = Alphabet::integer_grid(0, 3);
  sm3.pairs = {{0, 1}};
  Eigen::MatrixXd theta3(2, 4);
  theta3 << 0.5, 0, 0.5, 0,
            0, 0.5, 0, 0.5;
  sm3.scenarios.push_back(theta3);
  const Prior a{ensure_embedding(sm3.data), theta3.row(0).transpose()};
  const Prior b{ensure_embedding(sm3.data), theta3.row(1).transpose()};
  CHECK(wasserstein_inf(a, b) == doctest::Approx(1.0));
  const Channel c3 = make_wasserstein(sm3, eps, Alphabet::integer_grid(0, 3));
  CHECK(audit_pufferfish(c3, sm3).epsilon.value() <= eps + 1e-6);
}

TEST_CASE("make_wasserstein keeps the budget on random two-secret models") {
  std::mt19937_64 gen(97);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t grid = 2 + gen() % 8;  // support <= 9
    const SecretModel sm = testutil::random_two_secret_model(gen, grid);
    const double eps = 0.3 + 2.5 * static_cast<double>(gen() >> 11) * 0x1.0p-53;
    const Channel c = make_wasserstein(
        sm, eps, Alphabet::integer_grid(0, static_cast<long>(grid) - 1));
    validate_channel(c);
    CHECK(audit_pufferfish(c, sm).epsilon.value() <= eps + 1e-6);
  }
}

TEST_CASE("sample is deterministic and hits forced outcomes") {
  const Alphabet a = Alphabet::indexed("x", 3);
  const Channel constant = constant_channel(a, a, 2);
  for (const auto& r : sample(constant, "x0", 50, 1)) CHECK(r == "x2");
  const Channel id = identity_channel(a);
  for (const auto& r : sample(id, "x1", 50, 1)) CHECK(r == "x1");

  const Channel rr = make_rr(Alphabet::indexed("x", 2), std::log(3.0));
  const auto first = sample(rr, "x0", 1000, 42);
  const auto second = sample(rr, "x0", 1000, 42);
  CHECK(first == second);
  const auto other = sample(rr, "x0", 1000, 43);
  CHECK(first != other);
}

TEST_CASE("sample concentrates near the truthful probability") {
  const Channel rr = make_rr(Alphabet::indexed("x", 2), std::log(3.0));
  const auto reports = sample(rr, "x0", 100000, 7);
  double truthful = 0.0;
  for (const auto& r : reports) {
    if (r == "x0") truthful += 1.0;
  }
  truthful /= static_cast<double>(reports.size());
  CHECK(truthful == doctest::Approx(0.75).epsilon(0.015));
}

TEST_CASE("sample rejects unknown input symbols") {
  const Channel rr = make_rr(Alphabet::indexed("x", 2), 1.0);
  try {
    sample(rr, "zz", 10, 0);
    FAIL("expected UnknownSymbol");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUnknownSymbol);
  }
}

ReportBatch krr_batch_from_truth(const Channel& rr,
                                 const std::vector<std::size_t>& counts,
                                 std::uint64_t seed, double eps) {
  ReportBatch batch;
  batch.mechanism = MechanismKind::kKrr;
  batch.epsilon = eps;
  batch.alphabet = rr.input;
  std::uint64_t stream = seed;
  for (std::size_t x = 0; x < counts.size(); ++x) {
    const auto reports =
        sample(rr, rr.input.symbols[x], counts[x], stream++);
    batch.krr_reports.insert(batch.krr_reports.end(), reports.begin(),
                             reports.end());
  }
  return batch;
}

TEST_CASE("KRR estimator is consistent at a point mass") {
  const double eps = 1.0;
  const Channel rr = make_rr(Alphabet::indexed("x", 2), eps);
  const ReportBatch batch = krr_batch_from_truth(rr, {100000, 0}, 5, eps);
  const Eigen::VectorXd f = estimate_frequencies(batch);
  CHECK(f(0) == doctest::Approx(1.0).epsilon(0.02));
  CHECK(f(1) == doctest::Approx(0.0).epsilon(0.02));
}

TEST_CASE("KRR and OUE estimators hit uniform frequencies within 0.02") {
  const double eps = 1.0;
  const std::size_t per_symbol = 25000;
  const Channel rr = make_rr(Alphabet::indexed("x", 4), eps);
  const ReportBatch krr =
      krr_batch_from_truth(rr, {per_symbol, per_symbol, per_symbol, per_symbol},
                           11, eps);
  const Eigen::VectorXd f = estimate_frequencies(krr);
  for (Eigen::Index v = 0; v < 4; ++v) {
    CHECK(std::abs(f(v) - 0.25) <= 0.02);
  }

  const Channel oue = make_oue(Alphabet::indexed("x", 4), eps);
  ReportBatch batch;
  batch.mechanism = MechanismKind::kOue;
  batch.epsilon = eps;
  batch.alphabet = oue.input;
  std::uint64_t stream = 17;
  for (std::size_t x = 0; x < 4; ++x) {
    for (const auto& label :
         sample(oue, oue.input.symbols[x], per_symbol, stream++)) {
      std::vector<std::uint8_t> bits(label.size());
      for (std::size_t v = 0; v < label.size(); ++v) {
        bits[v] = label[v] == '1' ? 1 : 0;
      }
      batch.oue_reports.push_back(std::move(bits));
    }
  }
  const Eigen::VectorXd g = estimate_frequencies(batch);
  for (Eigen::Index v = 0; v < 4; ++v) {
    CHECK(std::abs(g(v) - 0.25) <= 0.02);
  }
}

TEST_CASE("OUE all-zero batch lands on the plug-in value") {
  const double eps = 0.8;
  ReportBatch batch;
  batch.mechanism = MechanismKind::kOue;
  batch.epsilon = eps;
  batch.alphabet = Alphabet::indexed("x", 3);
  batch.oue_reports.assign(500, std::vector<std::uint8_t>(3, 0));
  const double q = 1.0 / (std::exp(eps) + 1.0);
  const Eigen::VectorXd f = estimate_frequencies(batch);
  for (Eigen::Index v = 0; v < 3; ++v) {
    CHECK(f(v) == doctest::Approx(-q / (0.5 - q)).epsilon(1e-12));
  }
}

TEST_CASE("estimate_frequencies rejects empty batches") {
  ReportBatch batch;
  batch.mechanism = MechanismKind::kKrr;
  batch.epsilon = 1.0;
  batch.alphabet = Alphabet::indexed("x", 2);
  try {
    estimate_frequencies(batch);
    FAIL("expected EmptyBatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kEmptyBatch);
  }
}

TEST_CASE("estimator means stay within three standard errors over seeds") {
  const double eps = 1.0;
  const std::size_t k = 4;
  const std::size_t n_per_symbol = 2000;
  const int seeds = 40;
  const Channel rr = make_rr(Alphabet::indexed("x", k), eps);
  const std::vector<std::size_t> truth = {2 * n_per_symbol, n_per_symbol,
                                          n_per_symbol, 0};
  const double total = static_cast<double>(4 * n_per_symbol);

  Eigen::MatrixXd samples(seeds, static_cast<Eigen::Index>(k));
  for (int s = 0; s < seeds; ++s) {
    const ReportBatch batch =
        krr_batch_from_truth(rr, truth, 1000 + 10 * static_cast<std::uint64_t>(s),
                             eps);
    samples.row(s) = estimate_frequencies(batch).transpose();
  }
  for (std::size_t v = 0; v < k; ++v) {
    const auto col = samples.col(static_cast<Eigen::Index>(v));
    const double mean = col.mean();
    const double sd = std::sqrt((col.array() - mean).square().sum() /
                                static_cast<double>(seeds - 1));
    const double se = sd / std::sqrt(static_cast<double>(seeds));
    const double expected = static_cast<double>(truth[v]) / total;
    CHECK(std::abs(mean - expected) <= 3.0 * se + 1e-12);
  }
}

}  // namespace
}  // namespace localpriv
