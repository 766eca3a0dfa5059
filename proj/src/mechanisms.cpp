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

#include "localpriv/mechanisms.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "localpriv/optimizer.hpp"

namespace localpriv {

namespace {

// Requires a numeric embedding forming consecutive integers; returns it.
const std::vector<double>& require_unit_grid(const Alphabet& a) {
  if (!a.embedding) {
    throw Error(ErrorCode::kNotAGrid, "alphabet has no numeric embedding");
  }
  const auto& emb = *a.embedding;
  for (std::size_t i = 0; i + 1 < emb.size(); ++i) {
    if (std::abs(emb[i + 1] - emb[i] - 1.0) > 1e-9) {
      throw Error(ErrorCode::kNotAGrid,
                  "embedding values are not consecutive integers");
    }
  }
  return emb;
}

// Row of the clamped two-sided geometric over m grid points, centered at grid
// index p, with decay ratio alpha = e^-eps in (0,1). Interior mass is
// (1-alpha)/(1+alpha) alpha^|k|; tails alpha^t/(1+alpha) fold onto the
// endpoints (t >= 1), and a center sitting on an endpoint keeps 1/(1+alpha).
Eigen::VectorXd clamped_geometric_row(std::size_t m, std::size_t p,
                                      double alpha) {
  Eigen::VectorXd row(static_cast<Eigen::Index>(m));
  if (m == 1) {
    row(0) = 1.0;
    return row;
  }
  const double interior = (1.0 - alpha) / (1.0 + alpha);
  for (std::size_t j = 0; j < m; ++j) {
    const auto offset = static_cast<long>(j) - static_cast<long>(p);
    if (j == 0) {
      row(0) = p == 0 ? 1.0 / (1.0 + alpha)
                      : std::pow(alpha, static_cast<double>(p)) / (1.0 + alpha);
    } else if (j == m - 1) {
      row(static_cast<Eigen::Index>(j)) =
          p == m - 1
              ? 1.0 / (1.0 + alpha)
              : std::pow(alpha, static_cast<double>(m - 1 - p)) / (1.0 + alpha);
    } else {
      row(static_cast<Eigen::Index>(j)) =
          interior * std::pow(alpha, std::abs(static_cast<double>(offset)));
    }
  }
  return row;
}

}  // namespace

std::string to_string(MechanismKind kind) {
  return kind == MechanismKind::kKrr ? "krr" : "oue";
}

MechanismKind mechanism_from_string(const std::string& s) {
  if (s == "krr") return MechanismKind::kKrr;
  if (s == "oue") return MechanismKind::kOue;
  throw Error(ErrorCode::kInvalidArgument, "unknown mechanism '" + s + "'");
}

void validate_batch(const ReportBatch& batch) {
  validate_alphabet(batch.alphabet);
  if (batch.mechanism == MechanismKind::kKrr) {
    for (const auto& r : batch.krr_reports) {
      batch.alphabet.index_of(r);  // throws UnknownSymbol
    }
  } else {
    for (const auto& r : batch.oue_reports) {
      if (r.size() != batch.alphabet.size()) {
        throw Error(ErrorCode::kShapeMismatch,
                    "OUE report has " + std::to_string(r.size()) +
                        " bits, expected " +
                        std::to_string(batch.alphabet.size()));
      }
      for (auto b : r) {
        if (b > 1) {
          throw Error(ErrorCode::kInvalidArgument, "OUE bits must be 0/1");
        }
      }
    }
  }
}

Channel make_rr(const Alphabet& alphabet, double eps) {
  validate_alphabet(alphabet);
  const std::size_t k = alphabet.size();
  if (k < 2) {
    throw Error(ErrorCode::kDegenerateAlphabet,
                "randomized response needs k >= 2");
  }
  if (eps < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "eps must be >= 0");
  }
  const double off = 1.0 / (std::exp(eps) + static_cast<double>(k) - 1.0);
  const double diag = 1.0 - (static_cast<double>(k) - 1.0) * off;
  const auto n = static_cast<Eigen::Index>(k);
  Eigen::MatrixXd m = Eigen::MatrixXd::Constant(n, n, off);
  m.diagonal().setConstant(diag);
  return Channel{alphabet, alphabet, std::move(m)};
}

Alphabet oue_output_alphabet(std::size_t k) {
  Alphabet out;
  const std::size_t count = std::size_t{1} << k;
  out.symbols.reserve(count);
  for (std::size_t r = 0; r < count; ++r) {
    std::string label(k, '0');
    for (std::size_t v = 0; v < k; ++v) {
      if ((r >> v) & 1U) label[v] = '1';
    }
    out.symbols.push_back(std::move(label));
  }
  return out;
}

Channel make_oue(const Alphabet& alphabet, double eps) {
  validate_alphabet(alphabet);
  const std::size_t k = alphabet.size();
  if (k < 2) {
    throw Error(ErrorCode::kDegenerateAlphabet, "OUE needs k >= 2");
  }
  if (k > 12) {
    throw Error(ErrorCode::kAlphabetTooLarge,
                "explicit OUE channel capped at k = 12 (2^k outputs)");
  }
  if (eps < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "eps must be >= 0");
  }
  const double q = 1.0 / (std::exp(eps) + 1.0);  // zero-bit flip-on probability
  const Alphabet out = oue_output_alphabet(k);
  const std::size_t count = std::size_t{1} << k;
  Eigen::MatrixXd m(static_cast<Eigen::Index>(k),
                    static_cast<Eigen::Index>(count));
  for (std::size_t x = 0; x < k; ++x) {
    for (std::size_t r = 0; r < count; ++r) {
      double prob = 0.5;  // the true bit is 1 or 0 with probability 1/2 each
      for (std::size_t v = 0; v < k; ++v) {
        if (v == x) continue;
        prob *= ((r >> v) & 1U) ? q : 1.0 - q;
      }
      m(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(r)) = prob;
    }
  }
  return Channel{alphabet, out, std::move(m)};
}

Channel make_sampling(const Prior& p_prior, double p_truth) {
  validate_prior(p_prior);
  if (p_truth < 0.0 || p_truth > 1.0) {
    throw Error(ErrorCode::kInvalidArgument, "p_truth must lie in [0,1]");
  }
  const auto n = static_cast<Eigen::Index>(p_prior.alphabet.size());
  Eigen::MatrixXd m = (1.0 - p_truth) *
                      (Eigen::VectorXd::Ones(n) * p_prior.probs.transpose());
  m.diagonal().array() += p_truth;
  return Channel{p_prior.alphabet, p_prior.alphabet, std::move(m)};
}

Channel make_geometric(const Alphabet& alphabet, double eps) {
  validate_alphabet(alphabet);
  require_unit_grid(alphabet);
  if (eps <= 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "eps must be > 0");
  }
  const double alpha = std::exp(-eps);
  const std::size_t m = alphabet.size();
  Eigen::MatrixXd mat(static_cast<Eigen::Index>(m),
                      static_cast<Eigen::Index>(m));
  for (std::size_t p = 0; p < m; ++p) {
    mat.row(static_cast<Eigen::Index>(p)) =
        clamped_geometric_row(m, p, alpha).transpose();
  }
  return Channel{alphabet, alphabet, std::move(mat)};
}

Channel make_geo_exp(const MetricSpace& m, double eps) {
  validate_metric(m);
  if (eps < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "eps must be >= 0");
  }
  const auto n = static_cast<Eigen::Index>(m.alphabet.size());
  Eigen::MatrixXd mat(n, n);
  for (Eigen::Index x = 0; x < n; ++x) {
    Eigen::VectorXd row = (-0.5 * eps * m.dist.row(x).transpose().array()).exp();
    mat.row(x) = row.transpose() / row.sum();
  }
  return Channel{m.alphabet, m.alphabet, std::move(mat)};
}

Channel make_wasserstein(const SecretModel& sm, double eps,
                         const Alphabet& output_grid) {
  validate_secret_model(sm);
  if (sm.pairs.empty()) {
    throw Error(ErrorCode::kEmptyPairs, "secret model has no pairs");
  }
  if (eps <= 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "eps must be > 0");
  }
  const Alphabet data = ensure_embedding(sm.data);
  const auto& grid_emb = require_unit_grid(output_grid);

  // Every data value must sit on the output grid so noisy offsets stay on it.
  std::vector<std::size_t> position(data.size());
  for (std::size_t x = 0; x < data.size(); ++x) {
    const double v = (*data.embedding)[x];
    bool found = false;
    for (std::size_t g = 0; g < grid_emb.size(); ++g) {
      if (std::abs(grid_emb[g] - v) <= 1e-9) {
        position[x] = g;
        found = true;
        break;
      }
    }
    if (!found) {
      throw Error(ErrorCode::kNotAGrid,
                  "data value " + std::to_string(v) +
                      " is not on the output grid");
    }
  }

  double w = 0.0;
  double max_pair_gap = 0.0;
  for (const auto& theta : sm.scenarios) {
    for (const auto& [i, j] : sm.pairs) {
      const Prior a{data, theta.row(static_cast<Eigen::Index>(i)).transpose()};
      const Prior b{data, theta.row(static_cast<Eigen::Index>(j)).transpose()};
      w = std::max(w, wasserstein_inf(a, b));
      max_pair_gap =
          std::max(max_pair_gap, (a.probs - b.probs).cwiseAbs().maxCoeff());
    }
  }

  const std::size_t m = output_grid.size();
  if (w == 0.0) {
    if (max_pair_gap > 1e-9) {
      throw Error(ErrorCode::kZeroDistance,
                  "zero transport distance with non-identical pair "
                  "conditionals");
    }
    // All discriminative pairs are indistinguishable already; release the
    // value noiselessly on the grid.
    Eigen::MatrixXd mat = Eigen::MatrixXd::Zero(
        static_cast<Eigen::Index>(data.size()), static_cast<Eigen::Index>(m));
    for (std::size_t x = 0; x < data.size(); ++x) {
      mat(static_cast<Eigen::Index>(x),
          static_cast<Eigen::Index>(position[x])) = 1.0;
    }
    return Channel{data, output_grid, std::move(mat)};
  }

  const double alpha = std::exp(-eps / w);
  Eigen::MatrixXd mat(static_cast<Eigen::Index>(data.size()),
                      static_cast<Eigen::Index>(m));
  for (std::size_t x = 0; x < data.size(); ++x) {
    mat.row(static_cast<Eigen::Index>(x)) =
        clamped_geometric_row(m, position[x], alpha).transpose();
  }
  return Channel{data, output_grid, std::move(mat)};
}

std::vector<std::string> sample(const Channel& c, const std::string& x,
                                std::size_t n, std::uint64_t seed) {
  const std::size_t row = c.input.index_of(x);
  const auto m = c.matrix.cols();
  std::vector<double> cum(static_cast<std::size_t>(m));
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (Eigen::Index y = 0; y < m; ++y) {
    if (c.matrix(static_cast<Eigen::Index>(row), y) > 0.0) {
      last_positive = static_cast<std::size_t>(y);
    }
    acc += c.matrix(static_cast<Eigen::Index>(row), y);
    cum[static_cast<std::size_t>(y)] = acc;
  }

  std::mt19937_64 gen(seed);
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    const auto it = std::upper_bound(cum.begin(), cum.end(), u);
    // u beyond the accumulated total is float dust; fold it onto the last
    // symbol the row can actually emit.
    const std::size_t idx = it == cum.end()
                                ? last_positive
                                : static_cast<std::size_t>(it - cum.begin());
    out.push_back(c.output.symbols[idx]);
  }
  return out;
}

Eigen::VectorXd estimate_frequencies(const ReportBatch& batch) {
  validate_batch(batch);
  const std::size_t n = batch.size();
  if (n == 0) {
    throw Error(ErrorCode::kEmptyBatch, "no reports to aggregate");
  }
  const auto k = static_cast<double>(batch.alphabet.size());
  const auto kk = static_cast<Eigen::Index>(batch.alphabet.size());
  Eigen::VectorXd estimates(kk);

  if (batch.mechanism == MechanismKind::kKrr) {
    const double p = std::exp(batch.epsilon) / (std::exp(batch.epsilon) + k - 1.0);
    const double q = 1.0 / (std::exp(batch.epsilon) + k - 1.0);
    if (p - q < kZeroTol) {
      throw Error(ErrorCode::kInvalidArgument,
                  "KRR estimator undefined at eps = 0");
    }
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(kk);
    for (const auto& r : batch.krr_reports) {
      counts(static_cast<Eigen::Index>(batch.alphabet.index_of(r))) += 1.0;
    }
    estimates = ((counts / static_cast<double>(n)).array() - q) / (p - q);
  } else {
    const double q = 1.0 / (std::exp(batch.epsilon) + 1.0);
    if (0.5 - q < kZeroTol) {
      throw Error(ErrorCode::kInvalidArgument,
                  "OUE estimator undefined at eps = 0");
    }
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(kk);
    for (const auto& r : batch.oue_reports) {
      for (std::size_t v = 0; v < r.size(); ++v) {
        if (r[v]) counts(static_cast<Eigen::Index>(v)) += 1.0;
      }
    }
    estimates = ((counts / static_cast<double>(n)).array() - q) / (0.5 - q);
  }
  return estimates;
}

}  // namespace localpriv
