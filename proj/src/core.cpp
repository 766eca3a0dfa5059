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

#include "localpriv/core.hpp"

#include <cmath>
#include <cstdlib>
#include <unordered_set>

namespace localpriv {

std::string to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kRowSumError: return "RowSumError";
    case ErrorCode::kNegativeEntry: return "NegativeEntry";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kAlphabetMismatch: return "AlphabetMismatch";
    case ErrorCode::kZeroMarginal: return "ZeroMarginal";
    case ErrorCode::kDegenerateAlphabet: return "DegenerateAlphabet";
    case ErrorCode::kEmptyPairs: return "EmptyPairs";
    case ErrorCode::kNotAGrid: return "NotAGrid";
    case ErrorCode::kAlphabetTooLarge: return "AlphabetTooLarge";
    case ErrorCode::kUnknownSymbol: return "UnknownSymbol";
    case ErrorCode::kEmptyBatch: return "EmptyBatch";
    case ErrorCode::kNoConvergence: return "NoConvergence";
    case ErrorCode::kZeroDistance: return "ZeroDistance";
    case ErrorCode::kEmptyDataset: return "EmptyDataset";
    case ErrorCode::kMissingInput: return "MissingInput";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kNoEmbedding: return "NoEmbedding";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "UnknownError";
}

std::size_t Alphabet::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (symbols[i] == label) return i;
  }
  throw Error(ErrorCode::kUnknownSymbol,
              "symbol '" + label + "' is not in the alphabet");
}

Alphabet Alphabet::indexed(const std::string& prefix, std::size_t k) {
  Alphabet a;
  a.symbols.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    a.symbols.push_back(prefix + std::to_string(i));
  }
  return a;
}

Alphabet Alphabet::integer_grid(long lo, long hi) {
  if (hi < lo) {
    throw Error(ErrorCode::kInvalidArgument, "grid upper bound below lower");
  }
  Alphabet a;
  std::vector<double> emb;
  for (long v = lo; v <= hi; ++v) {
    a.symbols.push_back(std::to_string(v));
    emb.push_back(static_cast<double>(v));
  }
  a.embedding = std::move(emb);
  return a;
}

void validate_alphabet(const Alphabet& a) {
  if (a.symbols.empty()) {
    throw Error(ErrorCode::kShapeMismatch, "alphabet must have >= 1 symbol");
  }
  std::unordered_set<std::string> seen;
  for (const auto& s : a.symbols) {
    if (!seen.insert(s).second) {
      throw Error(ErrorCode::kInvalidArgument,
                  "duplicate symbol '" + s + "' in alphabet");
    }
  }
  if (a.embedding && a.embedding->size() != a.symbols.size()) {
    throw Error(ErrorCode::kShapeMismatch,
                "embedding size does not match alphabet size");
  }
}

Alphabet ensure_embedding(const Alphabet& a) {
  if (a.embedding) return a;
  Alphabet out = a;
  std::vector<double> emb;
  emb.reserve(a.symbols.size());
  for (const auto& s : a.symbols) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0' || !std::isfinite(v)) {
      throw Error(ErrorCode::kNoEmbedding,
                  "alphabet has no numeric embedding and label '" + s +
                      "' does not parse as a number");
    }
    emb.push_back(v);
  }
  out.embedding = std::move(emb);
  return out;
}

void validate_prior(const Prior& p) {
  validate_alphabet(p.alphabet);
  if (static_cast<std::size_t>(p.probs.size()) != p.alphabet.size()) {
    throw Error(ErrorCode::kShapeMismatch,
                "prior has " + std::to_string(p.probs.size()) +
                    " entries for an alphabet of size " +
                    std::to_string(p.alphabet.size()));
  }
  for (Eigen::Index i = 0; i < p.probs.size(); ++i) {
    if (p.probs(i) < 0.0) {
      throw Error(ErrorCode::kNegativeEntry,
                  "prior entry " + std::to_string(i) + " is negative");
    }
  }
  const double sum = p.probs.sum();
  if (std::abs(sum - 1.0) > kRowSumTol) {
    throw Error(ErrorCode::kRowSumError,
                "prior sums to " + std::to_string(sum));
  }
}

Prior uniform_prior(const Alphabet& a) {
  validate_alphabet(a);
  Prior p{a, Eigen::VectorXd::Constant(static_cast<Eigen::Index>(a.size()),
                                       1.0 / static_cast<double>(a.size()))};
  return p;
}

void validate_channel(const Channel& c) {
  validate_alphabet(c.input);
  validate_alphabet(c.output);
  if (static_cast<std::size_t>(c.matrix.rows()) != c.input.size() ||
      static_cast<std::size_t>(c.matrix.cols()) != c.output.size()) {
    throw Error(ErrorCode::kShapeMismatch,
                "matrix is " + std::to_string(c.matrix.rows()) + "x" +
                    std::to_string(c.matrix.cols()) + " but alphabets are " +
                    std::to_string(c.input.size()) + "/" +
                    std::to_string(c.output.size()));
  }
  for (Eigen::Index x = 0; x < c.matrix.rows(); ++x) {
    for (Eigen::Index y = 0; y < c.matrix.cols(); ++y) {
      if (c.matrix(x, y) < 0.0) {
        throw Error(ErrorCode::kNegativeEntry,
                    "entry (" + std::to_string(x) + "," + std::to_string(y) +
                        ") is negative");
      }
    }
    const double sum = c.matrix.row(x).sum();
    if (std::abs(sum - 1.0) > kRowSumTol) {
      throw Error(ErrorCode::kRowSumError,
                  "row " + std::to_string(x) + " sums to " +
                      std::to_string(sum));
    }
  }
}

Channel identity_channel(const Alphabet& a) {
  validate_alphabet(a);
  const auto n = static_cast<Eigen::Index>(a.size());
  return Channel{a, a, Eigen::MatrixXd::Identity(n, n)};
}

Channel constant_channel(const Alphabet& input, const Alphabet& output,
                         std::size_t y) {
  validate_alphabet(input);
  validate_alphabet(output);
  if (y >= output.size()) {
    throw Error(ErrorCode::kUnknownSymbol,
                "output index " + std::to_string(y) + " out of range");
  }
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(
      static_cast<Eigen::Index>(input.size()),
      static_cast<Eigen::Index>(output.size()));
  m.col(static_cast<Eigen::Index>(y)).setOnes();
  return Channel{input, output, std::move(m)};
}

void validate_metric(const MetricSpace& m) {
  validate_alphabet(m.alphabet);
  const auto n = static_cast<Eigen::Index>(m.alphabet.size());
  if (m.dist.rows() != n || m.dist.cols() != n) {
    throw Error(ErrorCode::kShapeMismatch, "distance matrix is not |A| x |A|");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (m.dist(i, i) != 0.0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "metric diagonal entry " + std::to_string(i) + " is not 0");
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      if (m.dist(i, j) < 0.0) {
        throw Error(ErrorCode::kNegativeEntry, "negative distance");
      }
      if (std::abs(m.dist(i, j) - m.dist(j, i)) > kRowSumTol) {
        throw Error(ErrorCode::kInvalidArgument,
                    "metric not symmetric at (" + std::to_string(i) + "," +
                        std::to_string(j) + ")");
      }
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index k = 0; k < n; ++k) {
        if (m.dist(i, k) > m.dist(i, j) + m.dist(j, k) + kRowSumTol) {
          throw Error(ErrorCode::kInvalidArgument,
                      "triangle inequality violated on (" + std::to_string(i) +
                          "," + std::to_string(j) + "," + std::to_string(k) +
                          ")");
        }
      }
    }
  }
}

void validate_secret_model(const SecretModel& sm) {
  validate_alphabet(sm.secrets);
  validate_alphabet(sm.data);
  for (const auto& [i, j] : sm.pairs) {
    if (i >= sm.secrets.size() || j >= sm.secrets.size()) {
      throw Error(ErrorCode::kUnknownSymbol,
                  "discriminative pair references a missing secret");
    }
    if (i == j) {
      throw Error(ErrorCode::kInvalidArgument,
                  "discriminative pair must name two distinct secrets");
    }
  }
  if (sm.scenarios.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "scenario list is empty");
  }
  for (std::size_t t = 0; t < sm.scenarios.size(); ++t) {
    const auto& theta = sm.scenarios[t];
    if (static_cast<std::size_t>(theta.rows()) != sm.secrets.size() ||
        static_cast<std::size_t>(theta.cols()) != sm.data.size()) {
      throw Error(ErrorCode::kShapeMismatch,
                  "scenario " + std::to_string(t) +
                      " is not |secrets| x |data|");
    }
    for (Eigen::Index s = 0; s < theta.rows(); ++s) {
      Prior row{sm.data, theta.row(s).transpose()};
      try {
        validate_prior(row);
      } catch (const Error& e) {
        throw Error(e.code(), "scenario " + std::to_string(t) + ", secret '" +
                                  sm.secrets.symbols[static_cast<std::size_t>(
                                      s)] +
                                  "': " + e.what());
      }
    }
  }
}

ExtReal ExtReal::finite(double v) {
  if (std::isnan(v)) {
    throw Error(ErrorCode::kInvalidArgument, "budget is NaN");
  }
  if (v < 0.0) {
    if (v < -kRowSumTol) {
      throw Error(ErrorCode::kInvalidArgument, "budget is negative");
    }
    v = 0.0;
  }
  return ExtReal(v);
}

std::string to_string(const ExtReal& e) {
  if (e.is_infinite()) return "inf";
  return std::to_string(e.value());
}

double log_ratio(double a, double b) {
  a = clamp_prob(a);
  b = clamp_prob(b);
  if (a == 0.0 && b == 0.0) return 0.0;
  if (b == 0.0) return std::numeric_limits<double>::infinity();
  if (a == 0.0) return -std::numeric_limits<double>::infinity();
  return std::log(a) - std::log(b);
}

Prior output_dist(const Channel& c, const Prior& p) {
  if (!p.alphabet.same_labels(c.input)) {
    throw Error(ErrorCode::kAlphabetMismatch,
                "prior alphabet does not match channel input");
  }
  return Prior{c.output, c.matrix.transpose() * p.probs};
}

Prior posterior_at(const Channel& c, const Prior& p, std::size_t y_index) {
  if (!p.alphabet.same_labels(c.input)) {
    throw Error(ErrorCode::kAlphabetMismatch,
                "prior alphabet does not match channel input");
  }
  if (y_index >= c.output.size()) {
    throw Error(ErrorCode::kUnknownSymbol, "output index out of range");
  }
  const Eigen::VectorXd joint =
      p.probs.cwiseProduct(c.matrix.col(static_cast<Eigen::Index>(y_index)));
  const double marginal = joint.sum();
  if (clamp_prob(marginal) == 0.0) {
    throw Error(ErrorCode::kZeroMarginal,
                "output '" + c.output.symbols[y_index] +
                    "' has zero probability under the prior");
  }
  return Prior{c.input, joint / marginal};
}

Prior posterior(const Channel& c, const Prior& p, const std::string& y) {
  return posterior_at(c, p, c.output.index_of(y));
}

Channel compose(const Channel& c, const Channel& post) {
  if (!c.output.same_labels(post.input)) {
    throw Error(ErrorCode::kAlphabetMismatch,
                "post-processing input alphabet does not match channel output");
  }
  return Channel{c.input, post.output, c.matrix * post.matrix};
}

}  // namespace localpriv
