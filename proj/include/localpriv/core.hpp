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

#pragma once

#include <Eigen/Dense>
#include <compare>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace localpriv {

inline constexpr char kVersion[] = "0.1.0";

// Probabilities below this are treated as exact (structural) zeros before any
// ratio is formed. Distinguishes impossible outputs, which force infinite
// budgets, from floating-point dust.
inline constexpr double kZeroTol = 1e-12;

// Tolerance on probability-vector sums (channel rows, priors).
inline constexpr double kRowSumTol = 1e-9;

enum class ErrorCode {
  kRowSumError,
  kNegativeEntry,
  kShapeMismatch,
  kAlphabetMismatch,
  kZeroMarginal,
  kDegenerateAlphabet,
  kEmptyPairs,
  kNotAGrid,
  kAlphabetTooLarge,
  kUnknownSymbol,
  kEmptyBatch,
  kNoConvergence,
  kZeroDistance,
  kEmptyDataset,
  kMissingInput,
  kParseError,
  kNoEmbedding,
  kInvalidArgument,
};

std::string to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(to_string(code) + ": " + message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Ordered set of distinct symbol labels; the optional embedding attaches one
// numeric value per symbol (grids, locations). Symbols are purely nominal
// otherwise.
struct Alphabet {
  std::vector<std::string> symbols;
  std::optional<std::vector<double>> embedding;

  std::size_t size() const { return symbols.size(); }

  // Index of `label`; throws UnknownSymbol if absent.
  std::size_t index_of(const std::string& label) const;

  // Same labels in the same order; embeddings are not compared.
  bool same_labels(const Alphabet& other) const {
    return symbols == other.symbols;
  }

  // {prefix0, prefix1, ...}, no embedding.
  static Alphabet indexed(const std::string& prefix, std::size_t k);

  // Labels "lo".."hi" with embedding lo..hi (consecutive integers).
  static Alphabet integer_grid(long lo, long hi);
};

void validate_alphabet(const Alphabet& a);

// Returns an alphabet identical to `a` but guaranteed to carry an embedding:
// either the one already present, or one parsed from the labels when every
// label is a finite decimal number. Throws NoEmbedding otherwise.
Alphabet ensure_embedding(const Alphabet& a);

struct Prior {
  Alphabet alphabet;
  Eigen::VectorXd probs;

  double operator()(std::size_t i) const { return probs(i); }
};

void validate_prior(const Prior& p);

Prior uniform_prior(const Alphabet& a);

// Row-stochastic conditional distribution P(Y=y | X=x): the universal
// representation of a one-shot local privatization mechanism.
struct Channel {
  Alphabet input;
  Alphabet output;
  Eigen::MatrixXd matrix;  // |input| x |output|

  double operator()(std::size_t x, std::size_t y) const { return matrix(x, y); }
};

// Checks the Channel invariants: matrix shape matches the alphabets
// (ShapeMismatch), no negative entries (NegativeEntry), every row sums to 1
// within kRowSumTol (RowSumError).
void validate_channel(const Channel& c);

Channel identity_channel(const Alphabet& a);

// Every input maps to `y` with probability 1.
Channel constant_channel(const Alphabet& input, const Alphabet& output,
                         std::size_t y);

// Symmetric distance matrix with zero diagonal satisfying the triangle
// inequality (within kRowSumTol). Units are application-defined.
struct MetricSpace {
  Alphabet alphabet;
  Eigen::MatrixXd dist;
};

void validate_metric(const MetricSpace& m);

// Secrets, discriminative pairs, and data-evolution scenarios. Each scenario
// holds one conditional distribution over the data alphabet per secret
// (scenario matrix row s = P(X = . | secret s, scenario)).
struct SecretModel {
  Alphabet secrets;
  Alphabet data;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<Eigen::MatrixXd> scenarios;  // each |secrets| x |data|
};

void validate_secret_model(const SecretModel& sm);

// Nonnegative extended real; tightest budgets may be unbounded.
class ExtReal {
 public:
  ExtReal() : value_(0.0) {}

  static ExtReal infinity() {
    return ExtReal(std::numeric_limits<double>::infinity());
  }

  // Clamps sub-1e-9 negative float dust to 0; genuinely negative values are
  // rejected.
  static ExtReal finite(double v);

  double value() const { return value_; }
  bool is_infinite() const { return std::isinf(value_); }

  friend bool operator==(const ExtReal& a, const ExtReal& b) = default;
  friend auto operator<=>(const ExtReal& a, const ExtReal& b) {
    return a.value_ <=> b.value_;
  }

 private:
  explicit ExtReal(double v) : value_(v) {}
  double value_;
};

std::string to_string(const ExtReal& e);

inline double clamp_prob(double p) { return p < kZeroTol ? 0.0 : p; }

// ln(a/b) computed as ln(a) - ln(b) after zero clamping, with the
// conventions 0/0 -> 0, a/0 -> +inf, 0/b -> -inf.
double log_ratio(double a, double b);

// Output marginal q(y) = sum_x p(x) c(y|x).
Prior output_dist(const Channel& c, const Prior& p);

// Bayes posterior P(x | Y = y). Throws ZeroMarginal when y has no probability
// under p.
Prior posterior(const Channel& c, const Prior& p, const std::string& y);
Prior posterior_at(const Channel& c, const Prior& p, std::size_t y_index);

// Cascade: first c, then post applied to c's output.
Channel compose(const Channel& c, const Channel& post);

}  // namespace localpriv
