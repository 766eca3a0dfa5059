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

#include <cstdint>
#include <string>
#include <vector>

#include "localpriv/core.hpp"

namespace localpriv {

enum class MechanismKind { kKrr, kOue };

std::string to_string(MechanismKind kind);
MechanismKind mechanism_from_string(const std::string& s);

// A collection of privatized reports ready for aggregation. KRR reports are
// output symbols; OUE reports are length-|alphabet| bit vectors.
struct ReportBatch {
  MechanismKind mechanism = MechanismKind::kKrr;
  double epsilon = 0.0;
  Alphabet alphabet;
  std::vector<std::string> krr_reports;
  std::vector<std::vector<std::uint8_t>> oue_reports;

  std::size_t size() const {
    return mechanism == MechanismKind::kKrr ? krr_reports.size()
                                            : oue_reports.size();
  }
};

void validate_batch(const ReportBatch& batch);

// k-ary randomized response: answer truthfully with probability
// e^eps / (e^eps + k - 1), otherwise uniformly among the other symbols.
Channel make_rr(const Alphabet& alphabet, double eps);

// Optimized unary encoding: one-hot encode, keep the true bit with
// probability 1/2, flip each zero bit on with probability 1/(e^eps + 1).
// The explicit channel has all 2^k bit vectors as outputs, so k <= 12.
Channel make_oue(const Alphabet& alphabet, double eps);

// Release the true symbol with probability p_truth, otherwise sample from the
// prior. With a uniform prior this reproduces randomized response.
Channel make_sampling(const Prior& p_prior, double p_truth);

// Two-sided geometric noise with ratio e^-eps on a consecutive-integer grid,
// with out-of-range mass folded onto the nearest endpoint.
Channel make_geometric(const Alphabet& alphabet, double eps);

// Exponential mechanism on a metric space: c(y|x) proportional to
// e^{-(eps/2) d(x,y)}. The half-budget covers the normalizer shift, so the
// built channel re-audits at geo-indistinguishability <= eps.
Channel make_geo_exp(const MetricSpace& m, double eps);

// Pufferfish noise calibration: scales geometric noise by the largest
// infinity-Wasserstein distance between the conditionals of any
// discriminative pair, so the built channel re-audits at pufferfish <= eps.
Channel make_wasserstein(const SecretModel& sm, double eps,
                         const Alphabet& output_grid);

// n independent draws from row x. Deterministic and portable: mt19937_64
// seeded with `seed`, one 64-bit draw per report mapped to
// u = (z >> 11) * 2^-53 and inverted through the row's cumulative sums.
std::vector<std::string> sample(const Channel& c, const std::string& x,
                                std::size_t n, std::uint64_t seed);

// Bias-corrected frequency estimates. KRR: (phat_v - q) / (p - q); OUE:
// (c_v/n - q) / (1/2 - q). Values may fall outside [0,1]; no clipping.
Eigen::VectorXd estimate_frequencies(const ReportBatch& batch);

// Output alphabet used by make_oue: all 2^k bit strings, label position v
// holding bit v of the report.
Alphabet oue_output_alphabet(std::size_t k);

}  // namespace localpriv
