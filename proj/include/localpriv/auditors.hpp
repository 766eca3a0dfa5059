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

#include <optional>
#include <string>
#include <vector>

#include "localpriv/core.hpp"

namespace localpriv {

enum class Notion {
  kLdp,
  kLdpDelta,
  kLip,
  kLipDelta,
  kLmip,
  kDi,
  kMil,
  kPufferfish,
  kGeo,
};

std::string to_string(Notion n);
Notion notion_from_string(const std::string& s);

// Symbols at which the audited maximum is attained. Meaning per notion:
//   LDP / DI / GEO:  {x, x', y}
//   LDP_DELTA:       {x, x'}
//   LIP:             {x, y}
//   LIP_DELTA:       {x}
//   MIL:             one maximizing x per output, in output order
//   PUFFERFISH:      {s_i, s_j, y} plus the scenario index
struct Witness {
  std::vector<std::string> labels;
  std::optional<std::size_t> scenario;
};

struct AuditReport {
  Notion notion;
  ExtReal epsilon;
  std::optional<double> delta;       // LDP_DELTA / LIP_DELTA only
  std::optional<Witness> witness;    // absent when the bound is vacuous
  std::vector<std::string> skipped_inputs;  // zero-prior symbols left out
};

// Tightest eps such that every output is at most e^eps more likely under any
// input than under any other (local differential privacy). Infinite iff some
// output is possible under one input and impossible under another.
AuditReport audit_ldp(const Channel& c);

// Smallest delta such that the eps-LDP likelihood-ratio bound holds up to
// additive slack delta, i.e. the max pairwise hockey-stick divergence
// sum_y max(c(y|x) - e^eps c(y|x'), 0).
AuditReport audit_ldp_delta(const Channel& c, double eps);

// Tightest eps bounding |ln c(y|x) / q(y)| over singleton events with
// positive joint probability, q the output marginal under p (local
// information privacy at delta = 0). Symbols with p(x) = 0 are skipped and
// listed in the report.
AuditReport audit_lip(const Channel& c, const Prior& p);

// Smallest delta making both LIP inequalities hold for every event pair
// (S_x, S_y) at the given eps. The worst S_x is a singleton and the worst
// S_y collects the per-output violations of one inequality sign.
AuditReport audit_lip_delta(const Channel& c, const Prior& p, double eps);

// Shannon mutual information I(X;Y) in nats; average-case, no witness.
AuditReport audit_lmip(const Channel& c, const Prior& p);

// Tightest eps bounding the posterior ratio P(x|y)/P(x'|y) over outputs with
// positive marginal (differential identifiability).
AuditReport audit_di(const Channel& c, const Prior& p);

// Maximal information leakage ln sum_y max_x c(y|x); prior-independent.
AuditReport audit_mil(const Channel& c);

// Tightest eps bounding |ln m_i(y)/m_j(y)| over scenarios, discriminative
// pairs and outputs, where m_s(y) = sum_x P(x|s, theta) c(y|x) (local
// pufferfish privacy).
AuditReport audit_pufferfish(const Channel& c, const SecretModel& sm);

// Tightest eps with c(y|x) <= e^{eps d(x,x')} c(y|x') everywhere
// (geo-indistinguishability). Distinct inputs at distance 0 must have
// identical rows, otherwise the budget is infinite.
AuditReport audit_geo(const Channel& c, const MetricSpace& m);

}  // namespace localpriv
