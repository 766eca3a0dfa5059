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

#include "localpriv/auditors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace localpriv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Max/argmax accumulator with strict-improvement updates, so ties resolve to
// the first candidate in iteration order (lowest indices).
struct ArgMax {
  double best = -kInf;
  std::vector<std::size_t> idx;

  bool offer(double v, std::vector<std::size_t> at) {
    if (v > best) {
      best = v;
      idx = std::move(at);
      return true;
    }
    return false;
  }
};

std::vector<std::string> zero_prior_symbols(const Prior& p) {
  std::vector<std::string> skipped;
  for (Eigen::Index i = 0; i < p.probs.size(); ++i) {
    if (clamp_prob(p.probs(i)) == 0.0) {
      skipped.push_back(p.alphabet.symbols[static_cast<std::size_t>(i)]);
    }
  }
  return skipped;
}

void require_prior_matches(const Channel& c, const Prior& p) {
  if (!p.alphabet.same_labels(c.input)) {
    throw Error(ErrorCode::kAlphabetMismatch,
                "prior alphabet does not match channel input");
  }
}

// e^eps * q without producing NaN when q is a structural zero and eps is
// large enough to overflow exp.
double scaled(double eps, double q) {
  return q == 0.0 ? 0.0 : std::exp(eps) * q;
}

}  // namespace

std::string to_string(Notion n) {
  switch (n) {
    case Notion::kLdp: return "ldp";
    case Notion::kLdpDelta: return "ldp-delta";
    case Notion::kLip: return "lip";
    case Notion::kLipDelta: return "lip-delta";
    case Notion::kLmip: return "lmip";
    case Notion::kDi: return "di";
    case Notion::kMil: return "mil";
    case Notion::kPufferfish: return "pufferfish";
    case Notion::kGeo: return "geo";
  }
  return "unknown";
}

Notion notion_from_string(const std::string& s) {
  if (s == "ldp") return Notion::kLdp;
  if (s == "ldp-delta") return Notion::kLdpDelta;
  if (s == "lip") return Notion::kLip;
  if (s == "lip-delta") return Notion::kLipDelta;
  if (s == "lmip") return Notion::kLmip;
  if (s == "di") return Notion::kDi;
  if (s == "mil") return Notion::kMil;
  if (s == "pufferfish") return Notion::kPufferfish;
  if (s == "geo") return Notion::kGeo;
  throw Error(ErrorCode::kInvalidArgument, "unknown notion '" + s + "'");
}

AuditReport audit_ldp(const Channel& c) {
  if (c.input.size() < 2) {
    throw Error(ErrorCode::kDegenerateAlphabet,
                "LDP needs at least two inputs");
  }
  const auto n = c.matrix.rows();
  const auto m = c.matrix.cols();
  ArgMax arg;
  for (Eigen::Index x = 0; x < n; ++x) {
    for (Eigen::Index xp = 0; xp < n; ++xp) {
      if (xp == x) continue;
      for (Eigen::Index y = 0; y < m; ++y) {
        const double r = log_ratio(c.matrix(x, y), c.matrix(xp, y));
        arg.offer(r, {static_cast<std::size_t>(x), static_cast<std::size_t>(xp),
                      static_cast<std::size_t>(y)});
      }
    }
  }
  AuditReport report;
  report.notion = Notion::kLdp;
  report.epsilon = std::isinf(arg.best) && arg.best > 0
                       ? ExtReal::infinity()
                       : ExtReal::finite(std::max(arg.best, 0.0));
  report.witness = Witness{{c.input.symbols[arg.idx[0]],
                            c.input.symbols[arg.idx[1]],
                            c.output.symbols[arg.idx[2]]},
                           std::nullopt};
  return report;
}

AuditReport audit_ldp_delta(const Channel& c, double eps) {
  if (eps < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "eps must be >= 0");
  }
  const auto n = c.matrix.rows();
  const auto m = c.matrix.cols();
  ArgMax arg;
  for (Eigen::Index x = 0; x < n; ++x) {
    for (Eigen::Index xp = 0; xp < n; ++xp) {
      if (xp == x) continue;
      double sum = 0.0;
      for (Eigen::Index y = 0; y < m; ++y) {
        const double hinge =
            clamp_prob(c.matrix(x, y)) - scaled(eps, clamp_prob(c.matrix(xp, y)));
        if (hinge > 0.0) sum += hinge;
      }
      arg.offer(sum, {static_cast<std::size_t>(x), static_cast<std::size_t>(xp)});
    }
  }
  AuditReport report;
  report.notion = Notion::kLdpDelta;
  report.epsilon = ExtReal::finite(eps);
  report.delta = std::clamp(arg.best, 0.0, 1.0);
  if (n >= 2) {
    report.witness = Witness{{c.input.symbols[arg.idx[0]],
                              c.input.symbols[arg.idx[1]]},
                             std::nullopt};
  }
  return report;
}

AuditReport audit_lip(const Channel& c, const Prior& p) {
  require_prior_matches(c, p);
  const Prior q = output_dist(c, p);
  AuditReport report;
  report.notion = Notion::kLip;
  report.skipped_inputs = zero_prior_symbols(p);

  ArgMax arg;
  bool any = false;
  for (Eigen::Index x = 0; x < c.matrix.rows(); ++x) {
    if (clamp_prob(p.probs(x)) == 0.0) continue;
    for (Eigen::Index y = 0; y < c.matrix.cols(); ++y) {
      const double cond = clamp_prob(c.matrix(x, y));
      const double marg = clamp_prob(q.probs(y));
      // Only events with positive joint probability constrain the budget.
      if (cond == 0.0 || marg == 0.0) continue;
      any = true;
      const double r = std::abs(std::log(cond) - std::log(marg));
      arg.offer(r, {static_cast<std::size_t>(x), static_cast<std::size_t>(y)});
    }
  }
  if (!any) {
    report.epsilon = ExtReal::finite(0.0);
    return report;
  }
  report.epsilon = ExtReal::finite(arg.best);
  report.witness = Witness{{c.input.symbols[arg.idx[0]],
                            c.output.symbols[arg.idx[1]]},
                           std::nullopt};
  return report;
}

AuditReport audit_lip_delta(const Channel& c, const Prior& p, double eps) {
  require_prior_matches(c, p);
  if (eps < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "eps must be >= 0");
  }
  const Prior q = output_dist(c, p);
  AuditReport report;
  report.notion = Notion::kLipDelta;
  report.epsilon = ExtReal::finite(eps);
  report.skipped_inputs = zero_prior_symbols(p);

  ArgMax arg;
  for (Eigen::Index x = 0; x < c.matrix.rows(); ++x) {
    if (clamp_prob(p.probs(x)) == 0.0) continue;
    double upper = 0.0;  // P(S_y) <= e^eps P(S_y|x) + delta
    double lower = 0.0;  // P(S_y) >= e^-eps P(S_y|x) - delta
    for (Eigen::Index y = 0; y < c.matrix.cols(); ++y) {
      const double cond = clamp_prob(c.matrix(x, y));
      const double marg = clamp_prob(q.probs(y));
      const double up = marg - scaled(eps, cond);
      if (up > 0.0) upper += up;
      const double lo = std::exp(-eps) * cond - marg;
      if (lo > 0.0) lower += lo;
    }
    arg.offer(std::max(upper, lower), {static_cast<std::size_t>(x)});
  }
  report.delta = arg.idx.empty() ? 0.0 : std::clamp(arg.best, 0.0, 1.0);
  if (!arg.idx.empty()) {
    report.witness = Witness{{c.input.symbols[arg.idx[0]]}, std::nullopt};
  }
  return report;
}

AuditReport audit_lmip(const Channel& c, const Prior& p) {
  require_prior_matches(c, p);
  const Prior q = output_dist(c, p);
  double info = 0.0;
  for (Eigen::Index x = 0; x < c.matrix.rows(); ++x) {
    const double px = clamp_prob(p.probs(x));
    if (px == 0.0) continue;
    for (Eigen::Index y = 0; y < c.matrix.cols(); ++y) {
      const double cond = clamp_prob(c.matrix(x, y));
      const double marg = clamp_prob(q.probs(y));
      if (cond == 0.0 || marg == 0.0) continue;
      info += px * cond * (std::log(cond) - std::log(marg));
    }
  }
  AuditReport report;
  report.notion = Notion::kLmip;
  report.epsilon = ExtReal::finite(std::max(info, 0.0));
  report.skipped_inputs = zero_prior_symbols(p);
  return report;
}

AuditReport audit_di(const Channel& c, const Prior& p) {
  require_prior_matches(c, p);
  if (c.input.size() < 2) {
    throw Error(ErrorCode::kDegenerateAlphabet, "DI needs at least two inputs");
  }
  const Prior q = output_dist(c, p);
  AuditReport report;
  report.notion = Notion::kDi;
  report.skipped_inputs = zero_prior_symbols(p);

  // Posterior ratio in log space: the prior terms cancel exactly under a
  // uniform prior, collapsing DI onto LDP bit for bit.
  ArgMax arg;
  bool any = false;
  for (Eigen::Index x = 0; x < c.matrix.rows(); ++x) {
    const double px = clamp_prob(p.probs(x));
    if (px == 0.0) continue;
    for (Eigen::Index xp = 0; xp < c.matrix.rows(); ++xp) {
      if (xp == x) continue;
      const double pxp = clamp_prob(p.probs(xp));
      if (pxp == 0.0) continue;
      for (Eigen::Index y = 0; y < c.matrix.cols(); ++y) {
        if (clamp_prob(q.probs(y)) == 0.0) continue;
        any = true;
        const double base = log_ratio(c.matrix(x, y), c.matrix(xp, y));
        double r;
        if (std::isinf(base)) {
          r = base;
        } else if (base == 0.0 && clamp_prob(c.matrix(x, y)) == 0.0) {
          continue;  // both conditionals zero: no posterior mass on the pair
        } else {
          r = base + (std::log(px) - std::log(pxp));
        }
        arg.offer(r, {static_cast<std::size_t>(x), static_cast<std::size_t>(xp),
                      static_cast<std::size_t>(y)});
      }
    }
  }
  if (!any || arg.idx.empty()) {
    report.epsilon = ExtReal::finite(0.0);
    return report;
  }
  report.epsilon = std::isinf(arg.best) && arg.best > 0
                       ? ExtReal::infinity()
                       : ExtReal::finite(std::max(arg.best, 0.0));
  report.witness = Witness{{c.input.symbols[arg.idx[0]],
                            c.input.symbols[arg.idx[1]],
                            c.output.symbols[arg.idx[2]]},
                           std::nullopt};
  return report;
}

AuditReport audit_mil(const Channel& c) {
  double sum = 0.0;
  std::vector<std::string> maximizers;
  maximizers.reserve(static_cast<std::size_t>(c.matrix.cols()));
  for (Eigen::Index y = 0; y < c.matrix.cols(); ++y) {
    Eigen::Index best_x = 0;
    double best = c.matrix(0, y);
    for (Eigen::Index x = 1; x < c.matrix.rows(); ++x) {
      if (c.matrix(x, y) > best) {
        best = c.matrix(x, y);
        best_x = x;
      }
    }
    sum += best;
    maximizers.push_back(c.input.symbols[static_cast<std::size_t>(best_x)]);
  }
  AuditReport report;
  report.notion = Notion::kMil;
  report.epsilon = ExtReal::finite(std::max(std::log(sum), 0.0));
  report.witness = Witness{std::move(maximizers), std::nullopt};
  return report;
}

AuditReport audit_pufferfish(const Channel& c, const SecretModel& sm) {
  if (!sm.data.same_labels(c.input)) {
    throw Error(ErrorCode::kAlphabetMismatch,
                "secret-model data alphabet does not match channel input");
  }
  if (sm.pairs.empty()) {
    throw Error(ErrorCode::kEmptyPairs, "no discriminative pairs to audit");
  }
  AuditReport report;
  report.notion = Notion::kPufferfish;

  ArgMax arg;
  std::size_t arg_scenario = 0;
  for (std::size_t t = 0; t < sm.scenarios.size(); ++t) {
    const Eigen::MatrixXd mixed = sm.scenarios[t] * c.matrix;  // |S| x |Y|
    for (std::size_t pi = 0; pi < sm.pairs.size(); ++pi) {
      const auto [i, j] = sm.pairs[pi];
      for (Eigen::Index y = 0; y < mixed.cols(); ++y) {
        const double r = std::abs(
            log_ratio(mixed(static_cast<Eigen::Index>(i), y),
                      mixed(static_cast<Eigen::Index>(j), y)));
        if (arg.offer(r, {i, j, static_cast<std::size_t>(y)})) {
          arg_scenario = t;
        }
      }
    }
  }
  report.epsilon = std::isinf(arg.best) ? ExtReal::infinity()
                                        : ExtReal::finite(std::max(arg.best, 0.0));
  report.witness = Witness{{sm.secrets.symbols[arg.idx[0]],
                            sm.secrets.symbols[arg.idx[1]],
                            c.output.symbols[arg.idx[2]]},
                           arg_scenario};
  return report;
}

AuditReport audit_geo(const Channel& c, const MetricSpace& m) {
  if (!m.alphabet.same_labels(c.input)) {
    throw Error(ErrorCode::kAlphabetMismatch,
                "metric alphabet does not match channel input");
  }
  AuditReport report;
  report.notion = Notion::kGeo;

  ArgMax arg;
  bool infinite = false;
  std::vector<std::size_t> inf_idx;
  for (Eigen::Index x = 0; x < c.matrix.rows() && !infinite; ++x) {
    for (Eigen::Index xp = 0; xp < c.matrix.rows() && !infinite; ++xp) {
      if (xp == x) continue;
      const double d = m.dist(x, xp);
      if (d == 0.0) {
        // Zero-distance inputs must be perfectly indistinguishable.
        for (Eigen::Index y = 0; y < c.matrix.cols(); ++y) {
          if (clamp_prob(c.matrix(x, y)) != clamp_prob(c.matrix(xp, y))) {
            infinite = true;
            inf_idx = {static_cast<std::size_t>(x), static_cast<std::size_t>(xp),
                       static_cast<std::size_t>(y)};
            break;
          }
        }
        continue;
      }
      for (Eigen::Index y = 0; y < c.matrix.cols(); ++y) {
        const double r = log_ratio(c.matrix(x, y), c.matrix(xp, y));
        arg.offer(r / d, {static_cast<std::size_t>(x),
                          static_cast<std::size_t>(xp),
                          static_cast<std::size_t>(y)});
      }
    }
  }
  if (infinite) {
    report.epsilon = ExtReal::infinity();
    report.witness = Witness{{c.input.symbols[inf_idx[0]],
                              c.input.symbols[inf_idx[1]],
                              c.output.symbols[inf_idx[2]]},
                             std::nullopt};
    return report;
  }
  report.epsilon = std::isinf(arg.best) ? ExtReal::infinity()
                                        : ExtReal::finite(std::max(arg.best, 0.0));
  if (!arg.idx.empty()) {
    report.witness = Witness{{c.input.symbols[arg.idx[0]],
                              c.input.symbols[arg.idx[1]],
                              c.output.symbols[arg.idx[2]]},
                             std::nullopt};
  }
  return report;
}

}  // namespace localpriv
