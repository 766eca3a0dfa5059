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

#include "localpriv/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace localpriv {

namespace {

constexpr double kSlopeMin = 1e-6;
constexpr double kSlopeMax = 1e6;
constexpr double kInnerTol = 1e-10;
constexpr std::size_t kInnerCap = 10000;
constexpr double kBudgetTol = 1e-4;  // nats

double mutual_information(const Eigen::VectorXd& p, const Eigen::MatrixXd& c,
                          const Eigen::VectorXd& q) {
  double info = 0.0;
  for (Eigen::Index x = 0; x < c.rows(); ++x) {
    if (p(x) <= 0.0) continue;
    for (Eigen::Index y = 0; y < c.cols(); ++y) {
      if (c(x, y) <= 0.0 || q(y) <= 0.0) continue;
      info += p(x) * c(x, y) * (std::log(c(x, y)) - std::log(q(y)));
    }
  }
  return std::max(info, 0.0);
}

double expected_distortion(const Eigen::VectorXd& p, const Eigen::MatrixXd& c,
                           const Eigen::MatrixXd& d) {
  return (p.asDiagonal() * c).cwiseProduct(d).sum();
}

struct InnerResult {
  Eigen::MatrixXd channel;
  Eigen::VectorXd marginal;
  double info = 0.0;
  double distortion = 0.0;
  std::size_t iterations = 0;
};

// Alternating minimization of E[d] + (1/s) I at fixed slope s, in log space
// so large slopes (near-deterministic channels) stay well-conditioned.
InnerResult solve_at_slope(const Eigen::VectorXd& p, const Eigen::MatrixXd& d,
                           double s) {
  const auto n = d.rows();
  const auto m = d.cols();
  const Eigen::MatrixXd w = -s * d;  // log-weights

  Eigen::MatrixXd c = Eigen::MatrixXd::Constant(n, m, 1.0 / static_cast<double>(m));
  Eigen::VectorXd q = c.transpose() * p;
  double lagrangian = expected_distortion(p, c, d) +
                      mutual_information(p, c, q) / s;

  InnerResult result;
  std::size_t t = 0;
  for (; t < kInnerCap; ++t) {
    // Row update: c(y|x) proportional to q(y) e^{-s d(x,y)}.
    Eigen::VectorXd log_q(m);
    for (Eigen::Index y = 0; y < m; ++y) {
      log_q(y) = q(y) > 0.0 ? std::log(q(y))
                            : -std::numeric_limits<double>::infinity();
    }
    for (Eigen::Index x = 0; x < n; ++x) {
      Eigen::VectorXd logits = log_q + w.row(x).transpose();
      const double peak = logits.maxCoeff();
      Eigen::VectorXd row = (logits.array() - peak).exp();
      c.row(x) = row.transpose() / row.sum();
    }
    q = c.transpose() * p;

    const double next = expected_distortion(p, c, d) +
                        mutual_information(p, c, q) / s;
    const double decrease = lagrangian - next;
    if (decrease < -1e-12) {
      throw Error(ErrorCode::kNoConvergence,
                  "Lagrangian increased by " + std::to_string(-decrease) +
                      " at slope " + std::to_string(s));
    }
    lagrangian = next;
    if (decrease < kInnerTol) {
      ++t;
      break;
    }
  }
  result.channel = std::move(c);
  result.marginal = q;
  result.info = mutual_information(p, result.channel, q);
  result.distortion = expected_distortion(p, result.channel, d);
  result.iterations = t;
  return result;
}

MipSolution pack(const Prior& p, const DistortionMatrix& d, InnerResult inner,
                 double slope) {
  MipSolution sol;
  sol.channel = Channel{p.alphabet, d.output, std::move(inner.channel)};
  sol.mutual_information = inner.info;
  sol.expected_distortion = inner.distortion;
  sol.iterations = inner.iterations;
  sol.slope = slope;
  return sol;
}

}  // namespace

void validate_distortion(const DistortionMatrix& d) {
  validate_alphabet(d.input);
  validate_alphabet(d.output);
  if (static_cast<std::size_t>(d.d.rows()) != d.input.size() ||
      static_cast<std::size_t>(d.d.cols()) != d.output.size()) {
    throw Error(ErrorCode::kShapeMismatch,
                "distortion matrix does not match its alphabets");
  }
  for (Eigen::Index x = 0; x < d.d.rows(); ++x) {
    for (Eigen::Index y = 0; y < d.d.cols(); ++y) {
      if (!(d.d(x, y) >= 0.0) || !std::isfinite(d.d(x, y))) {
        throw Error(ErrorCode::kNegativeEntry,
                    "distortion entries must be finite and >= 0");
      }
    }
  }
}

MipSolution design_mip_channel(const Prior& p, const DistortionMatrix& d,
                               double eps) {
  validate_prior(p);
  validate_distortion(d);
  if (!d.input.same_labels(p.alphabet)) {
    throw Error(ErrorCode::kAlphabetMismatch,
                "distortion input alphabet does not match the prior");
  }
  if (eps < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "eps must be >= 0");
  }
  for (Eigen::Index x = 0; x < p.probs.size(); ++x) {
    if (clamp_prob(p.probs(x)) == 0.0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "prior must have full support; symbol '" +
                      p.alphabet.symbols[static_cast<std::size_t>(x)] +
                      "' has zero probability");
    }
  }

  // Zero budget: no information may flow, so the channel is constant on the
  // output minimizing expected loss (ties to the lowest index).
  if (eps <= kZeroTol) {
    const Eigen::VectorXd avg_loss = d.d.transpose() * p.probs;
    Eigen::Index best = 0;
    for (Eigen::Index y = 1; y < avg_loss.size(); ++y) {
      if (avg_loss(y) < avg_loss(best)) best = y;
    }
    MipSolution sol;
    sol.channel = constant_channel(p.alphabet, d.output,
                                   static_cast<std::size_t>(best));
    sol.mutual_information = 0.0;
    sol.expected_distortion = avg_loss(best);
    sol.iterations = 0;
    sol.slope = 0.0;
    return sol;
  }

  InnerResult high = solve_at_slope(p.probs, d.d, kSlopeMax);
  if (high.info <= eps) {
    return pack(p, d, std::move(high), kSlopeMax);
  }

  double lo = std::log(kSlopeMin);
  double hi = std::log(kSlopeMax);
  InnerResult at_lo = solve_at_slope(p.probs, d.d, kSlopeMin);
  for (int iter = 0; iter < 200 && hi - lo > 1e-12; ++iter) {
    const double mid = 0.5 * (lo + hi);
    InnerResult at_mid = solve_at_slope(p.probs, d.d, std::exp(mid));
    if (std::abs(at_mid.info - eps) <= kBudgetTol) {
      return pack(p, d, std::move(at_mid), std::exp(mid));
    }
    if (at_mid.info > eps) {
      hi = mid;
    } else {
      lo = mid;
      at_lo = std::move(at_mid);
    }
  }
  // Interval exhausted without hitting the tolerance band; the low side keeps
  // I <= eps, so the audited guarantee still holds.
  return pack(p, d, std::move(at_lo), std::exp(lo));
}

double wasserstein_inf(const Prior& a, const Prior& b) {
  validate_prior(a);
  validate_prior(b);
  if (!a.alphabet.same_labels(b.alphabet)) {
    throw Error(ErrorCode::kAlphabetMismatch,
                "priors live on different alphabets");
  }
  const Alphabet emb = ensure_embedding(a.alphabet);
  const auto& values = *emb.embedding;

  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });

  // Atoms with positive mass, in increasing value order, with cumulative sums.
  struct Cdf {
    std::vector<double> value;
    std::vector<double> cum;
  };
  auto build = [&](const Eigen::VectorXd& probs) {
    Cdf cdf;
    double acc = 0.0;
    for (std::size_t i : order) {
      const double mass = probs(static_cast<Eigen::Index>(i));
      if (mass <= 0.0) continue;
      acc += mass;
      cdf.value.push_back(values[i]);
      cdf.cum.push_back(acc);
    }
    return cdf;
  };
  const Cdf ca = build(a.probs);
  const Cdf cb = build(b.probs);

  auto quantile = [](const Cdf& cdf, double u) {
    const auto it = std::lower_bound(cdf.cum.begin(), cdf.cum.end(), u - 1e-12);
    const std::size_t idx =
        it == cdf.cum.end() ? cdf.cum.size() - 1
                            : static_cast<std::size_t>(it - cdf.cum.begin());
    return cdf.value[idx];
  };

  std::vector<double> breakpoints;
  breakpoints.reserve(ca.cum.size() + cb.cum.size());
  breakpoints.insert(breakpoints.end(), ca.cum.begin(), ca.cum.end());
  breakpoints.insert(breakpoints.end(), cb.cum.begin(), cb.cum.end());
  std::sort(breakpoints.begin(), breakpoints.end());

  double w = 0.0;
  double prev = -1.0;
  for (double u : breakpoints) {
    if (u - prev <= 1e-12) continue;  // snap float-equal breakpoints together
    prev = u;
    w = std::max(w, std::abs(quantile(ca, u) - quantile(cb, u)));
  }
  return w;
}

void validate_curve(const TradeoffCurve& curve) {
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    if (!(curve.points[i].epsilon > curve.points[i - 1].epsilon)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "curve epsilons must be strictly increasing");
    }
    if (curve.points[i].distortion > curve.points[i - 1].distortion + 1e-6) {
      throw Error(ErrorCode::kInvalidArgument,
                  "curve distortions must be non-increasing (1e-6 slack)");
    }
  }
}

TradeoffCurve tradeoff_curve(const Prior& p, const DistortionMatrix& d,
                             const std::vector<double>& eps_grid) {
  if (eps_grid.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "eps grid is empty");
  }
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    if (eps_grid[i] < 0.0 || (i > 0 && eps_grid[i] <= eps_grid[i - 1])) {
      throw Error(ErrorCode::kInvalidArgument,
                  "eps grid must be strictly increasing and >= 0");
    }
  }
  TradeoffCurve curve;
  curve.points.reserve(eps_grid.size());
  for (double eps : eps_grid) {
    try {
      const MipSolution sol = design_mip_channel(p, d, eps);
      curve.points.push_back(
          TradeoffPoint{eps, sol.expected_distortion, sol.iterations});
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kNoConvergence) {
        throw Error(ErrorCode::kNoConvergence,
                    "at grid point eps = " + std::to_string(eps) + ": " +
                        e.what());
      }
      throw;
    }
  }
  validate_curve(curve);
  return curve;
}

}  // namespace localpriv
