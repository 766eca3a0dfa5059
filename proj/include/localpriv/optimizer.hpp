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

#include <vector>

#include "localpriv/core.hpp"

namespace localpriv {

// Application loss d(x, y) >= 0 paid for reporting y when the datum is x.
struct DistortionMatrix {
  Alphabet input;
  Alphabet output;
  Eigen::MatrixXd d;
};

void validate_distortion(const DistortionMatrix& d);

struct MipSolution {
  Channel channel;
  double mutual_information = 0.0;  // nats, at the returned channel
  double expected_distortion = 0.0;
  std::size_t iterations = 0;       // inner alternating-minimization steps
  double slope = 0.0;               // Lagrangian trade-off parameter used
};

// Synthesizes a channel approximately minimizing E[d(X,Y)] subject to
// I(X;Y) <= eps, by alternating minimization of E[d] + (1/s) I with the
// closed-form marginal/row updates and an outer bisection on the slope s
// to land I within 1e-4 nats of eps (or below it when the budget already
// exceeds what the distortion-minimal channel leaks).
MipSolution design_mip_channel(const Prior& p, const DistortionMatrix& d,
                               double eps);

// Infinity-Wasserstein distance between two distributions on the same
// numerically embedded alphabet: the largest horizontal gap between the two
// quantile functions (one-dimensional closed form).
double wasserstein_inf(const Prior& a, const Prior& b);

struct TradeoffPoint {
  double epsilon = 0.0;
  double distortion = 0.0;
  std::size_t iterations = 0;
};

// Privacy-utility frontier: epsilons strictly increasing, distortions
// non-increasing within 1e-6 slack.
struct TradeoffCurve {
  std::vector<TradeoffPoint> points;
};

void validate_curve(const TradeoffCurve& curve);

// One design_mip_channel solve per grid point.
TradeoffCurve tradeoff_curve(const Prior& p, const DistortionMatrix& d,
                             const std::vector<double>& eps_grid);

}  // namespace localpriv
