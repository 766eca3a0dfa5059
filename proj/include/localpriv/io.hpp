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

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "localpriv/anonymity.hpp"
#include "localpriv/auditors.hpp"
#include "localpriv/core.hpp"
#include "localpriv/mechanisms.hpp"
#include "localpriv/optimizer.hpp"

namespace localpriv {

// JSON object representations. Infinite budgets serialize as the string
// "inf"; everything else uses plain numbers (nlohmann emits shortest
// round-trip decimals, so re-parsing is lossless).

nlohmann::json channel_to_json(const Channel& c);
Channel channel_from_json(const nlohmann::json& j);

nlohmann::json prior_to_json(const Prior& p);
Prior prior_from_json(const nlohmann::json& j);

nlohmann::json metric_to_json(const MetricSpace& m);
MetricSpace metric_from_json(const nlohmann::json& j);

nlohmann::json secret_model_to_json(const SecretModel& sm);
SecretModel secret_model_from_json(const nlohmann::json& j);

nlohmann::json distortion_to_json(const DistortionMatrix& d);
DistortionMatrix distortion_from_json(const nlohmann::json& j);

nlohmann::json audit_report_to_json(const AuditReport& report);

nlohmann::json ext_real_to_json(const ExtReal& e);

// File helpers; parse failures surface as ParseError with byte position.
nlohmann::json load_json(const std::string& path);
void save_json(const nlohmann::json& j, const std::string& path);

Channel load_channel(const std::string& path);
void save_channel(const Channel& c, const std::string& path);
Prior load_prior(const std::string& path);
MetricSpace load_metric(const std::string& path);
SecretModel load_secret_model(const std::string& path);
DistortionMatrix load_distortion(const std::string& path);

// RFC 4180 style CSV: double-quote escaping, quoted cells may contain commas
// and newlines; CRLF tolerated.
std::vector<std::vector<std::string>> parse_csv(std::istream& in);
std::string csv_escape(const std::string& cell);

// Dataset CSV with a header row.
Dataset load_dataset(const std::string& path,
                     const std::vector<std::string>& quasi_names,
                     const std::string& sensitive_name);

// ReportBatch CSV (header `report` for KRR, `b0,b1,...` for OUE) plus a JSON
// sidecar at `<path>.json` holding mechanism, epsilon, alphabet and n.
void save_batch(const ReportBatch& batch, const std::string& path);
ReportBatch load_batch(const std::string& path);

// Tradeoff CSV with header `epsilon,distortion,iterations`.
void save_curve(const TradeoffCurve& curve, const std::string& path);

}  // namespace localpriv
