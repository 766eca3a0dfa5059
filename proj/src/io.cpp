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

#include "localpriv/io.hpp"

#include <fstream>
#include <sstream>

namespace localpriv {

namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& what) {
  throw Error(ErrorCode::kParseError, what);
}

std::vector<std::string> string_array(const json& j, const std::string& key) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    schema_error("expected array field '" + key + "'");
  }
  std::vector<std::string> out;
  for (const auto& v : j.at(key)) {
    if (!v.is_string()) schema_error("'" + key + "' must hold strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

std::vector<double> number_array(const json& j) {
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) schema_error("expected a number in array");
    out.push_back(v.get<double>());
  }
  return out;
}

Eigen::MatrixXd matrix_field(const json& j, const std::string& key,
                             std::size_t rows_hint) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    schema_error("expected matrix field '" + key + "'");
  }
  const auto& rows = j.at(key);
  if (rows.empty()) schema_error("matrix '" + key + "' is empty");
  const std::size_t n = rows.size();
  if (rows_hint != 0 && n != rows_hint) {
    throw Error(ErrorCode::kShapeMismatch,
                "matrix '" + key + "' has " + std::to_string(n) +
                    " rows, expected " + std::to_string(rows_hint));
  }
  std::size_t m = 0;
  Eigen::MatrixXd mat;
  for (std::size_t i = 0; i < n; ++i) {
    if (!rows[i].is_array()) schema_error("matrix rows must be arrays");
    const auto row = number_array(rows[i]);
    if (i == 0) {
      m = row.size();
      if (m == 0) schema_error("matrix '" + key + "' has an empty row");
      mat.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
    } else if (row.size() != m) {
      throw Error(ErrorCode::kShapeMismatch,
                  "matrix '" + key + "' rows have uneven lengths");
    }
    for (std::size_t c = 0; c < m; ++c) {
      mat(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = row[c];
    }
  }
  return mat;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

}  // namespace

nlohmann::json ext_real_to_json(const ExtReal& e) {
  if (e.is_infinite()) return json("inf");
  return json(e.value());
}

nlohmann::json channel_to_json(const Channel& c) {
  json j;
  j["input"] = c.input.symbols;
  j["output"] = c.output.symbols;
  j["matrix"] = matrix_to_json(c.matrix);
  if (c.input.embedding || c.output.embedding) {
    json emb = json::object();
    if (c.input.embedding) emb["input"] = *c.input.embedding;
    if (c.output.embedding) emb["output"] = *c.output.embedding;
    j["embedding"] = std::move(emb);
  }
  return j;
}

Channel channel_from_json(const nlohmann::json& j) {
  Channel c;
  c.input.symbols = string_array(j, "input");
  c.output.symbols = string_array(j, "output");
  c.matrix = matrix_field(j, "matrix", c.input.symbols.size());
  if (static_cast<std::size_t>(c.matrix.cols()) != c.output.symbols.size()) {
    throw Error(ErrorCode::kShapeMismatch,
                "matrix column count does not match the output alphabet");
  }
  if (j.contains("embedding")) {
    const auto& emb = j.at("embedding");
    if (!emb.is_object()) schema_error("'embedding' must be an object");
    if (emb.contains("input")) c.input.embedding = number_array(emb.at("input"));
    if (emb.contains("output")) {
      c.output.embedding = number_array(emb.at("output"));
    }
  }
  validate_channel(c);
  return c;
}

nlohmann::json prior_to_json(const Prior& p) {
  json j;
  j["alphabet"] = p.alphabet.symbols;
  j["probs"] = vector_to_json(p.probs);
  return j;
}

Prior prior_from_json(const nlohmann::json& j) {
  Prior p;
  p.alphabet.symbols = string_array(j, "alphabet");
  if (!j.contains("probs") || !j.at("probs").is_array()) {
    schema_error("expected array field 'probs'");
  }
  const auto probs = number_array(j.at("probs"));
  p.probs = Eigen::Map<const Eigen::VectorXd>(probs.data(),
                                              static_cast<Eigen::Index>(
                                                  probs.size()));
  validate_prior(p);
  return p;
}

nlohmann::json metric_to_json(const MetricSpace& m) {
  json j;
  j["alphabet"] = m.alphabet.symbols;
  j["dist"] = matrix_to_json(m.dist);
  return j;
}

MetricSpace metric_from_json(const nlohmann::json& j) {
  MetricSpace m;
  m.alphabet.symbols = string_array(j, "alphabet");
  m.dist = matrix_field(j, "dist", m.alphabet.symbols.size());
  validate_metric(m);
  return m;
}

nlohmann::json secret_model_to_json(const SecretModel& sm) {
  json j;
  j["secrets"] = sm.secrets.symbols;
  j["data_alphabet"] = sm.data.symbols;
  json pairs = json::array();
  for (const auto& [a, b] : sm.pairs) {
    pairs.push_back(json::array({sm.secrets.symbols[a], sm.secrets.symbols[b]}));
  }
  j["pairs"] = std::move(pairs);
  json scenarios = json::array();
  for (const auto& theta : sm.scenarios) {
    json scenario = json::object();
    for (Eigen::Index s = 0; s < theta.rows(); ++s) {
      scenario[sm.secrets.symbols[static_cast<std::size_t>(s)]] =
          vector_to_json(theta.row(s).transpose());
    }
    scenarios.push_back(std::move(scenario));
  }
  j["scenarios"] = std::move(scenarios);
  return j;
}

SecretModel secret_model_from_json(const nlohmann::json& j) {
  SecretModel sm;
  sm.secrets.symbols = string_array(j, "secrets");
  sm.data.symbols = string_array(j, "data_alphabet");
  if (!j.contains("pairs") || !j.at("pairs").is_array()) {
    schema_error("expected array field 'pairs'");
  }
  for (const auto& pair : j.at("pairs")) {
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() ||
        !pair[1].is_string()) {
      schema_error("each pair must be [secret, secret]");
    }
    sm.pairs.emplace_back(sm.secrets.index_of(pair[0].get<std::string>()),
                          sm.secrets.index_of(pair[1].get<std::string>()));
  }
  if (!j.contains("scenarios") || !j.at("scenarios").is_array() ||
      j.at("scenarios").empty()) {
    schema_error("expected non-empty array field 'scenarios'");
  }
  for (const auto& scenario : j.at("scenarios")) {
    if (!scenario.is_object()) schema_error("scenarios must be objects");
    Eigen::MatrixXd theta(static_cast<Eigen::Index>(sm.secrets.size()),
                          static_cast<Eigen::Index>(sm.data.size()));
    for (std::size_t s = 0; s < sm.secrets.size(); ++s) {
      const auto& label = sm.secrets.symbols[s];
      if (!scenario.contains(label)) {
        schema_error("scenario is missing a conditional for secret '" + label +
                     "'");
      }
      const auto probs = number_array(scenario.at(label));
      if (probs.size() != sm.data.size()) {
        throw Error(ErrorCode::kShapeMismatch,
                    "conditional for secret '" + label +
                        "' does not match the data alphabet");
      }
      for (std::size_t x = 0; x < probs.size(); ++x) {
        theta(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(x)) =
            probs[x];
      }
    }
    sm.scenarios.push_back(std::move(theta));
  }
  validate_secret_model(sm);
  return sm;
}

nlohmann::json distortion_to_json(const DistortionMatrix& d) {
  json j;
  j["input"] = d.input.symbols;
  j["output"] = d.output.symbols;
  j["d"] = matrix_to_json(d.d);
  return j;
}

DistortionMatrix distortion_from_json(const nlohmann::json& j) {
  DistortionMatrix d;
  d.input.symbols = string_array(j, "input");
  d.output.symbols = string_array(j, "output");
  d.d = matrix_field(j, "d", d.input.symbols.size());
  if (static_cast<std::size_t>(d.d.cols()) != d.output.symbols.size()) {
    throw Error(ErrorCode::kShapeMismatch,
                "'d' column count does not match the output alphabet");
  }
  validate_distortion(d);
  return d;
}

nlohmann::json audit_report_to_json(const AuditReport& report) {
  json j;
  j["notion"] = to_string(report.notion);
  j["epsilon"] = ext_real_to_json(report.epsilon);
  if (report.delta) j["delta"] = *report.delta;
  if (report.witness) {
    json w;
    w["labels"] = report.witness->labels;
    if (report.witness->scenario) w["scenario"] = *report.witness->scenario;
    j["witness"] = std::move(w);
  }
  if (!report.skipped_inputs.empty()) {
    j["skipped_inputs"] = report.skipped_inputs;
  }
  return j;
}

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kMissingInput, "cannot open '" + path + "'");
  }
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParseError,
                std::string(e.what()) + " in '" + path + "'");
  }
}

void save_json(const nlohmann::json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::kMissingInput, "cannot write '" + path + "'");
  }
  out << j.dump(2) << '\n';
}

Channel load_channel(const std::string& path) {
  return channel_from_json(load_json(path));
}

void save_channel(const Channel& c, const std::string& path) {
  save_json(channel_to_json(c), path);
}

Prior load_prior(const std::string& path) {
  return prior_from_json(load_json(path));
}

MetricSpace load_metric(const std::string& path) {
  return metric_from_json(load_json(path));
}

SecretModel load_secret_model(const std::string& path) {
  return secret_model_from_json(load_json(path));
}

DistortionMatrix load_distortion(const std::string& path) {
  return distortion_from_json(load_json(path));
}

std::vector<std::vector<std::string>> parse_csv(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string cell;
  bool quoted = false;
  bool cell_started = false;
  int ch;
  auto end_cell = [&]() {
    row.push_back(std::move(cell));
    cell.clear();
    cell_started = false;
  };
  auto end_row = [&]() {
    end_cell();
    rows.push_back(std::move(row));
    row.clear();
  };
  while ((ch = in.get()) != std::istream::traits_type::eof()) {
    const char c = static_cast<char>(ch);
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          cell.push_back('"');
          in.get();
        } else {
          quoted = false;
        }
      } else {
        cell.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (cell.empty() && !cell_started) {
          quoted = true;
          cell_started = true;
        } else {
          cell.push_back(c);
        }
        break;
      case ',':
        end_cell();
        break;
      case '\r':
        break;
      case '\n':
        end_row();
        break;
      default:
        cell.push_back(c);
        cell_started = true;
        break;
    }
  }
  if (quoted) {
    throw Error(ErrorCode::kParseError, "unterminated quoted CSV cell");
  }
  if (cell_started || !cell.empty() || !row.empty()) {
    end_row();  // final line without trailing newline
  }
  return rows;
}

std::string csv_escape(const std::string& cell) {
  if (cell.find_first_of(",\"\n\r") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += '"';
  return out;
}

Dataset load_dataset(const std::string& path,
                     const std::vector<std::string>& quasi_names,
                     const std::string& sensitive_name) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kMissingInput, "cannot open '" + path + "'");
  }
  auto rows = parse_csv(in);
  if (rows.empty()) {
    throw Error(ErrorCode::kEmptyDataset, "'" + path + "' has no header row");
  }
  std::vector<std::string> header = std::move(rows.front());
  rows.erase(rows.begin());
  return make_dataset(std::move(header), std::move(rows), quasi_names,
                      sensitive_name);
}

void save_batch(const ReportBatch& batch, const std::string& path) {
  validate_batch(batch);
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::kMissingInput, "cannot write '" + path + "'");
  }
  if (batch.mechanism == MechanismKind::kKrr) {
    out << "report\n";
    for (const auto& r : batch.krr_reports) out << csv_escape(r) << '\n';
  } else {
    for (std::size_t v = 0; v < batch.alphabet.size(); ++v) {
      out << (v ? "," : "") << 'b' << v;
    }
    out << '\n';
    for (const auto& r : batch.oue_reports) {
      for (std::size_t v = 0; v < r.size(); ++v) {
        out << (v ? "," : "") << static_cast<int>(r[v]);
      }
      out << '\n';
    }
  }
  out.close();

  json sidecar;
  sidecar["mechanism"] = to_string(batch.mechanism);
  sidecar["epsilon"] = batch.epsilon;
  sidecar["alphabet"] = batch.alphabet.symbols;
  sidecar["n"] = batch.size();
  save_json(sidecar, path + ".json");
}

ReportBatch load_batch(const std::string& path) {
  const json sidecar = load_json(path + ".json");
  ReportBatch batch;
  if (!sidecar.contains("mechanism") || !sidecar.at("mechanism").is_string()) {
    schema_error("sidecar is missing 'mechanism'");
  }
  batch.mechanism = mechanism_from_string(sidecar.at("mechanism"));
  if (!sidecar.contains("epsilon") || !sidecar.at("epsilon").is_number()) {
    schema_error("sidecar is missing 'epsilon'");
  }
  batch.epsilon = sidecar.at("epsilon").get<double>();
  batch.alphabet.symbols = string_array(sidecar, "alphabet");

  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kMissingInput, "cannot open '" + path + "'");
  }
  auto rows = parse_csv(in);
  if (rows.empty()) {
    throw Error(ErrorCode::kParseError, "'" + path + "' has no header row");
  }
  if (batch.mechanism == MechanismKind::kKrr) {
    if (rows.front().size() != 1 || rows.front()[0] != "report") {
      throw Error(ErrorCode::kParseError, "expected KRR header 'report'");
    }
    for (std::size_t i = 1; i < rows.size(); ++i) {
      if (rows[i].size() != 1) {
        throw Error(ErrorCode::kParseError,
                    "KRR line " + std::to_string(i + 1) +
                        " must hold one symbol");
      }
      batch.krr_reports.push_back(rows[i][0]);
    }
  } else {
    if (rows.front().size() != batch.alphabet.size()) {
      throw Error(ErrorCode::kParseError,
                  "OUE header width does not match the alphabet");
    }
    for (std::size_t i = 1; i < rows.size(); ++i) {
      std::vector<std::uint8_t> bits;
      bits.reserve(rows[i].size());
      for (const auto& cell : rows[i]) {
        if (cell != "0" && cell != "1") {
          throw Error(ErrorCode::kParseError,
                      "OUE line " + std::to_string(i + 1) +
                          " holds a non-bit cell");
        }
        bits.push_back(cell == "1" ? 1 : 0);
      }
      batch.oue_reports.push_back(std::move(bits));
    }
  }
  validate_batch(batch);
  return batch;
}

void save_curve(const TradeoffCurve& curve, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::kMissingInput, "cannot write '" + path + "'");
  }
  out << "epsilon,distortion,iterations\n";
  out.precision(17);
  for (const auto& pt : curve.points) {
    out << pt.epsilon << ',' << pt.distortion << ',' << pt.iterations << '\n';
  }
}

}  // namespace localpriv
