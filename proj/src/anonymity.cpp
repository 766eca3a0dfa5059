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

#include "localpriv/anonymity.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace localpriv {

std::string trim_cell(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

Dataset make_dataset(std::vector<std::string> columns,
                     std::vector<std::vector<std::string>> rows,
                     const std::vector<std::string>& quasi_names,
                     const std::string& sensitive_name) {
  Dataset ds;
  ds.columns = std::move(columns);
  ds.rows = std::move(rows);
  auto find_column = [&](const std::string& name) {
    const auto it = std::find(ds.columns.begin(), ds.columns.end(), name);
    if (it == ds.columns.end()) {
      throw Error(ErrorCode::kUnknownSymbol,
                  "dataset has no column named '" + name + "'");
    }
    return static_cast<std::size_t>(it - ds.columns.begin());
  };
  for (const auto& name : quasi_names) {
    ds.quasi_columns.push_back(find_column(name));
  }
  ds.sensitive_column = find_column(sensitive_name);
  validate_dataset(ds);
  return ds;
}

void validate_dataset(const Dataset& ds) {
  if (ds.columns.empty()) {
    throw Error(ErrorCode::kShapeMismatch, "dataset has no columns");
  }
  for (std::size_t r = 0; r < ds.rows.size(); ++r) {
    if (ds.rows[r].size() != ds.columns.size()) {
      throw Error(ErrorCode::kShapeMismatch,
                  "row " + std::to_string(r) + " has " +
                      std::to_string(ds.rows[r].size()) + " cells, expected " +
                      std::to_string(ds.columns.size()));
    }
  }
  std::unordered_set<std::size_t> quasi_set;
  for (std::size_t q : ds.quasi_columns) {
    if (q >= ds.columns.size()) {
      throw Error(ErrorCode::kShapeMismatch, "quasi column index out of range");
    }
    if (!quasi_set.insert(q).second) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate quasi column");
    }
  }
  if (ds.sensitive_column >= ds.columns.size()) {
    throw Error(ErrorCode::kShapeMismatch,
                "sensitive column index out of range");
  }
  if (quasi_set.count(ds.sensitive_column) != 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "sensitive column overlaps the quasi-identifier set");
  }
}

std::vector<std::vector<std::size_t>> equivalence_classes(const Dataset& ds) {
  validate_dataset(ds);
  std::vector<std::vector<std::size_t>> classes;
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t r = 0; r < ds.rows.size(); ++r) {
    std::string key;
    for (std::size_t q : ds.quasi_columns) {
      key += trim_cell(ds.rows[r][q]);
      key += '\x1f';  // unit separator keeps adjacent cells unambiguous
    }
    const auto [it, inserted] = index.try_emplace(key, classes.size());
    if (inserted) classes.emplace_back();
    classes[it->second].push_back(r);
  }
  return classes;
}

KAnonymityReport check_k_anonymity(const Dataset& ds, std::size_t k) {
  if (k < 1) {
    throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  }
  if (ds.rows.empty()) {
    throw Error(ErrorCode::kEmptyDataset, "dataset has no rows");
  }
  const auto classes = equivalence_classes(ds);
  KAnonymityReport report;
  std::size_t smallest = classes.front().size();
  std::size_t smallest_idx = 0;
  for (std::size_t i = 1; i < classes.size(); ++i) {
    if (classes[i].size() < smallest) {
      smallest = classes[i].size();
      smallest_idx = i;
    }
  }
  report.max_k = smallest;
  report.holds = smallest >= k;
  if (!report.holds) report.violating_class = classes[smallest_idx];
  return report;
}

LDiversityReport check_l_diversity(const Dataset& ds, std::size_t l) {
  if (l < 1) {
    throw Error(ErrorCode::kInvalidArgument, "l must be >= 1");
  }
  if (ds.rows.empty()) {
    throw Error(ErrorCode::kEmptyDataset, "dataset has no rows");
  }
  const auto classes = equivalence_classes(ds);
  LDiversityReport report;
  std::size_t smallest = 0;
  std::size_t smallest_idx = 0;
  bool first = true;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    std::unordered_set<std::string> values;
    for (std::size_t r : classes[i]) {
      values.insert(trim_cell(ds.rows[r][ds.sensitive_column]));
    }
    if (first || values.size() < smallest) {
      smallest = values.size();
      smallest_idx = i;
      first = false;
    }
  }
  report.max_l = smallest;
  report.holds = smallest >= l;
  if (!report.holds) report.violating_class = classes[smallest_idx];
  return report;
}

}  // namespace localpriv
