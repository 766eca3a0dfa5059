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

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "localpriv/core.hpp"

namespace localpriv {

// Tabular records with designated quasi-identifier columns and one sensitive
// column. Cells are compared by exact string equality after trimming
// surrounding whitespace; no generalization hierarchies.
struct Dataset {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> quasi_columns;
  std::size_t sensitive_column = 0;
};

// Resolves column names and validates arity/disjointness.
Dataset make_dataset(std::vector<std::string> columns,
                     std::vector<std::vector<std::string>> rows,
                     const std::vector<std::string>& quasi_names,
                     const std::string& sensitive_name);

void validate_dataset(const Dataset& ds);

// Rows grouped by equality on the quasi-identifier tuple, classes in
// first-appearance order.
std::vector<std::vector<std::size_t>> equivalence_classes(const Dataset& ds);

struct KAnonymityReport {
  bool holds = false;
  std::size_t max_k = 0;  // minimum equivalence-class size
  std::optional<std::vector<std::size_t>> violating_class;
};

struct LDiversityReport {
  bool holds = false;
  std::size_t max_l = 0;  // minimum distinct sensitive count over classes
  std::optional<std::vector<std::size_t>> violating_class;
};

// Every equivalence class must contain at least k rows (the row itself plus
// k-1 indistinguishable others).
KAnonymityReport check_k_anonymity(const Dataset& ds, std::size_t k);

// Every equivalence class must contain at least l distinct sensitive values.
LDiversityReport check_l_diversity(const Dataset& ds, std::size_t l);

std::string trim_cell(const std::string& s);

}  // namespace localpriv
