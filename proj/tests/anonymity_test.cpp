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

#include <doctest.h>

#include <random>

#include "localpriv/anonymity.hpp"
#include "oracles.hpp"

namespace localpriv {
namespace {

Dataset five_rows() {
  // Quasi tuples A,A,B,A,B over (zip, age); distinct sensitive values.
  return make_dataset(
      {"zip", "age", "disease"},
      {{"10", "30", "flu"},
       {"10", "30", "cold"},
       {"20", "40", "flu"},
       {"10", "30", "flu"},
       {"20", "40", "flu"}},
      {"zip", "age"}, "disease");
}

TEST_CASE("equivalence_classes groups by the quasi tuple") {
  const auto classes = equivalence_classes(five_rows());
  REQUIRE(classes.size() == 2);
  CHECK(classes[0] == std::vector<std::size_t>{0, 1, 3});
  CHECK(classes[1] == std::vector<std::size_t>{2, 4});
}

TEST_CASE("equivalence_classes edge shapes") {
  const Dataset same = make_dataset({"q", "s"},
                                    {{"a", "1"}, {"a", "2"}, {"a", "3"}},
                                    {"q"}, "s");
  CHECK(equivalence_classes(same).size() == 1);

  const Dataset distinct = make_dataset({"q", "s"},
                                        {{"a", "1"}, {"b", "2"}, {"c", "3"}},
                                        {"q"}, "s");
  CHECK(equivalence_classes(distinct).size() == 3);
}

TEST_CASE("quasi equality trims surrounding whitespace") {
  const Dataset ds = make_dataset({"q", "s"},
                                  {{" a ", "1"}, {"a", "2"}},
                                  {"q"}, "s");
  CHECK(equivalence_classes(ds).size() == 1);
}

TEST_CASE("check_k_anonymity on the five-row example") {
  const Dataset ds = five_rows();
  const KAnonymityReport at3 = check_k_anonymity(ds, 3);
  CHECK_FALSE(at3.holds);
  CHECK(at3.max_k == 2);
  REQUIRE(at3.violating_class.has_value());
  CHECK(*at3.violating_class == std::vector<std::size_t>{2, 4});

  const KAnonymityReport at2 = check_k_anonymity(ds, 2);
  CHECK(at2.holds);
  CHECK_FALSE(at2.violating_class.has_value());
}

TEST_CASE("check_k_anonymity: singleton dataset") {
  const Dataset ds = make_dataset({"q", "s"}, {{"a", "1"}}, {"q"}, "s");
  const KAnonymityReport r = check_k_anonymity(ds, 1);
  CHECK(r.holds);
  CHECK(r.max_k == 1);
}

TEST_CASE("check_l_diversity counts distinct sensitive values") {
  const Dataset single_valued = make_dataset(
      {"q", "s"}, {{"a", "x"}, {"a", "x"}, {"b", "y"}}, {"q"}, "s");
  CHECK(check_l_diversity(single_valued, 1).holds);
  CHECK_FALSE(check_l_diversity(single_valued, 2).holds);

  const Dataset aab = make_dataset(
      {"q", "s"}, {{"c", "a"}, {"c", "a"}, {"c", "b"}}, {"q"}, "s");
  CHECK(check_l_diversity(aab, 2).max_l == 2);
  CHECK(check_l_diversity(aab, 2).holds);
}

TEST_CASE("empty datasets and bad arguments are rejected") {
  const Dataset empty = make_dataset({"q", "s"}, {}, {"q"}, "s");
  try {
    check_k_anonymity(empty, 1);
    FAIL("expected EmptyDataset");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kEmptyDataset);
  }
  const Dataset ds = five_rows();
  CHECK_THROWS_AS(check_k_anonymity(ds, 0), Error);
  CHECK_THROWS_AS(make_dataset({"q", "s"}, {{"a"}}, {"q"}, "s"), Error);
  CHECK_THROWS_AS(make_dataset({"q", "s"}, {}, {"q"}, "q"), Error);
  CHECK_THROWS_AS(make_dataset({"q", "s"}, {}, {"zz"}, "s"), Error);
}

Dataset random_dataset(std::mt19937_64& gen) {
  const std::size_t rows = 1 + gen() % 50;
  std::vector<std::vector<std::string>> data;
  for (std::size_t r = 0; r < rows; ++r) {
    data.push_back({std::to_string(gen() % 4), std::to_string(gen() % 3),
                    std::to_string(gen() % 3), std::to_string(gen() % 4)});
  }
  return make_dataset({"c0", "c1", "c2", "sens"}, std::move(data),
                      {"c0", "c1", "c2"}, "sens");
}

TEST_CASE("anonymity checks agree with the counting oracle") {
  std::mt19937_64 gen(109);
  for (int trial = 0; trial < 200; ++trial) {
    const Dataset ds = random_dataset(gen);
    std::vector<std::vector<std::string>> quasi;
    std::vector<std::string> sensitive;
    for (const auto& row : ds.rows) {
      quasi.push_back({row[0], row[1], row[2]});
      sensitive.push_back(row[3]);
    }
    const std::size_t want_k = oracle::min_class_size(quasi);
    const std::size_t want_l = oracle::min_distinct_sensitive(quasi, sensitive);
    for (std::size_t level = 1; level <= ds.rows.size(); ++level) {
      CHECK(check_k_anonymity(ds, level).holds == (want_k >= level));
      CHECK(check_l_diversity(ds, level).holds == (want_l >= level));
    }
    CHECK(check_k_anonymity(ds, 1).max_k == want_k);
    CHECK(check_l_diversity(ds, 1).max_l == want_l);
  }
}

TEST_CASE("monotonicity and the diversity-implies-anonymity implication") {
  std::mt19937_64 gen(113);
  for (int trial = 0; trial < 100; ++trial) {
    const Dataset ds = random_dataset(gen);
    const std::size_t max_k = check_k_anonymity(ds, 1).max_k;
    const std::size_t max_l = check_l_diversity(ds, 1).max_l;
    for (std::size_t k = 1; k <= ds.rows.size() + 1; ++k) {
      CHECK(check_k_anonymity(ds, k).holds == (k <= max_k));
    }
    // l distinct sensitive values need at least l rows in the class.
    for (std::size_t l = 1; l <= max_l; ++l) {
      CHECK(check_l_diversity(ds, l).holds);
      CHECK(check_k_anonymity(ds, l).holds);
    }
  }
}

}  // namespace
}  // namespace localpriv
