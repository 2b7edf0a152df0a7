// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <set>

#include "cfris/association.hpp"
#include "cfris/errors.hpp"

using namespace cfris;

namespace {

RMatrix table(std::initializer_list<std::initializer_list<double>> rows) {
  RMatrix out(static_cast<Index>(rows.size()), static_cast<Index>(rows.begin()->size()));
  Index r = 0;
  for (const auto& row : rows) {
    Index c = 0;
    for (double v : row) out(r, c++) = v;
    ++r;
  }
  return out;
}

void check_invariants(const Association& a, const RMatrix& beta, int pilots) {
  const int k_count = a.num_ues();
  for (int k = 0; k < k_count; ++k) {
    REQUIRE(a.pilot_of[k] >= 0);
    REQUIRE(a.pilot_of[k] < pilots);
    Index best = 0;
    beta.row(k).maxCoeff(&best);
    CHECK(a.master_ap[k] == static_cast<int>(best));
    CHECK(a.serves(a.master_ap[k], k));
    CHECK(!a.serving[k].empty());
    CHECK(std::find(a.copilot[k].begin(), a.copilot[k].end(), k) != a.copilot[k].end());
    for (int i = 0; i < k_count; ++i) {
      const bool listed =
          std::find(a.copilot[k].begin(), a.copilot[k].end(), i) != a.copilot[k].end();
      CHECK(listed == (a.pilot_of[i] == a.pilot_of[k]));
    }
    for (int l = 0; l < a.num_aps; ++l) {
      const bool in_m = std::binary_search(a.serving[k].begin(), a.serving[k].end(), l);
      const bool in_d = std::binary_search(a.served[l].begin(), a.served[l].end(), k);
      CHECK(in_m == in_d);
      CHECK(in_m == a.serves(l, k));
    }
  }
  // One served UE per pilot at every AP, except that an AP keeps every UE
  // it masters.
  for (int l = 0; l < a.num_aps; ++l) {
    std::vector<int> count(static_cast<std::size_t>(pilots), 0);
    std::vector<int> mastered(static_cast<std::size_t>(pilots), 0);
    for (int k : a.served[l]) {
      ++count[a.pilot_of[k]];
      if (a.master_ap[k] == l) ++mastered[a.pilot_of[k]];
    }
    for (int t = 0; t < pilots; ++t) {
      CHECK(count[t] <= std::max(1, mastered[t]));
      if (mastered[t] > 0) CHECK(count[t] == mastered[t]);
    }
  }
}

}  // namespace

TEST_CASE("enough pilots: every UE has its own") {
  const RMatrix beta = table({{1, 2}, {3, 1}, {2, 2}});
  const Association a = assign_pilots_and_clusters(beta, 3);
  std::set<int> used(a.pilot_of.begin(), a.pilot_of.end());
  CHECK(used.size() == 3);
  for (int k = 0; k < 3; ++k) CHECK(a.copilot[k] == std::vector<int>{k});
  check_invariants(a, beta, 3);
}

TEST_CASE("single AP serves the strongest UE on every pilot") {
  const RMatrix beta = table({{5}, {1}, {3}, {4}, {2}});
  const Association a = assign_pilots_and_clusters(beta, 2);
  for (int k = 0; k < 5; ++k) CHECK(a.serving[k] == std::vector<int>{0});
  check_invariants(a, beta, 2);
}

TEST_CASE("hand-traced joint pilot assignment and clustering") {
  // Masters: UE0 -> AP0, UE1 -> AP1, UE2 -> AP0, UE3 -> AP2.
  // UE2 sees pilot sums at AP0 of {10, 3} and takes pilot 1.
  // UE3 sees pilot sums at AP2 of {2, 1 + 5} and takes pilot 0.
  // AP0 masters UEs on both pilots; AP1 adds UE3 (4 > 1) on pilot 0;
  // AP2 adds UE2 (5 > 1) on pilot 1.
  const RMatrix beta = table({{10, 1, 2}, {3, 9, 1}, {8, 2, 5}, {1, 4, 7}});
  const Association a = assign_pilots_and_clusters(beta, 2);
  CHECK(a.master_ap == std::vector<int>{0, 1, 0, 2});
  CHECK(a.pilot_of == std::vector<int>{0, 1, 1, 0});
  CHECK(a.copilot[0] == std::vector<int>{0, 3});
  CHECK(a.copilot[1] == std::vector<int>{1, 2});
  CHECK(a.served[0] == std::vector<int>{0, 2});
  CHECK(a.served[1] == std::vector<int>{1, 3});
  CHECK(a.served[2] == std::vector<int>{2, 3});
  CHECK(a.serving[0] == std::vector<int>{0});
  CHECK(a.serving[1] == std::vector<int>{1});
  CHECK(a.serving[2] == std::vector<int>{0, 2});
  CHECK(a.serving[3] == std::vector<int>{1, 2});
  check_invariants(a, beta, 2);
}

TEST_CASE("ties go to the lowest index") {
  const RMatrix beta = table({{1, 1}, {1, 1}, {1, 1}});
  const Association a = assign_pilots_and_clusters(beta, 2);
  CHECK(a.master_ap == std::vector<int>{0, 0, 0});
  CHECK(a.pilot_of == std::vector<int>{0, 1, 0});
}

TEST_CASE("association invariants on 1000 random realizations") {
  Rng rng = make_stream(21, {1});
  SimConfig cfg;
  std::uniform_int_distribution<int> aps(1, 30);
  std::uniform_int_distribution<int> ues(1, 25);
  std::uniform_int_distribution<int> pilots(1, 10);
  for (int t = 0; t < 1000; ++t) {
    cfg.num_aps = aps(rng);
    cfg.num_ues = ues(rng);
    cfg.pilot_samples = pilots(rng);
    cfg.area_side_m = 200.0;
    const NetworkRealization real = generate_realization(cfg, rng);
    const Association a = assign_pilots_and_clusters(real, cfg);
    check_invariants(a, real.beta, cfg.pilot_samples);
  }
}

TEST_CASE("selector_apply") {
  const Association a = make_association({0, 0, 0}, {{1, 0, 1}, {1, 1, 1}, {0, 0, 0}});
  CVector x(6);
  x << 1, 2, 3, 4, 5, 6;
  CVector expected(6);
  expected << 1, 2, 0, 0, 5, 6;
  CHECK(selector_apply(a, 0, x, 2) == expected);
  CHECK(selector_apply(a, 0, selector_apply(a, 0, x, 2), 2) == expected);
  CHECK(selector_apply(a, 1, x, 2) == x);
  CHECK(selector_apply(a, 2, x, 2) == CVector::Zero(6));
  CHECK_THROWS_AS(selector_apply(a, 0, CVector(CVector::Ones(5)), 2), DimensionError);
}

TEST_CASE("selector_apply is idempotent on random vectors") {
  Rng rng = make_stream(21, {2});
  const Association a = make_association({0, 1}, {{1, 0, 1, 1}, {0, 1, 0, 0}});
  for (int k = 0; k < 2; ++k) {
    const CVector x = standard_complex_gaussian(12, rng);
    const CVector once = selector_apply(a, k, x, 3);
    CHECK(selector_apply(a, k, once, 3) == once);
  }
}

TEST_CASE("overlapping UEs") {
  const Association a =
      make_association({0, 1, 0}, {{1, 1, 0}, {0, 1, 0}, {0, 0, 1}});
  CHECK(overlapping_ues(a, 0) == std::vector<int>{0, 1});
  CHECK(overlapping_ues(a, 1) == std::vector<int>{0, 1});
  CHECK(overlapping_ues(a, 2) == std::vector<int>{2});
}
