#include <doctest/doctest.h>

#include <cmath>
#include <random>

#include <nlohmann/json.hpp>

#include "interlace/hierarchy.hpp"

using namespace interlace;

namespace {

Sequence seq(std::initializer_list<double> v) {
  Sequence s(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) s[i++] = x;
  return s;
}

HierarchyLevel level0(std::initializer_list<double> v) {
  return HierarchyLevel::from_values(0, seq(v));
}

// Gaussian-fluctuation synthetic level: k_n = n + delta_n with
// delta ~ N(0, sd), redrawn where a spacing would close up.
HierarchyLevel synthetic_level(std::uint32_t seed, int n, double sd) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss(0.0, sd);
  Sequence v(n);
  double prev = gauss(rng);
  v[0] = 1.0 + prev;
  for (int i = 1; i < n; ++i) {
    double d = gauss(rng);
    while (d <= prev - 0.98) d = gauss(rng);
    v[i] = i + 1.0 + d;
    prev = d;
  }
  return HierarchyLevel::from_values(0, std::move(v));
}

UnfoldedSequence as_unfolded(const HierarchyLevel& level) {
  UnfoldedSequence u;
  u.values = level.values;
  u.deltas = level.deltas;
  u.mean_delta = level.deltas.mean();
  return u;
}

}  // namespace

TEST_CASE("midpoint generation averages neighbours") {
  auto child = separating_sequence(level0({1.0, 2.0, 4.0}), Midpoint{});
  REQUIRE(child.values.size() == 2);
  CHECK(child.values[0] == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(child.values[1] == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(child.j == 1);
  CHECK(child.deltas[0] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("boundary alphas are pulled strictly inside the parent gap") {
  Eigen::ArrayXd a(2);
  a << 0.0, 1.0;
  auto child = separating_sequence(level0({1.0, 2.0, 4.0}), FixedList{a});
  CHECK(child.values[0] > 1.0);
  CHECK(child.values[0] < 1.0 + 1e-11);
  CHECK(child.values[1] < 4.0);
  CHECK(child.values[1] > 4.0 - 1e-10);
}

TEST_CASE("fixed alpha lists must match the gap count") {
  Eigen::ArrayXd a(3);
  a << 0.5, 0.5, 0.5;
  CHECK_THROWS_AS(separating_sequence(level0({1.0, 2.0, 4.0}), FixedList{a}),
                  DomainError);
}

TEST_CASE("alpha formula: clamps at both rails") {
  // deltas equal to the anchor leave nothing to move: alpha = 0.
  auto flat = level0({1.25, 2.25, 3.25});
  auto a = optimal_alphas(flat, 0.25);
  CHECK(a[0] == 0.0);
  CHECK(a[1] == 0.0);
  // delta_n = anchor - s_n puts the target exactly on the upper rail.
  auto lvl = level0({1.0, 2.0});  // delta_1 = 0, s_1 = 1
  auto b = optimal_alphas(lvl, 1.0);
  CHECK(b[0] == 1.0);
}

TEST_CASE("alpha formula: interior value by hand") {
  // values {0.9, 2.3, 2.8}: deltas {-0.1, 0.3, -0.2}, spacings {1.4, 0.5}.
  auto lvl = level0({0.9, 2.3, 2.8});
  SUBCASE("explicit anchor 0.25") {
    auto a = optimal_alphas(lvl, 0.25);
    CHECK(a[0] == doctest::Approx(0.25).epsilon(1e-14));  // (0.25+0.1)/1.4
    CHECK(a[1] == 0.0);                                   // (0.25-0.3)/0.5 < 0
    auto child = separating_sequence(
        lvl, Optimal{Anchor::explicit_value(0.25)});
    CHECK(child.values[0] == doctest::Approx(1.25).epsilon(1e-14));
    CHECK(child.values[1] == doctest::Approx(2.3).epsilon(1e-12));
    CHECK(child.values[1] > 2.3);
  }
  SUBCASE("first-element anchor clamps both gaps here") {
    auto a = optimal_alphas(lvl, anchor_value(Anchor::first_element(), lvl));
    CHECK(a[0] == 0.0);
    CHECK(a[1] == 0.0);
  }
  SUBCASE("max anchor hits the running maximum") {
    auto child = separating_sequence(lvl, Optimal{Anchor::max_delta()});
    // target delta = 0.3: child_1 = 1 + 0.3; gap 2 clamps at its parent.
    CHECK(child.values[0] == doctest::Approx(1.3).epsilon(1e-14));
    CHECK(child.deltas[1] == doctest::Approx(0.3).epsilon(1e-9));
  }
}

TEST_CASE("alpha formula rejects non-positive spacings") {
  HierarchyLevel lvl;
  lvl.values = seq({1.0, 1.0, 2.0});
  lvl.deltas = lvl.values - Eigen::ArrayXd::LinSpaced(3, 1.0, 3.0);
  CHECK_THROWS_AS(optimal_alphas(lvl, 0.0), ZeroSpacing);
}

TEST_CASE("roughness functional sums squared spacing deviations") {
  CHECK(roughness_functional(level0({1.0, 1.5, 3.0})) ==
        doctest::Approx(0.5).epsilon(1e-14));  // (0.5-1)^2 + (1.5-1)^2
  CHECK(roughness_functional(level0({0.5, 1.5, 2.5, 3.5})) ==
        doctest::Approx(0.0).epsilon(1e-14));
  CHECK(roughness_functional(level0({1.0, 3.0}), 2.0) ==
        doctest::Approx(0.0).epsilon(1e-14));
  CHECK_THROWS_AS(roughness_functional(level0({1.0})), ValidationError);
}

TEST_CASE("regularity: corridor midpoint and failure spread") {
  // k_n = n - 0.5: constant delta -0.5, corridor midpoint gamma = 0.
  auto shifted = level0({0.5, 1.5, 2.5, 3.5});
  auto r = regularity_test(shifted);
  CHECK(r.regular);
  CHECK(r.spread == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(r.gamma == doctest::Approx(0.0).epsilon(1e-15));

  // k_n = n + (-1)^n: spread exactly 2, infeasible.  The level is
  // built by hand because the raw values are not monotone.
  HierarchyLevel alternating;
  alternating.values = seq({0.0, 3.0, 2.0, 5.0});
  alternating.deltas =
      alternating.values - Eigen::ArrayXd::LinSpaced(4, 1.0, 4.0);
  auto f = regularity_test(alternating);
  CHECK_FALSE(f.regular);
  CHECK(f.spread == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(std::isnan(f.gamma));

  // A slow upward drift of more than one unit: every spacing stays in
  // [0, 2] (locally fine) but no single line pierces the staircase.
  const int n = 12;
  Sequence dv(n);
  for (int i = 0; i < n; ++i) dv[i] = (i + 1) + 0.15 * i;
  auto drift = HierarchyLevel::from_values(0, dv);  // spread 1.65
  auto c = regularity_test(drift, RegularityCriterion::GammaCorridor);
  auto s = regularity_test(drift, RegularityCriterion::SpacingRange);
  CHECK_FALSE(c.regular);
  CHECK(c.spread == doctest::Approx(1.65).epsilon(1e-12));
  CHECK(s.regular);
  CHECK(s.spacing_dev == doctest::Approx(0.15).epsilon(1e-12));
}

TEST_CASE("regularity agrees with a brute-force corridor scan") {
  std::mt19937 rng(991124);
  std::normal_distribution<double> gauss(0.0, 0.45);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 6 + static_cast<int>(rng() % 10);
    Sequence v(n);
    double prev = gauss(rng);
    v[0] = 1.0 + prev;
    for (int i = 1; i < n; ++i) {
      double d = gauss(rng);
      while (d <= prev - 0.98) d = gauss(rng);
      v[i] = i + 1.0 + d;
      prev = d;
    }
    auto lvl = HierarchyLevel::from_values(0, v);
    const double lo = lvl.deltas.minCoeff(), hi = lvl.deltas.maxCoeff();
    bool feasible = false;
    for (double g = lo; g <= hi + 1.0 + 1e-9; g += 1e-3) {
      bool ok = true;
      for (Eigen::Index i = 0; i < v.size() && ok; ++i) {
        const double idx = static_cast<double>(i + 1);
        ok = (idx - 1.0 + g <= v[i] + 1e-12) && (v[i] <= idx + g + 1e-12);
      }
      if (ok) { feasible = true; break; }
    }
    auto r = regularity_test(lvl);
    INFO("trial ", trial, " spread ", r.spread);
    CHECK(r.regular == feasible);
    if (r.regular) {
      // Returned gamma must itself satisfy the corridor.
      for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double idx = static_cast<double>(i + 1);
        CHECK(idx - 1.0 + r.gamma <= v[i] + 1e-9);
        CHECK(v[i] <= idx + r.gamma + 1e-9);
      }
    }
  }
}

TEST_CASE("hierarchy: periodic input needs no auxiliary level") {
  Sequence v(8);
  for (int i = 0; i < 8; ++i) v[i] = i + 1.3;
  auto u = as_unfolded(HierarchyLevel::from_values(0, v));
  auto h = build_hierarchy(u, Midpoint{});
  REQUIRE(h.degree.has_value());
  CHECK(*h.degree == 0);
  CHECK(h.levels.size() == 1);
  CHECK(h.gamma_reg == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("hierarchy: four-point set sits exactly on the corridor edge") {
  // deltas {-0.5, 0.4, -0.4, 0.5}: spread exactly 1.0, so level 0 is
  // already regular with gamma = 0.5 (boundary case of the slack).
  auto u = as_unfolded(level0({0.5, 2.4, 2.6, 4.5}));
  auto h = build_hierarchy(u, Midpoint{});
  REQUIRE(h.degree.has_value());
  CHECK(*h.degree == 0);
  CHECK(h.gamma_reg == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("hierarchy: period-four wobble resolves in one level") {
  // delta cycles {-0.6, 0.0, +0.6, 0.0}: spread 1.2 at level 0 (not
  // regular), strictly increasing (spacings 1 +- 0.6).
  // Midpoint children: delta' = 0.5 + (delta_n + delta_{n+1})/2 cycles
  // {0.2, 0.8, 0.8, 0.2} -> spread 0.6, degree 1.
  // Max-anchor children: clamp(0.6, delta_n, 1 + delta_{n+1}) cycles
  // {0.6, 0.6, 0.6, 0.4} -> spread 0.2, degree 1.
  const double cycle[4] = {-0.6, 0.0, 0.6, 0.0};
  const int n = 17;
  Sequence v(n);
  for (int i = 0; i < n; ++i) v[i] = i + 1 + cycle[i % 4];
  auto u = as_unfolded(HierarchyLevel::from_values(0, v));

  auto hm = build_hierarchy(u, Midpoint{});
  REQUIRE(hm.degree.has_value());
  CHECK(*hm.degree == 1);
  CHECK(hm.tests[0].spread == doctest::Approx(1.2).epsilon(1e-12));
  CHECK(hm.tests[1].spread == doctest::Approx(0.6).epsilon(1e-12));

  auto ho = build_hierarchy(u, Optimal{Anchor::max_delta()});
  REQUIRE(ho.degree.has_value());
  CHECK(*ho.degree == 1);
  CHECK(ho.tests[1].spread == doctest::Approx(0.2).epsilon(1e-9));
}

TEST_CASE("hierarchy: first-element anchor stalls above its reach") {
  // A peak more than 1 above delta_1 is preserved by the first-element
  // anchor generation after generation: NotTerminated.
  Sequence v(14);
  double deltas[14] = {0.0, 0.0, 0.4, 0.8, 1.2, 1.6, 1.6, 1.6,
                       1.2, 0.8, 0.4, 0.0, 0.0, 0.0};
  for (int i = 0; i < 14; ++i) v[i] = i + 1 + deltas[i];
  auto u = as_unfolded(HierarchyLevel::from_values(0, v));
  auto h = build_hierarchy(u, Optimal{Anchor::first_element()}, 8);
  CHECK_FALSE(h.degree.has_value());
  CHECK(h.levels.size() == 9);  // level 0 plus max_depth generations
  CHECK(std::isnan(h.gamma_reg));
  // The same data terminates under the max anchor, which contracts the
  // spread by one unit per generation.
  auto hm = build_hierarchy(u, Optimal{Anchor::max_delta()}, 8);
  REQUIRE(hm.degree.has_value());
  CHECK(*hm.degree == 1);
}

TEST_CASE("hierarchy invariants on synthetic levels") {
  const AlphaStrategy strategies[] = {
      AlphaStrategy{Midpoint{}},
      AlphaStrategy{Optimal{Anchor::max_delta()}},
      AlphaStrategy{Optimal{Anchor::first_element()}},
      AlphaStrategy{Optimal{Anchor::mean_delta()}},
      AlphaStrategy{Optimal{Anchor::explicit_value(0.2)}},
  };
  for (std::uint32_t seed = 1; seed <= 10; ++seed) {
    auto parent = synthetic_level(7000 + seed, 80, 0.2);
    for (const auto& strat : strategies) {
      auto child = separating_sequence(parent, strat);
      REQUIRE(child.values.size() == parent.values.size() - 1);
      for (Eigen::Index i = 0; i < child.values.size(); ++i) {
        CHECK(parent.values[i] < child.values[i]);
        CHECK(child.values[i] < parent.values[i + 1]);
      }
      for (Eigen::Index i = 0; i + 1 < child.values.size(); ++i)
        CHECK(child.values[i] < child.values[i + 1]);
    }
    // Spread never grows for data-derived anchors.
    for (const auto& anchor : {Anchor::max_delta(), Anchor::first_element(),
                               Anchor::mean_delta()}) {
      auto child = separating_sequence(parent, Optimal{anchor});
      CHECK(regularity_test(child).spread <=
            regularity_test(parent).spread + 1e-12);
    }
    // The default anchor beats midpoint on roughness.
    auto opt = separating_sequence(parent, Optimal{Anchor::max_delta()});
    auto mid = separating_sequence(parent, Midpoint{});
    CHECK(roughness_functional(opt) <= roughness_functional(mid) + 1e-9);
  }
}

TEST_CASE("hierarchy report is well-formed JSON") {
  auto u = as_unfolded(synthetic_level(4242, 40, 0.2));
  auto h = build_hierarchy(u, Optimal{Anchor::max_delta()});
  auto j = nlohmann::json::parse(hierarchy_report_json(h));
  CHECK(j["strategy"] == "optimal(max-delta)");
  CHECK(j["criterion"] == "gamma-corridor");
  REQUIRE(j["levels"].is_array());
  CHECK(j["levels"].size() == h.levels.size());
  CHECK(j["levels"][0]["count"] == 40);
  CHECK(j["levels"][0]["j"] == 0);
  if (h.degree) {
    CHECK(j["degree"] == *h.degree);
    CHECK(j["levels"].back().contains("gamma"));
  }
}
