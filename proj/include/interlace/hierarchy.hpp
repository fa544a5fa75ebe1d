#ifndef INTERLACE_HIERARCHY_HPP
#define INTERLACE_HIERARCHY_HPP

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "interlace/counting.hpp"

// Bootstrap hierarchy of separating sequences.
//
// Given an unfolded sequence k^(0), each generation inserts one point
// strictly between every adjacent pair:
//
//   k_n^(j+1) = alpha_n k_{n+1}^(j) + (1 - alpha_n) k_n^(j)
//
// so level j+1 has one fewer point and interlaces level j.  A level is
// "regular" when a constant gamma exists with n-1+gamma <= k_n <= n+gamma
// for all n, i.e. the staircase can be pierced by one straight line.
// The irregularity degree is the index of the first regular level.
//
// Writing delta_n = k_n - n, the child fluctuation against the same
// index grid is clamp(target, delta_n, 1 + delta_{n+1}), where target
// is whatever the alpha rule aims at.  Two consequences drive the
// defaults below:
//   * anchoring at the first element's delta preserves every
//     fluctuation above it, so the hierarchy stalls whenever
//     max delta > 1 + delta_1 (observed on large zero tables);
//   * anchoring at the running max delta contracts the spread by
//     exactly one unit per generation and always terminates after
//     ceil(spread_0 - 1) generations.
// MaxDelta is therefore the documented default anchor.

namespace interlace {

// ── strategies ──────────────────────────────────────────────────────

enum class AnchorKind { FirstElement, MaxDelta, MeanDelta, Explicit };

struct Anchor {
  AnchorKind kind = AnchorKind::MaxDelta;
  double value = 0.0;  // used only by Explicit

  static Anchor first_element() { return {AnchorKind::FirstElement, 0.0}; }
  static Anchor max_delta() { return {AnchorKind::MaxDelta, 0.0}; }
  static Anchor mean_delta() { return {AnchorKind::MeanDelta, 0.0}; }
  static Anchor explicit_value(double v) { return {AnchorKind::Explicit, v}; }
};

struct Midpoint {};

struct Optimal {
  Anchor anchor;  // re-resolved against each level before use
};

struct FixedList {
  Eigen::ArrayXd alphas;  // exactly size(level) - 1 entries, clamped to [0,1]
};

using AlphaStrategy = std::variant<Midpoint, Optimal, FixedList>;

std::string strategy_name(const AlphaStrategy& strategy);

// ── levels ──────────────────────────────────────────────────────────

struct HierarchyLevel {
  int j = 0;
  Sequence values;
  Sequence deltas;                      // delta_n = values[n-1] - n
  std::optional<Eigen::ArrayXd> alphas; // alphas that produced this level

  static HierarchyLevel from_values(int j, Sequence values);
};

// Resolves an anchor against a concrete level.
double anchor_value(const Anchor& anchor, const HierarchyLevel& level);

// alpha_n = clamp((anchor - delta_n)/s_n, 0, 1) with s_n the spacing.
// Throws ZeroSpacing if any spacing is not positive.
Eigen::ArrayXd optimal_alphas(const HierarchyLevel& level, double anchor);

// One generation: inserts a point strictly inside every parent gap.
// Alphas at the clamp boundaries are nudged inward by 1e-12, and the
// children are additionally forced at least one ULP inside the parent
// interval so strict ordering survives rounding.  Throws TooShort for
// levels of fewer than two points, ZeroSpacing when a parent gap has
// no representable interior point.
HierarchyLevel separating_sequence(const HierarchyLevel& level,
                                   const AlphaStrategy& strategy);

// F = sum_n (s_n - t)^2 over the level's spacings.  For fully unfolded
// sequences the natural period is t = 1.  Throws TooShort below two
// points.
double roughness_functional(const HierarchyLevel& level, double t = 1.0);

// ── regularity ──────────────────────────────────────────────────────

// GammaCorridor: regular iff spread = max delta - min delta <= 1, the
// exact feasibility condition for the piercing line (default).
// SpacingRange: regular iff every spacing lies in [0, 2]; a looser,
// purely local criterion kept as a documented alternative.
enum class RegularityCriterion { GammaCorridor, SpacingRange };

inline constexpr double kRegularitySlack = 1e-12;

struct RegularityResult {
  bool regular = false;
  double spread = 0.0;       // max delta - min delta
  double spacing_dev = 0.0;  // max_n |s_n - 1|  (0 for single points)
  double gamma = 0.0;        // corridor midpoint; NaN if infeasible

  explicit operator bool() const { return regular; }
};

RegularityResult regularity_test(
    const HierarchyLevel& level,
    RegularityCriterion criterion = RegularityCriterion::GammaCorridor);

// ── hierarchy ───────────────────────────────────────────────────────

struct BootstrapHierarchy {
  std::vector<HierarchyLevel> levels;
  std::vector<RegularityResult> tests;  // one per level
  std::vector<double> roughness;        // F per level, t = 1
  std::optional<int> degree;            // nullopt = NotTerminated
  double gamma_reg = 0.0;               // valid when degree is set
  AlphaStrategy strategy;
  RegularityCriterion criterion = RegularityCriterion::GammaCorridor;
};

// Builds levels until one passes regularity_test or max_depth
// generations have been added.  Levels, alphas, spreads and roughness
// are all retained; NotTerminated is a reported value, not an error.
BootstrapHierarchy build_hierarchy(
    const UnfoldedSequence& u, const AlphaStrategy& strategy,
    int max_depth = 32,
    RegularityCriterion criterion = RegularityCriterion::GammaCorridor);

inline std::optional<int> irregularity_degree(const BootstrapHierarchy& h) {
  return h.degree;
}

// {degree, strategy, levels: [{j, count, spread, F, gamma?}]}
std::string hierarchy_report_json(const BootstrapHierarchy& h);

}  // namespace interlace

#endif
