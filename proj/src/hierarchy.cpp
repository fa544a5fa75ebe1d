#include "interlace/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

namespace interlace {

namespace {

constexpr double kAlphaNudge = 1e-12;

Sequence deltas_for(const Sequence& values) {
  return values - Eigen::ArrayXd::LinSpaced(values.size(), 1.0,
                                            static_cast<double>(values.size()));
}

}  // namespace

std::string strategy_name(const AlphaStrategy& strategy) {
  struct Visitor {
    std::string operator()(const Midpoint&) const { return "midpoint"; }
    std::string operator()(const Optimal& o) const {
      switch (o.anchor.kind) {
        case AnchorKind::FirstElement: return "optimal(first-element)";
        case AnchorKind::MaxDelta: return "optimal(max-delta)";
        case AnchorKind::MeanDelta: return "optimal(mean-delta)";
        case AnchorKind::Explicit:
          return "optimal(" + std::to_string(o.anchor.value) + ")";
      }
      return "optimal(?)";
    }
    std::string operator()(const FixedList&) const { return "fixed-list"; }
  };
  return std::visit(Visitor{}, strategy);
}

HierarchyLevel HierarchyLevel::from_values(int j, Sequence values) {
  validate_sequence(values, 1);
  HierarchyLevel level;
  level.j = j;
  level.deltas = deltas_for(values);
  level.values = std::move(values);
  return level;
}

double anchor_value(const Anchor& anchor, const HierarchyLevel& level) {
  switch (anchor.kind) {
    case AnchorKind::FirstElement: return level.deltas[0];
    case AnchorKind::MaxDelta: return level.deltas.maxCoeff();
    case AnchorKind::MeanDelta: return level.deltas.mean();
    case AnchorKind::Explicit: return anchor.value;
  }
  return anchor.value;
}

Eigen::ArrayXd optimal_alphas(const HierarchyLevel& level, double anchor) {
  const Eigen::Index n = level.values.size();
  if (n < 2)
    throw ValidationError(ValidationError::Kind::TooShort,
                          static_cast<std::size_t>(n),
                          "need at least two points to place alphas");
  Eigen::ArrayXd alphas(n - 1);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const double s = level.values[i + 1] - level.values[i];
    if (!(s > 0.0))
      throw ZeroSpacing(static_cast<std::size_t>(i),
                        "non-positive spacing at position " +
                            std::to_string(i));
    alphas[i] = std::clamp((anchor - level.deltas[i]) / s, 0.0, 1.0);
  }
  return alphas;
}

HierarchyLevel separating_sequence(const HierarchyLevel& level,
                                   const AlphaStrategy& strategy) {
  const Eigen::Index n = level.values.size();
  if (n < 2)
    throw ValidationError(ValidationError::Kind::TooShort,
                          static_cast<std::size_t>(n),
                          "cannot separate a level of fewer than two points");

  Eigen::ArrayXd alphas;
  if (std::holds_alternative<Midpoint>(strategy)) {
    alphas = Eigen::ArrayXd::Constant(n - 1, 0.5);
  } else if (const auto* opt = std::get_if<Optimal>(&strategy)) {
    alphas = optimal_alphas(level, anchor_value(opt->anchor, level));
  } else {
    const auto& fixed = std::get<FixedList>(strategy);
    if (fixed.alphas.size() != n - 1)
      throw DomainError("fixed alpha list has " +
                        std::to_string(fixed.alphas.size()) +
                        " entries, level needs " + std::to_string(n - 1));
    alphas = fixed.alphas.min(1.0).max(0.0);
  }

  // Boundary alphas would duplicate a parent point; pull them inward.
  alphas = alphas.min(1.0 - kAlphaNudge).max(kAlphaNudge);

  HierarchyLevel child;
  child.j = level.j + 1;
  child.values.resize(n - 1);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const double lo = level.values[i];
    const double hi = level.values[i + 1];
    double c = lo + alphas[i] * (hi - lo);
    // The relative nudge can vanish in rounding for large values; keep
    // the child strictly interior at double precision.
    const double in_lo = std::nextafter(lo, std::numeric_limits<double>::infinity());
    const double in_hi = std::nextafter(hi, -std::numeric_limits<double>::infinity());
    if (in_lo > in_hi)
      throw ZeroSpacing(static_cast<std::size_t>(i),
                        "parent gap at position " + std::to_string(i) +
                            " has no interior point at double precision");
    child.values[i] = std::clamp(c, in_lo, in_hi);
  }
  child.deltas = deltas_for(child.values);
  child.alphas = std::move(alphas);
  return child;
}

double roughness_functional(const HierarchyLevel& level, double t) {
  const Eigen::Index n = level.values.size();
  if (n < 2)
    throw ValidationError(ValidationError::Kind::TooShort,
                          static_cast<std::size_t>(n),
                          "roughness needs at least two points");
  Eigen::ArrayXd spacings =
      level.values.tail(n - 1) - level.values.head(n - 1);
  return (spacings - t).square().sum();
}

RegularityResult regularity_test(const HierarchyLevel& level,
                                 RegularityCriterion criterion) {
  RegularityResult r;
  const Eigen::Index n = level.values.size();
  const double max_d = level.deltas.maxCoeff();
  const double min_d = level.deltas.minCoeff();
  r.spread = max_d - min_d;
  if (n >= 2) {
    Eigen::ArrayXd spacings =
        level.values.tail(n - 1) - level.values.head(n - 1);
    r.spacing_dev = (spacings - 1.0).abs().maxCoeff();
  }
  const bool corridor_ok = r.spread <= 1.0 + kRegularitySlack;
  r.gamma = corridor_ok ? 0.5 * (max_d + min_d + 1.0)
                        : std::numeric_limits<double>::quiet_NaN();
  r.regular = criterion == RegularityCriterion::GammaCorridor
                  ? corridor_ok
                  : r.spacing_dev <= 1.0 + kRegularitySlack;
  return r;
}

BootstrapHierarchy build_hierarchy(const UnfoldedSequence& u,
                                   const AlphaStrategy& strategy,
                                   int max_depth,
                                   RegularityCriterion criterion) {
  if (max_depth < 1) throw DomainError("max_depth must be at least 1");
  BootstrapHierarchy h;
  h.strategy = strategy;
  h.criterion = criterion;
  h.gamma_reg = std::numeric_limits<double>::quiet_NaN();
  h.levels.push_back(HierarchyLevel::from_values(0, u.values));

  for (int j = 0;; ++j) {
    const HierarchyLevel& level = h.levels.back();
    RegularityResult t = regularity_test(level, criterion);
    h.tests.push_back(t);
    h.roughness.push_back(level.values.size() >= 2
                              ? roughness_functional(level)
                              : 0.0);
    if (t.regular) {
      h.degree = j;
      h.gamma_reg = t.gamma;
      break;
    }
    if (j == max_depth || level.values.size() < 2) break;  // NotTerminated
    h.levels.push_back(separating_sequence(level, strategy));
  }
  return h;
}

std::string hierarchy_report_json(const BootstrapHierarchy& h) {
  nlohmann::json j;
  if (h.degree)
    j["degree"] = *h.degree;
  else
    j["degree"] = nullptr;
  j["strategy"] = strategy_name(h.strategy);
  j["criterion"] = h.criterion == RegularityCriterion::GammaCorridor
                       ? "gamma-corridor"
                       : "spacing-range";
  auto levels = nlohmann::json::array();
  for (std::size_t i = 0; i < h.levels.size(); ++i) {
    nlohmann::json l;
    l["j"] = h.levels[i].j;
    l["count"] = h.levels[i].values.size();
    l["spread"] = h.tests[i].spread;
    l["F"] = h.roughness[i];
    if (h.tests[i].regular && std::isfinite(h.tests[i].gamma))
      l["gamma"] = h.tests[i].gamma;
    levels.push_back(std::move(l));
  }
  j["levels"] = std::move(levels);
  return j.dump(2);
}

}  // namespace interlace
