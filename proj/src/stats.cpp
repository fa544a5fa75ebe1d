#include "interlace/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace interlace {

Eigen::ArrayXd spacings(const HierarchyLevel& level) {
  const Eigen::Index n = level.values.size();
  if (n < 2)
    throw ValidationError(ValidationError::Kind::TooShort,
                          static_cast<std::size_t>(n),
                          "spacings need at least two points");
  return level.values.tail(n - 1) - level.values.head(n - 1);
}

Eigen::ArrayXd xi_statistic(const HierarchyLevel& level) {
  const Eigen::Index n = level.deltas.size();
  if (n < 2)
    throw ValidationError(ValidationError::Kind::TooShort,
                          static_cast<std::size_t>(n),
                          "xi needs at least two points");
  return 0.5 * (level.deltas.tail(n - 1) + level.deltas.head(n - 1));
}

Histogram histogram(const Eigen::ArrayXd& values, int bins,
                    std::optional<std::pair<double, double>> range) {
  if (values.size() == 0) throw EmptyInput("histogram of no samples");
  if (bins < 1) throw DomainError("histogram needs at least one bin");
  double lo, hi;
  if (range) {
    lo = range->first;
    hi = range->second;
  } else {
    lo = values.minCoeff();
    hi = values.maxCoeff();
  }
  if (!(hi > lo)) hi = lo + 1.0;  // degenerate range: unit-width bin set
  const double width = (hi - lo) / bins;

  Histogram h;
  h.bin_edges = Eigen::ArrayXd::LinSpaced(bins + 1, lo, hi);
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const double v = values[i];
    if (v < lo || v > hi) continue;
    auto b = static_cast<std::int64_t>((v - lo) / width);
    b = std::clamp<std::int64_t>(b, 0, bins - 1);  // right edge joins last bin
    ++h.counts[static_cast<std::size_t>(b)];
  }
  h.density.resize(bins);
  const double norm = static_cast<double>(values.size()) * width;
  for (int b = 0; b < bins; ++b)
    h.density[b] = static_cast<double>(h.counts[static_cast<std::size_t>(b)]) / norm;
  return h;
}

double wigner_reference(double s) {
  if (s < 0.0) throw DomainError("spacing argument must be nonnegative");
  return 0.5 * std::numbers::pi * s *
         std::exp(-0.25 * std::numbers::pi * s * s);
}

std::string histogram_csv(const Histogram& h) {
  std::ostringstream out;
  out.precision(17);
  out << "bin_left, bin_right, count, density\n";
  for (std::size_t b = 0; b < h.counts.size(); ++b) {
    out << h.bin_edges[static_cast<Eigen::Index>(b)] << ", "
        << h.bin_edges[static_cast<Eigen::Index>(b + 1)] << ", "
        << h.counts[b] << ", " << h.density[static_cast<Eigen::Index>(b)]
        << "\n";
  }
  return out.str();
}

FiniteSymbolSequence FiniteSymbolSequence::checked(
    std::vector<std::int64_t> symbols, std::optional<std::int64_t> modulus) {
  if (modulus) {
    if (*modulus < 1) throw DomainError("modulus must be positive");
    for (std::size_t i = 0; i < symbols.size(); ++i)
      if (symbols[i] < 0 || symbols[i] >= *modulus)
        throw DomainError("symbol at position " + std::to_string(i) +
                          " outside [0, M)");
  }
  return {std::move(symbols), modulus};
}

bool FiniteSymbolSequence::is_zero() const {
  return std::all_of(symbols.begin(), symbols.end(),
                     [](std::int64_t v) { return v == 0; });
}

FiniteSymbolSequence difference(const FiniteSymbolSequence& x) {
  const std::size_t n = x.symbols.size();
  if (x.modulus) {
    if (n < 1)
      throw ValidationError(ValidationError::Kind::TooShort, 0,
                            "cyclic difference of an empty sequence");
    FiniteSymbolSequence y;
    y.modulus = x.modulus;
    y.symbols.resize(n);
    const std::int64_t m = *x.modulus;
    for (std::size_t i = 0; i < n; ++i) {
      std::int64_t d = x.symbols[i] - x.symbols[(i + 1) % n];
      y.symbols[i] = ((d % m) + m) % m;
    }
    return y;
  }
  if (n < 2)
    throw ValidationError(ValidationError::Kind::TooShort, n,
                          "difference needs at least two points");
  FiniteSymbolSequence y;
  y.symbols.resize(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i)
    y.symbols[i] = x.symbols[i] - x.symbols[i + 1];
  return y;
}

std::optional<int> poly_degree(const FiniteSymbolSequence& x, int l_max) {
  if (l_max < 1) throw DomainError("l_max must be at least 1");
  FiniteSymbolSequence cur = x;
  if (cur.is_zero()) return -1;
  for (int l = 1; l <= l_max; ++l) {
    if (!cur.modulus && cur.symbols.size() < 2) return std::nullopt;
    cur = difference(cur);
    if (cur.is_zero()) return l - 1;
  }
  return std::nullopt;
}

std::optional<int> exp_order(const FiniteSymbolSequence& x, int q_max) {
  if (!x.modulus)
    throw RequiresModulus("recurrence order is defined for cyclic sequences");
  if (q_max < 1) throw DomainError("q_max must be at least 1");
  FiniteSymbolSequence cur = x;
  for (int q = 1; q <= q_max; ++q) {
    cur = difference(cur);
    if (cur.symbols == x.symbols) return q;
  }
  return std::nullopt;
}

int compare_complexity(const FiniteSymbolSequence& a,
                       const FiniteSymbolSequence& b, int l_max, int q_max) {
  auto key = [&](const FiniteSymbolSequence& s) {
    auto d = poly_degree(s, l_max);
    std::optional<int> q;
    if (s.modulus) q = exp_order(s, q_max);
    const auto inf = std::numeric_limits<std::int64_t>::max();
    return std::pair<std::int64_t, std::int64_t>(
        d ? static_cast<std::int64_t>(*d) : inf,
        q ? static_cast<std::int64_t>(*q) : inf);
  };
  auto ka = key(a), kb = key(b);
  if (ka < kb) return -1;
  if (kb < ka) return 1;
  return 0;
}

}  // namespace interlace
