#ifndef INTERLACE_STATS_HPP
#define INTERLACE_STATS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "interlace/hierarchy.hpp"

// Fluctuation statistics across hierarchy levels, histogram plumbing
// with the Wigner reference curve, and a difference-operator
// complexity classifier for finite integer sequences.

namespace interlace {

// ── level statistics ────────────────────────────────────────────────

// Nearest-neighbour spacings s_n = k_{n+1} - k_n.  For unfolded
// levels this equals 1 + delta_{n+1} - delta_n.
Eigen::ArrayXd spacings(const HierarchyLevel& level);

// xi_n = (delta_{n+1} + delta_n)/2, the adjacent-fluctuation average.
Eigen::ArrayXd xi_statistic(const HierarchyLevel& level);

// ── histograms ──────────────────────────────────────────────────────

struct Histogram {
  Eigen::ArrayXd bin_edges;          // bins + 1 entries, uniform
  std::vector<std::int64_t> counts;  // one per bin
  Eigen::ArrayXd density;            // count / (total_samples * width)
};

// Uniform-bin histogram.  Bins are half-open [e_i, e_{i+1}) with the
// last bin closed.  Density is normalized by the TOTAL sample count,
// so it integrates to 1 when the range covers every sample and to the
// covered fraction otherwise (out-of-range mass is excluded).
Histogram histogram(const Eigen::ArrayXd& values, int bins,
                    std::optional<std::pair<double, double>> range = {});

// Wigner surmise p(s) = (pi s / 2) exp(-pi s^2 / 4), unit mean.
double wigner_reference(double s);

// CSV export, one row per bin: bin_left, bin_right, count, density.
std::string histogram_csv(const Histogram& h);

// ── difference-operator complexity ──────────────────────────────────

// Finite integer sequence, optionally over Z_M.  With a modulus the
// sequence is treated as cyclic and all symbols live in [0, M).
struct FiniteSymbolSequence {
  std::vector<std::int64_t> symbols;
  std::optional<std::int64_t> modulus;

  static FiniteSymbolSequence checked(std::vector<std::int64_t> symbols,
                                      std::optional<std::int64_t> modulus = {});
  bool is_zero() const;
};

// Delta x(n) = x(n) - x(n+1).  Without a modulus the result is one
// shorter; with one, the sequence wraps (x(N+1) := x(1)) and keeps its
// length, reduced into [0, M).
FiniteSymbolSequence difference(const FiniteSymbolSequence& x);

// Smallest l with Delta^l x = 0, reported as polynomial degree l - 1;
// nullopt when no annihilation happens within l_max steps (or before
// the sequence runs out of points in the non-cyclic case).  The all
// zero sequence reports degree -1 (the zero polynomial).
std::optional<int> poly_degree(const FiniteSymbolSequence& x, int l_max = 64);

// Smallest q <= q_max with Delta^q x = x; requires a modulus (cyclic
// sequences are the only ones that can recur).  nullopt when the orbit
// never returns.
std::optional<int> exp_order(const FiniteSymbolSequence& x, int q_max = 64);

// Lexicographic complexity comparison on (poly degree, exp order),
// absent values sorting above every finite one: returns negative when
// a is simpler than b, 0 for ties, positive otherwise.
int compare_complexity(const FiniteSymbolSequence& a,
                       const FiniteSymbolSequence& b, int l_max = 64,
                       int q_max = 64);

}  // namespace interlace

#endif
