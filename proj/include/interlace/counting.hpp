#ifndef INTERLACE_COUNTING_HPP
#define INTERLACE_COUNTING_HPP

#include <Eigen/Dense>
#include <limits>
#include <string>
#include <utility>
#include <variant>

#include "interlace/errors.hpp"

// Spectral sequences and smooth counting averages.
//
// A spectral sequence is a finite, strictly increasing list of levels
// E_1 < E_2 < ...  A counting model is a smooth approximation to the
// staircase N(E) = #{n : E_n <= E}; unfolding maps levels through the
// model so that the rescaled sequence k_n has unit mean spacing and
// fluctuation delta_n = k_n - n.

namespace interlace {

using Sequence = Eigen::ArrayXd;

// ── input validation ────────────────────────────────────────────────

// Throws ValidationError unless `values` has at least `min_size`
// entries, all finite, strictly increasing.
void validate_sequence(const Sequence& values, Eigen::Index min_size = 2);

struct SpectralSequence {
  Sequence values;
  std::string origin;  // free-form provenance tag, carried into reports

  static SpectralSequence checked(Sequence v, std::string origin = {},
                                  Eigen::Index min_size = 2) {
    validate_sequence(v, min_size);
    return {std::move(v), std::move(origin)};
  }
};

// ── counting models ─────────────────────────────────────────────────

// Smooth zero-counting average for the Riemann zeta critical line:
//   nbar(E) = E/(2 pi) (log(E/(2 pi)) - 1) + 7/8,  E >= 2 pi.
// Below 2 pi the formula turns around, so the domain is clipped there.
struct RiemannVonMangoldt {};

// Leading Weyl term for a metric graph of total length L:
//   nbar(k) = L k / pi.
struct WeylLinear {
  double total_length;
};

// Polynomial average, ascending powers: c[0] + c[1] x + c[2] x^2 + ...
struct PolynomialFit {
  Eigen::VectorXd coefficients;
};

// Same leading behaviour as RiemannVonMangoldt but without the
// constant term; used when only the local mean spacing matters.
struct LocalSpacing {};

using CountingModel =
    std::variant<RiemannVonMangoldt, WeylLinear, PolynomialFit, LocalSpacing>;

// Smallest argument the model accepts.  RiemannVonMangoldt and
// LocalSpacing are only increasing for E >= 2 pi; the other kinds are
// global.
double domain_min(const CountingModel& model);

// nbar(x).  Throws DomainError below domain_min.
double evaluate_average(const CountingModel& model, double x);

// Solves nbar(x) = y for x by bracketed bisection.  The initial
// bracket starts at the domain edge and doubles until it straddles y
// (growth capped at 200 steps, IterationLimit beyond).  Bisection runs
// to |hi - lo| <= tol * max(1, |x|).
double invert_average(const CountingModel& model, double y,
                      double tol = 1e-10);

// Antiderivative of nbar on [a, b], in closed form for every kind.
// Used by staircase-expansion consumers that need integral k dN parts.
double integral_average(const CountingModel& model, double a, double b);

// ── unfolding ───────────────────────────────────────────────────────

struct UnfoldedSequence {
  Sequence values;      // k_n = nbar(E_n) + 1/2, ascending
  Sequence deltas;      // delta_n = k_n - n  (n starting at 1)
  std::string origin;   // copied from the input sequence
  double mean_delta;    // mean of deltas

  Eigen::Index size() const { return values.size(); }
};

// Maps each level through the model and adds 1/2 so that the
// fluctuations delta_n are centred near zero for a well matched model.
// Levels at or below domain_min(model) throw DomainError.
UnfoldedSequence unfold(const SpectralSequence& seq,
                        const CountingModel& model);

// Least-squares straight line nbar(x) = c0 + c1 x through the points
// (E_n, n - 1/2); the -1/2 makes the subsequent unfold shift land the
// k_n of an exactly rigid sequence on the integers.  Returns a
// PolynomialFit model.  For a metric-graph spectrum the slope
// recovers the total length as L = pi c1 (see weyl_length).
CountingModel fit_linear_average(const SpectralSequence& seq);

// Total metric length implied by a fitted linear average.
double weyl_length(const CountingModel& model);

}  // namespace interlace

#endif
