#ifndef INTERLACE_TRACE_HPP
#define INTERLACE_TRACE_HPP

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "interlace/counting.hpp"
#include "interlace/hierarchy.hpp"

// Harmonic staircase expansions and eigenvalue reconstruction.
//
// A staircase expansion approximates a counting function as
//
//   N(k) = nbar(k) + Im sum_p A_p e^{i L_p k}
//
// with energy-independent amplitudes (scaling systems).  Individual
// levels are recovered from the expansion through the first-moment
// integral k_n = integral k dN(k) taken between separators that
// bracket exactly one level each.

namespace interlace {

struct Harmonic {
  std::complex<double> amplitude;
  double length = 0.0;  // action slope; the phase is length * k
};

struct StaircaseExpansion {
  CountingModel average;
  std::vector<Harmonic> harmonics;  // ascending length
  std::string truncation;           // human-readable cutoff rule
};

// Sorts by length, validates finiteness and positive lengths.
StaircaseExpansion make_expansion(CountingModel average,
                                  std::vector<Harmonic> harmonics,
                                  std::string truncation = {});

// nbar(k) + Im sum A_p e^{i L_p k}, compensated summation in ascending
// length order.  A positive damping_length multiplies each term by
// exp(-(L_p/damping_length)^2): plot smoothing, off by default.
double staircase_eval(const StaircaseExpansion& x, double k,
                      double damping_length = 0.0);

// Prime-power expansion of the zero-counting staircase: one harmonic
// per (prime p <= prime_cutoff, 1 <= m <= m_max) with
//   L = m ln p,  A = -1 / (pi m p^{m/2}),
// over the RiemannVonMangoldt average.
StaircaseExpansion riemann_expansion(long long prime_cutoff, int m_max);

// integral_a^b k dN(k) = b N(b) - a N(a) - integral_a^b N, the last
// term in closed form: the average through integral_average, each
// harmonic through Im[A (e^{iLb} - e^{iLa}) / (iL)].
double integral_k_dN(const StaircaseExpansion& x, double a, double b);

// One level per adjacent separator pair: the first-moment integral
// divided by the staircase mass N(b) - N(a) of the pair's interval.
// The caller guarantees each pair brackets exactly one level, so the
// mass is near one; dividing by it instead of assuming it equals one
// cancels the k-amplified truncation error b dN(b) - a dN(a) that
// dominates the raw moment, and changes nothing when the expansion
// is exact.  Throws NotRegular on an interval with nonpositive mass.
SpectralSequence reconstruct_spectrum(const StaircaseExpansion& x,
                                      const HierarchyLevel& separators);

// Constructive spectrum of a regular graph: for n in [n_lo, n_hi],
//   k_n = integral over [pi(n-1+gamma)/L0, pi(n+gamma)/L0] of k dN,
// mass-normalized like reconstruct_spectrum.  Throws NotRegular when
// a reconstructed level escapes its corridor or the corridor mass
// strays from one level by more than 1/2.
SpectralSequence regular_graph_spectrum(const StaircaseExpansion& x,
                                        double L0, int n_lo, int n_hi,
                                        double gamma = 0.5);

// {average: {...}, harmonics: [{re, im, length}]}
std::string expansion_json(const StaircaseExpansion& x);

}  // namespace interlace

#endif
