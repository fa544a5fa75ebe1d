#ifndef INTERLACE_GRAPH_HPP
#define INTERLACE_GRAPH_HPP

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "interlace/counting.hpp"
#include "interlace/trace.hpp"

// Metric quantum graphs with Kirchhoff (Neumann) vertex conditions.
//
// The spectrum is carried by the 2B x 2B unitary bond-evolution
// operator U(k) = S D(k): D propagates a phase e^{ikL_b} along each
// directed bond, S scatters at vertices with sigma_ij = 2/d - delta_ij.
// k is an eigenvalue exactly when some eigenphase of U(k) passes
// through zero mod 2pi.  Counting needs no continuation in k: with
// Phi(k) the sum of principal eigenphases in [0, 2pi),
//
//   N(k) = (2 L0 k + Phi(0) - Phi(k)) / (2 pi)
//
// exactly, because the total phase winds at the constant rate 2 L0
// while each individual wrap drops Phi by 2pi.

namespace interlace {

enum class BoundaryCondition { Kirchhoff };

struct Bond {
  int from = 0;
  int to = 0;
  double length = 0.0;
};

class QuantumGraph {
 public:
  // Validates: at least one bond, positive finite lengths, endpoint
  // indices in range, connectedness.
  static QuantumGraph checked(int vertex_count, std::vector<Bond> bonds,
                              BoundaryCondition boundary =
                                  BoundaryCondition::Kirchhoff);

  int vertex_count() const { return vertex_count_; }
  const std::vector<Bond>& bonds() const { return bonds_; }
  BoundaryCondition boundary() const { return boundary_; }

  double total_length() const { return total_length_; }  // L0
  double max_bond_length() const { return max_length_; }

  // Directed bond d: 2b traverses bond b from->to, 2b+1 the reverse.
  int directed_count() const { return 2 * static_cast<int>(bonds_.size()); }
  int tail(int d) const { return d % 2 == 0 ? bonds_[d / 2].from : bonds_[d / 2].to; }
  int head(int d) const { return d % 2 == 0 ? bonds_[d / 2].to : bonds_[d / 2].from; }
  double directed_length(int d) const { return bonds_[d / 2].length; }
  int reverse(int d) const { return d ^ 1; }
  int valence(int v) const { return valences_[static_cast<std::size_t>(v)]; }

  // Full scattering matrix over directed bonds (real orthogonal).
  const Eigen::MatrixXd& scattering_matrix() const { return scattering_; }
  // Sum of principal eigenphases of S = U(0), cached.
  double phi_zero() const { return phi_zero_; }
  // Counting-line constant: N(k) ~ L0 k / pi + weyl_constant().
  double weyl_constant() const;

 private:
  int vertex_count_ = 0;
  std::vector<Bond> bonds_;
  BoundaryCondition boundary_ = BoundaryCondition::Kirchhoff;
  std::vector<int> valences_;
  double total_length_ = 0.0;
  double max_length_ = 0.0;
  Eigen::MatrixXd scattering_;
  double phi_zero_ = 0.0;
};

// sigma_ij = 2/valence - delta_ij; real symmetric, orthogonal.
Eigen::MatrixXd vertex_scattering(int valence);

// U(k) = S D(k) over directed bonds.
Eigen::MatrixXcd bond_evolution(const QuantumGraph& g, double k);

// Exact eigenvalue count on (0, k] via the winding identity above.
// Integer-valued away from eigenvalues.
double counting_function(const QuantumGraph& g, double k);

struct GraphSpectrum {
  Eigen::ArrayXd values;           // ascending, one entry per distinct root
  std::vector<int> multiplicities; // aligned with values

  // Strictly increasing sequence of the roots.  Multiplicities above
  // one throw ValidationError unless flatten_degenerate is set, which
  // repeats each root with a +1e-9 relative stagger per extra copy.
  SpectralSequence sequence(bool flatten_degenerate = false) const;
};

// All roots in (0, k_max]: a grid of step pi/(8 max L_b) bounds each
// eigenphase's motion well under pi, then every counting jump is
// bisected to 1e-10 * max(1, k).  Clustered roots closer than the
// refinement width merge into one entry with summed multiplicity.
// Throws TrackingLoss if refinement exceeds its depth cap.
GraphSpectrum compute_spectrum(const QuantumGraph& g, double k_max);

struct PeriodicOrbit {
  std::vector<int> cycle;  // primitive closed walk, directed bond indices
  int repetition = 1;      // m: the orbit traverses the cycle m times
  double length = 0.0;     // m * primitive length
  std::complex<double> amplitude;  // scattering product over m traversals
};

// All periodic orbits of metric length <= cutoff: primitive closed
// directed-bond walks (canonical form: lexicographically least
// rotation) plus their repetitions.  Walks whose amplitude is exactly
// zero (transparent-vertex backscattering) are pruned.  Throws
// CutoffTooLarge when the output or the search frontier would exceed
// the cap.
std::vector<PeriodicOrbit> enumerate_orbits(const QuantumGraph& g,
                                            double length_cutoff,
                                            std::size_t orbit_cap = 10000000);

// Exact truncated trace formula of the graph staircase:
//   N(k) = L0 k / pi + weyl_constant + sum_orbits Im[A_p e^{i L_p k}] / (pi m)
// realized as a PolynomialFit average (slope L0/pi, the constant term
// above) plus one harmonic per orbit with amplitude
// normalization * A_p / (pi m).  The default normalization 1 is exact
// for Kirchhoff graphs; the knob stays exposed for experiments.
StaircaseExpansion graph_expansion(const QuantumGraph& g,
                                   const std::vector<PeriodicOrbit>& orbits,
                                   double normalization = 1.0);

// {"vertices": N, "bonds": [{"from": i, "to": j, "length": x}],
//  "boundary": "kirchhoff"}
QuantumGraph parse_graph_json(const std::string& text);

}  // namespace interlace

#endif
