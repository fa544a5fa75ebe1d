#include "interlace/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <utility>

#include <Eigen/Eigenvalues>
#include <nlohmann/json.hpp>

namespace interlace {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Sum of principal eigenphases of a unitary matrix, each in [0, 2pi).
double principal_phase_sum(const Eigen::MatrixXcd& u) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(u, false);
  if (solver.info() != Eigen::Success)
    throw TrackingLoss("eigenphase computation failed to converge");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    double phase = std::arg(solver.eigenvalues()[i]);  // (-pi, pi]
    if (phase < 0.0) phase += kTwoPi;
    sum += phase;
  }
  return sum;
}

// Scattering coefficient for the directed transition d -> d2 at the
// shared vertex, zero when the bonds do not meet head-to-tail.
double transition_coefficient(const QuantumGraph& g, int d, int d2) {
  const int v = g.head(d);
  if (g.tail(d2) != v) return 0.0;
  double c = 2.0 / g.valence(v);
  if (d2 == g.reverse(d)) c -= 1.0;
  return c;
}

}  // namespace

Eigen::MatrixXd vertex_scattering(int valence) {
  if (valence < 1) throw DomainError("vertex valence must be at least 1");
  const double off = 2.0 / valence;
  return Eigen::MatrixXd::Constant(valence, valence, off) -
         Eigen::MatrixXd::Identity(valence, valence);
}

QuantumGraph QuantumGraph::checked(int vertex_count, std::vector<Bond> bonds,
                                   BoundaryCondition boundary) {
  if (vertex_count < 1) throw DomainError("graph needs at least one vertex");
  if (bonds.empty()) throw DomainError("graph needs at least one bond");
  for (std::size_t b = 0; b < bonds.size(); ++b) {
    const Bond& bond = bonds[b];
    if (bond.from < 0 || bond.from >= vertex_count || bond.to < 0 ||
        bond.to >= vertex_count)
      throw DomainError("bond " + std::to_string(b) +
                        " references a vertex out of range");
    if (!(bond.length > 0.0) || !std::isfinite(bond.length))
      throw DomainError("bond " + std::to_string(b) +
                        " must have positive finite length");
  }

  QuantumGraph g;
  g.vertex_count_ = vertex_count;
  g.bonds_ = std::move(bonds);
  g.boundary_ = boundary;

  g.valences_.assign(static_cast<std::size_t>(vertex_count), 0);
  for (const Bond& bond : g.bonds_) {
    g.valences_[static_cast<std::size_t>(bond.from)] += 1;
    g.valences_[static_cast<std::size_t>(bond.to)] += 1;
    g.total_length_ += bond.length;
    g.max_length_ = std::max(g.max_length_, bond.length);
  }

  // Connectivity: isolated vertices or split components make the
  // counting identity meaningless for the union.
  std::vector<char> seen(static_cast<std::size_t>(vertex_count), 0);
  std::queue<int> frontier;
  frontier.push(g.bonds_[0].from);
  seen[static_cast<std::size_t>(g.bonds_[0].from)] = 1;
  while (!frontier.empty()) {
    const int v = frontier.front();
    frontier.pop();
    for (const Bond& bond : g.bonds_) {
      int next = -1;
      if (bond.from == v) next = bond.to;
      else if (bond.to == v) next = bond.from;
      if (next >= 0 && !seen[static_cast<std::size_t>(next)]) {
        seen[static_cast<std::size_t>(next)] = 1;
        frontier.push(next);
      }
    }
  }
  for (int v = 0; v < vertex_count; ++v)
    if (!seen[static_cast<std::size_t>(v)])
      throw DomainError("graph is not connected: vertex " +
                        std::to_string(v) + " is unreachable");

  const int n = g.directed_count();
  g.scattering_ = Eigen::MatrixXd::Zero(n, n);
  for (int d = 0; d < n; ++d)
    for (int d2 = 0; d2 < n; ++d2)
      g.scattering_(d2, d) = transition_coefficient(g, d, d2);

  // S is real orthogonal, so its spectrum is {+1, -1} plus conjugate
  // pairs whose principal phases sum to 2pi each.  Counting the +1
  // copies gives the phase sum without the 0-vs-2pi wrap ambiguity a
  // direct arg() of a nearly-real eigenvalue would have.
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(
      g.scattering_.cast<std::complex<double>>(), false);
  if (solver.info() != Eigen::Success)
    throw TrackingLoss("scattering eigenphases failed to converge");
  int plus_one = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    if (std::abs(solver.eigenvalues()[i] - 1.0) < 1e-8) ++plus_one;
  g.phi_zero_ = std::numbers::pi * (n - plus_one);
  return g;
}

double QuantumGraph::weyl_constant() const {
  return phi_zero_ / kTwoPi - static_cast<double>(bonds_.size());
}

Eigen::MatrixXcd bond_evolution(const QuantumGraph& g, double k) {
  const int n = g.directed_count();
  Eigen::MatrixXcd u = g.scattering_matrix().cast<std::complex<double>>();
  for (int d = 0; d < n; ++d)
    u.col(d) *= std::exp(std::complex<double>(0.0, k * g.directed_length(d)));
  return u;
}

double counting_function(const QuantumGraph& g, double k) {
  if (k < 0.0) throw DomainError("counting function needs k >= 0");
  if (k == 0.0) return 0.0;
  const double phi = principal_phase_sum(bond_evolution(g, k));
  return (2.0 * g.total_length() * k + g.phi_zero() - phi) / kTwoPi;
}

SpectralSequence GraphSpectrum::sequence(bool flatten_degenerate) const {
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(values.size()));
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const int m = multiplicities[static_cast<std::size_t>(i)];
    if (m > 1 && !flatten_degenerate)
      throw ValidationError(ValidationError::Kind::NonMonotone,
                            static_cast<std::size_t>(i),
                            "root " + std::to_string(i) +
                                " has multiplicity " + std::to_string(m) +
                                "; a strictly increasing sequence needs "
                                "flatten_degenerate");
    for (int c = 0; c < m; ++c)
      flat.push_back(values[i] * (1.0 + 1e-9 * c));
  }
  SpectralSequence out;
  out.values = Eigen::Map<const Eigen::ArrayXd>(
      flat.data(), static_cast<Eigen::Index>(flat.size()));
  out.origin = "graph";
  validate_sequence(out.values);
  return out;
}

namespace {

struct RootAccumulator {
  std::vector<double> roots;
  std::vector<int> mults;

  void add(double k, int mult, double merge_width) {
    if (!roots.empty() && k - roots.back() < merge_width) {
      mults.back() += mult;
      return;
    }
    roots.push_back(k);
    mults.push_back(mult);
  }
};

// Bisect a counting jump down to the target width.  The jump count in
// [a, b] is (nb - na); when the interval is narrower than tol all the
// roots inside merge into one reported value.
void refine_jump(const QuantumGraph& g, double a, double na, double b,
                 double nb, double tol, int depth, RootAccumulator& acc) {
  if (depth > 200)
    throw TrackingLoss("root refinement exceeded its depth cap");
  const int jump = static_cast<int>(std::llround(nb - na));
  if (jump <= 0) return;
  if (b - a < tol) {
    acc.add(0.5 * (a + b), jump, 4.0 * tol);
    return;
  }
  const double m = 0.5 * (a + b);
  const double nm = counting_function(g, m);
  refine_jump(g, a, na, m, nm, tol, depth + 1, acc);
  refine_jump(g, m, nm, b, nb, tol, depth + 1, acc);
}

}  // namespace

GraphSpectrum compute_spectrum(const QuantumGraph& g, double k_max) {
  if (!(k_max > 0.0) || !std::isfinite(k_max))
    throw DomainError("k_max must be positive and finite");

  // Grid fine enough that no eigenphase moves by 2pi across one step:
  // phases advance at most 2 max(L_b) per unit k.
  const double step = std::numbers::pi / (8.0 * g.max_bond_length());
  RootAccumulator acc;
  double a = 0.0;
  double na = 0.0;
  while (a < k_max) {
    const double b = std::min(a + step, k_max);
    const double nb = counting_function(g, b);
    const double tol = 1e-10 * std::max(1.0, b);
    refine_jump(g, a, na, b, nb, tol, 0, acc);
    a = b;
    na = nb;
  }

  GraphSpectrum spectrum;
  spectrum.values = Eigen::Map<const Eigen::ArrayXd>(
      acc.roots.data(), static_cast<Eigen::Index>(acc.roots.size()));
  spectrum.multiplicities = std::move(acc.mults);
  return spectrum;
}

namespace {

// True when the cycle equals one of its proper rotations, i.e. it is a
// power of a shorter word.
bool is_power(const std::vector<int>& cycle) {
  const std::size_t t = cycle.size();
  for (std::size_t shift = 1; shift < t; ++shift) {
    if (t % shift != 0) continue;
    bool equal = true;
    for (std::size_t i = 0; i < t && equal; ++i)
      equal = cycle[i] == cycle[(i + shift) % t];
    if (equal) return true;
  }
  return false;
}

// True when the cycle is the lexicographically least of its rotations.
bool is_least_rotation(const std::vector<int>& cycle) {
  const std::size_t t = cycle.size();
  for (std::size_t shift = 1; shift < t; ++shift)
    for (std::size_t i = 0; i < t; ++i) {
      const int lhs = cycle[(shift + i) % t];
      if (lhs != cycle[i]) {
        if (lhs < cycle[i]) return false;
        break;
      }
    }
  return true;
}

struct OrbitSearch {
  const QuantumGraph& g;
  double cutoff;
  std::size_t cap;
  std::size_t visited = 0;
  std::vector<int> walk;
  std::vector<PeriodicOrbit>* out;

  // Outgoing directed bonds per vertex, ascending index so the DFS
  // emits the least rotation first and the canonical test prunes the
  // rest.
  std::vector<std::vector<int>> outgoing;

  void expand_primitive(double prim_length,
                        const std::complex<double>& prim_amp) {
    double length = prim_length;
    std::complex<double> amp = prim_amp;
    int m = 1;
    while (length <= cutoff) {
      if (out->size() >= cap)
        throw CutoffTooLarge("orbit count exceeds the cap");
      out->push_back(PeriodicOrbit{walk, m, length, amp});
      length += prim_length;
      amp *= prim_amp;
      m += 1;
    }
  }

  void dfs(double length, std::complex<double> amp) {
    if (++visited > cap)
      throw CutoffTooLarge("orbit search frontier exceeds the cap");
    const int last = walk.back();
    const int first = walk.front();
    // Close the walk if the return transition scatters.
    if (g.head(last) == g.tail(first)) {
      const double c = transition_coefficient(g, last, first);
      if (c != 0.0 && is_least_rotation(walk) && !is_power(walk))
        expand_primitive(length, amp * c);
    }
    for (int next : outgoing[static_cast<std::size_t>(g.head(last))]) {
      if (next < first) continue;  // canonical walks start at their minimum
      const double c = transition_coefficient(g, last, next);
      if (c == 0.0) continue;
      const double extended = length + g.directed_length(next);
      if (extended > cutoff) continue;
      walk.push_back(next);
      dfs(extended, amp * c);
      walk.pop_back();
    }
  }
};

}  // namespace

std::vector<PeriodicOrbit> enumerate_orbits(const QuantumGraph& g,
                                            double length_cutoff,
                                            std::size_t orbit_cap) {
  if (!(length_cutoff > 0.0) || !std::isfinite(length_cutoff))
    throw DomainError("length cutoff must be positive and finite");

  std::vector<PeriodicOrbit> orbits;
  OrbitSearch search{g, length_cutoff, orbit_cap, 0, {}, &orbits, {}};
  search.outgoing.resize(static_cast<std::size_t>(g.vertex_count()));
  for (int d = 0; d < g.directed_count(); ++d)
    search.outgoing[static_cast<std::size_t>(g.tail(d))].push_back(d);

  for (int start = 0; start < g.directed_count(); ++start) {
    if (g.directed_length(start) > length_cutoff) continue;
    search.walk.assign(1, start);
    search.dfs(g.directed_length(start), {1.0, 0.0});
  }

  std::stable_sort(orbits.begin(), orbits.end(),
                   [](const PeriodicOrbit& a, const PeriodicOrbit& b) {
                     return a.length < b.length;
                   });
  return orbits;
}

StaircaseExpansion graph_expansion(const QuantumGraph& g,
                                   const std::vector<PeriodicOrbit>& orbits,
                                   double normalization) {
  Eigen::VectorXd coeffs(2);
  coeffs << g.weyl_constant(), g.total_length() / std::numbers::pi;

  std::vector<Harmonic> harmonics;
  harmonics.reserve(orbits.size());
  double longest = 0.0;
  for (const PeriodicOrbit& p : orbits) {
    harmonics.push_back(Harmonic{
        normalization * p.amplitude / (std::numbers::pi * p.repetition),
        p.length});
    longest = std::max(longest, p.length);
  }
  return make_expansion(PolynomialFit{std::move(coeffs)},
                        std::move(harmonics),
                        std::to_string(orbits.size()) +
                            " orbits, lengths <= " + std::to_string(longest));
}

QuantumGraph parse_graph_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(0, std::string("graph JSON: ") + e.what());
  }
  try {
    const int vertices = j.at("vertices").get<int>();
    std::vector<Bond> bonds;
    for (const auto& entry : j.at("bonds")) {
      bonds.push_back(Bond{entry.at("from").get<int>(),
                           entry.at("to").get<int>(),
                           entry.at("length").get<double>()});
    }
    BoundaryCondition boundary = BoundaryCondition::Kirchhoff;
    if (j.contains("boundary")) {
      const auto name = j.at("boundary").get<std::string>();
      if (name != "kirchhoff")
        throw DomainError("unsupported boundary condition: " + name);
    }
    return QuantumGraph::checked(vertices, std::move(bonds), boundary);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("graph JSON: ") + e.what());
  }
}

}  // namespace interlace
