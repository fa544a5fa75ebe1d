#include "interlace/trace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

namespace interlace {

namespace {

// Kahan-compensated accumulator; the harmonic sums run over thousands
// of near-cancelling terms and must reproduce bit-identically.
struct Compensated {
  double sum = 0.0, carry = 0.0;
  void add(double v) {
    const double y = v - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

double damping_factor(double length, double damping_length) {
  if (damping_length <= 0.0) return 1.0;
  const double r = length / damping_length;
  return std::exp(-r * r);
}

std::vector<long long> primes_up_to(long long n) {
  std::vector<long long> out;
  if (n < 2) return out;
  std::vector<bool> composite(static_cast<std::size_t>(n) + 1, false);
  for (long long p = 2; p <= n; ++p) {
    if (composite[static_cast<std::size_t>(p)]) continue;
    out.push_back(p);
    for (long long q = p * p; q <= n; q += p)
      composite[static_cast<std::size_t>(q)] = true;
  }
  return out;
}

}  // namespace

StaircaseExpansion make_expansion(CountingModel average,
                                  std::vector<Harmonic> harmonics,
                                  std::string truncation) {
  for (std::size_t i = 0; i < harmonics.size(); ++i) {
    const auto& h = harmonics[i];
    if (!(h.length > 0.0) || !std::isfinite(h.length))
      throw DomainError("harmonic " + std::to_string(i) +
                        " has non-positive length");
    if (!std::isfinite(h.amplitude.real()) || !std::isfinite(h.amplitude.imag()))
      throw DomainError("harmonic " + std::to_string(i) +
                        " has non-finite amplitude");
  }
  std::stable_sort(harmonics.begin(), harmonics.end(),
                   [](const Harmonic& a, const Harmonic& b) {
                     return a.length < b.length;
                   });
  return {std::move(average), std::move(harmonics), std::move(truncation)};
}

double staircase_eval(const StaircaseExpansion& x, double k,
                      double damping_length) {
  Compensated acc;
  for (const auto& h : x.harmonics) {
    const std::complex<double> term =
        h.amplitude * std::exp(std::complex<double>(0.0, h.length * k));
    acc.add(term.imag() * damping_factor(h.length, damping_length));
  }
  return evaluate_average(x.average, k) + acc.sum;
}

StaircaseExpansion riemann_expansion(long long prime_cutoff, int m_max) {
  if (prime_cutoff < 2) throw DomainError("prime cutoff must be at least 2");
  if (m_max < 1) throw DomainError("repetition cutoff must be at least 1");
  std::vector<Harmonic> harmonics;
  for (long long p : primes_up_to(prime_cutoff)) {
    double power = 1.0;
    const double root = std::sqrt(static_cast<double>(p));
    for (int m = 1; m <= m_max; ++m) {
      power *= root;  // p^{m/2}
      harmonics.push_back(Harmonic{
          std::complex<double>(-1.0 / (std::numbers::pi * m * power), 0.0),
          m * std::log(static_cast<double>(p))});
    }
  }
  return make_expansion(RiemannVonMangoldt{}, std::move(harmonics),
                        "primes <= " + std::to_string(prime_cutoff) +
                            ", repetitions <= " + std::to_string(m_max));
}

double integral_k_dN(const StaircaseExpansion& x, double a, double b) {
  if (!(a < b)) throw DomainError("integration interval is empty");
  // b N(b) - a N(a) - integral of N.  The average part of the last
  // term is exact (integral_average); each harmonic integrates to
  // Im[A (e^{iLb} - e^{iLa}) / (iL)].
  const double nb = staircase_eval(x, b);
  const double na = staircase_eval(x, a);
  double integral = integral_average(x.average, a, b);
  Compensated osc;
  for (const auto& h : x.harmonics) {
    const std::complex<double> phase_b =
        std::exp(std::complex<double>(0.0, h.length * b));
    const std::complex<double> phase_a =
        std::exp(std::complex<double>(0.0, h.length * a));
    const std::complex<double> term =
        h.amplitude * (phase_b - phase_a) /
        std::complex<double>(0.0, h.length);
    osc.add(term.imag());
  }
  return b * nb - a * na - (integral + osc.sum);
}

SpectralSequence reconstruct_spectrum(const StaircaseExpansion& x,
                                      const HierarchyLevel& separators) {
  const Eigen::Index n = separators.values.size();
  if (n < 2)
    throw ValidationError(ValidationError::Kind::TooShort,
                          static_cast<std::size_t>(n),
                          "need at least two separators");
  SpectralSequence out;
  out.values.resize(n - 1);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const double a = separators.values[i];
    const double b = separators.values[i + 1];
    const double mass = staircase_eval(x, b) - staircase_eval(x, a);
    if (!(mass > 0.0))
      throw NotRegular("separator interval " + std::to_string(i) +
                       " carries nonpositive staircase mass " +
                       std::to_string(mass));
    out.values[i] = integral_k_dN(x, a, b) / mass;
  }
  out.origin = "reconstructed";
  return out;
}

SpectralSequence regular_graph_spectrum(const StaircaseExpansion& x,
                                        double L0, int n_lo, int n_hi,
                                        double gamma) {
  if (!(L0 > 0.0)) throw DomainError("total length must be positive");
  if (n_lo < 1 || n_hi < n_lo) throw DomainError("bad level index range");
  SpectralSequence out;
  out.values.resize(n_hi - n_lo + 1);
  const double unit = std::numbers::pi / L0;
  for (int n = n_lo; n <= n_hi; ++n) {
    const double a = unit * (n - 1.0 + gamma);
    const double b = unit * (n + gamma);
    const double mass = staircase_eval(x, b) - staircase_eval(x, a);
    if (std::abs(mass - 1.0) > 0.5)
      throw NotRegular("corridor around level " + std::to_string(n) +
                       " holds " + std::to_string(mass) +
                       " levels instead of one");
    const double kn = integral_k_dN(x, a, b) / mass;
    if (kn < a || kn > b)
      throw NotRegular("reconstructed level " + std::to_string(n) +
                       " escapes its corridor");
    out.values[n - n_lo] = kn;
  }
  out.origin = "regular-graph";
  return out;
}

std::string expansion_json(const StaircaseExpansion& x) {
  nlohmann::json j;
  struct Visitor {
    nlohmann::json operator()(const RiemannVonMangoldt&) const {
      return {{"kind", "riemann-von-mangoldt"}};
    }
    nlohmann::json operator()(const WeylLinear& m) const {
      return {{"kind", "weyl-linear"}, {"total_length", m.total_length}};
    }
    nlohmann::json operator()(const PolynomialFit& m) const {
      std::vector<double> c(m.coefficients.data(),
                            m.coefficients.data() + m.coefficients.size());
      return {{"kind", "polynomial"}, {"coefficients", c}};
    }
    nlohmann::json operator()(const LocalSpacing&) const {
      return {{"kind", "local-spacing"}};
    }
  };
  j["average"] = std::visit(Visitor{}, x.average);
  auto arr = nlohmann::json::array();
  for (const auto& h : x.harmonics)
    arr.push_back({{"re", h.amplitude.real()},
                   {"im", h.amplitude.imag()},
                   {"length", h.length}});
  j["harmonics"] = std::move(arr);
  if (!x.truncation.empty()) j["truncation"] = x.truncation;
  return j.dump(2);
}

}  // namespace interlace
