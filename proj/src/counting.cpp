#include "interlace/counting.hpp"

#include <cmath>
#include <numbers>

namespace interlace {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double rvm_average(double e) {
  return e / kTwoPi * (std::log(e / kTwoPi) - 1.0) + 7.0 / 8.0;
}

double local_average(double e) {
  return e / kTwoPi * (std::log(e / kTwoPi) - 1.0);
}

double poly_eval(const Eigen::VectorXd& c, double x) {
  double acc = 0.0;
  for (Eigen::Index i = c.size() - 1; i >= 0; --i) acc = acc * x + c[i];
  return acc;
}

// Antiderivative of e/(2 pi) (log(e/(2 pi)) - 1):
//   e^2/(4 pi) (log(e/(2 pi)) - 3/2)
double local_antiderivative(double e) {
  return e * e / (2.0 * kTwoPi) * (std::log(e / kTwoPi) - 1.5);
}

double bisect_monotone(const CountingModel& model, double y, double lo,
                       double hi, double tol) {
  for (int i = 0; i < 200 && hi - lo > tol * std::max(1.0, std::abs(hi));
       ++i) {
    double mid = 0.5 * (lo + hi);
    if (evaluate_average(model, mid) < y)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

void validate_sequence(const Sequence& values, Eigen::Index min_size) {
  if (values.size() < min_size)
    throw ValidationError(ValidationError::Kind::TooShort,
                          static_cast<std::size_t>(values.size()),
                          "sequence has " + std::to_string(values.size()) +
                              " entries, need at least " +
                              std::to_string(min_size));
  for (Eigen::Index i = 0; i < values.size(); ++i)
    if (!std::isfinite(values[i]))
      throw ValidationError(ValidationError::Kind::NonFinite,
                            static_cast<std::size_t>(i),
                            "non-finite value at position " +
                                std::to_string(i));
  for (Eigen::Index i = 0; i + 1 < values.size(); ++i)
    if (!(values[i] < values[i + 1]))
      throw ValidationError(ValidationError::Kind::NonMonotone,
                            static_cast<std::size_t>(i),
                            "values not strictly increasing at position " +
                                std::to_string(i));
}

double domain_min(const CountingModel& model) {
  struct Visitor {
    double operator()(const RiemannVonMangoldt&) const { return kTwoPi; }
    double operator()(const WeylLinear&) const {
      return -std::numeric_limits<double>::infinity();
    }
    double operator()(const PolynomialFit&) const {
      return -std::numeric_limits<double>::infinity();
    }
    double operator()(const LocalSpacing&) const { return kTwoPi; }
  };
  return std::visit(Visitor{}, model);
}

double evaluate_average(const CountingModel& model, double x) {
  if (x < domain_min(model))
    throw DomainError("argument " + std::to_string(x) +
                      " below model domain edge " +
                      std::to_string(domain_min(model)));
  struct Visitor {
    double x;
    double operator()(const RiemannVonMangoldt&) const {
      return rvm_average(x);
    }
    double operator()(const WeylLinear& m) const {
      return m.total_length * x / std::numbers::pi;
    }
    double operator()(const PolynomialFit& m) const {
      return poly_eval(m.coefficients, x);
    }
    double operator()(const LocalSpacing&) const { return local_average(x); }
  };
  return std::visit(Visitor{x}, model);
}

double invert_average(const CountingModel& model, double y, double tol) {
  double lo = domain_min(model);
  if (!std::isfinite(lo)) lo = -1.0;
  double flo = evaluate_average(model, lo);
  // Degenerate but legal: y at or below the value on the domain edge.
  if (flo >= y) {
    if (flo == y) return lo;
    // For unbounded-below models walk left instead of right.
    if (!std::isfinite(domain_min(model))) {
      double step = 1.0;
      double hi = lo;
      int iter = 0;
      while (evaluate_average(model, lo) > y) {
        hi = lo;
        lo -= step;
        step *= 2.0;
        if (++iter > 200)
          throw IterationLimit("bracket growth exceeded 200 doublings");
      }
      return bisect_monotone(model, y, lo, hi, tol);
    }
    throw DomainError("target " + std::to_string(y) +
                      " below model value at domain edge");
  }
  double step = std::max(1.0, std::abs(lo));
  double hi = lo + step;
  int iter = 0;
  while (evaluate_average(model, hi) < y) {
    lo = hi;
    step *= 2.0;
    hi += step;
    if (++iter > 200)
      throw IterationLimit("bracket growth exceeded 200 doublings");
  }
  return bisect_monotone(model, y, lo, hi, tol);
}

double integral_average(const CountingModel& model, double a, double b) {
  if (a > b) return -integral_average(model, b, a);
  if (a < domain_min(model))
    throw DomainError("integration endpoint below model domain edge");
  struct Visitor {
    double a, b;
    double operator()(const RiemannVonMangoldt&) const {
      auto f = [](double e) { return local_antiderivative(e) + 7.0 / 8.0 * e; };
      return f(b) - f(a);
    }
    double operator()(const WeylLinear& m) const {
      return m.total_length / std::numbers::pi * 0.5 * (b * b - a * a);
    }
    double operator()(const PolynomialFit& m) const {
      auto f = [&](double x) {
        double acc = 0.0;
        for (Eigen::Index i = m.coefficients.size() - 1; i >= 0; --i)
          acc = acc * x + m.coefficients[i] / static_cast<double>(i + 1);
        return acc * x;
      };
      return f(b) - f(a);
    }
    double operator()(const LocalSpacing&) const {
      return local_antiderivative(b) - local_antiderivative(a);
    }
  };
  return std::visit(Visitor{a, b}, model);
}

UnfoldedSequence unfold(const SpectralSequence& seq,
                        const CountingModel& model) {
  validate_sequence(seq.values);
  UnfoldedSequence out;
  out.values.resize(seq.values.size());
  for (Eigen::Index i = 0; i < seq.values.size(); ++i)
    out.values[i] = evaluate_average(model, seq.values[i]) + 0.5;
  out.deltas = out.values -
               Eigen::ArrayXd::LinSpaced(out.values.size(), 1.0,
                                         static_cast<double>(out.values.size()));
  out.origin = seq.origin;
  out.mean_delta = out.deltas.mean();
  return out;
}

CountingModel fit_linear_average(const SpectralSequence& seq) {
  validate_sequence(seq.values);
  const Eigen::Index n = seq.values.size();
  Eigen::MatrixXd a(n, 2);
  a.col(0).setOnes();
  a.col(1) = seq.values.matrix();
  Eigen::VectorXd rhs =
      Eigen::VectorXd::LinSpaced(n, 1.0, static_cast<double>(n)).array() - 0.5;
  Eigen::VectorXd c = a.colPivHouseholderQr().solve(rhs);
  return PolynomialFit{c};
}

double weyl_length(const CountingModel& model) {
  if (const auto* w = std::get_if<WeylLinear>(&model)) return w->total_length;
  if (const auto* p = std::get_if<PolynomialFit>(&model)) {
    if (p->coefficients.size() < 2)
      throw DomainError("polynomial average has no linear term");
    return std::numbers::pi * p->coefficients[1];
  }
  throw DomainError("model kind carries no metric length");
}

}  // namespace interlace
