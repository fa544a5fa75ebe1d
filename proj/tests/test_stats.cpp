#include <doctest/doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "interlace/stats.hpp"

using namespace interlace;

namespace {
HierarchyLevel level_of(std::initializer_list<double> v) {
  Sequence s(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) s[i++] = x;
  return HierarchyLevel::from_values(0, std::move(s));
}
FiniteSymbolSequence bits(const std::string& s,
                          std::optional<std::int64_t> mod = 2) {
  std::vector<std::int64_t> v;
  for (char c : s) v.push_back(c - '0');
  return FiniteSymbolSequence::checked(std::move(v), mod);
}
}  // namespace

TEST_CASE("spacings and xi on small levels") {
  auto l = level_of({1.0, 2.0, 3.0});
  auto s = spacings(l);
  CHECK(s.size() == 2);
  CHECK(s[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(s[1] == doctest::Approx(1.0).epsilon(1e-15));

  auto l2 = level_of({1.2, 1.8});  // deltas 0.2, -0.2
  auto xi = xi_statistic(l2);
  CHECK(xi.size() == 1);
  CHECK(xi[0] == doctest::Approx(0.0).epsilon(1e-15));

  auto l3 = level_of({1.3, 2.3, 3.3});  // constant delta 0.3
  auto xi3 = xi_statistic(l3);
  CHECK(xi3[0] == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(xi3[1] == doctest::Approx(0.3).epsilon(1e-15));

  CHECK_THROWS_AS(spacings(level_of({1.0})), ValidationError);
}

TEST_CASE("histogram normalization conventions") {
  Eigen::ArrayXd one(1);
  one << 0.5;
  auto h1 = histogram(one, 1);
  REQUIRE(h1.counts.size() == 1);
  CHECK(h1.counts[0] == 1);
  // degenerate range widens to a unit bin: density 1/width = 1
  CHECK(h1.density[0] == doctest::Approx(1.0).epsilon(1e-12));

  std::mt19937 rng(5150);
  std::exponential_distribution<double> expo(1.0);
  Eigen::ArrayXd v(10000);
  for (int i = 0; i < 10000; ++i) v[i] = expo(rng);
  auto h = histogram(v, 50, std::pair{0.0, 3.0});
  double mass = 0.0;
  const double width = h.bin_edges[1] - h.bin_edges[0];
  for (Eigen::Index b = 0; b < h.density.size(); ++b)
    mass += h.density[b] * width;
  CHECK(mass <= 1.0 + 1e-9);   // out-of-range mass excluded
  CHECK(mass > 0.9);           // exp(-3) tail is ~5%

  // full-range histogram integrates to exactly 1
  auto hf = histogram(v, 37);
  double full = 0.0;
  const double wf = hf.bin_edges[1] - hf.bin_edges[0];
  for (Eigen::Index b = 0; b < hf.density.size(); ++b)
    full += hf.density[b] * wf;
  CHECK(full == doctest::Approx(1.0).epsilon(1e-9));

  CHECK_THROWS_AS(histogram(Eigen::ArrayXd(), 10), EmptyInput);
  CHECK_THROWS_AS(histogram(one, 0), DomainError);
}

TEST_CASE("histogram csv layout") {
  Eigen::ArrayXd v(4);
  v << 0.25, 0.75, 0.75, 1.75;
  auto h = histogram(v, 2, std::pair{0.0, 2.0});
  auto csv = histogram_csv(h);
  CHECK(csv.rfind("bin_left, bin_right, count, density\n", 0) == 0);
  CHECK(csv.find("0, 1, 3, 0.75\n") != std::string::npos);
  CHECK(csv.find("1, 2, 1, 0.25\n") != std::string::npos);
}

TEST_CASE("wigner reference curve") {
  CHECK(wigner_reference(0.0) == 0.0);
  // normalization by midpoint quadrature
  double sum = 0.0;
  const double dx = 1e-4;
  for (double s = 0.5 * dx; s < 8.0; s += dx) sum += wigner_reference(s) * dx;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-6));
  // mode at sqrt(2/pi)
  const double mode = std::sqrt(2.0 / std::numbers::pi);
  CHECK(wigner_reference(mode) > wigner_reference(mode - 1e-3));
  CHECK(wigner_reference(mode) > wigner_reference(mode + 1e-3));
  CHECK_THROWS_AS(wigner_reference(-0.1), DomainError);
}

TEST_CASE("difference operator: plain and cyclic") {
  auto c = FiniteSymbolSequence::checked({5, 5, 5});
  auto dc = difference(c);
  CHECK(dc.symbols == std::vector<std::int64_t>{0, 0});

  auto lin = FiniteSymbolSequence::checked({1, 3, 5, 7});
  auto d1 = difference(lin);
  CHECK(d1.symbols == std::vector<std::int64_t>{-2, -2, -2});
  auto d2 = difference(d1);
  CHECK(d2.symbols == std::vector<std::int64_t>{0, 0});

  auto alt = bits("0101");
  auto da = difference(alt);
  CHECK(da.symbols == std::vector<std::int64_t>{1, 1, 1, 1});
  CHECK(da.modulus == 2);
  auto dda = difference(da);
  CHECK(dda.symbols == std::vector<std::int64_t>{0, 0, 0, 0});

  CHECK_THROWS_AS(difference(FiniteSymbolSequence::checked({1})),
                  ValidationError);
}

TEST_CASE("difference is linear mod M") {
  std::mt19937 rng(777);
  for (int trial = 0; trial < 20; ++trial) {
    const std::int64_t m = 2 + rng() % 11;
    const std::size_t n = 3 + rng() % 12;
    std::vector<std::int64_t> a(n), b(n), s(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = rng() % m;
      b[i] = rng() % m;
      s[i] = (a[i] + b[i]) % m;
    }
    auto da = difference(FiniteSymbolSequence::checked(a, m));
    auto db = difference(FiniteSymbolSequence::checked(b, m));
    auto ds = difference(FiniteSymbolSequence::checked(s, m));
    for (std::size_t i = 0; i < n; ++i)
      CHECK(ds.symbols[i] == (da.symbols[i] + db.symbols[i]) % m);
  }
}

TEST_CASE("polynomial degree classification") {
  CHECK(poly_degree(FiniteSymbolSequence::checked({4, 4, 4, 4})) == 0);
  CHECK(poly_degree(FiniteSymbolSequence::checked({0, 0, 0})) == -1);

  std::vector<std::int64_t> squares;
  for (std::int64_t n = 1; n <= 10; ++n) squares.push_back(n * n);
  CHECK(poly_degree(FiniteSymbolSequence::checked(squares)) == 2);

  // Degree-m annihilation for m up to 5, non-cyclic.
  for (int m = 0; m <= 5; ++m) {
    std::vector<std::int64_t> samples;
    for (std::int64_t n = 0; n < 12; ++n) {
      std::int64_t p = 1;
      for (int k = 0; k < m; ++k) p *= (n - k);  // falling factorial
      samples.push_back(p + 3);
    }
    auto got = poly_degree(FiniteSymbolSequence::checked(samples));
    REQUIRE(got.has_value());
    CHECK(*got == m);
  }

  // Too short to ever annihilate: {1, 2} -> {-1} -> cannot continue.
  CHECK_FALSE(poly_degree(FiniteSymbolSequence::checked({2, 4})).has_value());
}

TEST_CASE("exponential order classification") {
  // zero sequence: Delta 0 = 0 = x after one step
  CHECK(exp_order(bits("0000")) == 1);
  // {1,0} mod 2 cyclic: Delta -> {1,1} -> {0,0} -> never returns
  CHECK_FALSE(exp_order(bits("10")).has_value());
  // mod 3 cyclic: cross-check against a brute-force iteration
  auto x = FiniteSymbolSequence::checked({0, 1, 2}, 3);
  auto got = exp_order(x, 64);
  // independent brute-force iteration
  std::optional<int> expect;
  auto cur = x;
  for (int q = 1; q <= 64; ++q) {
    cur = difference(cur);
    if (cur.symbols == x.symbols) { expect = q; break; }
  }
  CHECK(got == expect);
  CHECK_THROWS_AS(exp_order(FiniteSymbolSequence::checked({1, 2, 3})),
                  RequiresModulus);
}

TEST_CASE("binary prose strings rank by complexity") {
  auto simple = bits("010101010101");
  auto rough = bits("010001101111");
  CHECK(poly_degree(simple, 64) == 1);  // second difference vanishes
  CHECK_FALSE(poly_degree(rough, 64).has_value());
  CHECK(compare_complexity(simple, rough) < 0);
  CHECK(compare_complexity(rough, simple) > 0);
  CHECK(compare_complexity(simple, simple) == 0);
}
