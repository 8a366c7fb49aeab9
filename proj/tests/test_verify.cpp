#include <doctest.h>

#include <cmath>
#include <vector>

#include "gibbs/energy.hpp"
#include "gibbs/ensemble.hpp"
#include "gibbs/errors.hpp"
#include "gibbs/series.hpp"
#include "gibbs/verify.hpp"

using namespace gibbs;

namespace {

EmpiricalCurve make_curve(std::vector<double> grid, std::vector<double> mean) {
  EmpiricalCurve c;
  c.grid = std::move(grid);
  c.mean = std::move(mean);
  c.sd.assign(c.grid.size(), 0.0);
  c.n = 1;
  return c;
}

// Bell numbers by the recurrence B(n+1) = sum C(n,k) B(k).
std::vector<std::uint64_t> bell_by_binomials(int n_max) {
  std::vector<std::uint64_t> b{1};
  for (int n = 0; n < n_max; ++n) {
    std::uint64_t next = 0;
    std::uint64_t binom = 1;
    for (int k = 0; k <= n; ++k) {
      next += binom * b[static_cast<std::size_t>(k)];
      binom = binom * static_cast<std::uint64_t>(n - k) / static_cast<std::uint64_t>(k + 1);
    }
    b.push_back(next);
  }
  return b;
}

}  // namespace

TEST_CASE("sup distance") {
  const EmpiricalCurve c = make_curve({0.0, 0.5, 1.0, 1.5}, {1.0, 0.9, 0.6, 0.05});
  CHECK(sup_distance(c, ShapeOracle{OracleKind::Step, 0.0}) == doctest::Approx(0.4));
  CHECK(sup_distance(c, std::vector<double>{1.0, 0.9, 0.6, 0.05}) == 0.0);
  CHECK_THROWS_AS(sup_distance(c, std::vector<double>{1.0}), InvalidArgument);
  CHECK_THROWS_AS(sup_distance(c, ShapeOracle{OracleKind::PoissonProcessLaw, 0.0}), InvalidArgument);

  // symmetric in its arguments
  const EmpiricalCurve d = make_curve({0.0, 1.0}, {0.2, 0.7});
  const EmpiricalCurve e = make_curve({0.0, 1.0}, {0.5, 0.1});
  CHECK(sup_distance(d, e.mean) == sup_distance(e, d.mean));
}

TEST_CASE("sup distance skips the open excluded window") {
  EmpiricalCurve c = make_curve({-1.0, 0.0, 0.5, 1.0}, {1.0, 0.0, 0.0, 0.0});
  c.excluded = std::make_pair(-1.0, 0.9);
  // -1.0 is the window edge and still counts
  CHECK(sup_distance(c, std::vector<double>{0.0, 9.0, 9.0, 0.0}) == 1.0);
  c.excluded = std::make_pair(-2.0, 2.0);
  CHECK_THROWS_AS(sup_distance(c, std::vector<double>{0.0, 0.0, 0.0, 0.0}), EmptyGrid);
}

TEST_CASE("profile enumeration") {
  const ProfileEnumeration e = enumerate_profiles(3);
  REQUIRE(e.profiles.size() == 3);
  CHECK(e.profiles[0].nu == std::vector<std::int64_t>{0, 0, 1});
  CHECK(e.profiles[1].nu == std::vector<std::int64_t>{1, 1, 0});
  CHECK(e.profiles[1].multiplicity == 3);
  CHECK(e.profiles[2].nu == std::vector<std::int64_t>{3, 0, 0});
  CHECK(e.total() == 5);
  const auto bell = bell_by_binomials(14);
  for (int M = 1; M <= 14; ++M) {
    CAPTURE(M);
    CHECK(enumerate_profiles(M).total() == bell[static_cast<std::size_t>(M)]);
    CHECK(bell_number(M) == bell[static_cast<std::size_t>(M)]);
  }
  CHECK(enumerate_profiles(14).profiles.size() == 135);  // p(14)
  CHECK(bell_number(0) == 1);
  CHECK_THROWS_AS(enumerate_profiles(0), InvalidArgument);
  CHECK_THROWS_AS(enumerate_profiles(15), InvalidArgument);
  CHECK_THROWS_AS(bell_number(26), InvalidArgument);
}

TEST_CASE("profile weight") {
  const EnergyModel u = make_model("uniform");
  const Partition p = Partition::from_profile({1, 3, 0, 2, 0, 1});
  // prod (1/k!)^p_k / p_k!
  const double want = 1.0 * (std::pow(0.5, 3) / 6.0) * (std::pow(1.0 / 24.0, 2) / 2.0) * (1.0 / 720.0);
  CHECK(profile_weight(p, u, 0.0) == doctest::Approx(want).epsilon(1e-13));
  CHECK(profile_weight(Partition(), u, 0.0) == 1.0);
  // e^{-mu M} scaling
  CHECK(log_profile_weight(p, u, -1.0) == doctest::Approx(log_profile_weight(p, u, 0.0) + 21.0));
}

TEST_CASE("grand-canonical identity") {
  CHECK(check_poissonization(make_model("uniform"), std::log(4.0), 12) < 1e-8);
  CHECK(check_poissonization(make_model("uniform"), std::log(2.0), 14) < 1e-6);
  CHECK(check_poissonization(make_model("critical:mustar=0,d=0,v=const:800"), 0.5, 8) == 0.0);
  CHECK_THROWS_AS(check_poissonization(make_model("uniform"), 0.0, 15), InvalidArgument);
}

TEST_CASE("multiplicativity") {
  CHECK(check_multiplicativity(make_model("uniform"), 0.5, 8) < 1e-12);
  CHECK(check_multiplicativity(make_model("power:p=1.5"), -0.5, 10) < 1e-12);
  CHECK_THROWS_AS(check_multiplicativity(make_model("uniform"), 0.0, 0), InvalidArgument);
}

TEST_CASE("divergence bound") {
  // A = alpha_1 = 100, bound e^{-100} 100^5
  CHECK(check_divergence(make_model("uniform"), -std::log(100.0), 1, 5) ==
        doctest::Approx(std::exp(-100.0) * 1e10).epsilon(1e-10));
  CHECK(check_divergence(make_model("uniform"), 0.0, 0, 0) == 1.0);
  CHECK(check_divergence(make_model("uniform"), 0.0, 0, 3) == 0.0);
  // mu* = +inf: huge A sends the bound to zero
  CHECK(check_divergence(make_model("expr:\"-x*ln(x)^2\""), 0.0, 40, 100) == 0.0);
  CHECK_THROWS_AS(check_divergence(make_model("uniform"), 0.0, -1, 0), InvalidArgument);
}

TEST_CASE("zero-shape window sums") {
  const EnergyModel m = make_model("critical:mustar=0,d=-2,v=const:0");
  const std::vector<double> s = check_zero_shape(m, {0.1, 0.01, 0.001}, 0.5, 2.0);
  REQUIRE(s.size() == 3);
  CHECK(s[0] > s[1]);
  CHECK(s[1] > s[2]);
  CHECK(check_zero_shape(m, {}, 0.5, 2.0).empty());
  CHECK_THROWS_AS(check_zero_shape(m, {0.1}, 2.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(check_zero_shape(m, {-0.1}, 0.5, 2.0), InvalidArgument);
}

TEST_CASE("Poisson interval counts") {
  const EnergyModel m = make_model("critical:mustar=0,d=0,v=const:0");
  const double mu = 0.01;
  const SampleBatch b = sample_batch(m, mu, truncation_K(m, mu), 4000, 17);
  const auto r = test_poisson_counts(m, b, mu, {{0.5, 1.0}, {1.0, 2.0}, {2.0, 4.0}}, 0.0);
  REQUIRE(r.intervals.size() == 3);
  for (const auto& iv : r.intervals) {
    CHECK(iv.exact_mean == doctest::Approx(iv.limit_mean).epsilon(0.05));
    CHECK(std::abs(iv.empirical_mean - iv.exact_mean) < 5.0 * std::sqrt(iv.exact_mean / 4000.0));
    CHECK(iv.p_value > 1e-4);
    CHECK(!iv.exact_match);
  }
  CHECK(r.aggregate_dispersion == doctest::Approx(1.0).epsilon(0.1));

  const EnergyModel frozen = make_model("critical:mustar=0,d=0,v=const:800");
  const SampleBatch z = sample_batch(frozen, mu, 500, 100, 1);
  const auto rz = test_poisson_counts(frozen, z, mu, {{1.0, 2.0}}, 800.0);
  CHECK(rz.intervals[0].exact_mean == 0.0);
  CHECK(rz.intervals[0].exact_match);
  CHECK(rz.intervals[0].p_value == 1.0);
  CHECK_THROWS_AS(test_poisson_counts(m, b, 0.0, {{1.0, 2.0}}, 0.0), InvalidArgument);
}

TEST_CASE("count variance equals its mean") {
  // Counts here are near e^100, so moments are taken in Count arithmetic and
  // only the centred deviations go through double.
  const EnergyModel u = make_model("uniform");
  const double mu = -std::log(100.0);
  const std::size_t n = 10000;
  const SampleBatch b = sample_batch(u, mu, truncation_K(u, mu), n, 23);
  std::vector<Count> c;
  Count total = 0;
  for (const auto& p : b.partitions) {
    c.push_back(p.count_at_least(50.0));
    total += c.back();
  }
  const Count mean = total / n;
  double ss = 0.0;
  for (const auto& x : c) {
    const double d = Count(x - mean).convert_to<double>();
    ss += d * d;
  }
  const double var = ss / (n - 1.0);
  const double m = mean.convert_to<double>();
  const double want = sum_S(u, mu, 50.0, INFINITY).value();
  CHECK(std::abs(m / want - 1.0) < 1e-12);
  CHECK(std::abs(var / m - 1.0) < 4.0 * std::sqrt(2.0 / n));
}

TEST_CASE("dyadic subsequences") {
  const auto r = subsequence_profiles({10}, 20, 3, {0.0});
  REQUIRE(r.size() == 1);
  CHECK(r[0].kappa_1 == 1536.0);
  CHECK(r[0].kappa_2 == 1024.0);
  CHECK(r[0].mu_1 == -dyadic::du(1536.0));
  CHECK(r[0].curve_1.grid.size() == 1);
  CHECK_THROWS_AS(subsequence_profiles({1}, 20, 3, {0.0}), InvalidArgument);
}
