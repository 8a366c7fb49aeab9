#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "gibbs/energy.hpp"
#include "gibbs/ensemble.hpp"
#include "gibbs/errors.hpp"
#include "gibbs/regime.hpp"
#include "gibbs/scaling.hpp"

using namespace gibbs;

namespace {

Partition sample_profile() { return Partition::from_profile({1, 3, 0, 2, 0, 1}); }

double to_d(const Count& c) { return c.convert_to<double>(); }

}  // namespace

TEST_CASE("partition bookkeeping") {
  const Partition p = sample_profile();
  CHECK(p.mass() == 21);
  CHECK(p.total() == 7);
  CHECK(p.largest_part() == 6);
  CHECK(p.recompute_mass() == p.mass());
  CHECK(p.count_at_least(2.0) == 6);
  CHECK(p.count_at_least(2.5) == 3);
  CHECK(p.count_at_least(0.0) == 7);
  CHECK(p.count_at_least(7.0) == 0);
  CHECK(p.count_between(2, 5) == 5);
  CHECK(p.count_between(5, 2) == 0);
  CHECK(size_distribution(p, 4.0) == 3);
}

TEST_CASE("partition construction merges and validates") {
  const Partition p({{3, Count(2)}, {1, Count(1)}, {3, Count(1)}});
  REQUIRE(p.parts().size() == 2);
  CHECK(p.parts()[1].second == 3);
  CHECK(p.mass() == 10);
  CHECK(Partition().empty());
  CHECK(Partition().mass() == 0);
  CHECK_THROWS_AS(Partition({{0, Count(1)}}), InvalidArgument);
  CHECK_THROWS_AS(Partition({{2, Count(-1)}}), InvalidArgument);
  CHECK_THROWS_AS(Partition::from_profile({1, -1}), InvalidArgument);
}

TEST_CASE("random scaling by the realized mass") {
  const Partition p = sample_profile();
  CHECK(random_scaled_F_tilde(p, 1.0 / 21.0) == 7);
  CHECK(random_scaled_F_tilde(p, 3.0 / 21.0) == 3);
  CHECK(random_scaled_F_tilde(p, 0.2) == 1);
  CHECK(random_scaled_F_tilde(p, 0.3) == 0);
  CHECK_THROWS_AS(random_scaled_F_tilde(Partition(), 0.5), EmptyPartition);
  CHECK_THROWS_AS(random_scaled_F_tilde(p, 0.0), InvalidArgument);
}

TEST_CASE("interval counts use mu k in [a, b)") {
  const Partition p = sample_profile();
  // mu = 0.5: k=2 -> 1.0, k=4 -> 2.0, k=6 -> 3.0
  const auto c = interval_counts(p, 0.5, {{1.0, 2.0}, {2.0, INFINITY}, {0.1, 0.6}});
  CHECK(c[0] == 3);
  CHECK(c[1] == 3);
  CHECK(c[2] == 1);
  CHECK_THROWS_AS(interval_counts(p, 0.5, {{1.0, 2.0}, {1.5, 3.0}}), OverlappingIntervals);
  CHECK_THROWS_AS(interval_counts(p, 0.5, {{2.0, 2.0}}), InvalidArgument);
  CHECK_THROWS_AS(interval_counts(p, 0.0, {{1.0, 2.0}}), InvalidArgument);
  CHECK(first_k_with_mu_k_at_least(0.1, 0.3) == 3);
}

TEST_CASE("truncation index") {
  CHECK(truncation_K(make_model("uniform"), 0.0) == 12);
  CHECK(truncation_K(make_model("uniform"), 30.0) == 1);
  const std::int64_t K = truncation_K(make_model("power:p=2,a=0.5"), -2.0);
  CHECK(K > 2);
  CHECK(std::exp(log_alpha(make_model("power:p=2,a=0.5"), -2.0, static_cast<double>(K + 1))) < 1e-9);
  CHECK_THROWS_AS(truncation_K(make_model("uniform"), 0.0, 0.0), InvalidArgument);
}

TEST_CASE("export format") {
  CHECK(export_line(0, sample_profile()) == "0,21,1:1;2:3;4:2;6:1");
  CHECK(export_line(3, Partition()) == "3,0,");
  const Count big = boost::multiprecision::ldexp(Count(1), 100);
  CHECK(to_string(big) == "1267650600228229401496703205376");
  CHECK(to_string(Count(0)) == "0");
  CHECK(exp_count(-INFINITY) == 0);
  CHECK_THROWS_AS(exp_count(NAN), RangeError);
}

TEST_CASE("sampled mass moments") {
  const EnergyModel m = make_model("uniform");
  const std::size_t n = 100000;
  const SampleBatch b = sample_batch(m, 0.0, 12, n, 7);
  double s = 0.0;
  double s2 = 0.0;
  for (const auto& p : b.partitions) {
    const double x = to_d(p.mass());
    s += x;
    s2 += x * x;
  }
  const double mean = s / n;
  const double var = s2 / n - mean * mean;
  // E[M] = sum k/k! = e, Var[M] = sum k^2/k! = 2e
  CHECK(std::abs(mean - std::numbers::e) < 5.0 * std::sqrt(2 * std::numbers::e / n));
  CHECK(var == doctest::Approx(2 * std::numbers::e).epsilon(0.03));
}

TEST_CASE("two-part law factorizes into independent Poissons") {
  // alpha_1 = 1, alpha_2 = 1/2
  const EnergyModel m = make_model("uniform");
  const std::size_t n = 100000;
  const SampleBatch b = sample_batch(m, 0.0, 2, n, 99);
  std::size_t both_zero = 0;
  std::size_t one_one = 0;
  for (const auto& p : b.partitions) {
    const Count c1 = p.count_between(1, 2);
    const Count c2 = p.count_between(2, 3);
    both_zero += (c1 == 0 && c2 == 0);
    one_one += (c1 == 1 && c2 == 1);
  }
  const double p00 = std::exp(-1.5);
  const double p11 = std::exp(-1.5) * 0.5;
  CHECK(std::abs(both_zero / double(n) - p00) < 5.0 * std::sqrt(p00 * (1 - p00) / n));
  CHECK(std::abs(one_one / double(n) - p11) < 5.0 * std::sqrt(p11 * (1 - p11) / n));
}

TEST_CASE("batches are identical for any thread count") {
  const EnergyModel m = make_model("power:p=1.5");
  const SampleBatch a = sample_batch(m, -3.0, 60, 300, 5, 1);
  const SampleBatch b = sample_batch(m, -3.0, 60, 300, 5, 4);
  std::ostringstream oa;
  std::ostringstream ob;
  write_batch(oa, a);
  write_batch(ob, b);
  CHECK(oa.str() == ob.str());
  CHECK(!oa.str().empty());
  const SampleBatch c = sample_batch(m, -3.0, 60, 300, 6, 1);
  CHECK(export_line(0, c.partitions[0]) != export_line(0, a.partitions[0]));
}

TEST_CASE("Poisson sampler tiers") {
  for (double lam : {0.3, 4.0, 200.0, 5e4, 1e10}) {
    auto rng = sample_stream(11, static_cast<std::uint64_t>(lam));
    const int n = 20000;
    double s = 0.0;
    double s2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = to_d(poisson_from_log_mean(std::log(lam), rng));
      s += x;
      s2 += x * x;
    }
    const double mean = s / n;
    const double var = s2 / n - mean * mean;
    CAPTURE(lam);
    CHECK(std::abs(mean - lam) < 5.0 * std::sqrt(lam / n));
    CHECK(var == doctest::Approx(lam).epsilon(0.06));
  }
  auto rng = sample_stream(1, 2);
  CHECK(poisson_from_log_mean(-INFINITY, rng) == 0);
  const double huge = to_d(poisson_from_log_mean(200.0, rng));
  CHECK(std::abs(std::log(huge) - 200.0) < 1e-20 + 1e-12 * 200.0 + std::exp(-90.0));
  CHECK_THROWS_AS(poisson_from_log_mean(NAN, rng), RangeError);
}

TEST_CASE("functionals near their limits") {
  const EnergyModel q = make_model("power:p=2,a=0.5");
  const ScalingPlan plan = make_plan(q, classify(q), -40.0);
  const SampleBatch b = sample_batch(q, -40.0, truncation_K(q, -40.0), 2000, 3);
  double s = 0.0;
  for (const auto& p : b.partitions) s += local_G(p, plan, 0.0);
  CHECK(s / 2000.0 == doctest::Approx(0.69947113913343085).epsilon(0.03));

  const EnergyModel u = make_model("uniform");
  const double mu = -std::log(200.0);
  const ScalingPlan pu = make_plan(u, classify(u), mu);
  const SampleBatch bu = sample_batch(u, mu, truncation_K(u, mu), 500, 4);
  double f = 0.0;
  for (const auto& p : bu.partitions) f += rescaled_F(p, pu, 0.0);
  CHECK(f / 500.0 == doctest::Approx(1.0).epsilon(0.05));

  const EnergyModel crit = make_model("critical:mustar=0,d=2,v=const:0");
  const ScalingPlan pc = make_plan(crit, classify(crit), 0.1);
  CHECK_THROWS_AS(local_G(Partition(), pc, 0.0), RegimeMismatch);
}

TEST_CASE("interval mean in the limit process") {
  const EnergyModel m = make_model("critical:mustar=0,d=0,v=const:0");
  const double mu = 1e-3;
  const SampleBatch b = sample_batch(m, mu, truncation_K(m, mu), 20000, 8);
  double s = 0.0;
  for (const auto& p : b.partitions) s += to_d(interval_counts(p, mu, {{1.0, 2.0}})[0]);
  // E1(1) - E1(2)
  CHECK(std::abs(s / 20000.0 - 0.1705) < 5.0 * std::sqrt(0.1705 / 20000.0));
}

TEST_CASE("alpha table validation") {
  CHECK_THROWS_AS(AlphaTable(make_model("uniform"), 0.0, -1), InvalidArgument);
  const AlphaTable t(make_model("uniform"), 0.0, 0);
  auto rng = sample_stream(0, 0);
  CHECK(t.sample(rng).empty());
}
