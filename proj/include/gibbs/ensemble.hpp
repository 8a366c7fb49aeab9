#pragma once

// Grand-canonical sampling: p_k ~ Poisson(alpha_k) independently.

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "gibbs/energy.hpp"
#include "gibbs/scaling.hpp"

namespace gibbs {

// Part counts. Poisson means reach e^(10^5) at desk-scale parameters, so
// counts are binary floats with a 192-bit mantissa and 64-bit exponent: exact
// integers below 2^192, integer valued and correctly rounded above.
using Count = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<192, boost::multiprecision::digit_base_2, void, std::int64_t>,
    boost::multiprecision::et_off>;

// Full decimal expansion of an integer-valued count.
std::string to_string(const Count& c);

// exp(x) as a Count, for x far outside the double range.
Count exp_count(double x);

class Partition {
 public:
  using Entry = std::pair<std::int64_t, Count>;

  Partition() = default;
  // Keys must be positive; zero counts are dropped, repeated keys merged.
  explicit Partition(std::vector<Entry> parts);
  // nu = (p_1, p_2, ...)
  static Partition from_profile(const std::vector<std::int64_t>& nu);

  const std::vector<Entry>& parts() const { return parts_; }
  const Count& mass() const { return mass_; }
  const Count& total() const { return total_; }
  bool empty() const { return parts_.empty(); }
  std::int64_t largest_part() const { return parts_.empty() ? 0 : parts_.back().first; }

  // Count of parts with size >= x.
  Count count_at_least(double x) const;
  // Count of parts with k_lo <= size < k_hi.
  Count count_between(std::int64_t k_lo, std::int64_t k_hi) const;
  Count recompute_mass() const;

 private:
  void finish();

  std::vector<Entry> parts_;   // ascending keys
  std::vector<Count> suffix_;  // suffix_[i] = sum of counts of parts_[i..]
  Count mass_ = 0;
  Count total_ = 0;
};

// Per-sample generator stream keyed by (seed, index).
std::mt19937_64 sample_stream(std::uint64_t seed, std::uint64_t index);

// Poisson draw with the mean given by its logarithm.
Count poisson_from_log_mean(double log_mean, std::mt19937_64& rng);

// Precomputed Poisson parameters for k = 1..k_max.
class AlphaTable {
 public:
  AlphaTable(const EnergyModel& model, double mu, std::int64_t k_max);

  double mu() const { return mu_; }
  std::int64_t k_max() const { return static_cast<std::int64_t>(log_alpha_.size()); }
  const std::vector<double>& log_alpha() const { return log_alpha_; }

  Partition sample(std::mt19937_64& rng) const;

 private:
  double mu_;
  std::vector<double> log_alpha_;
};

struct SampleBatch {
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::int64_t k_max = 0;
  std::string model_spec;
  double mu = 0.0;
  std::vector<Partition> partitions;
};

// Smallest K with certified sum_{k>K} alpha_k < eps_tail.
std::int64_t truncation_K(const EnergyModel& model, double mu, double eps_tail = 1e-9);

Partition sample_partition(const EnergyModel& model, double mu, std::int64_t k_max, std::mt19937_64& rng);

SampleBatch sample_batch(const EnergyModel& model, double mu, std::int64_t k_max, std::size_t n,
                         std::uint64_t seed, std::size_t threads = 0);

// Sum_{k >= x} p_k.
Count size_distribution(const Partition& p, double x);

// count(k >= kappa x) / V, or the raw count in the limit-process case.
double rescaled_F(const Partition& p, const ScalingPlan& plan, double x);

// count(k >= kappa + zeta x) / V.
double local_G(const Partition& p, const ScalingPlan& plan, double x);

// Number of parts with size >= x * mass.
Count random_scaled_F_tilde(const Partition& p, double x);

struct Interval {
  double a;
  double b;
};

// Smallest k >= 1 with mu k >= a.
std::int64_t first_k_with_mu_k_at_least(double mu, double a);

// Sum over a <= mu k < b of p_k, per interval. Intervals must be disjoint.
std::vector<Count> interval_counts(const Partition& p, double mu, const std::vector<Interval>& intervals);

// "sample_index,mass,k:count;k:count;..."
std::string export_line(std::size_t index, const Partition& p);
void write_batch(std::ostream& out, const SampleBatch& batch);

}  // namespace gibbs
