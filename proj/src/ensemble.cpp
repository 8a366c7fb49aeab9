#include "gibbs/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "gibbs/errors.hpp"
#include "gibbs/parallel.hpp"
#include "gibbs/series.hpp"
#include "gibbs/special.hpp"

namespace gibbs {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLn2 = std::numbers::ln2;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double uniform01(std::mt19937_64& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

std::int64_t poisson_inversion(double lam, std::mt19937_64& rng) {
  const double enlam = std::exp(-lam);
  std::int64_t x = 0;
  double prod = 1.0;
  for (;;) {
    prod *= uniform01(rng);
    if (prod > enlam) {
      ++x;
    } else {
      return x;
    }
  }
}

// Hormann's transformed rejection with squeeze (PTRS), mean >= 10.
std::int64_t poisson_ptrs(double lam, std::mt19937_64& rng) {
  const double slam = std::sqrt(lam);
  const double loglam = std::log(lam);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double invalpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double U = uniform01(rng) - 0.5;
    const double V = uniform01(rng);
    const double us = 0.5 - std::fabs(U);
    const double k = std::floor((2.0 * a / us + b) * U + lam + 0.43);
    if (us >= 0.07 && V <= vr) return static_cast<std::int64_t>(k);
    if (k < 0.0 || (us < 0.013 && V > us)) continue;
    if (std::log(V) + std::log(invalpha) - std::log(a / (us * us) + b) <=
        -lam + k * loglam - special::log_gamma(k + 1.0)) {
      return static_cast<std::int64_t>(k);
    }
  }
}

// m 2^e = exp(x) with m in [1, 2).
Count exp_as_count(double x) {
  const double e = std::floor(x / kLn2);
  const double m = std::exp(x - e * kLn2);
  return boost::multiprecision::ldexp(Count(m), static_cast<int>(e));
}

Count poisson_huge(double log_mean, std::mt19937_64& rng) {
  const double z = std::normal_distribution<double>(0.0, 1.0)(rng);
  Count x = exp_as_count(log_mean);
  const double es = std::floor(0.5 * log_mean / kLn2);
  const double ms = std::exp(0.5 * log_mean - es * kLn2);
  x += boost::multiprecision::ldexp(Count(ms * z), static_cast<int>(es));
  // Above 2^193 every value of this type is an integer already.
  if (log_mean < 193.0 * kLn2) {
    x += (z * z - 1.0) / 6.0 + 0.5;
    x = floor(x);
  }
  return x < 0 ? Count(0) : x;
}

Count poisson_normal(double lam, std::mt19937_64& rng) {
  const double z = std::normal_distribution<double>(0.0, 1.0)(rng);
  const double x = std::floor(lam + std::sqrt(lam) * z + (z * z - 1.0) / 6.0 + 0.5);
  return Count(static_cast<std::int64_t>(std::max(0.0, x)));
}

Count scale_of(const ScalingPlan& plan) { return exp_as_count(-plan.log_vertical); }

}  // namespace

std::string to_string(const Count& c) {
  std::string s = c.str(0, std::ios_base::fixed);
  const std::size_t dot = s.find('.');
  if (dot != std::string::npos) s.erase(dot);
  return s;
}

Count exp_count(double x) {
  if (x == -kInf) return Count(0);
  if (!std::isfinite(x)) throw RangeError("exp_count argument is not finite");
  return exp_as_count(x);
}

// ------------------------------------------------------------- Partition

Partition::Partition(std::vector<Entry> parts) : parts_(std::move(parts)) {
  for (const auto& [k, c] : parts_) {
    if (k < 1) throw InvalidArgument("partition keys must be positive");
    if (c < 0) throw InvalidArgument("partition counts must be non-negative");
  }
  std::sort(parts_.begin(), parts_.end(), [](const Entry& a, const Entry& b) { return a.first < b.first; });
  std::vector<Entry> merged;
  merged.reserve(parts_.size());
  for (auto& e : parts_) {
    if (!merged.empty() && merged.back().first == e.first) {
      merged.back().second += e.second;
    } else {
      merged.push_back(std::move(e));
    }
  }
  merged.erase(std::remove_if(merged.begin(), merged.end(), [](const Entry& e) { return e.second == 0; }),
               merged.end());
  parts_ = std::move(merged);
  finish();
}

Partition Partition::from_profile(const std::vector<std::int64_t>& nu) {
  std::vector<Entry> parts;
  for (std::size_t i = 0; i < nu.size(); ++i) {
    if (nu[i] < 0) throw InvalidArgument("profile entries must be non-negative");
    if (nu[i] > 0) parts.emplace_back(static_cast<std::int64_t>(i + 1), Count(nu[i]));
  }
  return Partition(std::move(parts));
}

void Partition::finish() {
  suffix_.assign(parts_.size(), Count(0));
  Count running = 0;
  for (std::size_t i = parts_.size(); i-- > 0;) {
    running += parts_[i].second;
    suffix_[i] = running;
  }
  total_ = running;
  mass_ = recompute_mass();
}

Count Partition::recompute_mass() const {
  Count m = 0;
  for (const auto& [k, c] : parts_) m += c * k;
  return m;
}

Count Partition::count_at_least(double x) const {
  const auto it = std::lower_bound(parts_.begin(), parts_.end(), x,
                                   [](const Entry& e, double t) { return static_cast<double>(e.first) < t; });
  if (it == parts_.end()) return Count(0);
  return suffix_[static_cast<std::size_t>(it - parts_.begin())];
}

Count Partition::count_between(std::int64_t k_lo, std::int64_t k_hi) const {
  if (k_hi <= k_lo) return Count(0);
  auto key_less = [](const Entry& e, std::int64_t k) { return e.first < k; };
  const auto lo = std::lower_bound(parts_.begin(), parts_.end(), k_lo, key_less);
  const auto hi = std::lower_bound(parts_.begin(), parts_.end(), k_hi, key_less);
  Count c = 0;
  for (auto it = lo; it != hi; ++it) c += it->second;
  return c;
}

// --------------------------------------------------------------- sampling

std::mt19937_64 sample_stream(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(index)));
}

Count poisson_from_log_mean(double log_mean, std::mt19937_64& rng) {
  if (std::isnan(log_mean) || log_mean == kInf) throw RangeError("Poisson mean is not finite");
  if (log_mean == -kInf) return Count(0);
  static const double log10 = std::log(10.0);
  if (log_mean < log10) return Count(poisson_inversion(std::exp(log_mean), rng));
  if (log_mean < 30.0 * kLn2) return Count(poisson_ptrs(std::exp(log_mean), rng));
  if (log_mean < 50.0 * kLn2) return poisson_normal(std::exp(log_mean), rng);
  return poisson_huge(log_mean, rng);
}

AlphaTable::AlphaTable(const EnergyModel& model, double mu, std::int64_t k_max) : mu_(mu) {
  if (k_max < 0) throw InvalidArgument("k_max must be non-negative");
  log_alpha_.resize(static_cast<std::size_t>(k_max));
  for (std::int64_t k = 1; k <= k_max; ++k) {
    const double la = gibbs::log_alpha(model, mu, static_cast<double>(k));
    if (std::isnan(la) || la == kInf) throw RangeError("alpha_k not finite at k=" + std::to_string(k));
    log_alpha_[static_cast<std::size_t>(k - 1)] = la;
  }
}

Partition AlphaTable::sample(std::mt19937_64& rng) const {
  std::vector<Partition::Entry> parts;
  for (std::size_t i = 0; i < log_alpha_.size(); ++i) {
    Count c = poisson_from_log_mean(log_alpha_[i], rng);
    if (c > 0) parts.emplace_back(static_cast<std::int64_t>(i + 1), std::move(c));
  }
  return Partition(std::move(parts));
}

std::int64_t truncation_K(const EnergyModel& model, double mu, double eps_tail) {
  if (!(eps_tail > 0.0)) throw InvalidArgument("eps_tail must be positive");
  const double log_eps = std::log(eps_tail);
  for (std::int64_t K = 1;; ++K) {
    const double next = log_alpha(model, mu, static_cast<double>(K + 1));
    if (std::isnan(next)) throw RangeError("alpha_k not finite at k=" + std::to_string(K + 1));
    if (next < log_eps && log_tail_from(model, mu, K + 1) < log_eps) return K;
    if (K == 1'000'000) {
      const double far = mu + model.du(0x1p62);
      if (far <= 1e-12 * (1.0 + std::fabs(mu))) throw DivergentSeries("truncation: mu <= mu*, series diverges");
    }
    if (K >= 1'000'000'000) throw NonConvergedTail("truncation: no certified K below 1e9");
  }
}

Partition sample_partition(const EnergyModel& model, double mu, std::int64_t k_max, std::mt19937_64& rng) {
  return AlphaTable(model, mu, k_max).sample(rng);
}

SampleBatch sample_batch(const EnergyModel& model, double mu, std::int64_t k_max, std::size_t n,
                         std::uint64_t seed, std::size_t threads) {
  SampleBatch batch;
  batch.seed = seed;
  batch.n = n;
  batch.k_max = k_max;
  batch.model_spec = model.spec;
  batch.mu = mu;
  batch.partitions.resize(n);
  const AlphaTable table(model, mu, k_max);
  parallel_for(
      n,
      [&](std::size_t i) {
        auto rng = sample_stream(seed, i);
        batch.partitions[i] = table.sample(rng);
      },
      threads);
  return batch;
}

// ------------------------------------------------------------ functionals

Count size_distribution(const Partition& p, double x) { return p.count_at_least(x); }

double rescaled_F(const Partition& p, const ScalingPlan& plan, double x) {
  if (plan.regime != Regime::Supercritical && plan.regime != Regime::Critical) {
    throw RegimeMismatch("rescaled_F needs a supercritical or critical plan");
  }
  const Count c = p.count_at_least(plan.kappa * x);
  if (plan.process_mode()) return c.convert_to<double>();
  return Count(c * scale_of(plan)).convert_to<double>();
}

double local_G(const Partition& p, const ScalingPlan& plan, double x) {
  if (plan.regime != Regime::Supercritical) throw RegimeMismatch("local_G needs a supercritical plan");
  const Count c = p.count_at_least(plan.kappa + plan.zeta * x);
  return Count(c * scale_of(plan)).convert_to<double>();
}

Count random_scaled_F_tilde(const Partition& p, double x) {
  if (p.mass() == 0) throw EmptyPartition("random scaling needs a partition with positive mass");
  if (!(x > 0.0)) throw InvalidArgument("random scaling needs x > 0");
  const Count threshold = p.mass() * x;
  Count c = 0;
  for (auto it = p.parts().rbegin(); it != p.parts().rend(); ++it) {
    if (Count(it->first) < threshold) break;
    c += it->second;
  }
  return c;
}

std::int64_t first_k_with_mu_k_at_least(double mu, double a) {
  if (!(mu > 0.0)) throw InvalidArgument("interval counts need mu > 0");
  std::int64_t k = first_index_at_least(a / mu);
  while (k > 1 && mu * static_cast<double>(k - 1) >= a) --k;
  while (mu * static_cast<double>(k) < a) ++k;
  return k;
}

std::vector<Count> interval_counts(const Partition& p, double mu, const std::vector<Interval>& intervals) {
  std::vector<Interval> sorted = intervals;
  for (const auto& iv : sorted) {
    if (!(iv.a < iv.b)) throw InvalidArgument("interval [a, b) needs a < b");
  }
  std::sort(sorted.begin(), sorted.end(), [](const Interval& x, const Interval& y) { return x.a < y.a; });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].a < sorted[i - 1].b) throw OverlappingIntervals("intervals overlap");
  }
  std::vector<Count> out;
  out.reserve(intervals.size());
  for (const auto& iv : intervals) {
    const std::int64_t lo = first_k_with_mu_k_at_least(mu, iv.a);
    const std::int64_t hi = std::isinf(iv.b) ? std::numeric_limits<std::int64_t>::max()
                                             : first_k_with_mu_k_at_least(mu, iv.b);
    out.push_back(p.count_between(lo, hi));
  }
  return out;
}

std::string export_line(std::size_t index, const Partition& p) {
  std::string out = std::to_string(index) + "," + to_string(p.mass()) + ",";
  bool first = true;
  for (const auto& [k, c] : p.parts()) {
    if (!first) out += ';';
    first = false;
    out += std::to_string(k) + ":" + to_string(c);
  }
  return out;
}

void write_batch(std::ostream& out, const SampleBatch& batch) {
  for (std::size_t i = 0; i < batch.partitions.size(); ++i) out << export_line(i, batch.partitions[i]) << '\n';
}

}  // namespace gibbs
