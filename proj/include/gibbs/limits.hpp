#pragma once

// Numeric estimation of lim_{x->inf} f(x) from fixed dyadic probes x = 2^j.

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace gibbs {

struct Probe {
  double x;
  double value;
};

struct LimitEstimate {
  double value;        // finite limit or +-inf
  double resolution;   // magnitude of the last increment (0 when snapped or infinite)
  bool snapped;        // finite value rounded onto an integer within 1e-9
  std::vector<Probe> probes;
};

struct LimitRule {
  int j_first = 10;
  int j_last = 40;
  double tolerance = 1e-6;         // last five probes must agree to this
  double divergence_bound = 1e12;  // monotone past this magnitude means +-inf
};

// Throws InconclusiveLimit (with the probe table) when neither convergence nor
// monotone divergence is established.
LimitEstimate probe_limit(const std::function<double(double)>& f, std::string_view what,
                          const LimitRule& rule = {});

std::string format_probe_table(const std::vector<Probe>& probes);

}  // namespace gibbs
