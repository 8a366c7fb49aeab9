#include "gibbs/regime.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>

#include "gibbs/errors.hpp"
#include "gibbs/limits.hpp"

namespace gibbs {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kVBound = 1e3;
constexpr double kGaussianCut = 1e-6;

LimitRule default_rule() { return LimitRule{}; }

double gamma_limit(const EnergyModel& model) {
  if (model.hints.gamma_limit) return *model.hints.gamma_limit;
  const auto& ddu = model.ddu;
  return probe_limit([&](double x) { return x * x * ddu(x); }, "x^2 u''(x)", default_rule()).value;
}

// Largest probe exponent at which u(x) + mu* x is still resolved to 1e-8.
int v_probe_limit(double mu_star) {
  if (mu_star == 0.0) return 40;
  const double x = 1e-8 / (std::fabs(mu_star) * std::numeric_limits<double>::epsilon());
  const int j = static_cast<int>(std::floor(std::log2(x)));
  return std::clamp(j, 20, 40);
}

LocalProfile local_profile_from_limit(double lim) {
  if (std::isinf(lim) && lim > 0) return {LocalProfileKind::HardStep, kInf};
  if (std::fabs(lim) <= kGaussianCut) return {LocalProfileKind::Gaussian, 0.0};
  if (lim > 0) return {LocalProfileKind::DiscreteGaussian, lim};
  throw InconclusiveLimit("u''(x) has a negative limit in a supercritical model", "");
}

}  // namespace

std::string format_extended(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  std::array<char, 32> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

std::string_view regime_name(Regime r) {
  switch (r) {
    case Regime::SubcriticalA:
      return "SubcriticalA";
    case Regime::SubcriticalB:
      return "SubcriticalB";
    case Regime::Supercritical:
      return "Supercritical";
    case Regime::Critical:
      return "Critical";
  }
  return "?";
}

std::string_view local_profile_name(LocalProfileKind k) {
  switch (k) {
    case LocalProfileKind::Gaussian:
      return "Gaussian";
    case LocalProfileKind::DiscreteGaussian:
      return "DiscreteGaussian";
    case LocalProfileKind::HardStep:
      return "HardStep";
  }
  return "?";
}

std::string_view critical_case_name(CriticalCase c) {
  switch (c) {
    case CriticalCase::ZeroShape:
      return "ZeroShape";
    case CriticalCase::IncompleteGamma:
      return "IncompleteGamma";
    case CriticalCase::LimitProcess:
      return "LimitProcess";
  }
  return "?";
}

double estimate_mu_star(const EnergyModel& model) {
  if (model.hints.mu_star) return *model.hints.mu_star;
  const auto& du = model.du;
  return probe_limit([&](double x) { return -du(x); }, "-u'(x)", default_rule()).value;
}

CriticalInfo decompose_critical(const EnergyModel& model, double mu_star) {
  if (!std::isfinite(mu_star)) throw RegimeMismatch("critical decomposition needs a finite mu*");
  const double gamma = gamma_limit(model);
  if (!std::isfinite(gamma)) throw RegimeMismatch("critical decomposition needs a finite lim x^2 u''");

  CriticalInfo info;
  info.d = model.hints.d ? *model.hints.d : 1.0 + gamma;
  const double d = info.d;
  auto u = model.u;
  info.v = [u, mu_star, d](double x) { return u(x) + mu_star * x - (1.0 - d) * std::log(x); };

  if (model.hints.v_behavior) {
    info.v_behavior = *model.hints.v_behavior;
    if (info.v_behavior == VBehavior::ToConst) info.C = model.hints.C ? *model.hints.C : info.v(1.0);
    return info;
  }
  LimitRule rule;
  rule.j_last = v_probe_limit(mu_star);
  rule.divergence_bound = kVBound;
  const LimitEstimate lim = probe_limit(info.v, "v(x)", rule);
  if (std::isinf(lim.value)) {
    info.v_behavior = lim.value > 0 ? VBehavior::ToPlusInf : VBehavior::ToMinusInf;
  } else {
    info.v_behavior = VBehavior::ToConst;
    info.C = lim.value;
  }
  return info;
}

CriticalCase critical_case(const CriticalInfo& info) {
  constexpr double tiny = 1e-9;
  if (info.d < -tiny) return CriticalCase::ZeroShape;
  if (info.d > tiny) return CriticalCase::IncompleteGamma;
  switch (info.v_behavior) {
    case VBehavior::ToPlusInf:
      return CriticalCase::ZeroShape;
    case VBehavior::ToMinusInf:
      return CriticalCase::IncompleteGamma;
    case VBehavior::ToConst:
      return CriticalCase::LimitProcess;
  }
  return CriticalCase::LimitProcess;
}

RegimeReport classify(const EnergyModel& model) {
  RegimeReport r;
  r.non_monotone = model.non_monotone;
  r.from_hints = model.hints.gamma_limit.has_value();
  for (int j = 10; j <= 40; ++j) {
    const double x = std::ldexp(1.0, j);
    r.evidence.push_back({x, x * x * model.ddu(x), -model.du(x)});
  }
  r.gamma_limit = gamma_limit(model);
  r.mu_star = estimate_mu_star(model);

  if (r.gamma_limit == kInf) {
    r.regime = Regime::Supercritical;
    double lim = 0.0;
    if (model.hints.ddu_limit) {
      lim = *model.hints.ddu_limit;
    } else {
      const auto& ddu = model.ddu;
      lim = probe_limit([&](double x) { return ddu(x); }, "u''(x)", default_rule()).value;
    }
    r.local_profile = local_profile_from_limit(lim);
  } else if (r.gamma_limit == -kInf) {
    r.regime = r.mu_star == kInf ? Regime::SubcriticalA : Regime::SubcriticalB;
  } else {
    r.regime = Regime::Critical;
    r.critical = decompose_critical(model, r.mu_star);
  }
  return r;
}

std::string summary_line(const RegimeReport& r) {
  std::string out = "regime=" + std::string(regime_name(r.regime));
  if (r.local_profile) {
    out += " local=" + std::string(local_profile_name(r.local_profile->kind));
    if (r.local_profile->kind == LocalProfileKind::DiscreteGaussian) {
      out += "(c=" + format_extended(r.local_profile->c) + ")";
    }
  }
  if (r.critical) {
    out += " case=" + std::string(critical_case_name(critical_case(*r.critical)));
    out += " d=" + format_extended(r.critical->d);
    out += " v=" + std::string(v_behavior_name(r.critical->v_behavior));
    if (r.critical->C) out += " C=" + format_extended(*r.critical->C);
  }
  out += " mu_star=" + format_extended(r.mu_star);
  if (r.non_monotone) out += " non_monotone=true";
  return out;
}

std::string to_key_value(const RegimeReport& r) {
  std::string out;
  auto kv = [&](std::string_view k, const std::string& v) {
    out += k;
    out += '=';
    out += v;
    out += '\n';
  };
  kv("regime", std::string(regime_name(r.regime)));
  kv("gamma_limit", format_extended(r.gamma_limit));
  kv("mu_star", format_extended(r.mu_star));
  if (r.local_profile) {
    kv("local_profile", std::string(local_profile_name(r.local_profile->kind)));
    if (r.local_profile->kind == LocalProfileKind::DiscreteGaussian) {
      kv("local_c", format_extended(r.local_profile->c));
    }
  }
  if (r.critical) {
    kv("critical_case", std::string(critical_case_name(critical_case(*r.critical))));
    kv("d", format_extended(r.critical->d));
    kv("v_behavior", std::string(v_behavior_name(r.critical->v_behavior)));
    if (r.critical->C) kv("C", format_extended(*r.critical->C));
  }
  kv("non_monotone", r.non_monotone ? "true" : "false");
  kv("from_hints", r.from_hints ? "true" : "false");
  char line[128];
  for (std::size_t i = 0; i < r.evidence.size(); ++i) {
    const auto& e = r.evidence[i];
    std::snprintf(line, sizeof line, "evidence.%zu=%.17g,%.17g,%.17g\n", i, e.x, e.x2_ddu, e.minus_du);
    out += line;
  }
  return out;
}

}  // namespace gibbs
