#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gibbs/energy.hpp"

namespace gibbs {

enum class Regime { SubcriticalA, SubcriticalB, Supercritical, Critical };

// Critical sub-cases: (a) zero shape, (b) incomplete gamma, (c) limit process.
enum class CriticalCase { ZeroShape, IncompleteGamma, LimitProcess };

enum class LocalProfileKind { Gaussian, DiscreteGaussian, HardStep };

struct LocalProfile {
  LocalProfileKind kind;
  double c = 0.0;  // lim u'' for DiscreteGaussian
};

struct CriticalInfo {
  double d = 0.0;
  VBehavior v_behavior = VBehavior::ToConst;
  std::optional<double> C;
  // v(x) = u(x) + mu* x - (1 - d) ln x
  std::function<double(double)> v;
};

struct EvidenceRow {
  double x;
  double x2_ddu;    // x^2 u''(x)
  double minus_du;  // -u'(x)
};

struct RegimeReport {
  double gamma_limit = 0.0;
  double mu_star = 0.0;
  Regime regime = Regime::Supercritical;
  std::optional<CriticalInfo> critical;
  std::optional<LocalProfile> local_profile;
  bool non_monotone = false;
  bool from_hints = false;
  std::vector<EvidenceRow> evidence;
};

std::string_view regime_name(Regime r);
std::string_view local_profile_name(LocalProfileKind k);
std::string_view critical_case_name(CriticalCase c);

double estimate_mu_star(const EnergyModel& model);

RegimeReport classify(const EnergyModel& model);

CriticalInfo decompose_critical(const EnergyModel& model, double mu_star);

CriticalCase critical_case(const CriticalInfo& info);

// Flat key=value block, one entry per line, evidence rows last.
std::string to_key_value(const RegimeReport& report);

// "regime=... local=... mu_star=..." summary line.
std::string summary_line(const RegimeReport& report);

std::string format_extended(double v);

}  // namespace gibbs
