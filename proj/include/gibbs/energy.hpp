#pragma once

// Energy models u(x) = beta*E(x) + ln Gamma(x+1) with exact first and second
// derivatives. Built-in families have closed forms; user expressions are
// differentiated symbolically.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace gibbs {

enum class Family { uniform, power, xlogpower, critical, dyadic, expression };

// Behaviour of the slowly varying remainder v(x) in the critical decomposition.
enum class VBehavior { ToPlusInf, ToMinusInf, ToConst };

std::string_view family_name(Family f);
std::string_view v_behavior_name(VBehavior b);

// Known limits that bypass numeric probing. Any subset may be present.
struct AnalyticHints {
  std::optional<double> mu_star;      // -lim u'(x), may be +-inf
  std::optional<double> gamma_limit;  // lim x^2 u''(x), may be +-inf
  std::optional<double> ddu_limit;    // lim u''(x), may be +inf
  std::optional<double> d;
  std::optional<double> C;
  std::optional<VBehavior> v_behavior;

  bool empty() const {
    return !mu_star && !gamma_limit && !ddu_limit && !d && !C && !v_behavior;
  }
};

struct EnergyModel {
  Family family = Family::expression;
  std::string spec;  // canonical model-spec text
  std::function<double(double)> u;
  std::function<double(double)> du;
  std::function<double(double)> ddu;
  double beta = 0.0;
  AnalyticHints hints;
  // Set for models whose local behaviour depends on the subsequence mu -> mu*
  // (the dyadic counterexample).
  bool non_monotone = false;
};

// Parsed form of the model-spec mini-language:
//   uniform
//   power:p=<r>,a=<r>
//   xlogpower:p=<r>
//   critical:mustar=<r>,d=<r>,v=const:<r>|logpow:c=<r>,q=<r>|negloglog
//   dyadic
//   expr:"<expression>"[,beta=<r>]
struct ModelSpec {
  Family family = Family::uniform;
  std::map<std::string, double> params;
  std::string v_kind;  // critical family: "const", "logpow" or "negloglog"
  std::string expression;
  std::optional<double> beta;
};

ModelSpec parse_model_spec(std::string_view text);
std::string to_string(const ModelSpec& spec);

EnergyModel make_model(const ModelSpec& spec);
EnergyModel make_model(std::string_view spec_text);

// log alpha_k = -mu k - u(k).
double log_alpha(const EnergyModel& model, double mu, double k);

// alpha_k = exp(-mu k - u(k)); underflows to 0, throws RangeError on overflow.
double alpha(const EnergyModel& model, double mu, long long k);

// Closed-form pieces of the dyadic model (u'' = 2^-n on (2^(n-1), 2^n], 1 on
// (0, 1], u(1) = u'(1) = 0).
namespace dyadic {
double u(double x);
double du(double x);
double ddu(double x);
}  // namespace dyadic

}  // namespace gibbs
