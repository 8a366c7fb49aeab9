#include "gibbs/energy.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <set>
#include <vector>

#include "gibbs/errors.hpp"
#include "gibbs/expression.hpp"
#include "gibbs/special.hpp"

namespace gibbs {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string format_number(double v) {
  std::array<char, 32> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

double parse_number(std::string_view text, std::string_view key) {
  double v = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  if (!text.empty() && text.front() == '+') ++first;
  const auto [end, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || end != last || !std::isfinite(v)) {
    throw InvalidArgument("model spec: '" + std::string(key) + "' expects a number, got '" +
                          std::string(text) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

void require_keys(const ModelSpec& spec, std::initializer_list<std::string_view> allowed,
                  std::initializer_list<std::string_view> required) {
  for (const auto& [key, value] : spec.params) {
    bool ok = false;
    for (auto a : allowed) ok = ok || a == key;
    if (!ok) {
      throw InvalidArgument("model spec: unknown parameter '" + key + "' for family " +
                            std::string(family_name(spec.family)));
    }
  }
  for (auto r : required) {
    if (!spec.params.count(std::string(r))) {
      throw InvalidArgument("model spec: family " + std::string(family_name(spec.family)) +
                            " requires '" + std::string(r) + "'");
    }
  }
}

void parse_critical_v(ModelSpec& spec, std::string_view value) {
  const std::size_t colon = value.find(':');
  const std::string_view kind = value.substr(0, colon);
  const std::string_view rest = colon == std::string_view::npos ? "" : value.substr(colon + 1);
  spec.v_kind = std::string(kind);
  if (kind == "const") {
    spec.params["C"] = parse_number(rest, "v=const");
  } else if (kind == "logpow") {
    if (!rest.empty()) {
      const std::size_t eq = rest.find('=');
      if (eq == std::string_view::npos) throw InvalidArgument("model spec: malformed v=logpow parameter");
      spec.params[std::string(rest.substr(0, eq))] = parse_number(rest.substr(eq + 1), rest.substr(0, eq));
    }
  } else if (kind == "negloglog") {
    if (!rest.empty()) throw InvalidArgument("model spec: v=negloglog takes no parameters");
  } else {
    throw InvalidArgument("model spec: unknown v kind '" + std::string(kind) + "'");
  }
}

// Critical family pieces. L = 1 + ln x keeps v finite at x = 1.
struct CriticalParts {
  std::function<double(double)> v, dv, ddv;
};

CriticalParts critical_v(const ModelSpec& spec) {
  if (spec.v_kind == "const") {
    const double C = spec.params.at("C");
    return {[C](double) { return C; }, [](double) { return 0.0; }, [](double) { return 0.0; }};
  }
  if (spec.v_kind == "logpow") {
    const double c = spec.params.at("c");
    const double q = spec.params.at("q");
    return {[c, q](double x) { return c * std::pow(1.0 + std::log(x), q); },
            [c, q](double x) { return c * q * std::pow(1.0 + std::log(x), q - 1.0) / x; },
            [c, q](double x) {
              const double L = 1.0 + std::log(x);
              return c * q * ((q - 1.0) * std::pow(L, q - 2.0) - std::pow(L, q - 1.0)) / (x * x);
            }};
  }
  return {[](double x) { return -std::log(1.0 + std::log(x)); },
          [](double x) { return -1.0 / (x * (1.0 + std::log(x))); },
          [](double x) {
            const double L = 1.0 + std::log(x);
            return (1.0 / L + 1.0 / (L * L)) / (x * x);
          }};
}

EnergyModel make_critical(const ModelSpec& spec) {
  require_keys(spec, {"mustar", "d", "C", "c", "q"}, {"d"});
  const double mu_star = spec.params.count("mustar") ? spec.params.at("mustar") : 0.0;
  const double d = spec.params.at("d");
  if (spec.v_kind.empty()) throw InvalidArgument("model spec: critical family requires v=");
  EnergyModel m;
  m.family = Family::critical;
  m.hints.mu_star = mu_star;
  m.hints.gamma_limit = d - 1.0;
  m.hints.d = d;
  if (spec.v_kind == "const") {
    m.hints.v_behavior = VBehavior::ToConst;
    m.hints.C = spec.params.at("C");
  } else if (spec.v_kind == "logpow") {
    if (!spec.params.count("c") || !spec.params.count("q")) {
      throw InvalidArgument("model spec: v=logpow requires c and q");
    }
    const double c = spec.params.at("c");
    const double q = spec.params.at("q");
    if (!(q > 0.0 && q < 1.0)) throw InvalidArgument("model spec: v=logpow requires 0 < q < 1");
    if (c == 0.0) throw InvalidArgument("model spec: v=logpow requires c != 0 (use v=const:0)");
    m.hints.v_behavior = c > 0.0 ? VBehavior::ToPlusInf : VBehavior::ToMinusInf;
  } else {
    m.hints.v_behavior = VBehavior::ToMinusInf;
  }
  const CriticalParts v = critical_v(spec);
  const double s = 1.0 - d;
  m.u = [mu_star, s, f = v.v](double x) { return -mu_star * x + s * std::log(x) + f(x); };
  m.du = [mu_star, s, f = v.dv](double x) { return -mu_star + s / x + f(x); };
  m.ddu = [s, f = v.ddv](double x) { return -s / (x * x) + f(x); };
  return m;
}

EnergyModel make_expression(const ModelSpec& spec) {
  const expr::Ast e = expr::parse(spec.expression);
  const expr::Ast de = expr::differentiate(e);
  const expr::Ast dde = expr::differentiate(de);
  EnergyModel m;
  m.family = Family::expression;
  if (!spec.beta) {
    m.u = [e](double x) { return expr::evaluate(e, x); };
    m.du = [de](double x) { return expr::evaluate(de, x); };
    m.ddu = [dde](double x) { return expr::evaluate(dde, x); };
    return m;
  }
  const double beta = *spec.beta;
  m.beta = beta;
  m.u = [e, beta](double x) { return beta * expr::evaluate(e, x) + special::log_gamma(x + 1.0); };
  m.du = [de, beta](double x) { return beta * expr::evaluate(de, x) + special::digamma(x + 1.0); };
  m.ddu = [dde, beta](double x) { return beta * expr::evaluate(dde, x) + special::trigamma(x + 1.0); };
  return m;
}

// Dyadic block index n with 2^(n-1) < x <= 2^n, for x > 1.
int dyadic_block(double x) {
  int e = 0;
  const double m = std::frexp(x, &e);  // x = m 2^e, m in [0.5, 1)
  return m == 0.5 ? e - 1 : e;
}

double dyadic_u_at_power(int m) {
  // u(2^m) = u(2^(m-1)) + (m-1) 2^(m-2) + 2^(m-3)
  double u = 0.0;
  for (int j = 1; j <= m; ++j) u += (j - 1) * std::ldexp(1.0, j - 2) + std::ldexp(1.0, j - 3);
  return u;
}

}  // namespace

std::string_view family_name(Family f) {
  switch (f) {
    case Family::uniform:
      return "uniform";
    case Family::power:
      return "power";
    case Family::xlogpower:
      return "xlogpower";
    case Family::critical:
      return "critical";
    case Family::dyadic:
      return "dyadic";
    case Family::expression:
      return "expr";
  }
  return "?";
}

std::string_view v_behavior_name(VBehavior b) {
  switch (b) {
    case VBehavior::ToPlusInf:
      return "ToPlusInf";
    case VBehavior::ToMinusInf:
      return "ToMinusInf";
    case VBehavior::ToConst:
      return "ToConst";
  }
  return "?";
}

namespace dyadic {

double ddu(double x) {
  if (x <= 1.0) return 1.0;
  return std::ldexp(1.0, -dyadic_block(x));
}

double du(double x) {
  if (x <= 1.0) return x - 1.0;
  const int n = dyadic_block(x);
  const double left = std::ldexp(1.0, n - 1);
  return 0.5 * (n - 1) + (x - left) * std::ldexp(1.0, -n);
}

double u(double x) {
  if (x <= 1.0) return 0.5 * (x - 1.0) * (x - 1.0);
  const int n = dyadic_block(x);
  const double left = std::ldexp(1.0, n - 1);
  const double t = x - left;
  return dyadic_u_at_power(n - 1) + 0.5 * (n - 1) * t + t * t * std::ldexp(1.0, -(n + 1));
}

}  // namespace dyadic

ModelSpec parse_model_spec(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw InvalidArgument("model spec is empty");
  const std::size_t colon = text.find(':');
  const std::string_view head = text.substr(0, colon);
  const std::string_view body = colon == std::string_view::npos ? "" : text.substr(colon + 1);

  ModelSpec spec;
  if (head == "expr") {
    spec.family = Family::expression;
    std::string_view rest = trim(body);
    if (!rest.empty() && rest.front() == '"') {
      const std::size_t close = rest.find('"', 1);
      if (close == std::string_view::npos) throw InvalidArgument("model spec: unterminated quoted expression");
      spec.expression = std::string(rest.substr(1, close - 1));
      rest = trim(rest.substr(close + 1));
    } else {
      const std::size_t comma = rest.find(',');
      spec.expression = std::string(trim(rest.substr(0, comma)));
      rest = comma == std::string_view::npos ? "" : rest.substr(comma);
    }
    if (spec.expression.empty()) throw InvalidArgument("model spec: empty expression");
    if (!rest.empty()) {
      if (rest.substr(0, 6) != ",beta=") throw InvalidArgument("model spec: expected ',beta=<r>' after expression");
      spec.beta = parse_number(rest.substr(6), "beta");
    }
    return spec;
  }

  if (head == "uniform") {
    spec.family = Family::uniform;
  } else if (head == "power") {
    spec.family = Family::power;
  } else if (head == "xlogpower") {
    spec.family = Family::xlogpower;
  } else if (head == "critical") {
    spec.family = Family::critical;
  } else if (head == "dyadic") {
    spec.family = Family::dyadic;
  } else {
    throw InvalidArgument("model spec: unknown family '" + std::string(head) + "'");
  }
  if (body.empty()) return spec;

  for (std::string_view token : split(body, ',')) {
    token = trim(token);
    const std::size_t eq = token.find('=');
    if (eq == std::string_view::npos) throw InvalidArgument("model spec: expected key=value, got '" + std::string(token) + "'");
    const std::string key(trim(token.substr(0, eq)));
    const std::string_view value = trim(token.substr(eq + 1));
    if (spec.family == Family::critical && key == "v") {
      parse_critical_v(spec, value);
      continue;
    }
    if (spec.params.count(key)) throw InvalidArgument("model spec: duplicate parameter '" + key + "'");
    spec.params[key] = parse_number(value, key);
  }
  return spec;
}

std::string to_string(const ModelSpec& spec) {
  if (spec.family == Family::expression) {
    std::string out = "expr:\"" + spec.expression + "\"";
    if (spec.beta) out += ",beta=" + format_number(*spec.beta);
    return out;
  }
  std::string out(family_name(spec.family));
  std::vector<std::string> parts;
  if (spec.family == Family::critical) {
    if (spec.params.count("mustar")) parts.push_back("mustar=" + format_number(spec.params.at("mustar")));
    if (spec.params.count("d")) parts.push_back("d=" + format_number(spec.params.at("d")));
    if (spec.v_kind == "const") {
      parts.push_back("v=const:" + format_number(spec.params.at("C")));
    } else if (spec.v_kind == "logpow") {
      parts.push_back("v=logpow:c=" + format_number(spec.params.at("c")));
      parts.push_back("q=" + format_number(spec.params.at("q")));
    } else if (!spec.v_kind.empty()) {
      parts.push_back("v=" + spec.v_kind);
    }
  } else {
    for (const auto& [key, value] : spec.params) parts.push_back(key + "=" + format_number(value));
  }
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i == 0 ? ":" : ",") + parts[i];
  return out;
}

EnergyModel make_model(const ModelSpec& spec) {
  EnergyModel m;
  switch (spec.family) {
    case Family::uniform:
      require_keys(spec, {}, {});
      m.u = [](double x) { return special::log_gamma(x + 1.0); };
      m.du = [](double x) { return special::digamma(x + 1.0); };
      m.ddu = [](double x) { return special::trigamma(x + 1.0); };
      break;
    case Family::power: {
      require_keys(spec, {"p", "a"}, {"p"});
      const double p = spec.params.at("p");
      const double a = spec.params.count("a") ? spec.params.at("a") : 1.0;
      if (!(p > 0.0)) throw InvalidArgument("power family requires p > 0");
      if (a == 0.0) throw InvalidArgument("power family requires a != 0");
      m.u = [p, a](double x) { return a * std::pow(x, p); };
      m.du = [p, a](double x) { return a * p * std::pow(x, p - 1.0); };
      m.ddu = [p, a](double x) { return a * p * (p - 1.0) * std::pow(x, p - 2.0); };
      break;
    }
    case Family::xlogpower: {
      require_keys(spec, {"p"}, {"p"});
      const double p = spec.params.at("p");
      if (!(p > 0.0)) throw InvalidArgument("xlogpower family requires p > 0");
      m.u = [p](double x) { return x * std::pow(1.0 + std::log(x), p); };
      m.du = [p](double x) {
        const double L = 1.0 + std::log(x);
        return std::pow(L, p) + p * std::pow(L, p - 1.0);
      };
      m.ddu = [p](double x) {
        const double L = 1.0 + std::log(x);
        return (p * std::pow(L, p - 1.0) + p * (p - 1.0) * std::pow(L, p - 2.0)) / x;
      };
      break;
    }
    case Family::critical:
      m = make_critical(spec);
      break;
    case Family::dyadic:
      require_keys(spec, {}, {});
      m.u = dyadic::u;
      m.du = dyadic::du;
      m.ddu = dyadic::ddu;
      m.hints.mu_star = -kInf;
      m.hints.gamma_limit = kInf;
      m.hints.ddu_limit = 0.0;
      m.non_monotone = true;
      break;
    case Family::expression:
      m = make_expression(spec);
      break;
  }
  m.family = spec.family;
  m.spec = to_string(spec);
  return m;
}

EnergyModel make_model(std::string_view spec_text) { return make_model(parse_model_spec(spec_text)); }

double log_alpha(const EnergyModel& model, double mu, double k) { return -mu * k - model.u(k); }

double alpha(const EnergyModel& model, double mu, long long k) {
  if (k < 1) throw InvalidArgument("alpha requires k >= 1");
  const double la = log_alpha(model, mu, static_cast<double>(k));
  if (std::isnan(la)) throw RangeError("alpha: model is not finite at k=" + std::to_string(k));
  const double a = std::exp(la);
  if (std::isinf(a)) throw RangeError("alpha overflows at k=" + std::to_string(k));
  return a;
}

}  // namespace gibbs
