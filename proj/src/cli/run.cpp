#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <map>
#include <sstream>

#include "gibbs/acceptance.hpp"
#include "gibbs/cli.hpp"
#include "gibbs/curves.hpp"
#include "gibbs/ensemble.hpp"
#include "gibbs/errors.hpp"
#include "gibbs/oracles.hpp"
#include "gibbs/regime.hpp"
#include "gibbs/scaling.hpp"
#include "gibbs/verify.hpp"

#ifndef GIBBS_SHAPES_VERSION
#define GIBBS_SHAPES_VERSION "0.0.0"
#endif

namespace gibbs::cli {
namespace {

using nlohmann::json;

json number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return v;
}

json report_json(const EnergyModel& model, const RegimeReport& r) {
  json j;
  j["model"] = model.spec;
  j["regime"] = regime_name(r.regime);
  j["mu_star"] = number(r.mu_star);
  j["gamma_limit"] = number(r.gamma_limit);
  j["non_monotone"] = r.non_monotone;
  j["from_hints"] = r.from_hints;
  if (r.local_profile) {
    j["local_profile"] = {{"kind", local_profile_name(r.local_profile->kind)}, {"c", number(r.local_profile->c)}};
  } else {
    j["local_profile"] = nullptr;
  }
  if (r.critical) {
    json c;
    c["d"] = number(r.critical->d);
    c["case"] = critical_case_name(critical_case(*r.critical));
    c["v_behavior"] = v_behavior_name(r.critical->v_behavior);
    c["C"] = r.critical->C ? number(*r.critical->C) : json(nullptr);
    j["critical"] = c;
  } else {
    j["critical"] = nullptr;
  }
  json ev = json::array();
  for (const auto& e : r.evidence) ev.push_back({{"x", number(e.x)}, {"x2_ddu", number(e.x2_ddu)}, {"minus_du", number(e.minus_du)}});
  j["evidence"] = ev;
  return j;
}

// Writes to the configured output file, or to out.
class Sink {
 public:
  Sink(const RunConfig& c, std::ostream& out) : out_(&out) {
    if (!c.output.empty()) {
      file_.open(c.output, std::ios::binary);
      if (!file_) throw InvalidArgument("cannot open output file '" + c.output + "'");
      out_ = &file_;
    }
  }
  std::ostream& stream() { return *out_; }

 private:
  std::ofstream file_;
  std::ostream* out_;
};

EnergyModel require_model(const RunConfig& c) {
  if (c.model.empty()) throw InvalidArgument(c.command + " needs --model");
  return make_model(c.model);
}

double require_mu(const RunConfig& c) {
  if (!c.mu) throw InvalidArgument(c.command + " needs --mu");
  return *c.mu;
}

int cmd_classify(const RunConfig& c, bool as_json, std::ostream& out) {
  const EnergyModel model = require_model(c);
  const RegimeReport report = classify(model);
  Sink sink(c, out);
  if (as_json) {
    sink.stream() << report_json(model, report).dump(2) << '\n';
  } else {
    sink.stream() << summary_line(report) << '\n';
  }
  return kOk;
}

int cmd_simulate(const RunConfig& c, std::ostream& out) {
  const EnergyModel model = require_model(c);
  std::vector<double> mus = c.mu_list;
  if (c.mu) mus.insert(mus.begin(), *c.mu);
  if (mus.empty()) throw InvalidArgument("simulate needs --mu or --mu-list");
  Sink sink(c, out);
  for (double mu : mus) {
    const std::int64_t k_max = truncation_K(model, mu, c.eps_tail);
    const SampleBatch batch = sample_batch(model, mu, k_max, c.n_samples, c.seed);
    auto& s = sink.stream();
    s << "# gibbs_shapes " << GIBBS_SHAPES_VERSION << '\n';
    s << "# model=" << model.spec << '\n';
    s << "# mu=" << format_extended(mu) << '\n';
    s << "# seed=" << c.seed << '\n';
    s << "# n=" << c.n_samples << '\n';
    s << "# k_max=" << k_max << '\n';
    s << "sample_index,mass,parts\n";
    write_batch(s, batch);
  }
  return kOk;
}

void write_plan_header(std::vector<std::string>& lines, const ScalingPlan& plan) {
  std::istringstream in(describe(plan));
  for (std::string line; std::getline(in, line);) lines.push_back("plan." + line);
}

std::vector<std::string> common_header(const RunConfig& c, const EnergyModel& model, const std::string& grid,
                                       std::int64_t k_max) {
  std::vector<std::string> h;
  h.push_back(std::string("gibbs_shapes ") + GIBBS_SHAPES_VERSION);
  h.push_back("command=" + c.command);
  h.push_back("model=" + model.spec);
  h.push_back("seed=" + std::to_string(c.seed));
  h.push_back("n=" + std::to_string(c.n_samples));
  h.push_back("k_max=" + std::to_string(k_max));
  h.push_back("grid=" + grid);
  if (c.exclude) h.push_back("exclude=" + format_double(c.exclude->first) + "," + format_double(c.exclude->second));
  return h;
}

ShapeOracle auto_shape_oracle(const ScalingPlan& plan) {
  if (plan.regime == Regime::Supercritical) return {OracleKind::Step, 0.0};
  switch (*plan.critical_case) {
    case CriticalCase::ZeroShape:
      return {OracleKind::Zero, 0.0};
    case CriticalCase::IncompleteGamma:
      return {OracleKind::Gamma, *plan.d};
    case CriticalCase::LimitProcess:
      return {OracleKind::PoissonProcessLaw, plan.C.value_or(0.0)};
  }
  return {OracleKind::Zero, 0.0};
}

std::string oracle_flag(OracleKind k) {
  switch (k) {
    case OracleKind::Step:
      return "step";
    case OracleKind::Gamma:
      return "gamma";
    case OracleKind::Zero:
      return "zero";
    case OracleKind::PoissonProcessLaw:
      return "process";
    case OracleKind::Gaussian:
      return "gaussian";
    case OracleKind::DiscreteGaussian:
      return "discrete_gaussian";
    case OracleKind::HardStep:
      return "hard_step";
    case OracleKind::MixedCounterexample:
      return "mixed";
  }
  return "?";
}

void check_oracle_choice(const std::string& requested, const ShapeOracle& chosen, std::initializer_list<const char*> known) {
  if (requested == "auto") return;
  bool ok = false;
  for (const char* k : known) ok = ok || requested == k;
  if (!ok) throw InvalidArgument("unknown oracle '" + requested + "'");
  if (requested != oracle_flag(chosen.kind)) {
    throw RegimeMismatch("oracle '" + requested + "' does not match the model's regime (expected '" +
                         oracle_flag(chosen.kind) + "')");
  }
}

int emit_curve(const RunConfig& c, std::ostream& out, CurveKind kind) {
  const EnergyModel model = require_model(c);
  const double mu = require_mu(c);
  const RegimeReport report = classify(model);
  PlanOptions opts;
  opts.zeta = c.zeta;
  opts.rel_tol = c.rel_tol;
  const ScalingPlan plan = make_plan(model, report, mu, opts);

  ShapeOracle oracle;
  if (kind == CurveKind::F) {
    oracle = auto_shape_oracle(plan);
    check_oracle_choice(c.oracle, oracle, {"step", "gamma", "zero", "process"});
  } else {
    if (plan.regime != Regime::Supercritical) throw RegimeMismatch("local profiles need a supercritical model");
    const LocalProfile lp = plan.local_profile.value_or(LocalProfile{LocalProfileKind::Gaussian, 0.0});
    switch (lp.kind) {
      case LocalProfileKind::Gaussian:
        oracle = {OracleKind::Gaussian, 0.0};
        break;
      case LocalProfileKind::DiscreteGaussian:
        oracle = {OracleKind::DiscreteGaussian, lp.c};
        break;
      case LocalProfileKind::HardStep:
        oracle = {OracleKind::HardStep, 0.0};
        break;
    }
    check_oracle_choice(c.oracle, oracle, {"gaussian", "discrete_gaussian", "hard_step"});
  }

  const std::string grid_spec = !c.grid.empty() ? c.grid : (kind == CurveKind::F ? "0:2:0.05" : "-3:3:0.1");
  CurveRequest req;
  req.kind = kind;
  req.grid = parse_grid(grid_spec);
  req.n = c.n_samples;
  req.seed = c.seed;
  req.k_max = truncation_K(model, mu, c.eps_tail);
  EmpiricalCurve curve = estimate_curve(model, plan, req);
  if (c.exclude) curve.excluded = c.exclude;

  std::vector<double> values(curve.grid.size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = oracle.eval(curve.grid[i]);

  std::vector<std::string> header = common_header(c, model, grid_spec, req.k_max);
  header.push_back("oracle=" + oracle.name());
  if (report.non_monotone) header.push_back("note=non-monotone model; local shape depends on the subsequence");
  write_plan_header(header, plan);
  if (oracle.deterministic()) header.push_back("sup_distance=" + format_double(sup_distance(curve, values)));

  Sink sink(c, out);
  write_curve_csv(sink.stream(), curve, values, header);
  return kOk;
}

int cmd_verify(const RunConfig& c, std::ostream& out, std::ostream& err) {
  AcceptanceOptions options;
  options.manifest.seed = c.seed != 0 ? c.seed : options.manifest.seed;
  options.curve_runner = [](std::size_t threads) {
    const char* previous = std::getenv("GIBBS_SHAPES_THREADS");
    const std::string saved = previous ? previous : "";
    ::setenv("GIBBS_SHAPES_THREADS", std::to_string(threads).c_str(), 1);
    std::ostringstream csv;
    std::ostringstream sink_err;
    const int code = run({"curve", "--model", "uniform", "--mu", "-5.3", "--oracle", "auto", "--grid", "0:2:0.05",
                          "--exclude", "0.9,1.1", "--n", "200", "--seed", "7"},
                         csv, sink_err);
    if (previous) {
      ::setenv("GIBBS_SHAPES_THREADS", saved.c_str(), 1);
    } else {
      ::unsetenv("GIBBS_SHAPES_THREADS");
    }
    return code == kOk ? csv.str() : std::string();
  };
  const auto results = run_acceptance(options);
  Sink sink(c, out);
  sink.stream() << "# acceptance manifest " << options.manifest.version << '\n';
  write_report(sink.stream(), results);
  bool all = true;
  for (const auto& r : results) {
    if (!r.pass) {
      all = false;
      err << "check " << r.id << " failed: " << r.detail << '\n';
    }
  }
  return all ? kOk : kVerifyFailed;
}

int cmd_enumerate(const RunConfig& c, std::ostream& out) {
  const ProfileEnumeration e = enumerate_profiles(c.M);
  Sink sink(c, out);
  auto& s = sink.stream();
  s << "profile,multiplicity\n";
  for (const auto& p : e.profiles) {
    std::string label;
    for (std::size_t k = p.nu.size(); k-- > 0;) {
      if (p.nu[k] == 0) continue;
      if (!label.empty()) label += ';';
      label += std::to_string(k + 1) + ":" + std::to_string(p.nu[k]);
    }
    s << label << ',' << p.multiplicity << '\n';
  }
  s << "# M=" << e.M << " profiles=" << e.profiles.size() << " total=" << e.total() << '\n';
  return kOk;
}

struct FlagSet {
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
  std::string config_path;
  bool as_json = false;

  void add(CLI::App* app, const std::string& key, const std::string& names, const std::string& help) {
    options[key] = app->add_option(names, values[key], help);
  }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Limit shapes of Gibbs random set partitions", "gibbs_shapes"};
  app.set_version_flag("--version", GIBBS_SHAPES_VERSION);
  app.require_subcommand(1);

  struct Sub {
    std::string name;
    CLI::App* app;
    FlagSet flags;
  };
  std::vector<Sub> subs;
  subs.reserve(6);
  const std::vector<std::pair<std::string, std::string>> commands{
      {"classify", "Classify a model's regime and local profile"},
      {"simulate", "Sample partitions and export them"},
      {"curve", "Estimate the rescaled size distribution F"},
      {"local", "Estimate the local profile G near kappa"},
      {"verify", "Run the acceptance suite"},
      {"enumerate", "List partition profiles of M with multiplicities"}};
  for (const auto& [name, help] : commands) {
    subs.push_back({name, app.add_subcommand(name, help), {}});
    Sub& s = subs.back();
    s.app->add_option("--config", s.flags.config_path, "key=value config file; flags override it");
    if (name == "verify") {
      s.flags.add(s.app, "seed", "--seed", "Override the manifest seed");
      s.flags.add(s.app, "output", "-o,--output", "Write the report here");
      continue;
    }
    if (name == "enumerate") {
      s.flags.add(s.app, "M", "--M", "Target mass, 1..14");
      s.flags.add(s.app, "output", "-o,--output", "Write the table here");
      continue;
    }
    s.flags.add(s.app, "model", "--model", "Model spec, e.g. uniform or power:p=2,a=0.5");
    s.flags.add(s.app, "output", "-o,--output", "Output file (default stdout)");
    if (name == "classify") {
      s.app->add_flag("--json", s.flags.as_json, "JSON output");
      continue;
    }
    s.flags.add(s.app, "mu", "--mu", "Chemical potential");
    s.flags.add(s.app, "seed", "--seed", "Base seed");
    s.flags.add(s.app, "n_samples", "--n,--n-samples", "Number of samples");
    s.flags.add(s.app, "eps_tail", "--eps-tail", "Truncation tail mass");
    if (name == "simulate") {
      s.flags.add(s.app, "mu_list", "--mu-list", "Comma-separated chemical potentials");
      continue;
    }
    s.flags.add(s.app, "grid", "--grid", "Grid a:b:step");
    s.flags.add(s.app, "exclude", "--exclude", "Excluded window l1,l2");
    s.flags.add(s.app, "oracle", "--oracle", "auto or an explicit oracle name");
    s.flags.add(s.app, "rel_tol", "--rel-tol", "Series relative tolerance");
    s.flags.add(s.app, "zeta", "--zeta", "Local scale override");
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kOk;
    }
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    for (auto& s : subs) {
      if (!s.app->parsed()) continue;
      RunConfig cfg = s.flags.config_path.empty() ? RunConfig{} : load_config(s.flags.config_path);
      if (!cfg.command.empty() && cfg.command != s.name) {
        throw InvalidArgument("config file is for '" + cfg.command + "', not '" + s.name + "'");
      }
      cfg.command = s.name;
      for (const auto& [key, opt] : s.flags.options) {
        if (opt->count() > 0) set_key(cfg, key, s.flags.values[key]);
      }
      if (s.name == "classify") return cmd_classify(cfg, s.flags.as_json, out);
      if (s.name == "simulate") return cmd_simulate(cfg, out);
      if (s.name == "curve") return emit_curve(cfg, out, CurveKind::F);
      if (s.name == "local") return emit_curve(cfg, out, CurveKind::G);
      if (s.name == "verify") return cmd_verify(cfg, out, err);
      if (s.name == "enumerate") return cmd_enumerate(cfg, out);
    }
    return kConfigError;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << '\n';
    return kNumericError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumericError;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace gibbs::cli
