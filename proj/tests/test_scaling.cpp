#include <doctest.h>

#include <cmath>

#include "gibbs/energy.hpp"
#include "gibbs/errors.hpp"
#include "gibbs/regime.hpp"
#include "gibbs/scaling.hpp"
#include "gibbs/special.hpp"

using namespace gibbs;

TEST_CASE("solve_kappa") {
  CHECK(solve_kappa(make_model("power:p=2,a=0.5"), -5.0) == doctest::Approx(5.0).epsilon(1e-12));
  const double k = solve_kappa(make_model("uniform"), -std::log(100.0));
  CHECK(std::abs(special::digamma(k + 1.0) - std::log(100.0)) < 1e-12);
  CHECK(k == doctest::Approx(99.49958).epsilon(1e-7));
  CHECK(solve_kappa(make_model("expr:\"x*ln(x)-x\""), -3.0) == doctest::Approx(std::exp(3.0)).epsilon(1e-12));
  // small roots are found below the first dyadic probe
  CHECK(solve_kappa(make_model("power:p=2,a=0.5"), -0.25) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("solve_kappa_hat") {
  CHECK(solve_kappa_hat(make_model("power:p=2,a=0.5"), -5.0) ==
        doctest::Approx((5.0 + std::sqrt(29.0)) / 2.0).epsilon(1e-12));
  CHECK(solve_kappa_hat(make_model("expr:\"x*ln(x)-x\""), 0.0) == doctest::Approx(1.7632228343518967).epsilon(1e-12));
  for (double mu : {-2.0, -10.0, -100.0}) {
    const EnergyModel m = make_model("power:p=1.5");
    CHECK(solve_kappa_hat(m, mu) > solve_kappa(m, mu));
  }
}

TEST_CASE("root residuals and monotonicity") {
  for (const char* spec : {"uniform", "power:p=1.5", "power:p=3,a=0.1", "xlogpower:p=2"}) {
    const EnergyModel m = make_model(spec);
    double previous = 0.0;  // kappa grows as mu decreases
    for (double mu : {-1.0, -3.0, -10.0, -30.0}) {
      const double k = solve_kappa(m, mu);
      CAPTURE(spec);
      CAPTURE(mu);
      CHECK(std::abs(m.du(k) + mu) <= 1e-10 * (1 + std::abs(mu)));
      const double kh = solve_kappa_hat(m, mu);
      CHECK(std::abs(m.du(kh) - 1.0 / kh + mu) <= 1e-10 * (1 + std::abs(mu)));
      CHECK(k > previous);
      previous = k;
    }
  }
}

TEST_CASE("kappa over kappa_hat tends to one") {
  const EnergyModel m = make_model("uniform");
  const double mu = -std::log(1e4);
  CHECK(solve_kappa(m, mu) / solve_kappa_hat(m, mu) > 0.99);
}

TEST_CASE("solve_kappa reports missing roots") {
  // u' = 1/(x+1) never reaches 1 and u'' < 0 everywhere
  CHECK_THROWS_AS(solve_kappa(make_model("expr:\"ln(x+1)\""), -1.0), NoRoot);
}

TEST_CASE("make_plan per regime") {
  const EnergyModel q = make_model("power:p=2,a=0.5");
  const ScalingPlan p = make_plan(q, classify(q), -5.0);
  CHECK(p.kappa == doctest::Approx(5.0));
  CHECK(p.zeta == 1.0);
  CHECK(p.local_profile->kind == LocalProfileKind::DiscreteGaussian);
  CHECK(p.kappa_hat.has_value());

  const EnergyModel u = make_model("uniform");
  const ScalingPlan pu = make_plan(u, classify(u), -std::log(100.0));
  CHECK(pu.zeta == doctest::Approx(1.0 / std::sqrt(special::trigamma(pu.kappa + 1.0))));
  CHECK(pu.zeta == doctest::Approx(10.0).epsilon(0.01));
  // V = E[M] / kappa
  CHECK(pu.log_vertical == doctest::Approx(pu.log_expected_mass - std::log(pu.kappa)));

  const EnergyModel c = make_model("critical:mustar=0,d=2,v=const:0");
  const ScalingPlan pc = make_plan(c, classify(c), 0.1);
  CHECK(pc.kappa * 0.1 == 1.0);
  CHECK(pc.critical_case == CriticalCase::IncompleteGamma);
  CHECK(!pc.process_mode());

  const EnergyModel l = make_model("critical:mustar=0,d=0,v=const:0");
  const ScalingPlan pl = make_plan(l, classify(l), 0.01);
  CHECK(pl.process_mode());
  CHECK(pl.log_vertical == 0.0);
}

TEST_CASE("make_plan hard step zeta") {
  const EnergyModel m = make_model("power:p=3");
  const RegimeReport r = classify(m);
  const ScalingPlan def = make_plan(m, r, -300.0);
  CHECK(def.zeta == doctest::Approx(std::sqrt(def.kappa)));
  PlanOptions opts;
  opts.zeta = 2.5;
  CHECK(make_plan(m, r, -300.0, opts).zeta == 2.5);
}

TEST_CASE("make_plan rejects what has no scaling") {
  const EnergyModel sub = make_model("expr:\"ln(x)^2\"");
  CHECK_THROWS_AS(make_plan(sub, classify(sub), 1.0), RegimeMismatch);
  const EnergyModel c = make_model("critical:mustar=0,d=2,v=const:0");
  CHECK_THROWS_AS(make_plan(c, classify(c), 0.0), InvalidArgument);
  CHECK_THROWS_AS(make_plan(c, classify(c), -0.5), InvalidArgument);
}

TEST_CASE("describe lists the plan") {
  const EnergyModel c = make_model("critical:mustar=0,d=2,v=const:0");
  const std::string text = describe(make_plan(c, classify(c), 0.1));
  CHECK(text.find("kappa=10\n") != std::string::npos);
  CHECK(text.find("critical_case=IncompleteGamma") != std::string::npos);
  CHECK(text.find("d=2") != std::string::npos);
}
