#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nlt/ch.hpp"
#include "nlt/fourier.hpp"
#include "nlt/laws.hpp"
#include "nlt/memheat.hpp"
#include "nlt/ops.hpp"
#include "nlt/plate.hpp"
#include "test_util.hpp"

#include <json.hpp>

#include <cmath>

using namespace nlt;
using nlt_test::fill0;

namespace {
const double kTwoPi = 8.0 * std::atan(1.0);

// Records a fourier run: backward-difference energy rate (telescopes exactly)
// plus the internal entropy action, with a theta snapshot at every sample.
laws::ProcessRecord record_fourier(const fourier::Model& model, fourier::State s,
                                   double dt, int steps) {
  laws::ProcessRecord r;
  r.model = "fourier";
  r.t0 = s.t;
  r.dt = dt;
  r.channels["first_law_rate"] = {};
  r.channels["entropy_action"] = {};
  r.snapshots.push_back({{"theta", s.theta}});
  for (int i = 0; i < steps; ++i) {
    const fourier::State prev = s;
    s = model.step(s, dt);
    r.channels["first_law_rate"].push_back((model.energy(s) - model.energy(prev)) / dt);
    r.channels["entropy_action"].push_back(
        volume_integral(model.entropy_actions(prev, s, dt).internal));
    r.snapshots.push_back({{"theta", s.theta}});
  }
  return r;
}

std::pair<fourier::Model, fourier::State> forced_conductor(const Grid& g) {
  auto supply = [g](double t) {
    return fill0(g, [t](double x, double) { return 0.4 * std::sin(t) * (0.5 + std::sin(x)); });
  };
  fourier::Model model({0.7, 1.3}, supply);
  fourier::State s{fill0(g, [](double, double) { return 1.0; }), 0.0};
  return {model, s};
}
}  // namespace

TEST_CASE("record validation rejects malformed inputs") {
  Grid g(16, kTwoPi);
  laws::ProcessRecord r;
  r.model = "toy";
  r.dt = 0.1;
  CHECK_THROWS_AS(r.validate(), std::invalid_argument);  // no snapshots

  r.snapshots.push_back({{"u", Field(g, 0)}});
  r.snapshots.push_back({{"u", Field(g, 0)}});
  r.channels["first_law_rate"] = {1.0, 2.0};  // two steps, but one interval
  CHECK_THROWS_AS(r.validate(), std::invalid_argument);

  r.channels["first_law_rate"] = {1.0};
  CHECK_NOTHROW(r.validate());
  CHECK(r.steps() == 1);

  r.snapshots.push_back({{"v", Field(g, 0)}});
  r.channels["first_law_rate"] = {1.0, 2.0};
  CHECK_THROWS_AS(r.validate(), std::invalid_argument);  // key drift

  r.snapshots.back() = {{"u", Field(g, 1)}};
  CHECK_THROWS_AS(r.validate(), std::invalid_argument);  // shape drift

  r.dt = -0.1;
  CHECK_THROWS_AS(r.validate(), std::invalid_argument);
}

TEST_CASE("restriction and composition form a semigroup over records") {
  Grid g(32, kTwoPi);
  auto [model, s0] = forced_conductor(g);
  const double dt = 0.4 * model.stable_dt(g);
  const laws::ProcessRecord r = record_fourier(model, s0, dt, 40);

  const laws::ProcessRecord head = laws::restrict_record(r, 0, 25);
  const laws::ProcessRecord tail = laws::restrict_record(r, 25, 40);
  CHECK(head.steps() == 25);
  CHECK(tail.t0 == doctest::Approx(r.t0 + 25 * dt).epsilon(1e-14));

  const laws::ProcessRecord joined = laws::compose(head, tail);
  CHECK(joined.steps() == r.steps());
  CHECK(joined.snapshots.size() == r.snapshots.size());
  for (const auto& [name, series] : r.channels)
    for (int i = 0; i < r.steps(); ++i)
      CHECK(joined.channels.at(name)[i] == series[i]);
  CHECK(max_abs(joined.snapshots.back().at("theta") -
                r.snapshots.back().at("theta")) == 0.0);

  CHECK_THROWS_AS(laws::restrict_record(r, 5, 5), std::invalid_argument);
  CHECK_THROWS_AS(laws::restrict_record(r, -1, 5), std::invalid_argument);
  CHECK_THROWS_AS(laws::restrict_record(r, 0, 41), std::invalid_argument);

  CHECK_THROWS_AS(laws::compose(head, laws::restrict_record(r, 30, 40)),
                  std::invalid_argument);  // time gap
  laws::ProcessRecord renamed = tail;
  renamed.model = "other";
  CHECK_THROWS_AS(laws::compose(head, renamed), std::invalid_argument);
  laws::ProcessRecord bumped = tail;
  bumped.snapshots.front().at("theta") *= 1.0 + 1e-6;
  CHECK_THROWS_AS(laws::compose(head, bumped), std::invalid_argument);
  laws::ProcessRecord stripped = tail;
  stripped.channels.erase("entropy_action");
  CHECK_THROWS_AS(laws::compose(head, stripped), std::invalid_argument);
}

TEST_CASE("cycle integral and reconstruction are plain cumulative sums") {
  Grid g(16, kTwoPi);
  laws::ProcessRecord r;
  r.model = "toy";
  r.dt = 0.5;
  r.channels["first_law_rate"] = {2.0, -1.0, 4.0};
  for (int i = 0; i < 4; ++i) r.snapshots.push_back({{"u", Field(g, 0)}});

  CHECK(laws::cycle_integral(r, "first_law_rate") == doctest::Approx(2.5).epsilon(1e-15));
  CHECK_THROWS_AS(laws::cycle_integral(r, "absent"), std::invalid_argument);

  const std::vector<double> series = laws::reconstruct_potential(r, "first_law_rate", 10.0);
  REQUIRE(series.size() == 4);
  CHECK(series[0] == 10.0);
  CHECK(series[1] == 11.0);
  CHECK(series[2] == 10.5);
  CHECK(series[3] == 12.5);

  CHECK(laws::closure_error(r) == 0.0);  // identical endpoint snapshots
}

TEST_CASE("forced conduction cycle: laws hold and potentials reconstruct") {
  Grid g(32, kTwoPi);
  auto [model, s] = forced_conductor(g);
  const double period = kTwoPi;
  const int per_period = 180;
  const double dt = period / per_period;
  REQUIRE(dt < model.stable_dt(g));

  for (int i = 0; i < 5 * per_period; ++i) s = model.step(s, dt);  // settle onto the loop
  const laws::ProcessRecord r = record_fourier(model, s, dt, per_period);

  const double closure = laws::closure_error(r);
  CHECK(closure < 1e-4);

  const laws::CycleReport rep = laws::check_cycles(r, 1e-3, 1e-4);
  CHECK(rep.all_pass());
  REQUIRE(rep.verdicts.size() == 3);
  CHECK(rep.verdicts[0].applicable);
  CHECK(rep.verdicts[1].applicable);
  CHECK_FALSE(rep.verdicts[2].applicable);  // no mechanical dissipation channel
  CHECK(rep.verdicts[2].pass);
  CHECK(rep.verdicts[1].value < 0.0);  // conduction cycles strictly produce entropy

  // a segment of the loop is not a cycle and must be rejected
  CHECK_THROWS_AS(laws::check_cycles(laws::restrict_record(r, 0, per_period / 4), 1e-3, 1e-4),
                  std::invalid_argument);

  // internal-energy reconstruction is exact at every sample
  const fourier::State anchor{r.snapshots.front().at("theta"), r.t0};
  const std::vector<double> energy =
      laws::reconstruct_potential(r, "first_law_rate", model.energy(anchor));
  for (int k : {45, 90, per_period}) {
    const fourier::State at{r.snapshots[k].at("theta"), r.t0 + k * dt};
    CHECK(std::abs(energy[k] - model.energy(at)) <= 1e-11 * (1.0 + std::abs(energy[k])));
  }

  // entropy dominates its action integral (lower-bound reconstruction)
  const std::vector<double> entropy_floor =
      laws::reconstruct_potential(r, "entropy_action", model.entropy(anchor));
  double final_gap = 0.0;
  for (int k : {45, 90, per_period}) {
    const fourier::State at{r.snapshots[k].at("theta"), r.t0 + k * dt};
    const double gap = model.entropy(at) - entropy_floor[k];
    CHECK(gap >= -1e-12 * (1.0 + std::abs(entropy_floor[k])));
    final_gap = gap;
  }
  CHECK(final_gap > 0.0);
}

TEST_CASE("isothermal phase separation: free energy stays under its bound") {
  Grid g(32, kTwoPi);
  ch::Params p;
  p.gamma = 0.02;
  ch::Model model(p, 1.3);
  ch::State s{fill0(g, [](double x, double) { return 0.3 * std::sin(x) + 0.1 * std::cos(2.0 * x); }),
              0.0};
  const double dt = 0.5 * model.stable_dt(g, 1.3);
  const int steps = 120;

  laws::ProcessRecord r;
  r.model = "ch";
  r.t0 = 0.0;
  r.dt = dt;
  r.channels["free_energy_rate"] = {};
  r.channels["psi_bound_rate"] = {};
  r.snapshots.push_back({{"c", s.c}});
  double diss_scale = 0.0;
  for (int i = 0; i < steps; ++i) {
    const ch::State prev = s;
    s = model.step(s, dt);
    const double dpsi = (model.free_energy(s.c, 1.3) - model.free_energy(prev.c, 1.3)) / dt;
    const double d = model.dissipation(s.c, 1.3);
    r.channels["free_energy_rate"].push_back(dpsi);
    r.channels["psi_bound_rate"].push_back(-d);
    r.snapshots.push_back({{"c", s.c}});
    diss_scale += d * dt;
  }

  const double psi0 = model.free_energy(r.snapshots.front().at("c"), 1.3);
  const std::vector<double> psi = laws::reconstruct_potential(r, "free_energy_rate", psi0);
  const std::vector<double> bound = laws::reconstruct_potential(r, "psi_bound_rate", psi0);
  CHECK(std::abs(psi.back() - model.free_energy(s.c, 1.3)) <= 1e-11 * (1.0 + std::abs(psi0)));
  const double slack = 2.0 * dt * diss_scale + 1e-12;
  for (std::size_t k = 0; k < psi.size(); ++k) CHECK(psi[k] <= bound[k] + slack);
  CHECK(psi.back() < psi0);  // strictly dissipative run
}

TEST_CASE("generic coldness-form action matches the history-flux evaluator") {
  Grid g(48, kTwoPi);
  const memheat::Kernel k1{0.8, 2.0};
  const memheat::Kernel k2{0.5, 2.5};
  const double ds = 0.02;
  const int m = 200;
  memheat::HistoryBuffer buf(g, m, ds);
  const Field theta = fill0(g, [](double x, double) { return 1.0 + 0.1 * std::sin(x); });
  const Field gt = grad(theta);
  for (int i = 0; i < 300; ++i) buf.push(gt, ds);

  const Field h = fill0(g, [](double x, double) { return 0.2 * std::cos(2.0 * x); });
  const Field q1 = memheat::flux_q1(buf, theta, k1);
  const Field q2 = memheat::flux_q2(buf, theta, k2);

  const Field generic = laws::entropy_action(theta, h, &q1, &q2);
  const Field dedicated = memheat::entropy_action(buf, theta, h, k1, k2);
  CHECK(max_abs(generic - dedicated) <= 1e-12 * (1.0 + max_abs(dedicated)));

  const Field bare = laws::entropy_action(theta, h, nullptr, nullptr);
  CHECK(max_abs(bare - divide(h, theta)) <= 1e-15 * (1.0 + max_abs(bare)));

  const Field cold = fill0(g, [](double, double) { return -1.0; });
  CHECK_THROWS_AS(laws::entropy_action(cold, h, nullptr, nullptr), std::domain_error);
}

TEST_CASE("virtual balance residuals: exact for defined heating, small for plates") {
  Grid g(32, kTwoPi);
  auto supply = [g](double t) {
    return fill0(g, [t](double x, double) { return 0.3 * std::sin(x + 0.1 * t); });
  };
  fourier::Model conductor({0.7, 1.3}, supply);
  fourier::State cs{fill0(g, [](double x, double) { return 1.0 + 0.2 * std::sin(x); }), 0.0};
  const double dtc = 0.4 * conductor.stable_dt(g);
  for (int i = 0; i < 5; ++i) cs = conductor.step(cs, dtc);
  const double exact = laws::virtual_balance_residual(conductor.decomposition(cs), g, 7, 20);
  CHECK(exact <= 1e-12);

  plate::Model bending({1.0, 1.3, 0.25, 0.5},
                       [g](double t) {
                         return fill0(g, [t](double x, double) {
                           return 0.2 + 0.1 * std::cos(x) * (1.0 + 0.5 * std::sin(t));
                         });
                       },
                       [g](double t) {
                         return fill0(g, [t](double x, double) {
                           return 0.05 * std::sin(2.0 * x + 0.1 * t);
                         });
                       });
  const plate::State ps{fill0(g, [](double x, double) { return 0.4 * std::sin(x) + 0.1 * std::cos(2.0 * x); }),
                        fill0(g, [](double x, double) { return 0.2 * std::cos(x); }), 0.6};
  const VirtualDecomposition pd = bending.decomposition(ps);
  const double truncated = laws::virtual_balance_residual(pd, g, 7, 20);
  CHECK(truncated <= 0.05);
  CHECK(truncated > 1e-9);  // honest truncation error, not a rigged zero

  CHECK_THROWS_AS(laws::mechanical_residual(pd, Field(g, 1)), std::invalid_argument);
  CHECK_THROWS_AS(laws::thermal_residual(pd, Field(g, 0)), std::invalid_argument);
  CHECK_THROWS_AS(laws::mechanical_residual(VirtualDecomposition{}, Field(g, 0)),
                  std::invalid_argument);
}

TEST_CASE("cycle reports serialize deterministically") {
  Grid g(32, kTwoPi);
  auto [model, s] = forced_conductor(g);
  const double period = kTwoPi;
  const double dt = period / 180;
  for (int i = 0; i < 5 * 180; ++i) s = model.step(s, dt);
  const laws::ProcessRecord r = record_fourier(model, s, dt, 180);
  const laws::CycleReport rep = laws::check_cycles(r, 1e-3, 1e-4);

  const std::string js = laws::to_json_string(rep);
  CHECK(js == laws::to_json_string(rep));
  const auto parsed = nlohmann::json::parse(js);
  CHECK(parsed.at("model") == "fourier");
  CHECK(parsed.at("pass") == true);
  REQUIRE(parsed.at("laws").size() == 3);
  CHECK(parsed.at("laws")[0].at("law") == "first_law");
  CHECK(parsed.at("laws")[2].at("applicable") == false);
  CHECK(parsed.at("integrals").contains("entropy_action"));

  const std::string text = laws::to_text(rep);
  CHECK(text.find("overall: PASS") != std::string::npos);
  CHECK(text.find("dissipation: not applicable") != std::string::npos);
  CHECK(text.find("second_law: value=") != std::string::npos);

  const std::string rec = laws::record_to_json_string(r, {{"kappa", 0.7}, {"c_heat", 1.3}});
  CHECK(rec == laws::record_to_json_string(r, {{"kappa", 0.7}, {"c_heat", 1.3}}));
  const auto prec = nlohmann::json::parse(rec);
  CHECK(prec.at("model") == "fourier");
  CHECK(prec.at("params").at("kappa") == 0.7);
  CHECK(prec.at("steps") == 180);
  CHECK(prec.at("channels").at("first_law_rate").size() == 180);
  CHECK(prec.at("channels").at("first_law_rate")[0].get<double>() ==
        r.channels.at("first_law_rate")[0]);
}
