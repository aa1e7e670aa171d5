#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nlt/cg.hpp"
#include "nlt/ops.hpp"
#include "nlt/plate.hpp"
#include "test_util.hpp"

#include <cmath>
#include <vector>

using namespace nlt;
using nlt_test::fill;
using nlt_test::fill0;

namespace {
const double kTwoPi = 8.0 * std::atan(1.0);

// analytic bending trajectory used for state-pair identity checks
double traj_u(double x, double t) {
  return 0.4 * std::sin(x) * std::cos(t) + 0.1 * std::cos(2.0 * x) * std::sin(0.7 * t);
}
double traj_v(double x, double t) {
  return -0.4 * std::sin(x) * std::sin(t) + 0.07 * std::cos(2.0 * x) * std::cos(0.7 * t);
}

plate::State analytic_state(const Grid& g, double t) {
  return {fill0(g, [t](double x, double) { return traj_u(x, t); }),
          fill0(g, [t](double x, double) { return traj_v(x, t); }), t};
}

// analytic pieces needed to manufacture a body force that makes the
// trajectory above an exact solution of the motion equation
double traj_utt(double x, double t) {
  return -0.4 * std::sin(x) * std::cos(t) - 0.049 * std::cos(2.0 * x) * std::sin(0.7 * t);
}
double traj_lap2_u(double x, double t) {
  return 0.4 * std::sin(x) * std::cos(t) + 1.6 * std::cos(2.0 * x) * std::sin(0.7 * t);
}
double traj_lap_utt(double x, double t) {
  return 0.4 * std::sin(x) * std::cos(t) + 0.196 * std::cos(2.0 * x) * std::sin(0.7 * t);
}
double theta_fn(double x, double t) {
  return (0.2 + 0.1 * std::cos(x)) * (1.0 + 0.5 * std::sin(t));
}
double lap_theta_fn(double x, double t) {
  return -0.1 * std::cos(x) * (1.0 + 0.5 * std::sin(t));
}

plate::Source theta_source(const Grid& g) {
  return [g](double t) {
    return fill0(g, [t](double x, double) { return theta_fn(x, t); });
  };
}

// rho u'' = -a lap^2 u + b lap u'' + c_th lap theta + rho f, solved for f
plate::Source manufactured_force(const Grid& g, const plate::Params& p) {
  return [g, p](double t) {
    return fill0(g, [&p, t](double x, double) {
      return traj_utt(x, t) + (p.a * traj_lap2_u(x, t) - p.b * traj_lap_utt(x, t) -
                               p.c_th * lap_theta_fn(x, t)) / p.rho;
    });
  };
}

plate::Source force_source(const Grid& g) {
  return [g](double t) {
    return fill0(g, [t](double x, double) { return 0.05 * std::sin(2.0 * x + 0.1 * t); });
  };
}
}  // namespace

TEST_CASE("conjugate gradient solves the micro-inertia operator") {
  Grid g(32, kTwoPi);
  auto apply = [](const Field& x) { return x * 2.0 - laplacian(x) * 0.5; };
  const Field x_true = fill0(g, [](double x, double) { return std::sin(x) + 0.3 * std::cos(3.0 * x); });
  const Field b = apply(x_true);
  const Field x = conjugate_gradient(apply, b, Field(g, 0));
  CHECK(max_abs(x - x_true) <= 1e-8 * max_abs(x_true));

  CHECK(max_abs(conjugate_gradient(apply, Field(g, 0), Field(g, 0))) == 0.0);
  CHECK_THROWS_AS(conjugate_gradient([](const Field& f) { return f * -1.0; }, b, Field(g, 0)),
                  std::runtime_error);
  CHECK_THROWS_WITH_AS(conjugate_gradient(apply, b, Field(g, 0), 1e-10, 1),
                       doctest::Contains("no convergence"), std::runtime_error);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(plate::Model({0.0, 1.0, 0.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(plate::Model({1.0, 0.0, 0.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(plate::Model({1.0, 1.0, -0.1, 0.0}), std::invalid_argument);
  CHECK_NOTHROW(plate::Model({1.0, 1.0, 0.0, -0.3}));  // coupling sign is free

  CHECK_THROWS_AS(plate::MemoryModel({1.0, 0.0, 0.1, 1.0, 0.0}, 8), std::invalid_argument);
  CHECK_THROWS_AS(plate::MemoryModel({1.0, 1.0, 0.1, 0.0, 0.0}, 8), std::invalid_argument);
  CHECK_THROWS_AS(plate::MemoryModel({1.0, 1.0, 0.1, 1.0, 0.0}, 0), std::invalid_argument);
}

TEST_CASE("acceleration solve matches the assembled operator") {
  Grid g(48, kTwoPi);
  plate::Params p{1.3, 1.2, 0.0, 0.4};
  plate::Model model(p, theta_source(g), force_source(g));
  const Field u = fill0(g, [](double x, double) { return 0.4 * std::sin(x) + 0.1 * std::cos(2.0 * x); });

  // explicit path: u'' = (-a lap^2 u + c_th lap theta)/rho + f
  const Field acc0 = model.accel(u, 0.7);
  Field expect = laplacian(laplacian(u)) * (-p.a);
  expect += laplacian(theta_source(g)(0.7)) * p.c_th;
  expect *= 1.0 / p.rho;
  expect += force_source(g)(0.7);
  CHECK(max_abs(acc0 - expect) <= 1e-13 * max_abs(expect));

  // implicit path: (rho - b lap) u'' must reproduce the right-hand side
  p.b = 0.6;
  plate::Model micro(p, theta_source(g), force_source(g));
  const Field acc1 = micro.accel(u, 0.7);
  const Field lhs = acc1 * p.rho - laplacian(acc1) * p.b;
  Field rhs = laplacian(laplacian(u)) * (-p.a);
  rhs += laplacian(theta_source(g)(0.7)) * p.c_th;
  rhs += force_source(g)(0.7) * p.rho;
  CHECK(max_abs(lhs - rhs) <= 1e-8 * max_abs(rhs));
}

TEST_CASE("free motion conserves the discrete energy") {
  Grid g(48, kTwoPi);
  plate::Model model({1.0, 1.0, 0.5, 0.0});
  plate::State s{fill0(g, [](double x, double) { return 0.3 * std::sin(x) + 0.2 * std::cos(2.0 * x); }),
                 fill0(g, [](double x, double) { return 0.1 * std::cos(x); }), 0.0};
  const double e0 = model.energy(s);
  const double dt = 0.1 * model.stable_dt(g);
  for (int i = 0; i < 500; ++i) s = model.step(s, dt);
  CHECK(std::abs(model.energy(s) - e0) <= 1e-9 * e0);
}

TEST_CASE("single bending mode returns after one discrete period") {
  Grid g(48, kTwoPi);
  plate::Model model({1.0, 1.0, 0.0, 0.0});
  const int k = 3;
  const double h = g.spacing(0);
  const double k2 = 4.0 * std::pow(std::sin(0.5 * k * h), 2) / (h * h);
  const double omega = k2;  // sqrt(a/rho) = 1
  const double period = kTwoPi / omega;

  const double amp = 0.7;
  const Field mode = fill0(g, [k](double x, double) { return std::sin(k * x); });
  plate::State s{mode * amp, Field(g, 0), 0.0};
  const int steps = 400;
  for (int i = 0; i < steps; ++i) s = model.step(s, period / steps);
  CHECK(max_abs(s.u - mode * amp) <= 1e-6 * amp);
  CHECK(max_abs(s.v) <= 1e-6 * amp * omega);
}

TEST_CASE("micro-inertia shifts the dispersion relation as predicted") {
  Grid g(48, kTwoPi);
  plate::Params p{1.0, 1.0, 0.5, 0.0};
  plate::Model model(p);
  const int k = 2;
  const double h = g.spacing(0);
  const double k2 = 4.0 * std::pow(std::sin(0.5 * k * h), 2) / (h * h);
  const double omega = k2 * std::sqrt(p.a / (p.rho + p.b * k2));

  const Field mode = fill0(g, [k](double x, double) { return std::sin(k * x); });
  plate::State s{mode, Field(g, 0), 0.0};
  const double dt = 0.1 * model.stable_dt(g);
  const int steps = int(1.0 / dt);
  for (int i = 0; i < steps; ++i) s = model.step(s, dt);
  const double measured = volume_integral(multiply(s.u, mode)) * (2.0 / kTwoPi);
  CHECK(measured == doctest::Approx(std::cos(omega * steps * dt)).epsilon(1e-7));
}

TEST_CASE("power bookkeeping: transport form, balance, flux variants") {
  plate::Params p{1.1, 1.2, 0.3, 0.4};
  std::vector<double> form_gap, balance_gap;
  for (int n : {32, 64, 128}) {
    Grid g(n, kTwoPi);
    plate::Model model(p, theta_source(g), manufactured_force(g, p));
    const double h = g.spacing(0);
    const double dt = h * h;
    const plate::State prev = analytic_state(g, 0.8 - dt);
    const plate::State now = analytic_state(g, 0.8);
    const PowerBreakdown pb = model.powers(prev, now, dt);
    const Field udot = (now.u - prev.u) * (1.0 / dt);

    form_gap.push_back(max_abs(pb.internal - pb.terms.at("classical") + div(pb.extra_flux)));
    const Field acc = model.accel(now.u, now.t);
    balance_gap.push_back(
        max_abs(multiply(udot, acc) * p.rho + pb.internal - pb.external));

    if (n == 64) {
      // external form integrates to the body-force working alone
      const double fw = p.rho * volume_integral(multiply(model.f_at(g, now.t), udot));
      CHECK(std::abs(volume_integral(pb.external) - fw) <= 1e-12 * (1.0 + std::abs(fw)));

      // heating channel exactly undoes the thermal part of the internal power
      Field stored_rate = (inner(laplacian(now.u), laplacian(now.u)) -
                           inner(laplacian(prev.u), laplacian(prev.u))) * (0.5 * p.a / dt);
      stored_rate += (inner(grad(now.v), grad(now.v)) - inner(grad(prev.v), grad(prev.v))) *
                     (0.5 * p.b / dt);
      CHECK(max_abs(pb.internal + pb.terms.at("heating") - stored_rate) <=
            1e-12 * max_abs(stored_rate));

      // the printed flux variants drop / unscale the thermal term
      const Field gud = grad(udot);
      const Field theta = model.theta_at(g, now.t);
      CHECK(max_abs(pb.extra_flux - pb.terms.at("n_printed") -
                    multiply(theta * p.c_th, gud)) <= 1e-13 * max_abs(pb.extra_flux));
      CHECK(max_abs(pb.terms.at("n_prime_printed") - pb.terms.at("n_prime") -
                    multiply(theta * (1.0 - p.c_th), gud)) <= 1e-13 * (1.0 + max_abs(pb.terms.at("n_prime"))));
    }
  }
  CHECK(form_gap[0] / form_gap[1] == doctest::Approx(4.0).epsilon(0.35));
  CHECK(form_gap[1] / form_gap[2] == doctest::Approx(4.0).epsilon(0.35));
  CHECK(balance_gap[0] / balance_gap[1] == doctest::Approx(4.0).epsilon(0.35));
  CHECK(balance_gap[1] / balance_gap[2] == doctest::Approx(4.0).epsilon(0.35));
}

TEST_CASE("virtual-power snapshot balances any test velocity at second order") {
  plate::Params p{1.0, 1.3, 0.25, 0.5};
  std::vector<double> res;
  for (int n : {32, 64}) {
    Grid g(n, kTwoPi);
    plate::Model model(p, theta_source(g), force_source(g));
    const plate::State s = analytic_state(g, 0.6);
    const VirtualDecomposition d = model.decomposition(s);
    REQUIRE(d.accel.has_value());
    REQUIRE(d.t2.has_value());
    REQUIRE(d.t3.has_value());
    REQUIRE(d.body_force.has_value());
    CHECK_FALSE(d.heating.has_value());

    const Field vt = fill0(g, [](double x, double) { return std::sin(2.0 * x + 0.4) + 0.3 * std::cos(x); });
    const double r = volume_integral(inner(*d.accel, vt)) +
                     volume_integral(inner(*d.t2, grad(vt))) +
                     volume_integral(inner(*d.t3, grad2(vt))) -
                     volume_integral(inner(*d.body_force, vt));
    res.push_back(std::abs(r));
  }
  CHECK(res[0] / res[1] == doctest::Approx(4.0).epsilon(0.35));
}

TEST_CASE("memory stiffness with no relaxing part reproduces the elastic plate") {
  Grid g(32, kTwoPi);
  plate::Model elastic({1.0, 1.3, 0.0, 0.0});
  plate::MemoryModel memory({1.0, 1.3, 0.0, 2.0, 0.0}, 4);
  plate::State se{fill0(g, [](double x, double) { return 0.5 * std::sin(x) + 0.2 * std::cos(2.0 * x); }),
                  fill0(g, [](double x, double) { return 0.1 * std::cos(x); }), 0.0};
  plate::State sm = se;
  const double dt = 0.3 * elastic.stable_dt(g);
  for (int i = 0; i < 40; ++i) {
    se = elastic.step(se, dt);
    sm = memory.step(sm, dt);
  }
  CHECK(max_abs(se.u - sm.u) <= 1e-13 * max_abs(se.u));
  CHECK(max_abs(se.v - sm.v) <= 1e-13 * max_abs(se.v));
}

TEST_CASE("relaxing stiffness dissipates; a sign-flipped kernel pumps energy") {
  Grid g(32, kTwoPi);
  const plate::State s0{fill0(g, [](double x, double) { return 0.5 * std::sin(x); }),
                        Field(g, 0), 0.0};
  auto run = [&](double c1) {
    plate::MemoryParams p{1.0, 1.3, c1, 2.0, 0.0};
    const double dt = 0.5 * plate::MemoryModel(p, 8).stable_dt(g);
    const int slots = int(std::ceil(5.0 / (p.lambda * dt))) + 2;
    plate::MemoryModel sized(p, slots);
    auto energy = [&](const plate::State& s) {
      const Field lu = laplacian(s.u);
      return 0.5 * (p.rho * volume_integral(inner(s.v, s.v)) +
                    p.c0 * volume_integral(inner(lu, lu)));
    };
    plate::State s = s0;
    const double e0 = energy(s);
    for (int i = 0; i < 600; ++i) s = sized.step(s, dt);
    return std::pair<double, double>(energy(s) / e0, dt);
  };

  const auto [ratio_diss, dt] = run(0.4);
  CHECK(ratio_diss < 0.8);
  CHECK(ratio_diss > 0.01);
  const auto ratio_pump = run(-0.4).first;
  CHECK(ratio_pump > 1.2);
}

TEST_CASE("memory power identity converges and external working balances") {
  plate::MemoryParams p{1.0, 1.3, 0.4, 2.0, 0.0};
  const double span = 0.5;
  std::vector<double> gap;
  for (int n : {32, 64}) {
    Grid g(n, kTwoPi);
    const double dt0 = 0.5 * plate::MemoryModel(p, 8).stable_dt(g);
    const int steps = int(std::ceil(span / dt0));
    const double dt = span / steps;
    const int slots = int(std::ceil(5.0 / (p.lambda * dt))) + 2;
    plate::MemoryModel sized(p, slots);
    plate::State s{fill0(g, [](double x, double) { return 0.5 * std::sin(x) + 0.1 * std::cos(2.0 * x); }),
                   Field(g, 0), 0.0};
    CHECK_THROWS_AS(sized.history_term(), std::invalid_argument);
    plate::State prev = s;
    for (int i = 0; i < steps; ++i) {
      prev = s;
      s = sized.step(s, dt);
    }
    const PowerBreakdown pb = sized.powers(prev, s, dt);
    gap.push_back(max_abs(pb.internal - pb.terms.at("classical") + div(pb.extra_flux)));
    CHECK(std::abs(volume_integral(pb.external)) <= 1e-12 * (1.0 + max_abs(pb.external)));
  }
  CHECK(gap[0] / gap[1] == doctest::Approx(4.0).epsilon(0.5));
}

TEST_CASE("history buffer and blow-up guards") {
  Grid g(32, kTwoPi);
  plate::LagBuffer buf(g, 3, 0.1);
  const Field f = fill0(g, [](double x, double) { return std::sin(x); });
  CHECK_THROWS_AS(buf.push(f, 0.2), std::invalid_argument);
  buf.fill(f);
  buf.push(f * 2.0, 0.1);
  CHECK(max_abs(buf.lag(0) - f * 2.0) == 0.0);
  CHECK(max_abs(buf.lag(1) - f) == 0.0);

  // too-short history horizon is rejected once the kernel is active
  plate::MemoryModel short_mem({1.0, 1.0, 0.5, 1.0, 0.0}, 2);
  plate::State s{f * 0.1, Field(g, 0), 0.0};
  CHECK_THROWS_AS(short_mem.step(s, 0.01), std::invalid_argument);

  plate::Model model({1.0, 1.0, 0.0, 0.0});
  const double wild = 20.0 * model.stable_dt(g);
  plate::State runaway{f * 0.3, Field(g, 0), 0.0};
  CHECK_THROWS_WITH_AS(
      [&] {
        for (int i = 0; i < 50; ++i) runaway = model.step(runaway, wild);
      }(),
      doctest::Contains("blow-up"), std::runtime_error);
}
