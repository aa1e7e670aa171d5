#include "nlt/fourier.hpp"

#include "nlt/ops.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nlt::fourier {

namespace {

void check_state(const State& s) {
  if (s.theta.rank() != 0)
    throw std::invalid_argument("fourier: state needs a rank-0 temperature");
  if (!(min_value(s.theta) > 0.0))
    throw std::invalid_argument("fourier: temperature must be positive");
}

Field coldness(const Field& theta) {
  return map_scalar(theta, [](double v) {
    if (!(v > 0.0)) throw std::domain_error("fourier: temperature left the positive domain");
    return 1.0 / v;
  });
}

}  // namespace

void Params::validate() const {
  if (!(kappa > 0.0) || !std::isfinite(kappa))
    throw std::invalid_argument("fourier: kappa must be positive");
  if (!(c_heat > 0.0) || !std::isfinite(c_heat))
    throw std::invalid_argument("fourier: c_heat must be positive");
}

Model::Model(Params p, Source r) : p_(p), r_(std::move(r)) { p_.validate(); }

Field Model::source_at(const Grid& g, double t) const {
  if (!r_) return Field(g, 0);
  Field f = r_(t);
  if (f.rank() != 0 || f.grid() != g)
    throw std::invalid_argument("fourier: supply must return a scalar field on the state grid");
  return f;
}

Field Model::flux(const Field& theta) const {
  if (theta.rank() != 0) throw std::invalid_argument("fourier: flux needs a rank-0 field");
  return grad(theta) * -p_.kappa;
}

Field Model::heating(const State& s) const {
  check_state(s);
  Field h = div(flux(s.theta)) * -1.0;
  h += source_at(s.theta.grid(), s.t);
  return h;
}

State Model::step(const State& s, double dt) const {
  check_state(s);
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw std::invalid_argument("fourier: dt must be positive and finite");
  const Grid& g = s.theta.grid();
  const double scale = std::max(max_abs(s.theta), 1.0);
  if (guard_scale_ == 0.0) guard_scale_ = scale;
  if (scale > 1e6 * guard_scale_)
    throw std::runtime_error("fourier: blow-up detected at t = " + std::to_string(s.t) +
                             " (amplitude grew past 1e6 x initial scale); reduce dt");

  const double ic = 1.0 / p_.c_heat;
  auto rate = [&](const Field& theta, double t) {
    Field d = div(flux(theta)) * -ic;
    d += source_at(g, t) * ic;
    return d;
  };

  const Field k1 = rate(s.theta, s.t);
  Field th2 = s.theta;
  th2.axpy(0.5 * dt, k1);
  const Field k2 = rate(th2, s.t + 0.5 * dt);
  Field th3 = s.theta;
  th3.axpy(0.5 * dt, k2);
  const Field k3 = rate(th3, s.t + 0.5 * dt);
  Field th4 = s.theta;
  th4.axpy(dt, k3);
  const Field k4 = rate(th4, s.t + dt);

  State out{s.theta, s.t + dt};
  out.theta.axpy(dt / 6.0, k1);
  out.theta.axpy(dt / 3.0, k2);
  out.theta.axpy(dt / 3.0, k3);
  out.theta.axpy(dt / 6.0, k4);
  if (!(min_value(out.theta) > 0.0))
    throw std::runtime_error("fourier: blow-up detected at t = " + std::to_string(s.t) +
                             " (temperature left the positive domain); reduce dt");
  return out;
}

PowerBreakdown Model::entropy_actions(const State& prev, const State& now, double dt) const {
  check_state(prev);
  check_state(now);
  if (prev.theta.grid() != now.theta.grid())
    throw std::invalid_argument("fourier: snapshots live on different grids");
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw std::invalid_argument("fourier: dt must be positive and finite");

  const Field w = coldness(now.theta);
  const Field gth = grad(now.theta);
  const Field q = flux(now.theta);
  const Field w2 = multiply(w, w);

  Field internal = multiply(w, now.theta - prev.theta) * (p_.c_heat / dt);
  internal -= multiply(w2, inner(gth, gth)) * p_.kappa;

  Field external = div(multiply(w, q)) * -1.0;
  external += multiply(w, source_at(now.theta.grid(), now.t));

  Field classical = multiply(w, heating(now));
  classical += multiply(w2, inner(q, gth));

  return {internal, external, Field(now.theta.grid(), 1), {{"classical", classical}}};
}

Field Model::second_law_residual(const State& prev, const State& now, double dt) const {
  const PowerBreakdown pb = entropy_actions(prev, now, dt);
  Field deta = map_scalar(now.theta, [](double v) { return std::log(v); });
  deta -= map_scalar(prev.theta, [](double v) { return std::log(v); });
  deta *= p_.c_heat / dt;
  return deta - pb.internal;
}

VirtualDecomposition Model::decomposition(const State& s) const {
  check_state(s);
  VirtualDecomposition d;
  d.heating = heating(s);
  d.q1 = flux(s.theta);
  d.supply = source_at(s.theta.grid(), s.t);
  return d;
}

double Model::energy(const State& s) const {
  check_state(s);
  return p_.c_heat * volume_integral(s.theta);
}

double Model::entropy(const State& s) const {
  check_state(s);
  return p_.c_heat *
         volume_integral(map_scalar(s.theta, [](double v) { return std::log(v); }));
}

double Model::stable_dt(const Grid& g) const {
  double k = 0.0;
  for (int a = 0; a < g.dims(); ++a) k += 1.0 / (g.spacing(a) * g.spacing(a));
  return 0.5 * 2.785 * p_.c_heat / (p_.kappa * k);
}

}  // namespace nlt::fourier
