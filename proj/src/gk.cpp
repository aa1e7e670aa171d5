#include "nlt/gk.hpp"

#include "nlt/ops.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nlt::gk {

void Params::validate() const {
  if (!(tau_r > 0.0)) throw std::invalid_argument("gk: tau_r must be positive");
  if (!(c0 > 0.0)) throw std::invalid_argument("gk: c0 must be positive");
  if (!(c_heat > 0.0)) throw std::invalid_argument("gk: c_heat must be positive");
  // tau_n may be any sign so falsification runs can exercise the detectors;
  // only tau_n > 0 is dissipative.
}

namespace {
void check_state(const State& s) {
  if (s.theta.rank() != 0 || s.q.rank() != 1)
    throw std::invalid_argument("gk: state needs rank-0 theta and rank-1 q");
  if (s.theta.grid() != s.q.grid()) throw std::invalid_argument("gk: state grid mismatch");
  if (!(min_value(s.theta) > 0.0))
    throw std::domain_error("gk: non-positive temperature sample");
}
}  // namespace

Rhs rhs(const State& s, const Params& p, const Field& r) {
  check_state(s);
  const double c0 = p.c0;
  Field dq = s.q * (-1.0 / p.tau_r);
  const Field coeff = map_scalar(s.theta, [c0](double th) { return c0 / (th * th); });
  dq -= multiply(coeff, grad(s.theta));
  if (p.tau_n != 0.0) {
    Field nl = laplacian(s.q);
    nl.axpy(2.0, grad(div(s.q)));
    dq.axpy(p.tau_n, nl);
  }
  Field dtheta = div(s.q) * (-1.0);
  dtheta += r;
  dtheta *= 1.0 / p.c_heat;
  return {std::move(dtheta), std::move(dq)};
}

Model::Model(Params p, Source r) : p_(std::move(p)), r_(std::move(r)) { p_.validate(); }

Field Model::source_at(const Grid& g, double t) const {
  if (!r_) return Field::zeros(g, 0);
  Field r = r_(t);
  if (r.rank() != 0 || r.grid() != g) throw std::invalid_argument("gk: bad source field");
  return r;
}

State Model::step(const State& s, double dt) const {
  check_state(s);
  const Grid& g = s.theta.grid();
  const double scale = std::max({max_abs(s.theta), max_abs(s.q), 1.0});
  if (guard_scale_ == 0.0) guard_scale_ = scale;
  if (scale > 1e6 * guard_scale_)
    throw std::runtime_error("gk: blow-up detected at t = " + std::to_string(s.t) +
                             " (amplitude " + std::to_string(scale) + ", initial " +
                             std::to_string(guard_scale_) + "); reduce dt");

  const Field r0 = source_at(g, s.t);
  const Field rh = source_at(g, s.t + 0.5 * dt);
  const Field r1 = source_at(g, s.t + dt);

  // A temperature that leaves the positive domain mid-step on a valid input
  // state is an integration failure, not a caller error.
  try {
    const Rhs k1 = rhs(s, p_, r0);
    State s2{s.theta + 0.5 * dt * k1.dtheta, s.q + 0.5 * dt * k1.dq, s.t + 0.5 * dt};
    const Rhs k2 = rhs(s2, p_, rh);
    State s3{s.theta + 0.5 * dt * k2.dtheta, s.q + 0.5 * dt * k2.dq, s.t + 0.5 * dt};
    const Rhs k3 = rhs(s3, p_, rh);
    State s4{s.theta + dt * k3.dtheta, s.q + dt * k3.dq, s.t + dt};
    const Rhs k4 = rhs(s4, p_, r1);

    State out{s.theta, s.q, s.t + dt};
    out.theta.axpy(dt / 6.0, k1.dtheta);
    out.theta.axpy(dt / 3.0, k2.dtheta);
    out.theta.axpy(dt / 3.0, k3.dtheta);
    out.theta.axpy(dt / 6.0, k4.dtheta);
    out.q.axpy(dt / 6.0, k1.dq);
    out.q.axpy(dt / 3.0, k2.dq);
    out.q.axpy(dt / 3.0, k3.dq);
    out.q.axpy(dt / 6.0, k4.dq);
    if (!(min_value(out.theta) > 0.0)) throw std::domain_error("gk: step output");
    return out;
  } catch (const std::domain_error&) {
    throw std::runtime_error("gk: blow-up detected at t = " + std::to_string(s.t) +
                             " (temperature left the positive domain); reduce dt");
  }
}

PowerBreakdown Model::entropy_actions(const State& prev, const State& now, double dt) const {
  check_state(prev);
  check_state(now);
  const Grid& g = now.theta.grid();
  const Field inv_th = map_scalar(now.theta, [](double th) { return 1.0 / th; });

  const Field q2_now = inner(now.q, now.q);
  const Field q2_prev = inner(prev.q, prev.q);
  const Field gq = grad(now.q);
  const Field dq = div(now.q);

  // internal action
  Field de = (now.theta - prev.theta) * (p_.c_heat / dt);  // de/dt, e = c_heat th
  Field internal = multiply(inv_th, de);
  internal.axpy(-0.5 / (p_.c0 * dt), q2_now - q2_prev);
  internal.axpy(-1.0 / (p_.c0 * p_.tau_r), q2_now);
  Field w = inner(gq, gq);
  w.axpy(2.0, inner(dq, dq));
  internal.axpy(-p_.tau_n / p_.c0, w);

  // extra entropy flux (grad q) q + 2 (div q) q, scaled
  Field flux = contract_last(gq, now.q, 1);
  flux.axpy(2.0, multiply(dq, now.q));
  flux *= p_.tau_n / p_.c0;

  // external action
  const Field r = source_at(g, now.t);
  Field external = div(multiply(inv_th, now.q)) * (-1.0);
  external += multiply(inv_th, r);
  external -= div(flux);

  // classical simple-material form h/th + q.grad(th)/th^2 with rho h = de/dt
  Field classical = multiply(inv_th, de);
  classical += multiply(map_scalar(now.theta, [](double th) { return 1.0 / (th * th); }),
                        inner(now.q, grad(now.theta)));

  PowerBreakdown out{std::move(internal), std::move(external), std::move(flux), {}};
  out.terms.emplace("classical", std::move(classical));
  out.terms.emplace("heating", std::move(de));
  return out;
}

Field Model::second_law_residual(const State& prev, const State& now, double dt) const {
  const PowerBreakdown pb = entropy_actions(prev, now, dt);
  const Field q2_now = inner(now.q, now.q);
  const Field q2_prev = inner(prev.q, prev.q);
  Field eta_now = map_scalar(now.theta, [this](double th) { return p_.c_heat * std::log(th); });
  eta_now.axpy(-0.5 / p_.c0, q2_now);
  Field eta_prev = map_scalar(prev.theta, [this](double th) { return p_.c_heat * std::log(th); });
  eta_prev.axpy(-0.5 / p_.c0, q2_prev);
  Field residual = (eta_now - eta_prev) * (1.0 / dt);
  residual -= pb.internal;
  return residual;
}

VirtualDecomposition Model::decomposition(const State& prev, const State& now, double dt) const {
  check_state(now);
  VirtualDecomposition d;
  d.heating = (now.theta - prev.theta) * (p_.c_heat / dt);
  d.q1 = now.q;
  d.supply = source_at(now.theta.grid(), now.t);
  return d;
}

double Model::energy(const State& s) const { return p_.c_heat * volume_integral(s.theta); }

double Model::entropy(const State& s) const {
  Field eta = map_scalar(s.theta, [this](double th) { return p_.c_heat * std::log(th); });
  eta.axpy(-0.5 / p_.c0, inner(s.q, s.q));
  return volume_integral(eta);
}

double Model::stable_dt(const Grid& g, double theta_min) const {
  double h = g.spacing(0);
  for (int a = 1; a < g.dims(); ++a) h = std::min(h, g.spacing(a));
  double dt = p_.tau_r;
  if (p_.tau_n != 0.0) dt = std::min(dt, h * h / (6.0 * std::abs(p_.tau_n)));
  dt = std::min(dt, p_.c_heat * theta_min * theta_min * h * h / p_.c0);
  return 0.5 * dt;
}

}  // namespace nlt::gk
