#include "nlt/ch.hpp"

#include "nlt/ops.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace nlt::ch {

namespace {

double well_f(double beta, double c) { return beta * (0.25 * c * c * c * c - 0.5 * c * c); }
double well_g(double beta, double c) { return 0.5 * beta * c * c; }

void check_c(const Field& c) {
  if (c.rank() != 0) throw std::invalid_argument("ch: phase field must be rank 0");
  if (!(max_abs(c) <= 10.0))
    throw std::domain_error("ch: phase field amplitude out of range");
}

}  // namespace

void Params::validate() const {
  if (!(gamma > 0.0)) throw std::invalid_argument("ch: gamma must be positive");
  if (!(beta > 0.0)) throw std::invalid_argument("ch: beta must be positive");
  if (!(theta0 > 0.0)) throw std::invalid_argument("ch: theta0 must be positive");
  if (!(m0 > 0.0)) throw std::invalid_argument("ch: m0 must be positive");
  if (!(c_e > 0.0)) throw std::invalid_argument("ch: c_e must be positive");
}

Model::Model(Params p, double theta_const)
    : Model(std::move(p), ThetaSchedule([theta_const](double) { return theta_const; })) {}

Model::Model(Params p, ThetaSchedule theta) : p_(std::move(p)), theta_(std::move(theta)) {
  p_.validate();
  if (!theta_) throw std::invalid_argument("ch: a temperature schedule is required");
}

double Model::theta_at(double t) const {
  const double th = theta_(t);
  if (!(th > 0.0)) throw std::domain_error("ch: temperature schedule must stay positive");
  return th;
}

Field Model::mobility_field(const Field& c) const {
  check_c(c);
  const double m0 = p_.m0;
  if (p_.mobility == Mobility::kConstant)
    return map_scalar(c, [m0](double) { return m0; });
  return map_scalar(c, [m0](double v) { return std::max(0.0, m0 * (1.0 - v * v)); });
}

Field Model::chemical_potential(const Field& c, double theta) const {
  check_c(c);
  Field mu = laplacian(c) * (-p_.gamma);
  const double beta = p_.beta, theta0 = p_.theta0;
  mu += map_scalar(c, [=](double v) { return beta * (theta0 * (v * v * v - v) + theta * v); });
  return mu;
}

Field Model::rhs(const Field& c, double theta) const {
  return div(multiply(mobility_field(c), grad(chemical_potential(c, theta))));
}

State Model::step(const State& s, double dt) {
  check_c(s.c);  // a bad input state is the caller's problem
  if (!(dt > 0.0)) throw std::invalid_argument("ch: dt must be positive");
  const double th0 = theta_at(s.t);
  const double th1 = theta_at(s.t + 0.5 * dt);
  const double th2 = theta_at(s.t + dt);
  // An amplitude that leaves the admissible range mid-step on a valid input
  // state is an integration failure, not a caller error.
  try {
    const Field k1 = rhs(s.c, th0);
    const Field k2 = rhs(s.c + k1 * (0.5 * dt), th1);
    const Field k3 = rhs(s.c + k2 * (0.5 * dt), th1);
    const Field k4 = rhs(s.c + k3 * dt, th2);
    State out{s.c, s.t + dt};
    out.c.axpy(dt / 6.0, k1);
    out.c.axpy(dt / 3.0, k2);
    out.c.axpy(dt / 3.0, k3);
    out.c.axpy(dt / 6.0, k4);
    const double m = max_abs(out.c);
    if (!(m <= 10.0)) throw std::domain_error("ch: step output");
    if (m > 1.5) warned_ = true;
    return out;
  } catch (const std::domain_error&) {
    throw std::runtime_error("ch: blow-up detected at t = " + std::to_string(s.t) +
                             " (phase amplitude left |c| <= 10); reduce dt");
  }
}

double Model::mass(const Field& c) const {
  check_c(c);
  return volume_integral(c);
}

double Model::free_energy(const Field& c, double theta) const {
  check_c(c);
  const double beta = p_.beta, theta0 = p_.theta0;
  const double bulk = volume_integral(
      map_scalar(c, [=](double v) { return theta0 * well_f(beta, v) + theta * well_g(beta, v); }));
  return bulk - 0.5 * p_.gamma * volume_integral(inner(c, laplacian(c)));
}

double Model::dissipation(const Field& c, double theta) const {
  const Field gmu = grad(chemical_potential(c, theta));
  return volume_integral(multiply(mobility_field(c), inner(gmu, gmu)));
}

PowerBreakdown Model::powers(const State& prev, const State& now, double dt) const {
  if (!(dt > 0.0)) throw std::invalid_argument("ch: dt must be positive");
  if (!prev.c.same_shape(now.c)) throw std::invalid_argument("ch: states must share a grid");
  const double thn = theta_at(now.t), thp = theta_at(prev.t);
  const double beta = p_.beta;
  const Field cdot = (now.c - prev.c) * (1.0 / dt);
  const Field rate_f =
      (map_scalar(now.c, [beta](double v) { return well_f(beta, v); }) -
       map_scalar(prev.c, [beta](double v) { return well_f(beta, v); })) * (1.0 / dt);
  const Field rate_g =
      (map_scalar(now.c, [beta](double v) { return well_g(beta, v); }) -
       map_scalar(prev.c, [beta](double v) { return well_g(beta, v); })) * (1.0 / dt);
  // rate of the gradient energy density (gamma/2) |grad c|^2
  const Field gcn = grad(now.c), gcp = grad(prev.c);
  const Field rate_grad = (inner(gcn, gcn) - inner(gcp, gcp)) * (0.5 * p_.gamma / dt);

  const Field mu = chemical_potential(now.c, thn);
  const Field gmu = grad(mu);
  const Field mob = mobility_field(now.c);
  const Field diss = multiply(mob, inner(gmu, gmu));

  Field internal = rate_f * p_.theta0;
  internal.axpy(thn, rate_g);
  internal += rate_grad;
  internal += diss;

  const Field extra = multiply(cdot, gcn) * (-p_.gamma);

  Field dual = multiply(cdot, mu);
  dual += diss;
  dual -= div(extra);

  Field transport = multiply(cdot, gcn) * p_.gamma;
  transport += multiply(mu, multiply(mob, gmu));
  const Field external = div(transport);

  Field heating = map_scalar(now.c, [&](double) { return p_.c_e * (thn - thp) / dt; });
  heating.axpy(-thn, rate_g);
  heating -= diss;

  return PowerBreakdown{internal, external, extra,
                        {{"dual", dual}, {"heating", heating}}};
}

Field Model::heat_form_residual(const State& prev, const State& now, double dt,
                                const Field& q, const Field& r) const {
  if (q.rank() != 1 || r.rank() != 0 || q.grid() != now.c.grid() || r.grid() != now.c.grid())
    throw std::invalid_argument("ch: heat balance needs a vector flux and scalar supply on the grid");
  Field res = powers(prev, now, dt).terms.at("heating");
  res += div(q);
  res -= r;
  return res;
}

double Model::stable_dt(const Grid& g, double theta) const {
  if (!(theta > 0.0)) throw std::domain_error("ch: temperature must be positive");
  double k = 0.0;
  for (int a = 0; a < g.dims(); ++a) {
    const double h = g.spacing(a);
    k += 4.0 / (h * h);
  }
  const double sigma = p_.m0 * k * (p_.gamma * k + p_.beta * (2.0 * p_.theta0 + theta));
  return 0.5 * 2.785 / sigma;
}

}  // namespace nlt::ch
