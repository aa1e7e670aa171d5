#include "nlt/em.hpp"

#include "nlt/cg.hpp"
#include "nlt/ops.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nlt::em {

namespace {

void check_planar(const Grid& g) {
  if (g.dims() != 2) throw std::invalid_argument("em: planar model needs a 2D grid");
}

void check_state(const State& s) {
  if (s.e.rank() != 1 || s.h.rank() != 0 || s.e.grid() != s.h.grid())
    throw std::invalid_argument("em: state needs a rank-1 e and rank-0 h on one grid");
  check_planar(s.e.grid());
}

double state_scale(const State& s) {
  return std::max({max_abs(s.e), max_abs(s.h), 1.0});
}

[[noreturn]] void throw_blow_up(double t) {
  throw std::runtime_error("em: blow-up detected at t = " + std::to_string(t) +
                           " (amplitude grew past 1e6 x initial scale); reduce dt");
}

}  // namespace

void Params::validate() const {
  if (!(mu > 0.0) || !std::isfinite(mu))
    throw std::invalid_argument("em: mu must be positive");
  if (!(eps0 > 0.0) || !std::isfinite(eps0))
    throw std::invalid_argument("em: eps0 must be positive");
  if (!(eps1 >= 0.0) || !std::isfinite(eps1))
    throw std::invalid_argument("em: eps1 must be non-negative");
  if (!(eps2 >= 0.0) || !std::isfinite(eps2))
    throw std::invalid_argument("em: eps2 must be non-negative");
}

Field curl_vec(const Field& h) {
  if (h.rank() != 0) throw std::invalid_argument("em: curl_v needs a rank-0 field");
  check_planar(h.grid());
  const Field g = grad(h);
  Field out(h.grid(), 1);
  for (std::size_t i = 0; i < h.grid().nodes(); ++i) {
    out.at(0, i) = g.at(1, i);
    out.at(1, i) = -g.at(0, i);
  }
  return out;
}

Field curl_scal(const Field& e) {
  if (e.rank() != 1) throw std::invalid_argument("em: curl_s needs a rank-1 field");
  check_planar(e.grid());
  const Field g = grad(e);  // component j*2+i holds d_j e_i
  Field out(e.grid(), 0);
  for (std::size_t i = 0; i < e.grid().nodes(); ++i)
    out.at(0, i) = g.at(1, i) - g.at(2, i);
  return out;
}

Field poynting(const Field& e, const Field& h) {
  if (e.rank() != 1 || h.rank() != 0 || e.grid() != h.grid())
    throw std::invalid_argument("em: flux needs a rank-1 e and rank-0 h on one grid");
  check_planar(e.grid());
  Field out(e.grid(), 1);
  for (std::size_t i = 0; i < e.grid().nodes(); ++i) {
    out.at(0, i) = e.at(1, i) * h.at(0, i);
    out.at(1, i) = -e.at(0, i) * h.at(0, i);
  }
  return out;
}

Model::Model(Params p) : p_(p) { p_.validate(); }

Field Model::displacement(const Field& e) const {
  if (e.rank() != 1) throw std::invalid_argument("em: displacement needs a rank-1 field");
  check_planar(e.grid());
  Field out = e * p_.eps0;
  if (p_.eps1 != 0.0) out -= div(grad(e)) * p_.eps1;
  if (p_.eps2 != 0.0) out -= grad(div(e)) * p_.eps2;
  return out;
}

Field Model::invert_displacement(const Field& rhs) const {
  if (p_.eps1 == 0.0 && p_.eps2 == 0.0) return rhs * (1.0 / p_.eps0);
  Field x = conjugate_gradient([this](const Field& f) { return displacement(f); }, rhs,
                               warm_ && warm_->same_shape(rhs) ? *warm_ : Field(rhs.grid(), 1));
  warm_ = x;
  return x;
}

State Model::step(const State& s, double dt) const {
  check_state(s);
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw std::invalid_argument("em: dt must be positive and finite");
  const double scale = state_scale(s);
  if (guard_scale_ == 0.0) guard_scale_ = scale;
  if (!(scale <= 1e6 * guard_scale_)) throw_blow_up(s.t);

  auto e_rate = [this](const Field& h) { return invert_displacement(curl_vec(h)); };
  auto h_rate = [this](const Field& e) { return curl_scal(e) * (-1.0 / p_.mu); };

  const Field k1e = e_rate(s.h);
  const Field k1h = h_rate(s.e);
  Field e2 = s.e, h2 = s.h;
  e2.axpy(0.5 * dt, k1e);
  h2.axpy(0.5 * dt, k1h);
  const Field k2e = e_rate(h2);
  const Field k2h = h_rate(e2);
  Field e3 = s.e, h3 = s.h;
  e3.axpy(0.5 * dt, k2e);
  h3.axpy(0.5 * dt, k2h);
  const Field k3e = e_rate(h3);
  const Field k3h = h_rate(e3);
  Field e4 = s.e, h4 = s.h;
  e4.axpy(dt, k3e);
  h4.axpy(dt, k3h);
  const Field k4e = e_rate(h4);
  const Field k4h = h_rate(e4);

  State out{s.e, s.h, s.t + dt};
  const double w = dt / 6.0;
  out.e.axpy(w, k1e);
  out.e.axpy(2.0 * w, k2e);
  out.e.axpy(2.0 * w, k3e);
  out.e.axpy(w, k4e);
  out.h.axpy(w, k1h);
  out.h.axpy(2.0 * w, k2h);
  out.h.axpy(2.0 * w, k3h);
  out.h.axpy(w, k4h);
  if (!(state_scale(out) <= 1e6 * guard_scale_)) throw_blow_up(out.t);
  return out;
}

double Model::energy(const State& s) const {
  check_state(s);
  return 0.5 * (p_.mu * volume_integral(inner(s.h, s.h)) +
                volume_integral(inner(s.e, displacement(s.e))));
}

PowerBreakdown Model::powers(const State& prev, const State& now, double dt) const {
  check_state(prev);
  check_state(now);
  if (prev.e.grid() != now.e.grid())
    throw std::invalid_argument("em: snapshots live on different grids");
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw std::invalid_argument("em: dt must be positive and finite");
  const double idt = 1.0 / dt;

  const Field ge_n = grad(now.e), ge_p = grad(prev.e);
  const Field de_n = div(now.e), de_p = div(prev.e);
  Field internal = (inner(now.h, now.h) - inner(prev.h, prev.h)) * (0.5 * p_.mu * idt);
  internal += (inner(now.e, now.e) - inner(prev.e, prev.e)) * (0.5 * p_.eps0 * idt);
  internal += (inner(ge_n, ge_n) - inner(ge_p, ge_p)) * (0.5 * p_.eps1 * idt);
  internal += (inner(de_n, de_n) - inner(de_p, de_p)) * (0.5 * p_.eps2 * idt);

  const Field e_mid = (now.e + prev.e) * 0.5;
  const Field h_mid = (now.h + prev.h) * 0.5;
  Field classical = inner((displacement(now.e) - displacement(prev.e)) * idt, e_mid);
  classical += inner((now.h - prev.h) * (p_.mu * idt), h_mid);

  const Field e_dot = (now.e - prev.e) * idt;
  Field extra = contract_last(grad(e_dot), e_mid, 1) * (-p_.eps1);
  extra += multiply(div(e_dot), e_mid) * (-p_.eps2);

  return {internal, div(poynting(e_mid, h_mid)) * (-1.0), extra,
          {{"classical", classical}}};
}

double Model::stable_dt(const Grid& g) const {
  check_planar(g);
  double k = 0.0;
  for (int a = 0; a < g.dims(); ++a) k += 1.0 / (g.spacing(a) * g.spacing(a));
  return 0.5 * 2.828 * std::sqrt(p_.mu * (p_.eps0 + p_.eps1 * k) / k);
}

}  // namespace nlt::em
