#include "nlt/plate.hpp"

#include "nlt/cg.hpp"
#include "nlt/ops.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace nlt::plate {

namespace {

void check_state(const State& s) {
  if (s.u.rank() != 0 || s.v.rank() != 0 || s.u.grid() != s.v.grid())
    throw std::invalid_argument("plate: state needs scalar u and u' on one grid");
}

Field sample_source(const Source& src, const Grid& g, double t, const char* what) {
  if (!src) return Field(g, 0);
  Field f = src(t);
  if (f.rank() != 0 || f.grid() != g)
    throw std::invalid_argument(std::string("plate: ") + what +
                                " source must return a scalar field on the state grid");
  return f;
}

double state_scale(const State& s) {
  return std::max({max_abs(s.u), max_abs(s.v), 1.0});
}

[[noreturn]] void throw_blow_up(double t) {
  throw std::runtime_error("plate: blow-up detected at t = " + std::to_string(t) +
                           " (amplitude grew past 1e6 x initial scale); reduce dt");
}

double k_max(const Grid& g) {
  double k = 0.0;
  for (int a = 0; a < g.dims(); ++a) {
    const double h = g.spacing(a);
    k += 4.0 / (h * h);
  }
  return k;
}

}  // namespace

void Params::validate() const {
  if (!(rho > 0.0)) throw std::invalid_argument("plate: rho must be positive");
  if (!(a > 0.0)) throw std::invalid_argument("plate: a must be positive");
  if (!(b >= 0.0)) throw std::invalid_argument("plate: b must be non-negative");
  if (!std::isfinite(c_th)) throw std::invalid_argument("plate: c_th must be finite");
}

Model::Model(Params p, Source theta, Source f)
    : p_(p), theta_(std::move(theta)), f_(std::move(f)) {
  p_.validate();
}

Field Model::theta_at(const Grid& g, double t) const { return sample_source(theta_, g, t, "theta"); }
Field Model::f_at(const Grid& g, double t) const { return sample_source(f_, g, t, "force"); }

Field Model::accel(const Field& u, double t) const {
  if (u.rank() != 0) throw std::invalid_argument("plate: deflection must be rank 0");
  const Grid& g = u.grid();
  Field rhs = biharmonic(u) * (-p_.a);
  if (theta_) rhs += laplacian(theta_at(g, t)) * p_.c_th;
  if (f_) rhs += f_at(g, t) * p_.rho;
  if (p_.b == 0.0) return rhs * (1.0 / p_.rho);
  const double rho = p_.rho, b = p_.b;
  return conjugate_gradient(
      [rho, b](const Field& x) { return x * rho - laplacian(x) * b; }, rhs, Field(g, 0));
}

State Model::step(const State& s, double dt) {
  check_state(s);
  if (!(dt > 0.0)) throw std::invalid_argument("plate: dt must be positive");
  const double scale = state_scale(s);
  if (guard_scale_ == 0.0) guard_scale_ = scale;
  if (!(scale <= 1e6 * guard_scale_)) throw_blow_up(s.t);

  const Field k1u = s.v;
  const Field k1v = accel(s.u, s.t);
  const Field k2u = s.v + k1v * (0.5 * dt);
  const Field k2v = accel(s.u + k1u * (0.5 * dt), s.t + 0.5 * dt);
  const Field k3u = s.v + k2v * (0.5 * dt);
  const Field k3v = accel(s.u + k2u * (0.5 * dt), s.t + 0.5 * dt);
  const Field k4u = s.v + k3v * dt;
  const Field k4v = accel(s.u + k3u * dt, s.t + dt);

  State out{s.u, s.v, s.t + dt};
  out.u.axpy(dt / 6.0, k1u);
  out.u.axpy(dt / 3.0, k2u);
  out.u.axpy(dt / 3.0, k3u);
  out.u.axpy(dt / 6.0, k4u);
  out.v.axpy(dt / 6.0, k1v);
  out.v.axpy(dt / 3.0, k2v);
  out.v.axpy(dt / 3.0, k3v);
  out.v.axpy(dt / 6.0, k4v);
  if (!(state_scale(out) <= 1e6 * guard_scale_)) throw_blow_up(s.t);
  return out;
}

double Model::energy(const State& s) const {
  check_state(s);
  const Field lu = laplacian(s.u);
  return 0.5 * (p_.rho * volume_integral(inner(s.v, s.v)) -
                p_.b * volume_integral(inner(s.v, laplacian(s.v))) +
                p_.a * volume_integral(inner(lu, lu)));
}

PowerBreakdown Model::powers(const State& prev, const State& now, double dt) const {
  check_state(prev);
  check_state(now);
  if (!(dt > 0.0)) throw std::invalid_argument("plate: dt must be positive");
  const Grid& g = now.u.grid();
  const double a = p_.a, b = p_.b, c = p_.c_th;

  const Field udot = (now.u - prev.u) * (1.0 / dt);
  const Field lap_udot = laplacian(udot);
  const Field lun = laplacian(now.u), lup = laplacian(prev.u);
  const Field gvn = grad(now.v), gvp = grad(prev.v);
  const Field theta = theta_at(g, now.t);
  const Field f = f_at(g, now.t);

  Field internal = (inner(lun, lun) - inner(lup, lup)) * (0.5 * a / dt);
  internal += (inner(gvn, gvn) - inner(gvp, gvp)) * (0.5 * b / dt);
  const Field heating = multiply(theta, lap_udot) * c;
  internal -= heating;

  const Field acc = accel(now.u, now.t);
  Field traction = grad(lun) * (-a);
  traction += grad(theta) * c;
  traction += grad(acc) * b;
  const Field classical = inner(traction, grad(udot));

  const Field gud = grad(udot);
  const Field extra = multiply(theta * c - lun * a, gud);
  const Field n_printed = multiply(lun * (-a), gud);

  Field n_prime = multiply(udot, traction) * (-1.0);
  n_prime += extra;
  Field n_prime_printed = multiply(udot, traction) * (-1.0);
  n_prime_printed += multiply(theta - lun * a, gud);

  Field external = div(n_prime) * (-1.0);
  external += multiply(f, udot) * p_.rho;

  return PowerBreakdown{internal, external, extra,
                        {{"classical", classical},
                         {"heating", heating},
                         {"n_prime", n_prime},
                         {"n_printed", n_printed},
                         {"n_prime_printed", n_prime_printed}}};
}

VirtualDecomposition Model::decomposition(const State& s) const {
  check_state(s);
  const Grid& g = s.u.grid();
  VirtualDecomposition d;
  d.velocity_rank = 0;
  d.accel = accel(s.u, s.t) * p_.rho;
  Field t2 = grad(theta_at(g, s.t)) * p_.c_th;
  t2 += grad(*d.accel) * (p_.b / p_.rho);  // b grad(u''), accel holds rho u''
  d.t2 = t2;
  const Field lu = laplacian(s.u);
  Field t3(g, 2);
  for (int j = 0; j < g.dims(); ++j) {
    const int c = j * g.dims() + j;
    for (std::size_t i = 0; i < g.nodes(); ++i) t3.at(c, i) = p_.a * lu.at(0, i);
  }
  d.t3 = t3;
  d.body_force = f_at(g, s.t) * p_.rho;
  return d;
}

double Model::stable_dt(const Grid& g) const {
  const double k = k_max(g);
  const double omega = k * std::sqrt(p_.a / (p_.rho + p_.b * k));
  return 0.5 * 2.828 / omega;
}

LagBuffer::LagBuffer(const Grid& g, int m, double ds) : g_(g), m_(m), ds_(ds) {
  if (m < 1) throw std::invalid_argument("plate: history needs at least one past slot");
  if (!(ds > 0.0)) throw std::invalid_argument("plate: history step must be positive");
  slots_.reserve(m + 1);
  for (int j = 0; j <= m; ++j) slots_.push_back(Field(g_, 0));
}

const Field& LagBuffer::lag(int j) const {
  if (j < 0 || j > m_) throw std::out_of_range("plate: history slot out of range");
  return slots_[j];
}

void LagBuffer::push(const Field& f, double dt) {
  if (f.rank() != 0 || f.grid() != g_)
    throw std::invalid_argument("plate: pushed snapshot must be a scalar field on the history grid");
  if (!(dt > 0.0) || std::abs(dt - ds_) > 1e-12 * ds_)
    throw std::invalid_argument("plate: push step must equal the history spacing ds");
  for (int j = m_; j >= 1; --j) slots_[j] = std::move(slots_[j - 1]);
  slots_[0] = f;
}

void LagBuffer::fill(const Field& f) {
  if (f.rank() != 0 || f.grid() != g_)
    throw std::invalid_argument("plate: prehistory must be a scalar field on the history grid");
  for (int j = 0; j <= m_; ++j) slots_[j] = f;
}

void MemoryParams::validate() const {
  if (!(rho > 0.0)) throw std::invalid_argument("plate: rho must be positive");
  if (!(c0 > 0.0)) throw std::invalid_argument("plate: c0 must be positive");
  if (!(lambda > 0.0)) throw std::invalid_argument("plate: lambda must be positive");
  if (!std::isfinite(c1)) throw std::invalid_argument("plate: c1 must be finite");
  if (!std::isfinite(c_th)) throw std::invalid_argument("plate: c_th must be finite");
}

MemoryModel::MemoryModel(MemoryParams p, int slots, Source theta, Source f)
    : p_(p), slots_(slots), theta_(std::move(theta)), f_(std::move(f)) {
  p_.validate();
  if (slots_ < 1) throw std::invalid_argument("plate: history needs at least one past slot");
}

Field MemoryModel::theta_at(const Grid& g, double t) const {
  return sample_source(theta_, g, t, "theta");
}
Field MemoryModel::f_at(const Grid& g, double t) const { return sample_source(f_, g, t, "force"); }

Field MemoryModel::history_term() const {
  if (!history_) throw std::invalid_argument("plate: no history recorded yet");
  const LagBuffer& buf = *history_;
  Field j(buf.grid(), 0);
  const int m = buf.max_index();
  for (int k = 0; k <= m; ++k) {
    const double w = (k == 0 || k == m) ? 0.5 * buf.ds() : buf.ds();
    j.axpy(w * (-p_.c1 * p_.lambda * std::exp(-p_.lambda * buf.s(k))), buf.lag(k));
  }
  return j;
}

Field MemoryModel::accel(const Field& u, const Field& j, double t) const {
  if (u.rank() != 0 || j.rank() != 0 || u.grid() != j.grid())
    throw std::invalid_argument("plate: accel needs scalar u and history term on one grid");
  const Grid& g = u.grid();
  Field rhs = biharmonic(u) * (-p_.c0);
  rhs -= laplacian(j);
  if (theta_) rhs += laplacian(theta_at(g, t)) * p_.c_th;
  Field out = rhs * (1.0 / p_.rho);
  if (f_) out += f_at(g, t);
  return out;
}

State MemoryModel::step(const State& s, double dt) {
  check_state(s);
  if (!(dt > 0.0)) throw std::invalid_argument("plate: dt must be positive");
  if (!history_) {
    if (p_.c1 != 0.0 && slots_ * dt * p_.lambda < 5.0 - 1e-12)
      throw std::invalid_argument("plate: history horizon slots*dt must cover 5/lambda");
    history_.emplace(s.u.grid(), slots_, dt);
    history_->fill(laplacian(s.u));  // static prehistory
  }
  const double scale = state_scale(s);
  if (guard_scale_ == 0.0) guard_scale_ = scale;
  if (!(scale <= 1e6 * guard_scale_)) throw_blow_up(s.t);

  const Field j = history_term();  // frozen over the step
  const Field k1u = s.v;
  const Field k1v = accel(s.u, j, s.t);
  const Field k2u = s.v + k1v * (0.5 * dt);
  const Field k2v = accel(s.u + k1u * (0.5 * dt), j, s.t + 0.5 * dt);
  const Field k3u = s.v + k2v * (0.5 * dt);
  const Field k3v = accel(s.u + k2u * (0.5 * dt), j, s.t + 0.5 * dt);
  const Field k4u = s.v + k3v * dt;
  const Field k4v = accel(s.u + k3u * dt, j, s.t + dt);

  State out{s.u, s.v, s.t + dt};
  out.u.axpy(dt / 6.0, k1u);
  out.u.axpy(dt / 3.0, k2u);
  out.u.axpy(dt / 3.0, k3u);
  out.u.axpy(dt / 6.0, k4u);
  out.v.axpy(dt / 6.0, k1v);
  out.v.axpy(dt / 3.0, k2v);
  out.v.axpy(dt / 3.0, k3v);
  out.v.axpy(dt / 6.0, k4v);
  if (!(state_scale(out) <= 1e6 * guard_scale_)) throw_blow_up(s.t);
  history_->push(laplacian(out.u), dt);
  return out;
}

PowerBreakdown MemoryModel::powers(const State& prev, const State& now, double dt) const {
  check_state(prev);
  check_state(now);
  if (!(dt > 0.0)) throw std::invalid_argument("plate: dt must be positive");
  const Grid& g = now.u.grid();
  const double c = p_.c_th;

  const Field udot = (now.u - prev.u) * (1.0 / dt);
  const Field lap_udot = laplacian(udot);
  const Field lun = laplacian(now.u), lup = laplacian(prev.u);
  const Field theta = theta_at(g, now.t);
  const Field f = f_at(g, now.t);
  const Field j = history_term();
  const Field stress = lun * p_.c0 + j;

  Field internal = multiply(j - theta * c, lap_udot);
  internal += (inner(lun, lun) - inner(lup, lup)) * (0.5 * p_.c0 / dt);
  const Field heating = multiply(theta, lap_udot) * c;

  Field traction = grad(stress) * (-1.0);
  traction += grad(theta) * c;
  const Field classical = inner(traction, grad(udot));

  const Field extra = multiply(theta * c - stress, grad(udot));
  Field n_prime = multiply(udot, traction) * (-1.0);
  n_prime += extra;

  Field external = div(n_prime) * (-1.0);
  external += multiply(f, udot) * p_.rho;

  return PowerBreakdown{internal, external, extra,
                        {{"classical", classical}, {"heating", heating}, {"n_prime", n_prime}}};
}

double MemoryModel::stable_dt(const Grid& g) const {
  const double k = k_max(g);
  const double omega = k * std::sqrt((p_.c0 + std::abs(p_.c1)) / p_.rho);
  return 0.5 * 2.828 / omega;
}

}  // namespace nlt::plate
