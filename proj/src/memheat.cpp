#include "nlt/memheat.hpp"

#include "nlt/ops.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nlt::memheat {

double Kernel::prime(double s) const { return amplitude * std::exp(-lambda * s); }

double Kernel::moment(int p, double horizon) const {
  const double z = lambda * horizon;
  const double e = std::exp(-z);
  switch (p) {
    case 0: return amplitude * (1.0 - e) / lambda;
    case 1: return amplitude * (1.0 - e * (1.0 + z)) / (lambda * lambda);
    case 2: return amplitude * (2.0 - e * (2.0 + z * (2.0 + z))) / (lambda * lambda * lambda);
    default: throw std::invalid_argument("memheat: kernel moment order must be 0, 1 or 2");
  }
}

void Kernel::validate() const {
  if (!(lambda > 0.0)) throw std::invalid_argument("memheat: kernel lambda must be positive");
  if (!std::isfinite(amplitude)) throw std::invalid_argument("memheat: kernel amplitude must be finite");
}

HistoryBuffer::HistoryBuffer(const Grid& g, int m, double ds) : g_(g), m_(m), ds_(ds) {
  if (m < 1) throw std::invalid_argument("memheat: history needs at least one past slot");
  if (!(ds > 0.0)) throw std::invalid_argument("memheat: history step must be positive");
  gbar_.reserve(m + 1);
  grad_.reserve(m + 1);
  for (int j = 0; j <= m; ++j) {
    gbar_.push_back(Field(g_, 1));
    grad_.push_back(Field(g_, 2));
  }
}

const Field& HistoryBuffer::gbar(int j) const {
  if (j < 0 || j > m_) throw std::out_of_range("memheat: history slot out of range");
  return gbar_[j];
}

const Field& HistoryBuffer::grad_gbar(int j) const {
  if (j < 0 || j > m_) throw std::out_of_range("memheat: history slot out of range");
  return grad_[j];
}

void HistoryBuffer::push(const Field& g_now, double dt) {
  if (g_now.rank() != 1 || g_now.grid() != g_)
    throw std::invalid_argument("memheat: pushed sample must be a vector field on the history grid");
  if (!(dt > 0.0) || std::abs(dt - ds_) > 1e-12 * ds_)
    throw std::invalid_argument("memheat: push step must equal the history spacing ds");
  const Field gg = grad(g_now);
  for (int j = m_; j >= 1; --j) {
    gbar_[j] = std::move(gbar_[j - 1]);
    grad_[j] = std::move(grad_[j - 1]);
    gbar_[j].axpy(dt, g_now);
    grad_[j].axpy(dt, gg);
  }
  gbar_[0] = Field(g_, 1);
  grad_[0] = Field(g_, 2);
}

void HistoryBuffer::set_slot(int j, const Field& gbar_j) {
  if (j < 1 || j > m_) throw std::out_of_range("memheat: slot 0 is pinned to zero");
  if (gbar_j.rank() != 1 || gbar_j.grid() != g_)
    throw std::invalid_argument("memheat: slot value must be a vector field on the history grid");
  gbar_[j] = gbar_j;
  grad_[j] = grad(gbar_j);
}

namespace {

double weight(int j, int m, double ds) { return (j == 0 || j == m) ? 0.5 * ds : ds; }

void check_theta(const Field& theta, const Grid& g) {
  if (theta.rank() != 0 || theta.grid() != g)
    throw std::invalid_argument("memheat: theta must be a scalar field on the history grid");
  if (!(min_value(theta) > 0.0))
    throw std::domain_error("memheat: temperature must be positive");
}

}  // namespace

void validate_horizon(const HistoryBuffer& buf, const Kernel& k) {
  k.validate();
  if (buf.horizon() * k.lambda < 5.0 - 1e-12)
    throw std::invalid_argument("memheat: history horizon m*ds must cover 5/lambda; got " +
                                std::to_string(buf.horizon()) + " for lambda " +
                                std::to_string(k.lambda));
}

Field moment1(const HistoryBuffer& buf, const Kernel& k1) {
  k1.validate();
  const int m = buf.max_index();
  Field out(buf.grid(), 1);
  for (int j = 1; j <= m; ++j)
    out.axpy(weight(j, m, buf.ds()) * k1.prime(buf.s(j)), buf.gbar(j));
  return out;
}

Field moment2(const HistoryBuffer& buf, const Kernel& k2) {
  k2.validate();
  const int m = buf.max_index();
  Field out(buf.grid(), 2);
  for (int j = 1; j <= m; ++j)
    out.axpy(weight(j, m, buf.ds()) * k2.prime(buf.s(j)), buf.grad_gbar(j));
  return out;
}

Field flux_q1(const HistoryBuffer& buf, const Field& theta, const Kernel& k1) {
  check_theta(theta, buf.grid());
  Field m1 = moment1(buf, k1);
  for (int c = 0; c < m1.comps(); ++c)
    for (std::size_t i = 0; i < m1.nodes(); ++i) m1.at(c, i) *= -theta.at(0, i);
  return m1;
}

Field flux_q2(const HistoryBuffer& buf, const Field& theta, const Kernel& k2) {
  check_theta(theta, buf.grid());
  Field m2 = moment2(buf, k2);
  for (int c = 0; c < m2.comps(); ++c)
    for (std::size_t i = 0; i < m2.nodes(); ++i) m2.at(c, i) *= -theta.at(0, i);
  return m2;
}

Field memory_flux(const HistoryBuffer& buf, const Field& theta, const Kernel& k1,
                  const Kernel& k2) {
  Field q = flux_q1(buf, theta, k1);
  q -= div(flux_q2(buf, theta, k2));
  return q;
}

Field entropy_action(const HistoryBuffer& buf, const Field& theta, const Field& h,
                     const Kernel& k1, const Kernel& k2) {
  check_theta(theta, buf.grid());
  if (h.rank() != 0 || h.grid() != buf.grid())
    throw std::invalid_argument("memheat: heating must be a scalar field on the history grid");
  const Field w = map_scalar(theta, [](double th) { return 1.0 / th; });
  Field a = multiply(h, w);
  a -= inner(flux_q1(buf, theta, k1), grad(w));
  a -= inner(flux_q2(buf, theta, k2), grad2(w));
  return a;
}

Field entropy_action_expanded(const HistoryBuffer& buf, const Field& theta,
                              const Field& h, const Kernel& k1, const Kernel& k2) {
  check_theta(theta, buf.grid());
  if (h.rank() != 0 || h.grid() != buf.grid())
    throw std::invalid_argument("memheat: heating must be a scalar field on the history grid");
  const Field m1 = moment1(buf, k1);
  const Field m2 = moment2(buf, k2);
  const Field gth = grad(theta);
  Field bracket = h;
  bracket -= inner(m1, gth);
  bracket -= inner(m2, grad2(theta));
  Field a = multiply(bracket, map_scalar(theta, [](double th) { return 1.0 / th; }));
  a += multiply(inner(contract_last(m2, gth, 1), gth),
                map_scalar(theta, [](double th) { return 2.0 / (th * th); }));
  return a;
}

Field psi2(const HistoryBuffer& buf, const Kernel& k1, const Kernel& k2) {
  k1.validate();
  k2.validate();
  const int m = buf.max_index();
  Field out(buf.grid(), 0);
  for (int j = 1; j <= m; ++j) {
    const double w = 0.5 * weight(j, m, buf.ds());
    out.axpy(w * k1.prime(buf.s(j)), inner(buf.gbar(j), buf.gbar(j)));
    out.axpy(w * k2.prime(buf.s(j)), inner(buf.grad_gbar(j), buf.grad_gbar(j)));
  }
  return out;
}

double psi2_rate_residual(const HistoryBuffer& prev, const HistoryBuffer& now,
                          const Field& theta, const Kernel& k1, const Kernel& k2,
                          double dt) {
  if (prev.grid() != now.grid() || prev.max_index() != now.max_index())
    throw std::invalid_argument("memheat: rate residual needs matching history buffers");
  if (!(dt > 0.0)) throw std::invalid_argument("memheat: rate residual needs a positive dt");
  check_theta(theta, now.grid());
  const double lhs =
      (volume_integral(psi2(now, k1, k2)) - volume_integral(psi2(prev, k1, k2))) / dt;
  const Field m1 = moment1(now, k1);
  const Field m2 = moment2(now, k2);
  const Field gth = grad(theta);
  Field rhs = inner(m1, gth);
  rhs += inner(m2, grad2(theta));
  rhs -= multiply(inner(contract_last(m2, gth, 1), gth),
                  map_scalar(theta, [](double th) { return 2.0 / th; }));
  return lhs - volume_integral(rhs);
}

}  // namespace nlt::memheat
