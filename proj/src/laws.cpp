#include "nlt/laws.hpp"

#include "nlt/csv.hpp"
#include "nlt/ops.hpp"
#include "nlt/rng.hpp"

#include <json.hpp>

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace nlt::laws {

namespace {

const char* kFirstChannel = "first_law_rate";
const char* kSecondChannel = "entropy_action";
const char* kDissipationChannel = "dissipation";

double channel_scale(const std::vector<double>& series, double dt) {
  double s = 0.0;
  for (double v : series) s += std::abs(v) * dt;
  return s;
}

}  // namespace

int ProcessRecord::steps() const {
  if (!channels.empty()) return int(channels.begin()->second.size());
  return snapshots.empty() ? 0 : int(snapshots.size()) - 1;
}

void ProcessRecord::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw std::invalid_argument("laws: record needs a positive dt");
  if (snapshots.size() < 2)
    throw std::invalid_argument("laws: record needs snapshots at both endpoints");
  const std::size_t n = snapshots.size() - 1;
  for (const auto& [name, series] : channels)
    if (series.size() != n)
      throw std::invalid_argument("laws: channel '" + name +
                                  "' does not match the snapshot count");
  const auto& keys = snapshots.front();
  for (const auto& snap : snapshots) {
    if (snap.size() != keys.size())
      throw std::invalid_argument("laws: snapshots carry inconsistent keys");
    for (const auto& [key, field] : snap) {
      auto it = keys.find(key);
      if (it == keys.end())
        throw std::invalid_argument("laws: snapshots carry inconsistent keys");
      if (!field.same_shape(it->second))
        throw std::invalid_argument("laws: snapshot fields change shape");
    }
  }
}

ProcessRecord restrict_record(const ProcessRecord& r, int i0, int i1) {
  r.validate();
  if (i0 < 0 || i1 <= i0 || i1 > r.steps())
    throw std::invalid_argument("laws: restriction interval out of range");
  ProcessRecord out;
  out.model = r.model;
  out.dt = r.dt;
  out.t0 = r.t0 + i0 * r.dt;
  for (const auto& [name, series] : r.channels)
    out.channels[name] = std::vector<double>(series.begin() + i0, series.begin() + i1);
  out.snapshots.assign(r.snapshots.begin() + i0, r.snapshots.begin() + i1 + 1);
  return out;
}

ProcessRecord compose(const ProcessRecord& a, const ProcessRecord& b) {
  a.validate();
  b.validate();
  if (a.model != b.model)
    throw std::invalid_argument("laws: cannot compose records of different models");
  if (a.dt != b.dt)
    throw std::invalid_argument("laws: cannot compose records with different steps");
  if (std::abs(a.t_end() - b.t0) > 1e-9 * (std::abs(a.t_end()) + a.dt))
    throw std::invalid_argument("laws: records are not adjacent in time");
  const auto& junction = a.snapshots.back();
  const auto& start = b.snapshots.front();
  if (junction.size() != start.size())
    throw std::invalid_argument("laws: junction snapshots disagree");
  for (const auto& [key, field] : junction) {
    auto it = start.find(key);
    if (it == start.end() || sup_distance_rel(field, it->second) > 1e-12)
      throw std::invalid_argument("laws: junction snapshots disagree");
  }
  for (const auto& [name, series] : a.channels)
    if (!b.channels.count(name))
      throw std::invalid_argument("laws: records carry different channels");

  ProcessRecord out = a;
  for (auto& [name, series] : out.channels) {
    auto it = b.channels.find(name);
    if (it == b.channels.end())
      throw std::invalid_argument("laws: records carry different channels");
    series.insert(series.end(), it->second.begin(), it->second.end());
  }
  out.snapshots.insert(out.snapshots.end(), b.snapshots.begin() + 1, b.snapshots.end());
  return out;
}

double closure_error(const ProcessRecord& r) {
  r.validate();
  double worst = 0.0;
  const auto& first = r.snapshots.front();
  const auto& last = r.snapshots.back();
  for (const auto& [key, field] : first)
    worst = std::max(worst, sup_distance_rel(field, last.at(key)));
  return worst;
}

double cycle_integral(const ProcessRecord& r, const std::string& channel) {
  auto it = r.channels.find(channel);
  if (it == r.channels.end())
    throw std::invalid_argument("laws: record has no channel '" + channel + "'");
  double s = 0.0;
  for (double v : it->second) s += v;
  return s * r.dt;
}

std::vector<double> reconstruct_potential(const ProcessRecord& r,
                                          const std::string& channel, double anchor) {
  auto it = r.channels.find(channel);
  if (it == r.channels.end())
    throw std::invalid_argument("laws: record has no channel '" + channel + "'");
  std::vector<double> out(it->second.size() + 1);
  out[0] = anchor;
  for (std::size_t i = 0; i < it->second.size(); ++i)
    out[i + 1] = out[i] + it->second[i] * r.dt;
  return out;
}

bool CycleReport::all_pass() const {
  for (const auto& v : verdicts)
    if (!v.pass) return false;
  return true;
}

CycleReport check_cycles(const ProcessRecord& r, double closure_max, double rel_tol) {
  r.validate();
  const double closure = closure_error(r);
  if (closure > closure_max) {
    std::ostringstream msg;
    msg << "laws: closure defect " << closure << " exceeds " << closure_max
        << "; the cycle statements only bind on closed processes";
    throw std::invalid_argument(msg.str());
  }

  CycleReport rep;
  rep.model = r.model;
  rep.t0 = r.t0;
  rep.dt = r.dt;
  rep.duration = r.steps() * r.dt;
  rep.closure = closure;
  for (const auto& [name, series] : r.channels)
    rep.integrals[name] = cycle_integral(r, name);

  auto judge = [&](const char* law, const char* channel, int sense) {
    LawVerdict v;
    v.law = law;
    auto it = r.channels.find(channel);
    if (it == r.channels.end()) return v;  // not applicable, passes vacuously
    v.applicable = true;
    v.value = rep.integrals.at(channel);
    v.bound = (closure + rel_tol) * channel_scale(it->second, r.dt);
    if (sense == 0)
      v.pass = std::abs(v.value) <= v.bound;
    else if (sense < 0)
      v.pass = v.value <= v.bound;
    else
      v.pass = v.value >= -v.bound;
    return v;
  };
  rep.verdicts.push_back(judge("first_law", kFirstChannel, 0));
  rep.verdicts.push_back(judge("second_law", kSecondChannel, -1));
  rep.verdicts.push_back(judge("dissipation", kDissipationChannel, +1));
  return rep;
}

std::string to_json_string(const CycleReport& rep) {
  nlohmann::ordered_json j;
  j["model"] = rep.model;
  j["t0"] = rep.t0;
  j["dt"] = rep.dt;
  j["duration"] = rep.duration;
  j["closure"] = rep.closure;
  j["integrals"] = nlohmann::ordered_json::object();
  for (const auto& [name, value] : rep.integrals) j["integrals"][name] = value;
  j["laws"] = nlohmann::ordered_json::array();
  for (const auto& v : rep.verdicts) {
    nlohmann::ordered_json law;
    law["law"] = v.law;
    law["applicable"] = v.applicable;
    if (v.applicable) {
      law["value"] = v.value;
      law["bound"] = v.bound;
    }
    law["pass"] = v.pass;
    j["laws"].push_back(law);
  }
  j["pass"] = rep.all_pass();
  return j.dump(2) + "\n";
}

std::string record_to_json_string(const ProcessRecord& r,
                                  const std::map<std::string, double>& params) {
  r.validate();
  nlohmann::ordered_json j;
  j["model"] = r.model;
  j["params"] = nlohmann::ordered_json::object();
  for (const auto& [name, value] : params) j["params"][name] = value;
  j["t0"] = r.t0;
  j["dt"] = r.dt;
  j["steps"] = r.steps();
  j["channels"] = nlohmann::ordered_json::object();
  for (const auto& [name, series] : r.channels) j["channels"][name] = series;
  return j.dump(2) + "\n";
}

std::string to_text(const CycleReport& rep) {
  std::ostringstream out;
  out << "cycle report: model=" << rep.model << " t0=" << fmt_double(rep.t0)
      << " duration=" << fmt_double(rep.duration) << " dt=" << fmt_double(rep.dt) << "\n";
  out << "closure: " << fmt_double(rep.closure) << "\n";
  for (const auto& v : rep.verdicts) {
    if (!v.applicable) {
      out << v.law << ": not applicable\n";
      continue;
    }
    out << v.law << ": value=" << fmt_double(v.value) << " bound=" << fmt_double(v.bound)
        << (v.pass ? " PASS" : " FAIL") << "\n";
  }
  out << "overall: " << (rep.all_pass() ? "PASS" : "FAIL") << "\n";
  return out.str();
}

Field entropy_action(const Field& theta, const Field& h, const Field* q1,
                     const Field* q2) {
  if (theta.rank() != 0 || h.rank() != 0 || theta.grid() != h.grid())
    throw std::invalid_argument("laws: entropy action needs scalar theta and h on one grid");
  const Field w = map_scalar(theta, [](double v) {
    if (!(v > 0.0)) throw std::domain_error("laws: temperature must stay positive");
    return 1.0 / v;
  });
  Field a = multiply(w, h);
  if (q1) {
    if (q1->rank() != 1 || q1->grid() != theta.grid())
      throw std::invalid_argument("laws: q1 must be a rank-1 field on the same grid");
    a -= inner(*q1, grad(w));
  }
  if (q2) {
    if (q2->rank() != 2 || q2->grid() != theta.grid())
      throw std::invalid_argument("laws: q2 must be a rank-2 field on the same grid");
    a -= inner(*q2, grad2(w));
  }
  return a;
}

double mechanical_residual(const VirtualDecomposition& d, const Field& v) {
  if (!d.accel && !d.t2 && !d.t3 && !d.body_force)
    throw std::invalid_argument("laws: decomposition carries no mechanical terms");
  if (v.rank() != d.velocity_rank)
    throw std::invalid_argument("laws: test velocity has the wrong rank");
  double r = 0.0;
  if (d.accel) r += volume_integral(inner(*d.accel, v));
  if (d.t2) r += volume_integral(inner(*d.t2, grad(v)));
  if (d.t3) r += volume_integral(inner(*d.t3, grad2(v)));
  if (d.body_force) r -= volume_integral(inner(*d.body_force, v));
  return r;
}

double thermal_residual(const VirtualDecomposition& d, const Field& w) {
  if (!d.heating)
    throw std::invalid_argument("laws: decomposition carries no thermal terms");
  if (w.rank() != 0) throw std::invalid_argument("laws: test coldness must be rank 0");
  double r = volume_integral(inner(*d.heating, w));
  if (d.q1) r -= volume_integral(inner(*d.q1, grad(w)));
  if (d.q2) r -= volume_integral(inner(*d.q2, grad2(w)));
  if (d.supply) r -= volume_integral(inner(*d.supply, w));
  return r;
}

double virtual_balance_residual(const VirtualDecomposition& d, const Grid& g,
                                unsigned seed, int trials) {
  if (trials < 1) throw std::invalid_argument("laws: need at least one trial");
  Rng rng(seed);
  double worst = 0.0;
  for (int i = 0; i < trials; ++i) {
    if (d.heating) {
      Field bump = random_trig_field(rng, g, 0, 3, 5, 1.0);
      const double m = max_abs(bump);
      if (m > 0.0) bump *= 0.3 / m;
      const Field w = map_scalar(bump, [](double v) { return 1.0 / (1.0 + v); });
      double scale = 1e-30 + l1_norm(inner(*d.heating, w));
      if (d.q1) scale += l1_norm(inner(*d.q1, grad(w)));
      if (d.q2) scale += l1_norm(inner(*d.q2, grad2(w)));
      if (d.supply) scale += l1_norm(inner(*d.supply, w));
      worst = std::max(worst, std::abs(thermal_residual(d, w)) / scale);
    } else {
      const Field v = random_trig_field(rng, g, d.velocity_rank, 3, 5, 1.0);
      double scale = 1e-30;
      if (d.accel) scale += l1_norm(inner(*d.accel, v));
      if (d.t2) scale += l1_norm(inner(*d.t2, grad(v)));
      if (d.t3) scale += l1_norm(inner(*d.t3, grad2(v)));
      if (d.body_force) scale += l1_norm(inner(*d.body_force, v));
      worst = std::max(worst, std::abs(mechanical_residual(d, v)) / scale);
    }
  }
  return worst;
}

}  // namespace nlt::laws
