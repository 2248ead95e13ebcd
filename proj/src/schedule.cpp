#include "qhd/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "qhd/errors.hpp"

namespace qhd {

double Schedule::progress(double t) const {
  if (knots.empty()) throw InvalidArgument("schedule has no knots");
  if (t <= knots.front().t) return knots.front().s;
  if (t >= knots.back().t) return knots.back().s;
  auto it = std::upper_bound(knots.begin(), knots.end(), t, [](double v, const Knot& k) { return v < k.t; });
  const Knot& hi = *it;
  const Knot& lo = *(it - 1);
  if (t == lo.t) return lo.s;
  return lo.s + (hi.s - lo.s) * (t - lo.t) / (hi.t - lo.t);
}

Schedule two_param_schedule(std::string name, ScalarFn e_phi, ScalarFn e_chi) {
  Schedule s;
  s.kind = ScheduleKind::two_param;
  s.name = std::move(name);
  s.e_phi = std::move(e_phi);
  s.e_chi = std::move(e_chi);
  return s;
}

static double central_diff(const ScalarFn& f, double t) {
  const double h = t != 0.0 ? 1e-6 * std::abs(t) : 1e-6;
  return (f(t + h) - f(t - h)) / (2.0 * h);
}

Schedule three_param_schedule(std::string name, ScalarFn alpha, ScalarFn beta, ScalarFn gamma,
                              double t_lo, double t_hi, int samples) {
  if (!(t_lo < t_hi) || samples < 2) throw InvalidArgument("bad validation interval");
  // margin keeps the difference stencil inside the interval
  const double lo = t_lo * (1.0 + 1e-4) + 1e-12, hi = t_hi * (1.0 - 1e-4);
  for (int i = 0; i < samples; ++i) {
    const double t = lo + (hi - lo) * i / (samples - 1);
    const double ea = std::exp(alpha(t));
    const double tol = 1e-6 * std::max(1.0, ea);
    const double gdot = central_diff(gamma, t);
    const double bdot = central_diff(beta, t);
    if (std::abs(gdot - ea) > tol) {
      std::ostringstream msg;
      msg << "ideal scaling violated: d gamma/dt != e^alpha at t=" << t;
      throw ValidationError(msg.str(), t);
    }
    if (bdot > ea + tol) {
      std::ostringstream msg;
      msg << "ideal scaling violated: d beta/dt > e^alpha at t=" << t;
      throw ValidationError(msg.str(), t);
    }
  }
  Schedule s;
  s.kind = ScheduleKind::three_param;
  s.name = std::move(name);
  s.e_phi = [alpha, gamma](double t) { return std::exp(alpha(t) - gamma(t)); };
  s.e_chi = [alpha, beta, gamma](double t) { return std::exp(alpha(t) + beta(t) + gamma(t)); };
  s.alpha = std::move(alpha);
  s.beta = std::move(beta);
  s.gamma = std::move(gamma);
  return s;
}

Schedule piecewise_schedule(std::string name, std::vector<Knot> knots, ScalarFn envelope_a,
                            ScalarFn envelope_b) {
  if (knots.size() < 2) throw InvalidArgument("need at least two knots");
  if (knots.front().s != 0.0 || knots.back().s != 1.0)
    throw InvalidArgument("knots must start at s=0 and end at s=1");
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (!(knots[i].t > knots[i - 1].t)) throw InvalidArgument("knot times must be strictly increasing");
    if (knots[i].s < knots[i - 1].s) throw InvalidArgument("knot values must be non-decreasing");
  }
  Schedule s;
  s.kind = ScheduleKind::piecewise_anneal;
  s.name = std::move(name);
  s.knots = std::move(knots);
  s.envelope_a = std::move(envelope_a);
  s.envelope_b = std::move(envelope_b);
  // the closures copy the knot list so the schedule stays valid after copies
  auto ks = s.knots;
  auto prog = [ks](double t) {
    Schedule tmp;
    tmp.knots = ks;
    return tmp.progress(t);
  };
  auto a = s.envelope_a;
  auto b = s.envelope_b;
  s.e_phi = [a, prog](double t) { return a(prog(t)); };
  s.e_chi = [b, prog](double t) { return b(prog(t)); };
  return s;
}

Schedule nesterov_nonconvex(double s) {
  if (!(s > 0.0)) throw InvalidArgument("stepsize must be positive");
  return two_param_schedule(
      "nesterov_nonconvex", [s](double t) { return 2.0 / (s + t * t * t); },
      [](double t) { return 2.0 * t * t * t; });
}

Schedule nesterov_three_param(double t_lo, double t_hi) {
  return three_param_schedule(
      "nesterov_three_param", [](double t) { return std::log(2.0 / t); },
      [](double t) { return 2.0 * std::log(t); }, [](double t) { return 2.0 * std::log(t); }, t_lo, t_hi);
}

static double one_minus(double s) { return 1.0 - s; }
static double identity(double s) { return s; }

Schedule linear_qaa(double T) {
  if (!(T > 0.0)) throw InvalidArgument("horizon must be positive");
  return piecewise_schedule("linear_qaa", {{0.0, 0.0}, {T, 1.0}}, one_minus, identity);
}

Schedule custom_piecewise(std::vector<Knot> knots) {
  return piecewise_schedule("custom_piecewise", std::move(knots), one_minus, identity);
}

Schedule local_adiabatic(double T, double n_states, int samples) {
  if (!(T > 0.0) || !(n_states > 1.0) || samples < 2) throw InvalidArgument("bad local adiabatic parameters");
  const double q = std::sqrt(n_states - 1.0);
  const double at = std::atan(q);
  std::vector<Knot> knots;
  for (int i = 0; i < samples; ++i) {
    const double t = T * i / (samples - 1);
    double g = 0.5 + std::tan((2.0 * t / T - 1.0) * at) / (2.0 * q);
    if (i == 0) g = 0.0;
    if (i == samples - 1) g = 1.0;
    knots.push_back({t, std::clamp(g, 0.0, 1.0)});
  }
  return piecewise_schedule("local_adiabatic", std::move(knots), one_minus, identity);
}

static std::vector<Knot> parse_knots(const std::string& text) {
  std::vector<Knot> knots;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    const auto slash = item.find('/');
    if (slash == std::string::npos) throw InvalidArgument("knot must be t/s: " + item);
    knots.push_back({std::stod(item.substr(0, slash)), std::stod(item.substr(slash + 1))});
  }
  return knots;
}

Schedule parse_schedule(std::string_view spec) {
  std::string text(spec);
  std::string name = text;
  std::map<std::string, std::string> kv;
  if (auto colon = text.find(':'); colon != std::string::npos) {
    name = text.substr(0, colon);
    std::stringstream ss(text.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw InvalidArgument("schedule option must be key=value: " + item);
      kv[item.substr(0, eq)] = item.substr(eq + 1);
    }
  }
  auto num = [&](const std::string& key, double fallback) {
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    try {
      return std::stod(it->second);
    } catch (const std::exception&) {
      throw InvalidArgument("bad numeric schedule option " + key);
    }
  };
  if (name == "nesterov_nonconvex") return nesterov_nonconvex(num("s", 1e-3));
  if (name == "nesterov_three_param") return nesterov_three_param(num("t0", 1e-3), num("t1", 100.0));
  if (name == "linear_qaa") return linear_qaa(num("T", 10.0));
  if (name == "local_adiabatic") return local_adiabatic(num("T", 10.0), num("N", 2.0));
  if (name == "custom_piecewise") {
    auto it = kv.find("knots");
    if (it == kv.end()) return custom_piecewise({{0, 0}, {400, 0.3}, {640, 0.6}, {800, 1}});
    return custom_piecewise(parse_knots(it->second));
  }
  throw InvalidArgument("unknown schedule: " + name);
}

Schedule dilate_schedule(const Schedule& sched, ScalarFn tau, ScalarFn tau_dot, double t_lo,
                         double t_hi, int samples) {
  if (!(t_lo < t_hi) || samples < 2) throw InvalidArgument("bad sampling interval");
  double prev = tau(t_lo);
  for (int i = 1; i < samples; ++i) {
    const double t = t_lo + (t_hi - t_lo) * i / (samples - 1);
    const double v = tau(t);
    if (!(v > prev)) throw InvalidArgument("time map must be strictly increasing");
    prev = v;
  }
  Schedule out;
  out.name = sched.name + "_dilated";
  auto phi = sched.e_phi;
  auto chi = sched.e_chi;
  out.e_phi = [phi, tau, tau_dot](double t) { return tau_dot(t) * phi(tau(t)); };
  out.e_chi = [chi, tau, tau_dot](double t) { return tau_dot(t) * chi(tau(t)); };
  if (sched.kind == ScheduleKind::three_param) {
    out.kind = ScheduleKind::three_param;
    auto a = sched.alpha;
    auto b = sched.beta;
    auto g = sched.gamma;
    out.alpha = [a, tau, tau_dot](double t) { return a(tau(t)) + std::log(tau_dot(t)); };
    out.beta = [b, tau](double t) { return b(tau(t)); };
    out.gamma = [g, tau](double t) { return g(tau(t)); };
  } else {
    out.kind = ScheduleKind::two_param;
  }
  return out;
}

}  // namespace qhd
