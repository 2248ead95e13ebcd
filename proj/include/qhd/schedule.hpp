#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace qhd {

using ScalarFn = std::function<double(double)>;

enum class ScheduleKind { two_param, three_param, piecewise_anneal };

struct Knot {
  double t;
  double s;
};

// Time-dependent coefficients of H(t) = e_phi(t) K + e_chi(t) V.
// For annealing schedules K is the driver and V the problem term, with
// e_phi = A(s(t)) and e_chi = B(s(t)).
struct Schedule {
  ScheduleKind kind = ScheduleKind::two_param;
  std::string name;
  ScalarFn e_phi;
  ScalarFn e_chi;

  // three_param only: e_phi = exp(alpha - gamma), e_chi = exp(alpha + beta + gamma)
  ScalarFn alpha, beta, gamma;

  // piecewise_anneal only
  std::vector<Knot> knots;
  ScalarFn envelope_a, envelope_b;

  double progress(double t) const;  // s(t), piecewise-linear in the knots
};

Schedule two_param_schedule(std::string name, ScalarFn e_phi, ScalarFn e_chi);

// Validates d/dt gamma = e^alpha and d/dt beta <= e^alpha on `samples` points of
// [t_lo, t_hi]; throws ValidationError at the first violating time.
Schedule three_param_schedule(std::string name, ScalarFn alpha, ScalarFn beta, ScalarFn gamma,
                              double t_lo, double t_hi, int samples = 1001);

Schedule piecewise_schedule(std::string name, std::vector<Knot> knots, ScalarFn envelope_a,
                            ScalarFn envelope_b);

// e_phi = 2/(s + t^3), e_chi = 2 t^3
Schedule nesterov_nonconvex(double s = 1e-3);
// alpha = log(2/t), beta = gamma = 2 log t, validated on [t_lo, t_hi]
Schedule nesterov_three_param(double t_lo = 1e-3, double t_hi = 100.0);
// g(t) = t/T with A(s) = 1 - s, B(s) = s
Schedule linear_qaa(double T);
// A(s) = 1 - s, B(s) = s over the given knots
Schedule custom_piecewise(std::vector<Knot> knots);
// g(t) = 1/2 + tan((2t/T - 1) atan(sqrt(N-1))) / (2 sqrt(N-1)), sampled onto knots
Schedule local_adiabatic(double T, double n_states, int samples = 2001);

// Parses "name" or "name:key=value,key=value". Knots for custom_piecewise are
// given as knots=t/s;t/s;...
Schedule parse_schedule(std::string_view spec);

// e~(t) = tau_dot(t) e(tau(t)); three-parameter inputs are mapped through
// alpha o tau + log tau_dot, beta o tau, gamma o tau. tau is sampled on
// [t_lo, t_hi] and must be strictly increasing there.
Schedule dilate_schedule(const Schedule& sched, ScalarFn tau, ScalarFn tau_dot, double t_lo,
                         double t_hi, int samples = 1001);

}  // namespace qhd
