#pragma once

#include "snls/grid.hpp"

namespace snls {

/// Free Schroedinger group: multiplies the spectrum by e^{-i k^2 t}.
/// Exact on the discrete space, any sign of t.
ComplexField free_propagate(const ComplexField& f, double t);

/// j-th spectral derivative: multiplies the spectrum by (ik)^j.
ComplexField spectral_derivative(const ComplexField& f, int order);

/// Least-squares slope of log sup_x |S(t)f| against log t.
/// Throws std::invalid_argument for a zero field, t outside [1, 10], or when
/// any evolved sample carries more than 1e-6 of its mass in the outer eighth
/// of the domain (periodic wrap-around would contaminate the decay law).
double dispersive_decay_fit(const ComplexField& f, const std::vector<double>& t_samples);

/// || S(t) f ||_{L^q_t L^r_x (0,T)} / l2_norm(f), time integral by trapezoid
/// on `time_steps` subintervals. (q, r) must be admissible: 2/q + 1/r = 1/2.
/// q = infinity means sup over sampled times (with r = 2 this is exactly 1).
double strichartz_ratio(const ComplexField& f, double q, double r, double horizon,
                        int time_steps = 256);

bool admissible_pair(double q, double r);

}  // namespace snls
