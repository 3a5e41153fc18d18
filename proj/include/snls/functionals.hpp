#pragma once

#include <span>
#include <vector>

#include "snls/dynamics.hpp"
#include "snls/grid.hpp"
#include "snls/noise.hpp"

namespace snls {

struct XNorms {
    double x1 = 0.0;  // L_t^inf L_x^2 over stored snapshots
    double x2 = 0.0;  // L_t^5 L_x^10 by trapezoid over stored snapshots
    double sum() const { return x1 + x2; }
};

/// Space-time norms over [a, b]; both endpoints must be stored times.
/// Throws on an empty or out-of-range window.
XNorms x_norms(const Trajectory& traj, double a, double b);

/// M*(t): max over stored-time pairs r1 <= r2 <= t of the L^10 norm of the
/// left-point stochastic integral sum_{s_i in [r1, r2)} S(t - s_i) u(s_i) dW_i.
/// Requires a stride-one trajectory with its noise record. Quadratic in the
/// number of stored steps for a single t; S(t-s) = S(t) S(-s) factorization
/// shares one FFT per prefix.
double maximal_function(const Trajectory& traj, double t);

/// M* at every stored time (cubic total cost; cap stored steps accordingly).
std::vector<double> maximal_function_curve(const Trajectory& traj);

/// Random dissection of [0, T0]: starting at tau_0 = 0, the next cut is the
/// first grid time where the trapezoid integral of |M*|^5 since the previous
/// cut reaches eta/2 (the last cut is T0). The cut count obeys
/// K <= 1 + (2/eta) ||M*||_{L^5}^5 + 1 grid-rounding slack.
std::vector<double> random_dissection(std::span<const double> mstar,
                                      std::span<const double> times, double eta, double T0);

struct EnsembleStats {
    double rho = 1.0;
    std::size_t sample_count = 0;
    double estimate = 0.0;   // ( mean of ||u||_X^rho )^{1/rho}
    double std_error = 0.0;  // jackknife
};

/// Monte-Carlo estimate of the omega-moment of the path X norm over [a, b].
/// Trajectories must share the grid and time stamps. Throws for fewer than
/// two paths or rho < 1.
EnsembleStats ensemble_moment(const std::vector<Trajectory>& trajs, double rho, double a,
                              double b);

struct BurkholderResult {
    double ratio = 0.0;
    double numerator = 0.0;    // E sup_t || int_0^t sigma dW ||_{L^p}^rho
    double denominator = 0.0;  // ( int_0^T sum_k ||sigma (Phi e_k)||_{L^p}^2 ds )^{rho/2}
    bool degenerate = false;   // sigma == 0: 0/0 guarded, ratio reported as 0
};

/// Monte-Carlo two-sided Burkholder sanity check with the radonifying norm
/// replaced by the discrete mode-sum surrogate. sigma is a deterministic
/// process sampled on its own time grid.
BurkholderResult burkholder_check(const Trajectory& sigma, const NoiseModel& model, double p,
                                  double rho, int samples, std::uint64_t seed);

}  // namespace snls
