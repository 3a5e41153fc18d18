#pragma once

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "snls/grid.hpp"
#include "snls/noise.hpp"
#include "snls/rng.hpp"

namespace snls {

enum class NoiseConvention { stratonovich, ito };

/// Equation family
///   i u_t + u_xx = sign * c * theta_m(A + ||u||_{X2(0,t)}^p) |u|^{4-eps} u  (+ noise),
/// sign +1 defocusing, -1 focusing; m = infinity disables the truncation.
/// theta_power is the exponent p applied to the running X2 norm (default 5).
/// dispersion_on exists for oracle tests that freeze the Laplacian.
struct EquationSpec {
    double sign = +1.0;
    double coupling = 1.0;  // c in [0, 1]
    double epsilon = 0.0;   // subcriticality in [0, 1]
    double truncation_m = std::numeric_limits<double>::infinity();
    double truncation_offset = 0.0;  // A >= 0
    double theta_power = 5.0;
    bool noise_on = false;
    NoiseConvention convention = NoiseConvention::stratonovich;
    bool ito_correction_on = true;
    bool dispersion_on = true;

    void validate() const;
};

/// Time-stamped states plus the driving-noise record. States are stored every
/// `snapshot_stride` steps; the noise record (when kept) has one increment per
/// step. running_x2_pow5[i] is the left-endpoint quadrature of
/// ||u||_{L10}^5 over [t_start, times[i]], i.e. the running ||u||_{X2}^5.
struct Trajectory {
    GridPtr grid;
    std::vector<double> times;
    std::vector<ComplexField> states;
    std::vector<double> running_x2_pow5;
    std::vector<std::vector<double>> noise_record;  // per step, empty if noise off
    double step_dt = 0.0;
    std::size_t total_steps = 0;
    int snapshot_stride = 1;

    /// True when every step has a stored state (stride one), which the
    /// Duhamel residual and the maximal function require.
    bool stores_every_step() const {
        return snapshot_stride == 1 && times.size() == total_steps + 1;
    }
};

struct BlowupError : std::runtime_error {
    explicit BlowupError(std::size_t step)
        : std::runtime_error("numerical blow-up at step " + std::to_string(step)),
          step_index(step) {}
    std::size_t step_index;
};

/// Smooth cutoff theta(x/m): exactly 1 for x <= m, exactly 0 for x >= 2m,
/// bridge exp(1 - 1/(1 - (y-1)^2)) for y = x/m in (1, 2). m = infinity
/// gives identically 1.
double theta_cutoff(double x, double m);

/// sign * c * theta_m(A + running^{p/5}) * |u|^{4-eps} u. The running
/// argument is the accumulated ||u||_{X2}^5 supplied by the caller.
ComplexField nonlinearity(const ComplexField& u, const EquationSpec& spec,
                          double running_x2_pow5);

/// One Strang step of the deterministic equation: half linear, full nonlinear
/// phase rotation, half linear; theta frozen at the step's start through
/// `running`. dt may be negative (time-reversed integration).
ComplexField step_deterministic(const ComplexField& u, double dt, const EquationSpec& spec,
                                double running_x2_pow5);

/// Multiplicative noise step. Stratonovich: the exact phase u e^{-i dW}.
/// Ito convention with the correction off: u (1 - i dW - dW^2/2), the
/// truncated exponential whose expected modulus reproduces the discrete
/// Ito growth law instead of conserving mass.
ComplexField step_noise(const ComplexField& u, const std::vector<double>& dw, double dt,
                        const EquationSpec& spec);

struct SolveOptions {
    int snapshot_stride = 1;
    bool record_noise = false;
    const NoiseModel* noise = nullptr;  // required when spec.noise_on
    RngState rng;
    double blowup_threshold = 1e8;
    // The phase-rotation scheme conserves the discrete mass exactly, so
    // sup|u| <= sqrt(mass/dx) and an absolute threshold alone cannot fire on
    // conservative runs. Collapse is instead detected as grid-scale focusing:
    // abort when sup|u| exceeds this multiple of its initial value.
    double blowup_growth_factor = std::numeric_limits<double>::infinity();
};

/// Integrates over [t_start, t_end] with step dt (dt < 0 runs backwards when
/// t_end < t_start). Composition per step: half linear, nonlinear phase,
/// noise phase, half linear. Throws BlowupError with the offending step when
/// sup|u| exceeds the threshold or a non-finite value appears.
Trajectory solve(const ComplexField& u0, const EquationSpec& spec, double t_start,
                 double t_end, double dt, const SolveOptions& opts = {});

/// L^2 size of the discrete Duhamel defect at the final time:
///   u(T) - S(T)u0 + i Int S(T-s) N(u) ds + i Sum S(T-s_i) u(s_i) dW_i
///        + 1/2 Int S(T-s) F u ds,
/// deterministic integrals by trapezoid over stored states, the stochastic
/// sum left-point on the recorded increments. Requires a stride-one
/// trajectory; requires the noise record and model when noise was on.
double duhamel_residual(const Trajectory& traj, const EquationSpec& spec,
                        const NoiseModel* model = nullptr);

}  // namespace snls
