#include "snls/dynamics.hpp"

#include <cmath>

#include "snls/fft.hpp"

namespace snls {

void EquationSpec::validate() const {
    if (sign != 1.0 && sign != -1.0) {
        throw std::invalid_argument("EquationSpec: sign must be +1 or -1");
    }
    if (coupling < 0.0 || coupling > 1.0) {
        throw std::invalid_argument("EquationSpec: coupling c must lie in [0, 1]");
    }
    if (epsilon < 0.0 || epsilon > 1.0) {
        throw std::invalid_argument("EquationSpec: epsilon must lie in [0, 1]");
    }
    if (!(truncation_m > 0.0)) {
        throw std::invalid_argument("EquationSpec: m must be positive (or infinity)");
    }
    if (truncation_offset < 0.0) {
        throw std::invalid_argument("EquationSpec: A must be >= 0");
    }
    if (!(theta_power > 0.0)) {
        throw std::invalid_argument("EquationSpec: theta power must be positive");
    }
    if (noise_on && convention == NoiseConvention::ito && ito_correction_on) {
        throw std::invalid_argument(
            "EquationSpec: Ito stepping is the no-correction variant; "
            "use the Stratonovich convention for the conservative equation");
    }
    if (noise_on && convention == NoiseConvention::stratonovich && !ito_correction_on) {
        throw std::invalid_argument(
            "EquationSpec: the Stratonovich phase step embodies the correction; "
            "correction off requires the Ito convention");
    }
}

double theta_cutoff(double x, double m) {
    if (x < 0.0) throw std::invalid_argument("theta_cutoff: argument must be >= 0");
    if (std::isinf(m)) return 1.0;
    const double y = x / m;
    if (y <= 1.0) return 1.0;
    if (y >= 2.0) return 0.0;
    const double s = y - 1.0;
    return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

namespace {

inline double theta_argument(const EquationSpec& spec, double running_x2_pow5) {
    // running carries ||u||_{X2}^5; re-exponentiate for theta_power != 5
    const double base = std::max(running_x2_pow5, 0.0);
    const double powered =
        (spec.theta_power == 5.0) ? base : std::pow(base, spec.theta_power / 5.0);
    return spec.truncation_offset + powered;
}

inline double theta_factor(const EquationSpec& spec, double running_x2_pow5) {
    return theta_cutoff(theta_argument(spec, running_x2_pow5), spec.truncation_m);
}

// |u|^{4-eps} with the eps = 0 fast path.
inline double amplitude_power(double abs2, double eps) {
    if (eps == 0.0) return abs2 * abs2;
    return std::pow(abs2, 0.5 * (4.0 - eps));
}

// ||u||_{L10}^5 = sqrt( sum |u|^10 dx ), the X2 running integrand.
double l10_pow5(const ComplexField& u) {
    double acc = 0.0;
    for (const auto& v : u.values) {
        const double a2 = std::norm(v);
        acc += a2 * a2 * a2 * a2 * a2;
    }
    return std::sqrt(acc * u.grid->dx);
}

void half_linear_inplace(ComplexField& u, double dt, const EquationSpec& spec) {
    if (!spec.dispersion_on) return;
    fft_forward_inplace(u.values);
    const auto& k = u.grid->wavenumbers;
    for (int j = 0; j < u.n(); ++j) {
        u.values[j] *= std::polar(1.0, -k[j] * k[j] * dt * 0.5);
    }
    fft_inverse_inplace(u.values);
}

void nonlinear_phase_inplace(ComplexField& u, double dt, const EquationSpec& spec,
                             double theta) {
    const double gain = spec.sign * spec.coupling * theta;
    if (gain == 0.0) return;
    for (auto& v : u.values) {
        const double a2 = std::norm(v);
        v *= std::polar(1.0, -gain * amplitude_power(a2, spec.epsilon) * dt);
    }
}

void noise_phase_inplace(ComplexField& u, const std::vector<double>& dw,
                         const EquationSpec& spec) {
    if (spec.convention == NoiseConvention::stratonovich) {
        for (int j = 0; j < u.n(); ++j) u.values[j] *= std::polar(1.0, -dw[j]);
    } else {
        for (int j = 0; j < u.n(); ++j) {
            u.values[j] *= cdouble(1.0 - 0.5 * dw[j] * dw[j], -dw[j]);
        }
    }
}

}  // namespace

ComplexField nonlinearity(const ComplexField& u, const EquationSpec& spec,
                          double running_x2_pow5) {
    const double gain = spec.sign * spec.coupling * theta_factor(spec, running_x2_pow5);
    ComplexField out = u;
    for (auto& v : out.values) {
        v *= gain * amplitude_power(std::norm(v), spec.epsilon);
    }
    return out;
}

ComplexField step_deterministic(const ComplexField& u, double dt, const EquationSpec& spec,
                                double running_x2_pow5) {
    const double theta = theta_factor(spec, running_x2_pow5);
    ComplexField out = u;
    half_linear_inplace(out, dt, spec);
    nonlinear_phase_inplace(out, dt, spec, theta);
    half_linear_inplace(out, dt, spec);
    return out;
}

ComplexField step_noise(const ComplexField& u, const std::vector<double>& dw, double dt,
                        const EquationSpec& spec) {
    (void)dt;  // the increment already carries its sqrt(dt) scale
    if (static_cast<int>(dw.size()) != u.n()) {
        throw std::invalid_argument("step_noise: increment size does not match the grid");
    }
    ComplexField out = u;
    noise_phase_inplace(out, dw, spec);
    return out;
}

Trajectory solve(const ComplexField& u0, const EquationSpec& spec, double t_start,
                 double t_end, double dt, const SolveOptions& opts) {
    spec.validate();
    if (dt == 0.0 || !std::isfinite(dt)) {
        throw std::invalid_argument("solve: dt must be finite and nonzero");
    }
    const double span = t_end - t_start;
    const double steps_real = span / dt;
    const auto n_steps = static_cast<std::size_t>(std::llround(steps_real));
    if (n_steps == 0 || std::abs(steps_real - static_cast<double>(n_steps)) > 1e-9) {
        throw std::invalid_argument("solve: dt must divide the horizon");
    }
    if (!all_finite(u0)) throw std::invalid_argument("solve: initial data is not finite");
    if (spec.noise_on && opts.noise == nullptr) {
        throw std::invalid_argument("solve: noise is on but no noise model was given");
    }
    const int stride = std::max(opts.snapshot_stride, 1);

    Trajectory traj;
    traj.grid = u0.grid;
    traj.step_dt = dt;
    traj.total_steps = n_steps;
    traj.snapshot_stride = stride;
    traj.times.push_back(t_start);
    traj.states.push_back(u0);
    traj.running_x2_pow5.push_back(0.0);

    ComplexField u = u0;
    double running = 0.0;
    double sup0 = 0.0;
    for (const auto& v : u0.values) sup0 = std::max(sup0, std::abs(v));
    const double growth_cap = opts.blowup_growth_factor * sup0;
    for (std::size_t i = 0; i < n_steps; ++i) {
        const double theta = theta_factor(spec, running);
        const double integrand = l10_pow5(u);  // left endpoint: the pre-step state

        half_linear_inplace(u, dt, spec);
        nonlinear_phase_inplace(u, dt, spec, theta);
        if (spec.noise_on) {
            RngState state = opts.rng;
            state.step = opts.rng.step + i;
            const std::vector<double> dw = sample_increment(*opts.noise, std::abs(dt), state);
            noise_phase_inplace(u, dw, spec);
            if (opts.record_noise) traj.noise_record.push_back(dw);
        }
        half_linear_inplace(u, dt, spec);

        running += integrand * std::abs(dt);

        double sup = 0.0;
        bool finite = true;
        for (const auto& v : u.values) {
            const double a = std::abs(v);
            if (!std::isfinite(a)) {
                finite = false;
                break;
            }
            sup = std::max(sup, a);
        }
        if (!finite || sup > opts.blowup_threshold || sup > growth_cap) throw BlowupError(i);

        if ((i + 1) % static_cast<std::size_t>(stride) == 0 || i + 1 == n_steps) {
            traj.times.push_back(t_start + static_cast<double>(i + 1) * dt);
            traj.states.push_back(u);
            traj.running_x2_pow5.push_back(running);
        }
    }
    return traj;
}

double duhamel_residual(const Trajectory& traj, const EquationSpec& spec,
                        const NoiseModel* model) {
    if (!traj.stores_every_step()) {
        throw std::invalid_argument("duhamel_residual: trajectory must store every step");
    }
    const std::size_t m = traj.times.size();
    if (m < 2) throw std::invalid_argument("duhamel_residual: trajectory too short");
    if (spec.noise_on) {
        if (traj.noise_record.size() != m - 1) {
            throw std::invalid_argument("duhamel_residual: noise record is missing");
        }
        if (model == nullptr) {
            throw std::invalid_argument("duhamel_residual: noise model required");
        }
    }

    const double T = traj.times.back();
    const double t0 = traj.times.front();
    const double dt = traj.step_dt;
    const int n = traj.grid->n;
    const auto& k = traj.grid->wavenumbers;

    // Accumulate every Duhamel term in Fourier space: one forward transform
    // per integrand sample and a single inverse at the end.
    std::vector<cdouble> acc = fft_forward(traj.states.front().values);
    for (int j = 0; j < n; ++j) acc[j] *= std::polar(1.0, -k[j] * k[j] * (T - t0));

    for (std::size_t i = 0; i < m; ++i) {
        const double w = (i == 0 || i + 1 == m) ? 0.5 : 1.0;
        const double s = traj.times[i];

        ComplexField integrand = nonlinearity(traj.states[i], spec, traj.running_x2_pow5[i]);
        if (spec.noise_on) {
            for (int j = 0; j < n; ++j) {
                // i * N(u) + (1/2) F u, both under the same propagator weight
                integrand.values[j] = cdouble(0.0, 1.0) * integrand.values[j] +
                                      0.5 * model->correction[j] * traj.states[i].values[j];
            }
        } else {
            for (int j = 0; j < n; ++j) {
                integrand.values[j] *= cdouble(0.0, 1.0);
            }
        }
        fft_forward_inplace(integrand.values);
        for (int j = 0; j < n; ++j) {
            acc[j] -= w * dt * std::polar(1.0, -k[j] * k[j] * (T - s)) * integrand.values[j];
        }
    }

    if (spec.noise_on) {
        for (std::size_t i = 0; i + 1 < m; ++i) {
            const double s = traj.times[i];
            std::vector<cdouble> term(n);
            for (int j = 0; j < n; ++j) {
                term[j] = traj.states[i].values[j] * traj.noise_record[i][j];
            }
            fft_forward_inplace(term);
            for (int j = 0; j < n; ++j) {
                acc[j] -= cdouble(0.0, 1.0) * std::polar(1.0, -k[j] * k[j] * (T - s)) * term[j];
            }
        }
    }

    fft_inverse_inplace(acc);
    double diff2 = 0.0;
    for (int j = 0; j < n; ++j) {
        diff2 += std::norm(traj.states.back().values[j] - acc[j]);
    }
    return std::sqrt(diff2 * traj.grid->dx);
}

}  // namespace snls
