#include "snls/experiments.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "snls/config.hpp"
#include "snls/fft.hpp"
#include "snls/functionals.hpp"
#include "snls/parallel.hpp"
#include "snls/spectral.hpp"
#include "snls/stats.hpp"
#include "snls/trajectory_io.hpp"

namespace snls {

namespace {

class Stopwatch {
  public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

ComplexField gaussian_data(const GridPtr& grid, double mass, double width = 1.0) {
    const double a = mass * std::pow(M_PI, -0.25) / std::sqrt(width);
    const double w2 = 2.0 * width * width;
    return make_field(grid, [&](double x) { return cdouble(a * std::exp(-x * x / w2), 0.0); });
}

/// X norm of the pointwise difference of two snapshot-aligned trajectories.
XNorms x_diff(const Trajectory& a, const Trajectory& b) {
    Trajectory diff;
    diff.grid = a.grid;
    diff.times = a.times;
    diff.states.reserve(a.states.size());
    for (std::size_t i = 0; i < a.states.size(); ++i) {
        ComplexField d = a.states[i];
        for (int j = 0; j < d.n(); ++j) d.values[j] -= b.states[i].values[j];
        diff.states.push_back(std::move(d));
    }
    return x_norms(diff, diff.times.front(), diff.times.back());
}

ReportRow make_row(const std::string& label, double value, const std::string& tol, bool pass) {
    return ReportRow{label, value, tol, pass};
}

std::string fmt(double v) { return format_double(v); }

}  // namespace

bool ExperimentReport::passed() const {
    for (const auto& r : rows) {
        if (!r.pass) return false;
    }
    return true;
}

std::string ExperimentReport::to_text() const {
    std::ostringstream out;
    out << "experiment: " << name << "\n";
    for (const auto& p : parameters) out << "  " << p << "\n";
    for (const auto& r : rows) {
        out << (r.pass ? "PASS " : "FAIL ") << r.label << " = " << fmt(r.value) << "  ["
            << r.tolerance << "]\n";
    }
    out << "runtime_seconds = " << fmt(runtime_seconds) << "\n";
    out << (passed() ? "verdict: PASS" : "verdict: FAIL") << "\n";
    return out.str();
}

std::string ExperimentReport::to_csv() const {
    std::ostringstream out;
    out << "label,value,tolerance,pass\n";
    for (const auto& r : rows) {
        out << '"' << r.label << "\"," << fmt(r.value) << ",\"" << r.tolerance << "\","
            << (r.pass ? 1 : 0) << "\n";
    }
    return out.str();
}

void ExperimentReport::write(const std::string& dir) const {
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir + "/" + name + ".txt");
        out << to_text();
    }
    {
        std::ofstream out(dir + "/" + name + ".csv");
        out << to_csv();
    }
}

// --------------------------------------------------------------------------
// stability

namespace {

/// Solve with an additive source term e(x) injected first order per step.
Trajectory solve_with_source(const ComplexField& u0, const EquationSpec& spec, double horizon,
                             double dt, const ComplexField& source) {
    Trajectory traj;
    traj.grid = u0.grid;
    traj.step_dt = dt;
    traj.snapshot_stride = 1;
    const auto n_steps = static_cast<std::size_t>(std::llround(horizon / dt));
    traj.total_steps = n_steps;
    traj.times.push_back(0.0);
    traj.states.push_back(u0);
    traj.running_x2_pow5.push_back(0.0);
    ComplexField u = u0;
    double running = 0.0;
    for (std::size_t i = 0; i < n_steps; ++i) {
        const double integrand = std::pow(lp_norm(u, 10.0), 5.0);
        u = step_deterministic(u, dt, spec, running);
        for (int j = 0; j < u.n(); ++j) {
            u.values[j] -= cdouble(0.0, 1.0) * dt * source.values[j];
        }
        running += integrand * dt;
        traj.times.push_back((i + 1) * dt);
        traj.states.push_back(u);
        traj.running_x2_pow5.push_back(running);
    }
    return traj;
}

}  // namespace

ExperimentReport stability_experiment(const StabilityOptions& opts) {
    Stopwatch clock;
    ExperimentReport report;
    report.name = "stability";
    report.parameters = {"n = " + std::to_string(opts.n),
                         "L = " + fmt(opts.half_width),
                         "horizon = " + fmt(opts.horizon),
                         "dt = " + fmt(opts.dt),
                         "mass = " + fmt(opts.mass)};

    const GridPtr grid = make_grid(opts.half_width, opts.n);
    const ComplexField u0 = gaussian_data(grid, opts.mass);
    const ComplexField bump = make_field(grid, [](double x) {
        const double g = std::exp(-(x - 1.0) * (x - 1.0));
        return cdouble(g, 0.0);
    });
    ComplexField bump_unit = bump;
    {
        const double nb = l2_norm(bump);
        for (auto& v : bump_unit.values) v /= nb;
    }

    auto base_spec = [&](double eps, double m, double A) {
        EquationSpec spec;
        spec.sign = +1.0;
        spec.coupling = 1.0;
        spec.epsilon = eps;
        spec.truncation_m = m;
        spec.truncation_offset = A;
        return spec;
    };

    std::vector<double> initial_ratios;
    std::vector<double> forcing_ratios;
    double sup_ratio = 0.0;

    for (double eps : opts.epsilons) {
        for (double m : opts.truncations) {
            const EquationSpec spec = base_spec(eps, m, 0.0);
            const Trajectory w = solve(u0, spec, 0.0, opts.horizon, opts.dt);

            for (double delta : opts.deltas) {
                // Channel 1: perturbed initial data.
                ComplexField v0 = u0;
                for (int j = 0; j < v0.n(); ++j) v0.values[j] += delta * bump_unit.values[j];
                const Trajectory v = solve(v0, spec, 0.0, opts.horizon, opts.dt);
                const double r1 = x_diff(v, w).sum() / delta;
                initial_ratios.push_back(r1);
                sup_ratio = std::max(sup_ratio, r1);

                // Channel 2: injected forcing of L^1_t L^2_x size delta.
                ComplexField source = bump_unit;
                for (auto& z : source.values) z *= delta / opts.horizon;
                const Trajectory w_src = solve_with_source(u0, spec, opts.horizon, opts.dt,
                                                           zero_field(grid));
                const Trajectory v_src =
                    solve_with_source(u0, spec, opts.horizon, opts.dt, source);
                const double r2 = x_diff(v_src, w_src).sum() / delta;
                forcing_ratios.push_back(r2);
                sup_ratio = std::max(sup_ratio, r2);

                // Channel 3: shifted truncation offset.
                if (std::isfinite(m)) {
                    const EquationSpec shifted = base_spec(eps, m, delta);
                    const Trajectory v_off = solve(u0, shifted, 0.0, opts.horizon, opts.dt);
                    sup_ratio = std::max(sup_ratio, x_diff(v_off, w).sum() / delta);
                }
            }
        }
    }

    // Zero perturbation reproduces the clean path exactly.
    {
        const EquationSpec spec = base_spec(0.0, std::numeric_limits<double>::infinity(), 0.0);
        const Trajectory w = solve(u0, spec, 0.0, opts.horizon, opts.dt);
        const Trajectory v = solve(u0, spec, 0.0, opts.horizon, opts.dt);
        const double d = x_diff(v, w).sum();
        report.rows.push_back(make_row("identical_inputs_difference", d, "== 0", d == 0.0));
    }

    // theta plateau: offset shift invisible while the argument stays below m.
    {
        const EquationSpec spec = base_spec(0.0, 1e6, 0.0);
        const EquationSpec shifted = base_spec(0.0, 1e6, opts.deltas.front());
        const Trajectory w = solve(u0, spec, 0.0, opts.horizon, opts.dt);
        const Trajectory v = solve(u0, shifted, 0.0, opts.horizon, opts.dt);
        const double d = x_diff(v, w).sum();
        report.rows.push_back(make_row("plateau_offset_difference", d, "< 1e-12", d < 1e-12));
    }

    double rmin = initial_ratios.front(), rmax = initial_ratios.front();
    for (double r : initial_ratios) {
        rmin = std::min(rmin, r);
        rmax = std::max(rmax, r);
    }
    report.rows.push_back(make_row("initial_data_ratio_spread", rmax / rmin,
                                   "max/min <= 3 across (eps, m, delta) grid", rmax / rmin <= 3.0));

    // Local linearity: doubling the perturbation moves the ratio by < 20%.
    {
        const EquationSpec spec = base_spec(0.0, std::numeric_limits<double>::infinity(), 0.0);
        const Trajectory w = solve(u0, spec, 0.0, opts.horizon, opts.dt);
        const double small = opts.deltas.back();
        double ratios[2];
        for (int i = 0; i < 2; ++i) {
            const double d = small * (i + 1);
            ComplexField v0 = u0;
            for (int j = 0; j < v0.n(); ++j) v0.values[j] += d * bump_unit.values[j];
            ratios[i] = x_diff(solve(v0, spec, 0.0, opts.horizon, opts.dt), w).sum() / d;
        }
        const double rel = std::abs(ratios[1] / ratios[0] - 1.0);
        report.rows.push_back(make_row("ratio_doubling_shift", rel, "< 0.2", rel < 0.2));
    }

    report.rows.push_back(make_row("sup_ratio_all_channels", sup_ratio, "finite",
                                   std::isfinite(sup_ratio)));
    double fmax = 0.0;
    for (double r : forcing_ratios) fmax = std::max(fmax, r);
    report.rows.push_back(make_row("forcing_ratio_sup", fmax, "finite", std::isfinite(fmax)));

    report.runtime_seconds = clock.seconds();
    return report;
}

// --------------------------------------------------------------------------
// uniform bound sweep

ExperimentReport uniform_bound_sweep(const UniformBoundOptions& opts) {
    Stopwatch clock;
    ExperimentReport report;
    report.name = "uniform-bound";
    report.parameters = {"n = " + std::to_string(opts.n), "L = " + fmt(opts.half_width),
                         "dt = " + fmt(opts.dt), "mass = " + fmt(opts.mass)};

    const GridPtr grid = make_grid(opts.half_width, opts.n);

    auto sweep_x2 = [&](double mass, bool with_offsets) {
        std::vector<double> values;
        for (double eps : opts.epsilons) {
            for (double m : opts.truncations) {
                for (double A : with_offsets ? opts.offsets : std::vector<double>{0.0}) {
                    EquationSpec spec;
                    spec.epsilon = eps;
                    spec.truncation_m = m;
                    spec.truncation_offset = A;
                    const Trajectory traj =
                        solve(gaussian_data(grid, mass), spec, 0.0, opts.horizon, opts.dt,
                              SolveOptions{.snapshot_stride = 5});
                    values.push_back(x_norms(traj, 0.0, opts.horizon).x2);
                }
            }
        }
        return values;
    };

    // Zero data: every norm vanishes.
    {
        EquationSpec spec;
        const Trajectory traj = solve(zero_field(grid), spec, 0.0, opts.horizon, opts.dt,
                                      SolveOptions{.snapshot_stride = 5});
        const double x2 = x_norms(traj, 0.0, opts.horizon).x2;
        report.rows.push_back(make_row("zero_mass_x2", x2, "== 0", x2 == 0.0));
    }

    // Small data stays within a factor 2 of the linear flow.
    {
        EquationSpec lin;
        lin.coupling = 0.0;
        const Trajectory free_traj = solve(gaussian_data(grid, 0.1), lin, 0.0, opts.horizon,
                                           opts.dt, SolveOptions{.snapshot_stride = 5});
        const double linear_x2 = x_norms(free_traj, 0.0, opts.horizon).x2;
        const auto values = sweep_x2(0.1, false);
        double vmax = values.front();
        for (double v : values) vmax = std::max(vmax, v);
        const bool ok = vmax <= 2.0 * linear_x2 && vmax >= 0.5 * linear_x2;
        report.parameters.push_back("small_data_linear_x2 = " + fmt(linear_x2));
        report.rows.push_back(
            make_row("small_data_sup_x2", vmax, "within factor 2 of linear flow", ok));
    }

    // The mass-M table over the full (eps, m, A) sweep.
    {
        const auto values = sweep_x2(opts.mass, true);
        double vmin = values.front(), vmax = values.front(), sum = 0.0;
        bool finite = true;
        for (double v : values) {
            vmin = std::min(vmin, v);
            vmax = std::max(vmax, v);
            sum += v;
            finite = finite && std::isfinite(v);
        }
        const double mean_v = sum / values.size();
        std::ostringstream table;
        table << "sweep_x2_values =";
        for (double v : values) table << ' ' << fmt(v);
        report.parameters.push_back(table.str());
        report.rows.push_back(make_row("sweep_all_finite", finite ? 1.0 : 0.0, "== 1", finite));
        report.rows.push_back(make_row("sweep_max_x2", vmax, "finite", std::isfinite(vmax)));
        const double spread = (vmax - vmin) / mean_v;
        report.rows.push_back(
            make_row("sweep_spread_over_mean", spread, "< 0.5", spread < 0.5));
    }

    report.runtime_seconds = clock.seconds();
    return report;
}

// --------------------------------------------------------------------------
// perturbed Duhamel

Trajectory forced_duhamel_solve(const ComplexField& u0, const EquationSpec& spec,
                                const std::vector<ComplexField>& g_samples, double t_start,
                                double dt, int snapshot_stride) {
    if (g_samples.empty() || l2_norm(g_samples.front()) != 0.0) {
        throw std::invalid_argument("forced_duhamel_solve: forcing must satisfy g(a) = 0");
    }
    const std::size_t n_steps = g_samples.size() - 1;
    Trajectory traj;
    traj.grid = u0.grid;
    traj.step_dt = dt;
    traj.snapshot_stride = snapshot_stride;
    traj.total_steps = n_steps;
    traj.times.push_back(t_start);
    traj.states.push_back(u0);
    traj.running_x2_pow5.push_back(0.0);
    ComplexField u = u0;
    double running = 0.0;
    for (std::size_t i = 0; i < n_steps; ++i) {
        const double integrand = std::pow(lp_norm(u, 10.0), 5.0);
        u = step_deterministic(u, dt, spec, running);
        // Duhamel forcing transports as g(t_{i+1}) - S(dt) g(t_i).
        const ComplexField moved = free_propagate(g_samples[i], dt);
        for (int j = 0; j < u.n(); ++j) {
            u.values[j] += g_samples[i + 1].values[j] - moved.values[j];
        }
        running += integrand * dt;
        if (!all_finite(u)) throw BlowupError(i);
        if ((i + 1) % static_cast<std::size_t>(snapshot_stride) == 0 || i + 1 == n_steps) {
            traj.times.push_back(t_start + (i + 1) * dt);
            traj.states.push_back(u);
            traj.running_x2_pow5.push_back(running);
        }
    }
    return traj;
}

ExperimentReport perturbed_duhamel_experiment(const PerturbedDuhamelOptions& opts) {
    Stopwatch clock;
    ExperimentReport report;
    report.name = "perturbed-duhamel";
    report.parameters = {"n = " + std::to_string(opts.n), "dt = " + fmt(opts.dt),
                         "mass = " + fmt(opts.mass),
                         std::string("forcing = ") +
                             (opts.stochastic_forcing ? "stochastic-convolution" : "smooth-bump"),
                         "seed = " + std::to_string(opts.seed)};

    const GridPtr grid = make_grid(opts.half_width, opts.n);
    const ComplexField u0 = gaussian_data(grid, opts.mass);
    const auto n_steps = static_cast<std::size_t>(std::llround(opts.horizon / opts.dt));

    EquationSpec spec;  // defocusing quintic, theta at defaults

    // Build the raw forcing shape on the step grid with g(0) = 0.
    std::vector<ComplexField> g_raw(n_steps + 1, zero_field(grid));
    if (opts.stochastic_forcing) {
        // Frozen stochastic convolution of a reference noisy solution:
        // g(t) = -i sum_{s_i<t} S(t-s_i) u(s_i) dW_i - 1/2 int_0^t S(t-s) F u ds.
        EquationSpec noisy = spec;
        noisy.noise_on = true;
        const NoiseModel model = build_noise(16, 0.5, 3.0, grid);
        Trajectory ref = solve(u0, noisy, 0.0, opts.horizon, opts.dt,
                               SolveOptions{.snapshot_stride = 1,
                                            .record_noise = true,
                                            .noise = &model,
                                            .rng = RngState{opts.seed, 0, 0}});
        const auto& k = grid->wavenumbers;
        std::vector<cdouble> acc_sto(grid->n, cdouble(0, 0));   // Fourier, at s = 0 frame
        std::vector<cdouble> acc_drift(grid->n, cdouble(0, 0));
        std::vector<cdouble> prev_drift_term(grid->n, cdouble(0, 0));
        for (std::size_t i = 0; i <= n_steps; ++i) {
            const double t = ref.times[i];
            if (i > 0) {
                // left-point stochastic sum, trapezoid drift
                std::vector<cdouble> term(grid->n);
                for (int j = 0; j < grid->n; ++j) {
                    term[j] = ref.states[i - 1].values[j] * ref.noise_record[i - 1][j];
                }
                fft_forward_inplace(term);
                const double s_prev = ref.times[i - 1];
                for (int j = 0; j < grid->n; ++j) {
                    acc_sto[j] += term[j] * std::polar(1.0, k[j] * k[j] * s_prev);
                }
                std::vector<cdouble> drift(grid->n);
                for (int j = 0; j < grid->n; ++j) {
                    drift[j] = model.correction[j] * ref.states[i].values[j];
                }
                fft_forward_inplace(drift);
                for (int j = 0; j < grid->n; ++j) {
                    drift[j] *= std::polar(1.0, k[j] * k[j] * t);
                    acc_drift[j] += 0.5 * opts.dt * (drift[j] + prev_drift_term[j]);
                    prev_drift_term[j] = drift[j];
                }
            } else {
                std::vector<cdouble> drift(grid->n);
                for (int j = 0; j < grid->n; ++j) {
                    drift[j] = model.correction[j] * ref.states[0].values[j];
                }
                fft_forward_inplace(drift);
                for (int j = 0; j < grid->n; ++j) prev_drift_term[j] = drift[j];
            }
            std::vector<cdouble> hat(grid->n);
            for (int j = 0; j < grid->n; ++j) {
                hat[j] = std::polar(1.0, -k[j] * k[j] * t) *
                         (cdouble(0.0, -1.0) * acc_sto[j] - 0.5 * acc_drift[j]);
            }
            fft_inverse_inplace(hat);
            g_raw[i].values = std::move(hat);
        }
    } else {
        for (std::size_t i = 0; i <= n_steps; ++i) {
            const double t = i * opts.dt;
            const double env = std::sin(M_PI * t / opts.horizon);
            g_raw[i] = make_field(grid, [&](double x) {
                return cdouble(env * std::exp(-0.5 * x * x), 0.0);
            });
        }
        g_raw.back() = zero_field(grid);  // sin(pi) up to roundoff; pin the endpoint
    }
    g_raw.front() = zero_field(grid);

    // Normalize the shape to unit X2 so eta is the forcing size exactly.
    double g_x2;
    {
        Trajectory gt;
        gt.grid = grid;
        for (std::size_t i = 0; i <= n_steps; ++i) {
            gt.times.push_back(i * opts.dt);
            gt.states.push_back(g_raw[i]);
        }
        g_x2 = x_norms(gt, 0.0, opts.horizon).x2;
    }
    report.parameters.push_back("g_shape_x2 = " + fmt(g_x2));

    std::vector<double> x2_values;
    for (double eta : opts.etas) {
        std::vector<ComplexField> g(n_steps + 1, zero_field(grid));
        for (std::size_t i = 0; i <= n_steps; ++i) {
            g[i] = g_raw[i];
            for (auto& v : g[i].values) v *= eta / g_x2;
        }
        const Trajectory traj = forced_duhamel_solve(u0, spec, g, 0.0, opts.dt, 1);
        x2_values.push_back(x_norms(traj, 0.0, opts.horizon).x2);
    }

    std::ostringstream table;
    table << "x2_by_eta =";
    for (double v : x2_values) table << ' ' << fmt(v);
    report.parameters.push_back(table.str());

    // eta = 0 reduces to the unforced sweep entry.
    {
        EquationSpec clean = spec;
        const Trajectory unforced = solve(u0, clean, 0.0, opts.horizon, opts.dt);
        const double base = x_norms(unforced, 0.0, opts.horizon).x2;
        const double d = std::abs(x2_values.front() - base);
        report.parameters.push_back("unforced_x2 = " + fmt(base));
        report.rows.push_back(make_row("eta0_matches_unforced", d, "< 1e-12", d < 1e-12));

        const double ratio_small = x2_values[1] / base;
        report.rows.push_back(make_row("small_eta_ratio", ratio_small,
                                       "within factor 2 of unforced",
                                       ratio_small <= 2.0 && ratio_small >= 0.5));
    }

    // The bound degrades continuously: consecutive jumps stay under 2x.
    bool continuous = true;
    double worst_jump = 1.0;
    for (std::size_t i = 1; i < x2_values.size(); ++i) {
        const double jump = x2_values[i] / x2_values[i - 1];
        worst_jump = std::max(worst_jump, jump);
        continuous = continuous && jump < 2.0 && std::isfinite(jump);
    }
    report.rows.push_back(
        make_row("worst_consecutive_jump", worst_jump, "< 2 per eta increment", continuous));

    report.runtime_seconds = clock.seconds();
    return report;
}

// --------------------------------------------------------------------------
// subcritical limit

ExperimentReport subcritical_limit(const SubcriticalLimitOptions& opts) {
    Stopwatch clock;
    ExperimentReport report;
    report.name = "subcritical-limit";
    report.parameters = {"n = " + std::to_string(opts.n), "dt = " + fmt(opts.dt),
                         "mass = " + fmt(opts.mass)};

    const GridPtr grid = make_grid(opts.half_width, opts.n);
    const ComplexField u0 = gaussian_data(grid, opts.mass);

    auto run_eps = [&](double eps, const ComplexField& data) {
        EquationSpec spec;
        spec.epsilon = eps;
        return solve(data, spec, 0.0, opts.horizon, opts.dt);
    };

    const Trajectory base = run_eps(0.0, u0);

    std::vector<double> diffs;
    for (double eps : opts.epsilons) {
        diffs.push_back(x_diff(run_eps(eps, u0), base).sum());
    }
    std::ostringstream table;
    table << "x_diff_by_eps =";
    for (double v : diffs) table << ' ' << fmt(v);
    report.parameters.push_back(table.str());

    bool decreasing = true;
    for (std::size_t i = 1; i < diffs.size(); ++i) {
        decreasing = decreasing && diffs[i] < diffs[i - 1];
    }
    report.rows.push_back(make_row("differences_strictly_decreasing", decreasing ? 1.0 : 0.0,
                                   "== 1", decreasing));
    report.rows.push_back(make_row("last_over_first", diffs.back() / diffs.front(), "< 0.1",
                                   diffs.back() < 0.1 * diffs.front()));

    // eps = 0 against itself vanishes identically.
    {
        const double d = x_diff(run_eps(0.0, u0), base).sum();
        report.rows.push_back(make_row("eps0_self_difference", d, "== 0", d == 0.0));
    }

    // |u| = 1 plane wave: |u|^{4-eps} == |u|^4, the family collapses.
    {
        const double k1 = M_PI / grid->half_width;
        const ComplexField pw =
            make_field(grid, [&](double x) { return std::polar(1.0, k1 * x); });
        const double d = x_diff(run_eps(0.5, pw), run_eps(0.0, pw)).sum();
        report.rows.push_back(make_row("plane_wave_difference", d, "< 1e-10", d < 1e-10));
    }

    report.runtime_seconds = clock.seconds();
    return report;
}

// --------------------------------------------------------------------------
// focusing threshold

namespace {

struct CollapseOutcome {
    double sup_ratio = 1.0;
    bool aborted = false;
    double x2 = 0.0;
    std::size_t steps_run = 0;
};

CollapseOutcome focusing_run(const GridPtr& grid, double alpha, double horizon, double dt,
                             double stop_ratio) {
    ComplexField u = ground_state(grid);
    for (auto& v : u.values) v *= alpha;
    EquationSpec spec;
    spec.sign = -1.0;
    const double sup0 = lp_norm(u, std::numeric_limits<double>::infinity());

    CollapseOutcome out;
    const auto n_steps = static_cast<std::size_t>(std::llround(horizon / dt));
    double running = 0.0;
    double int5 = 0.0;
    double prev5 = std::pow(lp_norm(u, 10.0), 5.0);
    try {
        for (std::size_t i = 0; i < n_steps; ++i) {
            running += prev5 * dt;  // left endpoint, matching solve()
            u = step_deterministic(u, dt, spec, running);
            if (!all_finite(u)) throw BlowupError(i);
            const double sup = lp_norm(u, std::numeric_limits<double>::infinity());
            if (sup > 1e8) throw BlowupError(i);
            out.sup_ratio = std::max(out.sup_ratio, sup / sup0);
            const double cur5 = std::pow(lp_norm(u, 10.0), 5.0);
            int5 += 0.5 * dt * (prev5 + cur5);
            prev5 = cur5;
            out.steps_run = i + 1;
            if (out.sup_ratio >= stop_ratio) break;  // indicator tripped; stop early
        }
    } catch (const BlowupError&) {
        out.aborted = true;
    }
    out.x2 = std::pow(int5, 0.2);
    return out;
}

}  // namespace

ExperimentReport focusing_threshold(const FocusingThresholdOptions& opts) {
    Stopwatch clock;
    ExperimentReport report;
    report.name = "focusing-threshold";
    report.parameters = {"L = " + fmt(opts.half_width),
                         "n_bounded = " + std::to_string(opts.n_bounded),
                         "n_collapse_near = " + std::to_string(opts.n_collapse_near),
                         "n_collapse_violent = " + std::to_string(opts.n_collapse_violent)};

    // Ground-state oracles on a fine grid.
    {
        const GridPtr fine = make_grid(opts.half_width, 2048);
        const ComplexField q = ground_state(fine);
        const ComplexField qpp = spectral_derivative(q, 2);
        double res = 0.0;
        for (int j = 0; j < fine->n; ++j) {
            const double qq = q.values[j].real();
            res = std::max(res,
                           std::abs(-qpp.values[j].real() + qq - qq * qq * qq * qq * qq));
        }
        report.rows.push_back(make_row("ground_state_residual", res, "< 1e-8", res < 1e-8));

        const double mass2 = l2_norm(q) * l2_norm(q);
        const double target = std::sqrt(3.0) * M_PI / 2.0;
        report.rows.push_back(make_row("ground_state_mass_sq", mass2,
                                       "= sqrt(3) pi / 2 within 1e-6",
                                       std::abs(mass2 - target) < 1e-6));
    }

    // Soliton oracle at alpha = 1.
    {
        const GridPtr grid = make_grid(opts.half_width, 512);
        const ComplexField q = ground_state(grid);
        EquationSpec spec;
        spec.sign = -1.0;
        const Trajectory traj =
            solve(q, spec, 0.0, 1.0, 2e-4, SolveOptions{.snapshot_stride = 500});
        double worst = 0.0;
        for (std::size_t i = 0; i < traj.times.size(); ++i) {
            ComplexField ref = q;
            for (auto& v : ref.values) v *= std::polar(1.0, traj.times[i]);
            ComplexField diff = traj.states[i];
            for (int j = 0; j < diff.n(); ++j) diff.values[j] -= ref.values[j];
            worst = std::max(worst, l2_norm(diff));
        }
        report.rows.push_back(make_row("soliton_l2_error", worst, "< 1e-4", worst < 1e-4));
    }

    // Threshold scan.
    std::vector<int> verdicts;  // 0 bounded, 1 unbounded
    for (double alpha : opts.alphas) {
        const bool expect_bounded = alpha <= 0.9;
        CollapseOutcome out;
        if (expect_bounded) {
            const GridPtr grid = make_grid(opts.half_width, opts.n_bounded);
            out = focusing_run(grid, alpha, opts.horizon, opts.dt_bounded,
                               opts.sup_growth_factor);
        } else if (alpha < opts.violent_alpha) {
            const GridPtr grid = make_grid(opts.half_width, opts.n_collapse_near);
            out = focusing_run(grid, alpha, opts.horizon, opts.dt_collapse_near,
                               opts.sup_growth_factor);
        } else {
            const GridPtr grid = make_grid(opts.half_width, opts.n_collapse_violent);
            out = focusing_run(grid, alpha, opts.horizon, opts.dt_collapse_violent,
                               opts.sup_growth_factor);
        }
        const bool unbounded = out.aborted || out.sup_ratio >= opts.sup_growth_factor;
        verdicts.push_back(unbounded ? 1 : 0);
        const std::string label = "alpha_" + fmt(alpha);
        if (expect_bounded) {
            const bool ok = !unbounded && std::isfinite(out.x2);
            report.rows.push_back(make_row(label + "_sup_ratio", out.sup_ratio,
                                           "bounded: no abort, growth < 10x", ok));
            report.parameters.push_back(label + "_x2 = " + fmt(out.x2));
        } else {
            report.rows.push_back(make_row(label + "_sup_ratio", out.sup_ratio,
                                           "unbounded: abort or growth >= 10x", unbounded));
        }
    }

    bool monotone = true;
    for (std::size_t i = 1; i < verdicts.size(); ++i) {
        if (verdicts[i] < verdicts[i - 1]) monotone = false;
    }
    report.rows.push_back(
        make_row("verdicts_monotone_in_alpha", monotone ? 1.0 : 0.0, "== 1", monotone));

    report.runtime_seconds = clock.seconds();
    return report;
}

// --------------------------------------------------------------------------
// mass growth without the correction

ExperimentReport mass_growth_no_correction(const MassGrowthOptions& opts) {
    Stopwatch clock;
    ExperimentReport report;
    report.name = "mass-growth";
    report.parameters = {"n = " + std::to_string(opts.n), "dt = " + fmt(opts.dt),
                         "paths = " + std::to_string(opts.paths),
                         "gamma0 = " + fmt(opts.gamma0), "seed = " + std::to_string(opts.seed)};

    const GridPtr grid = make_grid(opts.half_width, opts.n);
    const ComplexField u0 = gaussian_data(grid, 1.0);
    const NoiseModel model = build_noise(opts.modes, opts.gamma0, opts.decay_s, grid);

    auto ensemble_mass = [&](NoiseConvention convention) {
        EquationSpec spec;
        spec.noise_on = true;
        spec.convention = convention;
        spec.ito_correction_on = (convention == NoiseConvention::stratonovich);
        std::vector<std::vector<double>> mass_sq(opts.paths);
        std::vector<double> drift(opts.paths, 0.0);
        parallel_for(static_cast<std::size_t>(opts.paths), [&](std::size_t p) {
            const Trajectory traj =
                solve(u0, spec, 0.0, opts.horizon, opts.dt,
                      SolveOptions{.snapshot_stride = opts.snapshot_stride,
                                   .noise = &model,
                                   .rng = RngState{opts.seed, p, 0}});
            std::vector<double> row(traj.times.size());
            const double m0 = l2_norm(traj.states.front());
            double worst = 0.0;
            for (std::size_t i = 0; i < traj.times.size(); ++i) {
                const double m = l2_norm(traj.states[i]);
                row[i] = m * m;
                worst = std::max(worst, std::abs(m - m0) / m0);
            }
            mass_sq[p] = std::move(row);
            drift[p] = worst;
        });
        return std::pair{mass_sq, drift};
    };

    const auto n_snaps =
        static_cast<std::size_t>(std::llround(opts.horizon / opts.dt)) / opts.snapshot_stride + 1;
    std::vector<double> times(n_snaps);
    for (std::size_t i = 0; i < n_snaps; ++i) times[i] = i * opts.dt * opts.snapshot_stride;

    auto fit_ensemble = [&](const std::vector<std::vector<double>>& mass_sq) {
        std::vector<double> log_mean(n_snaps, 0.0);
        for (std::size_t i = 0; i < n_snaps; ++i) {
            double acc = 0.0;
            for (int p = 0; p < opts.paths; ++p) acc += mass_sq[p][i];
            log_mean[i] = std::log(acc / opts.paths);
        }
        return fit_line(times, log_mean);
    };

    // Ito stepping without correction: exponential-in-time mean-square mass.
    {
        const auto [mass_sq, drift] = ensemble_mass(NoiseConvention::ito);
        (void)drift;
        const LineFit fit = fit_ensemble(mass_sq);
        report.parameters.push_back("ito_rate = " + fmt(fit.slope));
        report.rows.push_back(
            make_row("ito_fit_r_squared", fit.r_squared, "> 0.9", fit.r_squared > 0.9));
        report.rows.push_back(
            make_row("ito_rate_positive", fit.slope, "> 0", fit.slope > 0.0));
    }

    // Stratonovich twin: pathwise conservation, statistically zero rate.
    {
        const auto [mass_sq, drift] = ensemble_mass(NoiseConvention::stratonovich);
        double worst = 0.0;
        for (double d : drift) worst = std::max(worst, d);
        report.rows.push_back(
            make_row("stratonovich_max_drift", worst, "< 1e-10", worst < 1e-10));
        const LineFit fit = fit_ensemble(mass_sq);
        const double band = std::max(3.0 * fit.slope_stderr, 1e-10);
        report.rows.push_back(make_row("stratonovich_rate", fit.slope,
                                       "|rate| <= max(3 se, 1e-10)",
                                       std::abs(fit.slope) <= band));
    }

    // Single-mode closed form, dispersion frozen: the expected mass factors
    // through E|1 - i dW - dW^2/2|^2 = 1 + 3 (F dt)^2 / 4 pointwise.
    {
        const NoiseModel single = build_noise(1, opts.gamma0, opts.decay_s, grid);
        EquationSpec spec;
        spec.noise_on = true;
        spec.convention = NoiseConvention::ito;
        spec.ito_correction_on = false;
        spec.coupling = 0.0;
        spec.dispersion_on = false;
        const int paths = 256;
        const auto n_steps = static_cast<std::size_t>(std::llround(opts.horizon / opts.dt));
        std::vector<double> finals(paths);
        parallel_for(static_cast<std::size_t>(paths), [&](std::size_t p) {
            const Trajectory traj = solve(u0, spec, 0.0, opts.horizon, opts.dt,
                                          SolveOptions{.snapshot_stride = 1 << 20,
                                                       .noise = &single,
                                                       .rng = RngState{opts.seed + 1, p, 0}});
            const double m = l2_norm(traj.states.back());
            finals[p] = m * m;
        });
        double theory = 0.0;
        for (int j = 0; j < grid->n; ++j) {
            const double f = single.correction[j];
            theory += std::norm(u0.values[j]) *
                      std::pow(1.0 + 0.75 * f * f * opts.dt * opts.dt,
                               static_cast<double>(n_steps));
        }
        theory *= grid->dx;
        const double m_emp = mean(finals);
        const double se = std_error_of_mean(finals);
        const double z = std::abs(m_emp - theory) / se;
        report.parameters.push_back("single_mode_theory = " + fmt(theory) +
                                    ", empirical = " + fmt(m_emp));
        report.rows.push_back(
            make_row("single_mode_z_score", z, "<= 3 standard errors", z <= 3.0));
    }

    report.runtime_seconds = clock.seconds();
    return report;
}

// --------------------------------------------------------------------------
// Burkholder

ExperimentReport burkholder_experiment(const BurkholderOptions& opts) {
    Stopwatch clock;
    ExperimentReport report;
    report.name = "burkholder";
    report.parameters = {"n = " + std::to_string(opts.n), "steps = " + std::to_string(opts.steps),
                         "samples = " + std::to_string(opts.samples),
                         "p = " + fmt(opts.p), "rho = " + fmt(opts.rho),
                         "seed = " + std::to_string(opts.seed)};

    const GridPtr grid = make_grid(opts.half_width, opts.n);
    const NoiseModel model = build_noise(1, 1.0, 3.0, grid);

    auto constant_sigma = [&](int steps) {
        Trajectory sigma;
        sigma.grid = grid;
        const double dt = opts.horizon / steps;
        for (int i = 0; i <= steps; ++i) {
            sigma.times.push_back(i * dt);
            sigma.states.push_back(
                make_field(grid, [](double) { return cdouble(1.0, 0.0); }));
        }
        return sigma;
    };

    const BurkholderResult base =
        burkholder_check(constant_sigma(opts.steps), model, opts.p, opts.rho, opts.samples,
                         opts.seed);
    report.parameters.push_back("numerator = " + fmt(base.numerator) +
                                ", denominator = " + fmt(base.denominator));
    report.rows.push_back(make_row("scalar_bm_ratio", base.ratio, "in [1/4, 4]",
                                   base.ratio >= 0.25 && base.ratio <= 4.0));

    const BurkholderResult fine =
        burkholder_check(constant_sigma(2 * opts.steps), model, opts.p, opts.rho, opts.samples,
                         opts.seed + 1);
    const double stability = fine.ratio / base.ratio;
    report.rows.push_back(make_row("dt_halving_ratio", stability, "in [1/2, 2]",
                                   stability >= 0.5 && stability <= 2.0));

    // sigma == 0 is the guarded 0/0 case.
    {
        Trajectory zero_sigma = constant_sigma(8);
        for (auto& s : zero_sigma.states) {
            for (auto& v : s.values) v = cdouble(0.0, 0.0);
        }
        const BurkholderResult degen =
            burkholder_check(zero_sigma, model, opts.p, opts.rho, 16, opts.seed);
        report.rows.push_back(make_row("degenerate_flagged", degen.degenerate ? 1.0 : 0.0,
                                       "ratio 0 with flag", degen.degenerate && degen.ratio == 0.0));
    }

    report.runtime_seconds = clock.seconds();
    return report;
}

// --------------------------------------------------------------------------
// dispatch

std::vector<std::string> experiment_names() {
    return {"stability",       "uniform-bound",     "perturbed-duhamel", "subcritical-limit",
            "focusing-threshold", "mass-growth",    "burkholder"};
}

ExperimentReport run_experiment(const std::string& name, std::uint64_t seed) {
    if (name == "stability") return stability_experiment();
    if (name == "uniform-bound") return uniform_bound_sweep();
    if (name == "perturbed-duhamel") {
        PerturbedDuhamelOptions opts;
        opts.seed = seed;
        return perturbed_duhamel_experiment(opts);
    }
    if (name == "subcritical-limit") return subcritical_limit();
    if (name == "focusing-threshold") return focusing_threshold();
    if (name == "mass-growth") {
        MassGrowthOptions opts;
        opts.seed = seed;
        return mass_growth_no_correction(opts);
    }
    if (name == "burkholder") {
        BurkholderOptions opts;
        opts.seed = seed;
        return burkholder_experiment(opts);
    }
    std::string names;
    for (const auto& n : experiment_names()) names += " " + n;
    throw std::invalid_argument("unknown experiment '" + name + "'; valid names:" + names);
}

}  // namespace snls
