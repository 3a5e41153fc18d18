#include "snls/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "snls/fft.hpp"

namespace snls {

namespace {

std::size_t index_of_time(const std::vector<double>& times, double t, const char* what) {
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (std::abs(times[i] - t) <= 1e-12 * std::max(1.0, std::abs(t))) return i;
    }
    throw std::invalid_argument(std::string(what) + ": time is not a stored snapshot");
}

double l10_norm_of(const std::vector<cdouble>& v, double dx) {
    double acc = 0.0;
    for (const auto& z : v) {
        const double a2 = std::norm(z);
        acc += a2 * a2 * a2 * a2 * a2;
    }
    return std::pow(acc * dx, 0.1);
}

}  // namespace

XNorms x_norms(const Trajectory& traj, double a, double b) {
    if (!(b > a)) throw std::invalid_argument("x_norms: empty window");
    const std::size_t ia = index_of_time(traj.times, a, "x_norms");
    const std::size_t ib = index_of_time(traj.times, b, "x_norms");
    if (ib <= ia) throw std::invalid_argument("x_norms: empty window");

    XNorms out;
    out.x1 = l2_norm(traj.states[ia]);
    double int5 = 0.0;
    double prev = std::pow(lp_norm(traj.states[ia], 10.0), 5.0);
    for (std::size_t i = ia + 1; i <= ib; ++i) {
        out.x1 = std::max(out.x1, l2_norm(traj.states[i]));
        const double cur = std::pow(lp_norm(traj.states[i], 10.0), 5.0);
        int5 += 0.5 * (traj.times[i] - traj.times[i - 1]) * (prev + cur);
        prev = cur;
    }
    out.x2 = std::pow(int5, 0.2);
    return out;
}

namespace {

// Prefix sums of S(-s_i) u(s_i) dW_i in Fourier space, up to step `upto`.
// S(t - s_i) then factors as a single phase multiply per pair.
std::vector<std::vector<cdouble>> noise_prefixes(const Trajectory& traj, std::size_t upto) {
    const int n = traj.grid->n;
    const auto& k = traj.grid->wavenumbers;
    std::vector<std::vector<cdouble>> prefix(upto + 1, std::vector<cdouble>(n, cdouble(0, 0)));
    for (std::size_t i = 0; i < upto; ++i) {
        std::vector<cdouble> term(n);
        for (int j = 0; j < n; ++j) {
            term[j] = traj.states[i].values[j] * traj.noise_record[i][j];
        }
        fft_forward_inplace(term);
        const double s = traj.times[i];
        for (int j = 0; j < n; ++j) {
            prefix[i + 1][j] = prefix[i][j] + term[j] * std::polar(1.0, k[j] * k[j] * s);
        }
    }
    return prefix;
}

double sup_over_pairs(const Trajectory& traj,
                      const std::vector<std::vector<cdouble>>& prefix, std::size_t it,
                      double t) {
    const int n = traj.grid->n;
    const auto& k = traj.grid->wavenumbers;
    double best = 0.0;
    std::vector<cdouble> diff(n);
    for (std::size_t j1 = 0; j1 < it; ++j1) {
        for (std::size_t j2 = j1 + 1; j2 <= it; ++j2) {
            for (int j = 0; j < n; ++j) {
                diff[j] = (prefix[j2][j] - prefix[j1][j]) * std::polar(1.0, -k[j] * k[j] * t);
            }
            fft_inverse_inplace(diff);
            best = std::max(best, l10_norm_of(diff, traj.grid->dx));
        }
    }
    return best;
}

void require_noise_record(const Trajectory& traj) {
    if (!traj.stores_every_step()) {
        throw std::invalid_argument("maximal_function: trajectory must store every step");
    }
    if (traj.noise_record.size() != traj.times.size() - 1) {
        throw std::invalid_argument("maximal_function: noise record is missing");
    }
}

}  // namespace

std::vector<double> maximal_function_curve(const Trajectory& traj) {
    require_noise_record(traj);
    const auto prefix = noise_prefixes(traj, traj.noise_record.size());
    std::vector<double> curve(traj.times.size(), 0.0);
    for (std::size_t it = 0; it < traj.times.size(); ++it) {
        curve[it] = sup_over_pairs(traj, prefix, it, traj.times[it]);
    }
    return curve;
}

double maximal_function(const Trajectory& traj, double t) {
    require_noise_record(traj);
    const std::size_t it = index_of_time(traj.times, t, "maximal_function");
    const auto prefix = noise_prefixes(traj, it);
    return sup_over_pairs(traj, prefix, it, t);
}

std::vector<double> random_dissection(std::span<const double> mstar,
                                      std::span<const double> times, double eta, double T0) {
    if (!(eta > 0.0)) throw std::invalid_argument("random_dissection: eta must be positive");
    if (mstar.size() != times.size() || times.size() < 2) {
        throw std::invalid_argument("random_dissection: mismatched sampling");
    }
    std::vector<double> cuts{times.front()};
    double acc = 0.0;
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (times[i] > T0 + 1e-12) break;
        const double p5 = std::pow(mstar[i - 1], 5.0);
        const double c5 = std::pow(mstar[i], 5.0);
        acc += 0.5 * (times[i] - times[i - 1]) * (p5 + c5);
        if (acc >= 0.5 * eta) {
            cuts.push_back(times[i]);
            acc = 0.0;
        }
    }
    if (cuts.back() != T0) cuts.push_back(T0);
    return cuts;
}

EnsembleStats ensemble_moment(const std::vector<Trajectory>& trajs, double rho, double a,
                              double b) {
    if (rho < 1.0) throw std::invalid_argument("ensemble_moment: rho must be >= 1");
    if (trajs.size() < 2) throw std::invalid_argument("ensemble_moment: need >= 2 paths");
    for (const auto& t : trajs) {
        if (t.grid->n != trajs.front().grid->n ||
            t.times.size() != trajs.front().times.size()) {
            throw std::invalid_argument("ensemble_moment: mismatched trajectory configs");
        }
    }
    const std::size_t m = trajs.size();
    std::vector<double> powered(m);
    for (std::size_t i = 0; i < m; ++i) {
        powered[i] = std::pow(x_norms(trajs[i], a, b).sum(), rho);
    }
    double total = 0.0;
    for (double v : powered) total += v;

    EnsembleStats stats;
    stats.rho = rho;
    stats.sample_count = m;
    stats.estimate = std::pow(total / m, 1.0 / rho);

    // Jackknife over leave-one-out estimates.
    std::vector<double> loo(m);
    double loo_mean = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        loo[i] = std::pow((total - powered[i]) / (m - 1), 1.0 / rho);
        loo_mean += loo[i];
    }
    loo_mean /= m;
    double acc = 0.0;
    for (double v : loo) acc += (v - loo_mean) * (v - loo_mean);
    stats.std_error = std::sqrt(acc * (m - 1) / m);
    return stats;
}

BurkholderResult burkholder_check(const Trajectory& sigma, const NoiseModel& model, double p,
                                  double rho, int samples, std::uint64_t seed) {
    if (p < 2.0) throw std::invalid_argument("burkholder_check: p must be >= 2");
    if (rho < 1.0) throw std::invalid_argument("burkholder_check: rho must be >= 1");
    if (samples < 2) throw std::invalid_argument("burkholder_check: need >= 2 samples");
    const std::size_t steps = sigma.times.size() - 1;
    const int n = sigma.grid->n;

    BurkholderResult out;

    // Denominator is deterministic: trapezoid of sum_k gamma_k^2 || sigma(s) e_k ||_p^2.
    double integral = 0.0;
    std::vector<double> mode_sum(sigma.times.size(), 0.0);
    for (std::size_t i = 0; i < sigma.times.size(); ++i) {
        double acc = 0.0;
        for (int k = 0; k < model.modes; ++k) {
            ComplexField prod;
            prod.grid = sigma.grid;
            prod.values.resize(n);
            for (int j = 0; j < n; ++j) {
                prod.values[j] = sigma.states[i].values[j] * model.basis[k][j];
            }
            const double nrm = lp_norm(prod, p);
            acc += model.gammas[k] * model.gammas[k] * nrm * nrm;
        }
        mode_sum[i] = acc;
    }
    for (std::size_t i = 1; i < sigma.times.size(); ++i) {
        integral += 0.5 * (sigma.times[i] - sigma.times[i - 1]) * (mode_sum[i] + mode_sum[i - 1]);
    }
    out.denominator = std::pow(integral, 0.5 * rho);

    if (out.denominator == 0.0) {
        out.degenerate = true;
        out.ratio = 0.0;
        return out;
    }

    // Numerator by Monte Carlo over the left-point discrete integral.
    double acc_num = 0.0;
    for (int w = 0; w < samples; ++w) {
        std::vector<cdouble> integral_path(n, cdouble(0.0, 0.0));
        double sup = 0.0;
        for (std::size_t i = 0; i < steps; ++i) {
            const double dt = sigma.times[i + 1] - sigma.times[i];
            RngState state{seed, static_cast<uint64_t>(w), i};
            const std::vector<double> dw = sample_increment(model, dt, state);
            for (int j = 0; j < n; ++j) {
                integral_path[j] += sigma.states[i].values[j] * dw[j];
            }
            ComplexField snap;
            snap.grid = sigma.grid;
            snap.values = integral_path;
            sup = std::max(sup, lp_norm(snap, p));
        }
        acc_num += std::pow(sup, rho);
    }
    out.numerator = acc_num / samples;
    out.ratio = out.numerator / out.denominator;
    return out;
}

}  // namespace snls
