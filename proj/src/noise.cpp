#include "snls/noise.hpp"

#include <cmath>
#include <stdexcept>

#include "snls/fft.hpp"

namespace snls {

double h_norm(const ComplexField& f, const WeightedSpaceParams& params) {
    if (params.weight_exponent < 0 || params.derivative_count < 0) {
        throw std::invalid_argument("h_norm: K and N must be non-negative");
    }
    const int n = f.n();
    const auto& k = f.grid->wavenumbers;
    const auto& x = f.grid->points;
    const double kmax = M_PI * (f.grid->n / 2) / f.grid->half_width;

    std::vector<cdouble> hat = fft_forward(f.values);

    // Resolution guard: the top-derivative integrand must have decayed by the
    // outer octave of the spectrum, otherwise the differentiation is aliased.
    if (params.derivative_count > 0) {
        const int N = params.derivative_count;
        double tail = 0.0, total = 0.0;
        for (int j = 0; j < n; ++j) {
            const double w = std::norm(hat[j]) * std::pow(std::abs(k[j]), 2.0 * N);
            total += w;
            if (std::abs(k[j]) > 0.875 * kmax) tail += w;
        }
        if (total > 0.0 && tail / total > 1e-3) {
            throw std::invalid_argument("h_norm: derivative order not resolved on this grid");
        }
    }

    double acc = 0.0;
    const int j_start = params.include_zeroth ? 0 : 1;
    for (int order = j_start; order <= params.derivative_count; ++order) {
        std::vector<cdouble> dh(n);
        for (int j = 0; j < n; ++j) {
            dh[j] = hat[j] * std::pow(cdouble(0.0, k[j]), order);
        }
        fft_inverse_inplace(dh);
        double term = 0.0;
        for (int j = 0; j < n; ++j) {
            const double w = 1.0 + std::pow(std::abs(x[j]), params.weight_exponent);
            term += w * w * std::norm(dh[j]);
        }
        acc += term * f.grid->dx;
    }
    return std::sqrt(acc);
}

std::vector<std::vector<double>> hermite_functions(const Grid1D& grid, int count) {
    // e_0 = pi^{-1/4} e^{-x^2/2}; e_{k} via the stable two-term recurrence
    // e_k = x sqrt(2/k) e_{k-1} - sqrt((k-1)/k) e_{k-2}.
    std::vector<std::vector<double>> e(count, std::vector<double>(grid.n));
    for (int j = 0; j < grid.n; ++j) {
        const double x = grid.points[j];
        e[0][j] = std::pow(M_PI, -0.25) * std::exp(-0.5 * x * x);
        if (count > 1) e[1][j] = std::sqrt(2.0) * x * e[0][j];
    }
    for (int kk = 2; kk < count; ++kk) {
        const double a = std::sqrt(2.0 / kk);
        const double b = std::sqrt((kk - 1.0) / kk);
        for (int j = 0; j < grid.n; ++j) {
            e[kk][j] = a * grid.points[j] * e[kk - 1][j] - b * e[kk - 2][j];
        }
    }
    return e;
}

NoiseModel build_noise(int modes, double gamma0, double decay_s, const GridPtr& grid,
                       const WeightedSpaceParams& params) {
    if (modes < 1) throw std::invalid_argument("build_noise: need at least one mode");
    if (gamma0 < 0.0) throw std::invalid_argument("build_noise: gamma0 must be >= 0");
    if (!(decay_s > 0.0)) throw std::invalid_argument("build_noise: decay rate must be > 0");

    NoiseModel model;
    model.grid = grid;
    model.modes = modes;
    model.gamma0 = gamma0;
    model.decay_s = decay_s;
    model.basis = hermite_functions(*grid, modes);

    // Gram check doubles as the resolution test: an unresolved top mode
    // breaks orthonormality under grid quadrature.
    for (int a = 0; a < modes; ++a) {
        for (int b = a; b < modes; ++b) {
            double g = 0.0;
            for (int j = 0; j < grid->n; ++j) g += model.basis[a][j] * model.basis[b][j];
            g *= grid->dx;
            const double expect = (a == b) ? 1.0 : 0.0;
            if (std::abs(g - expect) > 1e-8) {
                throw std::invalid_argument(
                    "build_noise: Hermite mode " + std::to_string(modes - 1) +
                    " is not resolved on this grid (Gram defect)");
            }
        }
    }

    model.gammas.resize(modes);
    for (int k = 0; k < modes; ++k) {
        model.gammas[k] = gamma0 * std::pow(1.0 + k, -decay_s);
    }

    model.correction.assign(grid->n, 0.0);
    for (int k = 0; k < modes; ++k) {
        const double g2 = model.gammas[k] * model.gammas[k];
        for (int j = 0; j < grid->n; ++j) {
            model.correction[j] += g2 * model.basis[k][j] * model.basis[k][j];
        }
    }

    // Trace-class surrogate sum_k gamma_k |e_k|_H, reported on the model.
    for (int k = 0; k < modes; ++k) {
        ComplexField ek;
        ek.grid = grid;
        ek.values.assign(grid->n, cdouble(0.0, 0.0));
        for (int j = 0; j < grid->n; ++j) ek.values[j] = model.basis[k][j];
        model.trace_proxy += model.gammas[k] * h_norm(ek, params);
    }
    return model;
}

double correction_invariance_check(const NoiseModel& model, double angle) {
    if (model.modes < 2) {
        throw std::invalid_argument("correction_invariance_check: need at least two modes");
    }
    if (model.gammas[0] != model.gammas[1]) {
        throw std::invalid_argument(
            "correction_invariance_check: requires gamma_0 == gamma_1");
    }
    const double c = std::cos(angle), s = std::sin(angle);
    const int n = model.grid->n;
    double worst = 0.0;
    for (int j = 0; j < n; ++j) {
        const double r0 = c * model.basis[0][j] + s * model.basis[1][j];
        const double r1 = -s * model.basis[0][j] + c * model.basis[1][j];
        double rotated = model.gammas[0] * model.gammas[0] * (r0 * r0 + r1 * r1);
        for (int k = 2; k < model.modes; ++k) {
            rotated += model.gammas[k] * model.gammas[k] * model.basis[k][j] * model.basis[k][j];
        }
        worst = std::max(worst, std::abs(rotated - model.correction[j]));
    }
    return worst;
}

std::vector<double> sample_increment(const NoiseModel& model, double dt, const RngState& state) {
    if (!(dt > 0.0)) throw std::invalid_argument("sample_increment: dt must be positive");
    const int n = model.grid->n;
    std::vector<double> dw(n, 0.0);
    const double root_dt = std::sqrt(dt);
    for (int k = 0; k < model.modes; ++k) {
        if (model.gammas[k] == 0.0) continue;
        const double xi = normal_draw(state.seed, state.path, state.step, k);
        const double amp = root_dt * model.gammas[k] * xi;
        for (int j = 0; j < n; ++j) dw[j] += amp * model.basis[k][j];
    }
    return dw;
}

}  // namespace snls
