#include "snls/symmetry.hpp"

#include <cmath>
#include <stdexcept>

#include "snls/fft.hpp"
#include "snls/spectral.hpp"

namespace snls {

namespace {

double snapped_boost(double xi0, const Grid1D& grid) {
    // A boost must be a grid wavenumber, otherwise the modulated field is
    // discontinuous across the periodic seam.
    const double k0 = M_PI / grid.half_width;
    const double snapped = std::round(xi0 / k0) * k0;
    if (std::abs(snapped - xi0) > 1e-9 * std::max(1.0, std::abs(xi0))) {
        throw std::invalid_argument(
            "symmetry: boost xi0 must be an integer multiple of pi/L");
    }
    return snapped;
}

void check_scale(double lambda0, const GroupOptions& opts) {
    if (!(lambda0 > 0.0)) {
        throw std::invalid_argument("symmetry: lambda0 must be positive");
    }
    if (lambda0 < opts.lambda_min || lambda0 > opts.lambda_max) {
        throw std::invalid_argument("symmetry: lambda0 outside the resolved range");
    }
}

void check_nyquist(const std::vector<cdouble>& hat, const Grid1D& grid, double lambda0,
                   const GroupOptions& opts) {
    if (lambda0 >= 1.0) return;  // dilation narrows the spectrum
    const double kmax = M_PI * (grid.n / 2) / grid.half_width;
    double total = 0.0, tail = 0.0;
    for (int j = 0; j < grid.n; ++j) {
        const double w = std::norm(hat[j]);
        total += w;
        if (std::abs(grid.wavenumbers[j]) > lambda0 * kmax) tail += w;
    }
    if (total > 0.0 && tail / total > opts.nyquist_tolerance) {
        throw std::invalid_argument(
            "symmetry: dilation pushes content past the Nyquist wavenumber");
    }
}

/// lambda0^{-1/2} * interpolant of h evaluated at (x_j - shift)/lambda0,
/// with the argument wrapped into the periodic cell.
ComplexField dilate_translate(const ComplexField& h, double lambda0, double shift,
                              const GroupOptions& opts) {
    const Grid1D& grid = *h.grid;
    const int n = grid.n;
    const double L = grid.half_width;
    const double scale = 1.0 / std::sqrt(lambda0);

    std::vector<cdouble> hat = fft_forward(h.values);
    check_nyquist(hat, grid, lambda0, opts);

    ComplexField out;
    out.grid = h.grid;
    out.values.assign(n, cdouble(0.0, 0.0));

    if (lambda0 == 1.0) {
        // Pure translation: exact phase shift in Fourier space.
        for (int j = 0; j < n; ++j) {
            hat[j] *= std::polar(1.0, -grid.wavenumbers[j] * shift);
        }
        fft_inverse_inplace(hat);
        for (int j = 0; j < n; ++j) out.values[j] = scale * hat[j];
        return out;
    }

    // Direct evaluation of the trigonometric interpolant at the target points.
    // The DFT indexes samples from x = -L, so the evaluation phase is
    // k (y + L), not k y.
    for (int j = 0; j < n; ++j) {
        double y = (grid.points[j] - shift) / lambda0;
        y = std::remainder(y, 2.0 * L);  // periodic argument reduction
        cdouble acc(0.0, 0.0);
        for (int s = 0; s < n; ++s) {
            acc += hat[s] * std::polar(1.0, grid.wavenumbers[s] * (y + L));
        }
        out.values[j] = scale * acc / static_cast<double>(n);
    }
    return out;
}

void modulate_inplace(ComplexField& f, double xi0, double phase_shift) {
    if (xi0 == 0.0 && phase_shift == 0.0) return;
    for (int j = 0; j < f.n(); ++j) {
        f.values[j] *= std::polar(1.0, xi0 * f.grid->points[j] + phase_shift);
    }
}

void check_support(const ComplexField& f, const GroupOptions& opts) {
    if (mass_fraction_outside(f, 0.5 * f.grid->half_width) > opts.support_tolerance) {
        throw std::invalid_argument("symmetry: transformed field leaks mass outside [-L/2, L/2]");
    }
}

}  // namespace

ComplexField apply_group(const SymmetryElement& g, const ComplexField& f,
                         const GroupOptions& opts) {
    if (g.is_identity()) return f;
    check_scale(g.lambda0, opts);
    const double xi0 = snapped_boost(g.xi0, *f.grid);

    ComplexField h = f;
    if (g.t0 != 0.0) {
        h = free_propagate(h, -g.t0 / (g.lambda0 * g.lambda0));
    }
    ComplexField out = dilate_translate(h, g.lambda0, g.x0, opts);
    modulate_inplace(out, xi0, 0.0);
    check_support(out, opts);
    return out;
}

Trajectory spacetime_deform(const Trajectory& traj, const SymmetryElement& g,
                            const GroupOptions& opts) {
    if (traj.states.empty()) {
        throw std::invalid_argument("spacetime_deform: empty trajectory");
    }
    if (g.is_identity()) {
        Trajectory copy = traj;
        return copy;
    }
    check_scale(g.lambda0, opts);
    const double xi0 = snapped_boost(g.xi0, *traj.grid);
    const double l2 = g.lambda0 * g.lambda0;

    Trajectory out;
    out.grid = traj.grid;
    out.step_dt = traj.step_dt * l2;
    out.total_steps = traj.total_steps;
    out.snapshot_stride = traj.snapshot_stride;
    out.times.reserve(traj.times.size());
    out.states.reserve(traj.states.size());

    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const double t_new = g.t0 + l2 * traj.times[i];
        const double shift = g.x0 + 2.0 * xi0 * t_new;
        ComplexField v = dilate_translate(traj.states[i], g.lambda0, shift, opts);
        modulate_inplace(v, xi0, -xi0 * xi0 * t_new);
        check_support(v, opts);
        out.times.push_back(t_new);
        out.states.push_back(std::move(v));
    }

    // Left-endpoint running X2^5 on the new time grid; the driving-noise
    // record does not transport under the deformation.
    out.running_x2_pow5.assign(out.times.size(), 0.0);
    for (std::size_t i = 1; i < out.times.size(); ++i) {
        double acc = 0.0;
        for (const auto& v : out.states[i - 1].values) {
            const double a2 = std::norm(v);
            acc += a2 * a2 * a2 * a2 * a2;
        }
        const double integrand = std::sqrt(acc * out.grid->dx);
        out.running_x2_pow5[i] =
            out.running_x2_pow5[i - 1] + integrand * (out.times[i] - out.times[i - 1]);
    }
    return out;
}

double orthogonality_gap(const SymmetryElement& g1, const SymmetryElement& g2) {
    const double ratio = g1.lambda0 / g2.lambda0;
    return ratio + 1.0 / ratio + std::abs((g1.x0 - g2.x0) / g1.lambda0) +
           std::abs(g1.lambda0 * (g1.xi0 - g2.xi0)) +
           std::abs((g1.t0 - g2.t0) / (g1.lambda0 * g1.lambda0));
}

}  // namespace snls
