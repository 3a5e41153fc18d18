#include "snls/spectral.hpp"

#include <cmath>
#include <stdexcept>

#include "snls/fft.hpp"
#include "snls/stats.hpp"

namespace snls {

ComplexField free_propagate(const ComplexField& f, double t) {
    if (!std::isfinite(t)) {
        throw std::invalid_argument("free_propagate: t must be finite");
    }
    ComplexField out = f;
    fft_forward_inplace(out.values);
    const auto& k = f.grid->wavenumbers;
    for (int j = 0; j < f.n(); ++j) {
        out.values[j] *= std::polar(1.0, -k[j] * k[j] * t);
    }
    fft_inverse_inplace(out.values);
    return out;
}

ComplexField spectral_derivative(const ComplexField& f, int order) {
    if (order < 0) throw std::invalid_argument("spectral_derivative: order must be >= 0");
    ComplexField out = f;
    if (order == 0) return out;
    fft_forward_inplace(out.values);
    const auto& k = f.grid->wavenumbers;
    for (int j = 0; j < f.n(); ++j) {
        out.values[j] *= std::pow(cdouble(0.0, k[j]), order);
    }
    fft_inverse_inplace(out.values);
    return out;
}

double dispersive_decay_fit(const ComplexField& f, const std::vector<double>& t_samples) {
    if (t_samples.size() < 2) {
        throw std::invalid_argument("dispersive_decay_fit: need at least two times");
    }
    if (l2_norm(f) == 0.0) {
        throw std::invalid_argument("dispersive_decay_fit: zero field has no decay law");
    }
    std::vector<double> log_t, log_sup;
    const double outer = 0.875 * f.grid->half_width;
    for (double t : t_samples) {
        if (t < 1.0 || t > 10.0) {
            throw std::invalid_argument("dispersive_decay_fit: t samples must lie in [1, 10]");
        }
        ComplexField u = free_propagate(f, t);
        if (mass_fraction_outside(u, outer) > 1e-6) {
            throw std::invalid_argument(
                "dispersive_decay_fit: boundary wrap-around exceeds 1e-6 of mass");
        }
        log_t.push_back(std::log(t));
        log_sup.push_back(std::log(lp_norm(u, std::numeric_limits<double>::infinity())));
    }
    return fit_line(log_t, log_sup).slope;
}

bool admissible_pair(double q, double r) {
    if (q < 2.0 || r < 2.0) return false;
    const double lhs = (std::isinf(q) ? 0.0 : 2.0 / q) + (std::isinf(r) ? 0.0 : 1.0 / r);
    return std::abs(lhs - 0.5) <= 1e-12;
}

double strichartz_ratio(const ComplexField& f, double q, double r, double horizon,
                        int time_steps) {
    if (!admissible_pair(q, r)) {
        throw std::invalid_argument("strichartz_ratio: (q, r) is not admissible");
    }
    const double mass = l2_norm(f);
    if (mass == 0.0) {
        throw std::invalid_argument("strichartz_ratio: zero field");
    }
    if (!(horizon > 0.0) || time_steps < 1) {
        throw std::invalid_argument("strichartz_ratio: horizon and steps must be positive");
    }
    const double dt = horizon / time_steps;
    if (std::isinf(q)) {
        double sup = 0.0;
        for (int i = 0; i <= time_steps; ++i) {
            sup = std::max(sup, lp_norm(free_propagate(f, i * dt), r));
        }
        return sup / mass;
    }
    double acc = 0.0;
    for (int i = 0; i <= time_steps; ++i) {
        const double w = (i == 0 || i == time_steps) ? 0.5 : 1.0;
        acc += w * dt * std::pow(lp_norm(free_propagate(f, i * dt), r), q);
    }
    return std::pow(acc, 1.0 / q) / mass;
}

}  // namespace snls
