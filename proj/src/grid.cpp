#include "snls/grid.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace snls {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

GridPtr make_grid(double half_width, int n) {
    if (!(half_width > 0.0)) {
        throw std::invalid_argument("make_grid: half width must be positive");
    }
    if (!is_power_of_two(n) || n < 8) {
        throw std::invalid_argument("make_grid: n must be a power of two >= 8");
    }
    auto g = std::make_shared<Grid1D>();
    g->half_width = half_width;
    g->n = n;
    g->dx = 2.0 * half_width / n;
    g->points.resize(n);
    g->wavenumbers.resize(n);
    const double k0 = M_PI / half_width;
    for (int j = 0; j < n; ++j) {
        g->points[j] = -half_width + j * g->dx;
        const int s = (j < n / 2) ? j : j - n;  // signed index, FFT ordering
        g->wavenumbers[j] = k0 * s;
    }
    return g;
}

ComplexField make_field(const GridPtr& grid, const std::function<cdouble(double)>& f) {
    ComplexField out;
    out.grid = grid;
    out.values.resize(grid->n);
    for (int j = 0; j < grid->n; ++j) out.values[j] = f(grid->points[j]);
    return out;
}

ComplexField zero_field(const GridPtr& grid) {
    ComplexField out;
    out.grid = grid;
    out.values.assign(grid->n, cdouble(0.0, 0.0));
    return out;
}

bool all_finite(const ComplexField& f) {
    for (const auto& v : f.values) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    }
    return true;
}

double l2_norm(const ComplexField& f) {
    double acc = 0.0;
    for (const auto& v : f.values) acc += std::norm(v);
    return std::sqrt(acc * f.grid->dx);
}

double lp_norm(const ComplexField& f, double p) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (const auto& v : f.values) m = std::max(m, std::abs(v));
        return m;
    }
    if (!(p >= 1.0)) {
        throw std::invalid_argument("lp_norm: p must be >= 1");
    }
    if (p == 2.0) return l2_norm(f);
    double acc = 0.0;
    if (p == 10.0) {  // |v|^10 = (|v|^2)^5, avoids pow in the solver's hot path
        for (const auto& v : f.values) {
            const double a2 = std::norm(v);
            acc += a2 * a2 * a2 * a2 * a2;
        }
    } else {
        for (const auto& v : f.values) acc += std::pow(std::abs(v), p);
    }
    return std::pow(acc * f.grid->dx, 1.0 / p);
}

double mass_fraction_outside(const ComplexField& f, double threshold) {
    double total = 0.0, outside = 0.0;
    for (int j = 0; j < f.n(); ++j) {
        const double m = std::norm(f.values[j]);
        total += m;
        if (std::abs(f.grid->points[j]) > threshold) outside += m;
    }
    return total > 0.0 ? outside / total : 0.0;
}

}  // namespace snls
