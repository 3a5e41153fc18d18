#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <vector>

namespace snls {

using cdouble = std::complex<double>;

/// Periodic truncation of the line to [-L, L) with n collocation points.
/// Wavenumbers follow FFT ordering: signed index s in {0,...,n/2-1,-n/2,...,-1},
/// physical value k_j = pi * s / L. Immutable after construction.
struct Grid1D {
    double half_width = 0.0;  // L
    int n = 0;                // power of two, >= 8
    double dx = 0.0;          // 2L/n
    std::vector<double> points;       // x_j = -L + j dx
    std::vector<double> wavenumbers;  // FFT ordering
};

using GridPtr = std::shared_ptr<const Grid1D>;

/// Throws std::invalid_argument for non-positive L or n not a power of two >= 8.
GridPtr make_grid(double half_width, int n);

/// A complex-valued state on a Grid1D.
struct ComplexField {
    GridPtr grid;
    std::vector<cdouble> values;

    int n() const { return grid ? grid->n : 0; }
};

ComplexField make_field(const GridPtr& grid, const std::function<cdouble(double)>& f);
ComplexField zero_field(const GridPtr& grid);

/// True if every entry is finite (no NaN/Inf).
bool all_finite(const ComplexField& f);

/// sqrt( sum_j |f_j|^2 dx ).  Rectangle rule; spectrally accurate for smooth
/// periodic integrands.
double l2_norm(const ComplexField& f);

/// ( sum_j |f_j|^p dx )^{1/p}; p = infinity means max_j |f_j|.
/// Throws std::invalid_argument for p < 1.
double lp_norm(const ComplexField& f, double p);

/// Mass fraction carried by points with |x| > threshold (relative to total).
/// Returns 0 for the zero field.
double mass_fraction_outside(const ComplexField& f, double threshold);

}  // namespace snls
