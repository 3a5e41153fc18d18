#pragma once

#include "snls/dynamics.hpp"
#include "snls/grid.hpp"

namespace snls {

/// Element (x0, xi0, lambda0, t0) of the unitary group acting on L^2:
///   (g f)(x) = lambda0^{-1/2} e^{i x xi0} (S(-t0/lambda0^2) f)((x - x0)/lambda0).
struct SymmetryElement {
    double x0 = 0.0;       // translation
    double xi0 = 0.0;      // Galilean boost; must be a grid wavenumber
    double lambda0 = 1.0;  // positive scale
    double t0 = 0.0;       // time shift

    bool is_identity() const { return x0 == 0.0 && xi0 == 0.0 && lambda0 == 1.0 && t0 == 0.0; }
};

struct GroupOptions {
    // Scales outside [lambda_min, lambda_max] are rejected; widening is opt-in
    // and requires a grid that resolves both the original and dilated field.
    double lambda_min = 0.125;
    double lambda_max = 8.0;
    double support_tolerance = 1e-8;   // max mass fraction outside [-L/2, L/2]
    double nyquist_tolerance = 1e-10;  // max spectral mass pushed past Nyquist
};

/// Applies g to f. Dilation/translation use band-limited Fourier
/// interpolation, the boost is an exact modulation, the time component is the
/// exact free flow. Throws std::invalid_argument when the scale is out of
/// range, the boost is not a grid wavenumber, the dilated content would pass
/// the Nyquist wavenumber, or the result leaks mass outside [-L/2, L/2].
ComplexField apply_group(const SymmetryElement& g, const ComplexField& f,
                         const GroupOptions& opts = {});

/// Space-time deformation of a whole trajectory:
///   Psi(t', x) = lambda0^{-1/2} e^{i xi0 x} e^{-i xi0^2 t'}
///                Phi((t'-t0)/lambda0^2, (x - x0 - 2 xi0 t')/lambda0)
/// sampled at t'_i = t0 + lambda0^2 t_i so every output lands on a stored
/// state. The noise record does not transport and is dropped.
Trajectory spacetime_deform(const Trajectory& traj, const SymmetryElement& g,
                            const GroupOptions& opts = {});

/// Scalar separation functional between two group elements:
///   l1/l2 + l2/l1 + |(x1-x2)/l1| + |l1 (xi1-xi2)| + |(t1-t2)/l1^2|.
double orthogonality_gap(const SymmetryElement& g1, const SymmetryElement& g2);

}  // namespace snls
