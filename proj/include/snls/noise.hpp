#pragma once

#include <vector>

#include "snls/grid.hpp"
#include "snls/rng.hpp"

namespace snls {

/// Parameters of the weighted space with inner product
///   <f, g> = sum_{j=1..N} <(1+|x|^K) f^(j), (1+|x|^K) g^(j)>_{L^2}.
/// The printed sum starts at j = 1; include_zeroth adds the j = 0 term.
struct WeightedSpaceParams {
    int weight_exponent = 10;   // K
    int derivative_count = 10;  // N
    bool include_zeroth = false;
};

/// Weighted-space norm by spectral differentiation and quadrature.
/// Throws when the highest derivative is not resolved on the grid.
double h_norm(const ComplexField& f, const WeightedSpaceParams& params);

/// Orthonormal Hermite functions e_0..e_{count-1} sampled on the grid.
std::vector<std::vector<double>> hermite_functions(const Grid1D& grid, int count);

/// Spectral description of the covariance operator: diagonal in the Hermite
/// basis with weights gamma_k = gamma0 (1+k)^{-s}, plus the derived correction
/// field F(x) = sum_k gamma_k^2 e_k(x)^2.
struct NoiseModel {
    GridPtr grid;
    int modes = 0;
    double gamma0 = 0.0;
    double decay_s = 3.0;
    std::vector<std::vector<double>> basis;  // e_k on the grid
    std::vector<double> gammas;
    std::vector<double> correction;  // F(x), >= 0
    double trace_proxy = 0.0;        // sum_k gamma_k * h_norm(e_k)
};

/// Builds the model and precomputes the correction field. Verifies the grid
/// Gram matrix of the basis is the identity to 1e-8; failure means the top
/// mode is not resolved. Throws std::invalid_argument on bad parameters.
NoiseModel build_noise(int modes, double gamma0, double decay_s, const GridPtr& grid,
                       const WeightedSpaceParams& params = {});

/// Max pointwise discrepancy of the correction field when (e_0, e_1) are
/// mixed by a rotation of the given angle. Requires gamma_0 == gamma_1 so the
/// rotated pair is still an eigenbasis; throws otherwise.
double correction_invariance_check(const NoiseModel& model, double angle);

/// One Wiener increment: dW(x) = sqrt(dt) sum_k gamma_k e_k(x) xi_k with
/// xi_k standard normal drawn from the counter-based stream; bitwise
/// reproducible for equal states.
std::vector<double> sample_increment(const NoiseModel& model, double dt, const RngState& state);

}  // namespace snls
