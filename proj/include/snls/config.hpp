#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "snls/dynamics.hpp"
#include "snls/grid.hpp"
#include "snls/noise.hpp"

namespace snls {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Run configuration, loaded from a flat sectioned key = value file with
/// # comments (see FORMATS.md). Defaults encode the canonical regime:
/// horizon [0,1], defocusing, eps = 0, m = infinity, K = N = 10.
struct RunConfig {
    // [grid]
    double grid_half_width = 16.0;
    int grid_n = 256;

    // [equation]
    double sign = +1.0;  // "defocusing" | "focusing"
    double coupling = 1.0;
    double epsilon = 0.0;
    double truncation_m = std::numeric_limits<double>::infinity();
    double truncation_offset = 0.0;
    double theta_power = 5.0;

    // [noise]
    int noise_modes = 16;
    double gamma0 = 0.5;
    double noise_decay = 3.0;
    std::uint64_t seed = 1;
    NoiseConvention convention = NoiseConvention::stratonovich;
    bool ito_correction_on = true;
    int weight_exponent = 10;   // K
    int derivative_count = 10;  // N

    // [time]
    double t_start = 0.0;
    double t_end = 1.0;
    double dt = 1e-3;
    int snapshot_stride = 10;
    double blowup_growth = std::numeric_limits<double>::infinity();

    // [ensemble]
    int paths = 64;
    std::vector<double> rho_list = {5.0};

    // [output]
    std::string out_dir = ".";
    std::string formats = "csv";  // csv | bin | both

    // [initial]  amplitude * profile(width scaling)
    std::string profile = "gaussian";  // gaussian | ground-state | plane-wave
    double amplitude = 1.0;            // l2 normalization factor for gaussian
    double width = 1.0;

    GridPtr build_grid() const;
    EquationSpec build_equation(bool noise_on) const;
    NoiseModel build_noise_model(const GridPtr& grid) const;
    ComplexField build_initial_data(const GridPtr& grid) const;

    /// Re-validates every module precondition; throws ConfigError.
    void validate() const;
};

/// Parses the file; throws ConfigError naming the path or offending line.
RunConfig load_config(const std::string& path);

/// Parses config text (for tests and embedded defaults).
RunConfig parse_config_text(const std::string& text, const std::string& origin = "<inline>");

/// Ground state Q(x) = 3^{1/4} sech^{1/2}(2x), periodized over the grid so
/// spectral differentiation sees a smooth function.
ComplexField ground_state(const GridPtr& grid);

}  // namespace snls
