#include "snls/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace snls {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& v, const std::string& key) {
    if (v == "inf" || v == "infinity") return std::numeric_limits<double>::infinity();
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: bad numeric value for '" + key + "': " + v);
    }
}

int parse_int(const std::string& v, const std::string& key) {
    const double x = parse_double(v, key);
    if (x != std::floor(x)) throw ConfigError("config: '" + key + "' must be an integer");
    return static_cast<int>(x);
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    RunConfig cfg;
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') {
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config: " + origin + ":" + std::to_string(lineno) +
                              ": expected key = value");
        }
        const std::string key = section + "." + trim(line.substr(0, eq));
        kv[key] = trim(line.substr(eq + 1));
    }

    auto take = [&](const char* key, auto&& apply) {
        auto it = kv.find(key);
        if (it != kv.end()) {
            apply(it->second);
            kv.erase(it);
        }
    };

    take("grid.L", [&](const std::string& v) { cfg.grid_half_width = parse_double(v, "grid.L"); });
    take("grid.n", [&](const std::string& v) { cfg.grid_n = parse_int(v, "grid.n"); });

    take("equation.sign", [&](const std::string& v) {
        if (v == "defocusing" || v == "+1") cfg.sign = +1.0;
        else if (v == "focusing" || v == "-1") cfg.sign = -1.0;
        else throw ConfigError("config: equation.sign must be defocusing or focusing");
    });
    take("equation.c", [&](const std::string& v) { cfg.coupling = parse_double(v, "equation.c"); });
    take("equation.epsilon",
         [&](const std::string& v) { cfg.epsilon = parse_double(v, "equation.epsilon"); });
    take("equation.m",
         [&](const std::string& v) { cfg.truncation_m = parse_double(v, "equation.m"); });
    take("equation.A",
         [&](const std::string& v) { cfg.truncation_offset = parse_double(v, "equation.A"); });
    take("equation.theta_power",
         [&](const std::string& v) { cfg.theta_power = parse_double(v, "equation.theta_power"); });

    take("noise.modes", [&](const std::string& v) { cfg.noise_modes = parse_int(v, "noise.modes"); });
    take("noise.gamma0", [&](const std::string& v) { cfg.gamma0 = parse_double(v, "noise.gamma0"); });
    take("noise.s", [&](const std::string& v) { cfg.noise_decay = parse_double(v, "noise.s"); });
    take("noise.seed", [&](const std::string& v) {
        cfg.seed = static_cast<std::uint64_t>(std::stoull(v));
    });
    take("noise.convention", [&](const std::string& v) {
        if (v == "stratonovich") cfg.convention = NoiseConvention::stratonovich;
        else if (v == "ito") cfg.convention = NoiseConvention::ito;
        else throw ConfigError("config: noise.convention must be stratonovich or ito");
    });
    take("noise.correction", [&](const std::string& v) {
        if (v == "on" || v == "true") cfg.ito_correction_on = true;
        else if (v == "off" || v == "false") cfg.ito_correction_on = false;
        else throw ConfigError("config: noise.correction must be on or off");
    });
    take("noise.K",
         [&](const std::string& v) { cfg.weight_exponent = parse_int(v, "noise.K"); });
    take("noise.N",
         [&](const std::string& v) { cfg.derivative_count = parse_int(v, "noise.N"); });

    take("time.t_start", [&](const std::string& v) { cfg.t_start = parse_double(v, "time.t_start"); });
    take("time.t_end", [&](const std::string& v) { cfg.t_end = parse_double(v, "time.t_end"); });
    take("time.dt", [&](const std::string& v) { cfg.dt = parse_double(v, "time.dt"); });
    take("time.snapshot_stride", [&](const std::string& v) {
        cfg.snapshot_stride = parse_int(v, "time.snapshot_stride");
    });
    take("time.blowup_growth", [&](const std::string& v) {
        cfg.blowup_growth = parse_double(v, "time.blowup_growth");
    });

    take("ensemble.paths", [&](const std::string& v) { cfg.paths = parse_int(v, "ensemble.paths"); });
    take("ensemble.rho", [&](const std::string& v) {
        cfg.rho_list.clear();
        std::istringstream ss(v);
        std::string item;
        while (std::getline(ss, item, ',')) {
            cfg.rho_list.push_back(parse_double(trim(item), "ensemble.rho"));
        }
        if (cfg.rho_list.empty()) throw ConfigError("config: ensemble.rho is empty");
    });

    take("output.directory", [&](const std::string& v) { cfg.out_dir = v; });
    take("output.formats", [&](const std::string& v) {
        if (v != "csv" && v != "bin" && v != "both") {
            throw ConfigError("config: output.formats must be csv, bin or both");
        }
        cfg.formats = v;
    });

    take("initial.profile", [&](const std::string& v) {
        if (v != "gaussian" && v != "ground-state" && v != "plane-wave") {
            throw ConfigError("config: initial.profile must be gaussian, ground-state or plane-wave");
        }
        cfg.profile = v;
    });
    take("initial.amplitude",
         [&](const std::string& v) { cfg.amplitude = parse_double(v, "initial.amplitude"); });
    take("initial.width",
         [&](const std::string& v) { cfg.width = parse_double(v, "initial.width"); });

    if (!kv.empty()) {
        throw ConfigError("config: unknown key '" + kv.begin()->first + "' in " + origin);
    }
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path);
}

void RunConfig::validate() const {
    if (!(grid_half_width > 0.0)) throw ConfigError("config: grid.L must be positive");
    if (grid_n < 8 || (grid_n & (grid_n - 1)) != 0) {
        throw ConfigError("config: grid.n must be a power of two >= 8");
    }
    EquationSpec eq = build_equation(gamma0 > 0.0);
    try {
        eq.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (noise_modes < 1) throw ConfigError("config: noise.modes must be >= 1");
    if (gamma0 < 0.0) throw ConfigError("config: noise.gamma0 must be >= 0");
    if (!(noise_decay > 0.0)) throw ConfigError("config: noise.s must be positive");
    if (weight_exponent < 0 || derivative_count < 0) {
        throw ConfigError("config: noise.K and noise.N must be >= 0");
    }
    if (!(t_end > t_start)) throw ConfigError("config: time window is empty");
    if (!(dt > 0.0)) throw ConfigError("config: time.dt must be positive");
    const double steps = (t_end - t_start) / dt;
    if (std::abs(steps - std::round(steps)) > 1e-9) {
        throw ConfigError("config: time.dt must divide the horizon");
    }
    if (snapshot_stride < 1) throw ConfigError("config: time.snapshot_stride must be >= 1");
    if (!(blowup_growth > 1.0)) throw ConfigError("config: time.blowup_growth must exceed 1");
    if (paths < 1) throw ConfigError("config: ensemble.paths must be >= 1");
    for (double r : rho_list) {
        if (r < 1.0) throw ConfigError("config: ensemble.rho entries must be >= 1");
    }
    if (!(width > 0.0)) throw ConfigError("config: initial.width must be positive");
}

GridPtr RunConfig::build_grid() const { return make_grid(grid_half_width, grid_n); }

EquationSpec RunConfig::build_equation(bool noise_on) const {
    EquationSpec eq;
    eq.sign = sign;
    eq.coupling = coupling;
    eq.epsilon = epsilon;
    eq.truncation_m = truncation_m;
    eq.truncation_offset = truncation_offset;
    eq.theta_power = theta_power;
    eq.noise_on = noise_on;
    eq.convention = convention;
    eq.ito_correction_on = ito_correction_on;
    return eq;
}

NoiseModel RunConfig::build_noise_model(const GridPtr& grid) const {
    WeightedSpaceParams params;
    params.weight_exponent = weight_exponent;
    params.derivative_count = derivative_count;
    return build_noise(noise_modes, gamma0, noise_decay, grid, params);
}

ComplexField ground_state(const GridPtr& grid) {
    // Periodized so that the sampled profile is smooth across the seam;
    // images beyond the nearest pair are below 1e-20 for L >= 12.
    const double L = grid->half_width;
    auto q = [](double x) { return std::pow(3.0, 0.25) / std::sqrt(std::cosh(2.0 * x)); };
    return make_field(grid, [&](double x) {
        return cdouble(q(x) + q(x - 2.0 * L) + q(x + 2.0 * L), 0.0);
    });
}

ComplexField RunConfig::build_initial_data(const GridPtr& grid) const {
    if (profile == "ground-state") {
        ComplexField q = ground_state(grid);
        for (auto& v : q.values) v *= amplitude;
        return q;
    }
    if (profile == "plane-wave") {
        const double k1 = M_PI / grid->half_width * std::max(1.0, std::round(width));
        const double a = amplitude;
        return make_field(grid, [&](double x) { return a * std::polar(1.0, k1 * x); });
    }
    // Mass-`amplitude` Gaussian: amplitude * pi^{-1/4} e^{-x^2/(2 width^2)} / sqrt(width)
    const double a = amplitude * std::pow(M_PI, -0.25) / std::sqrt(width);
    const double w2 = 2.0 * width * width;
    return make_field(grid, [&](double x) { return cdouble(a * std::exp(-x * x / w2), 0.0); });
}

}  // namespace snls
