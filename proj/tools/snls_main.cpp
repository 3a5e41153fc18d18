// Command-line entry point: configure, run, and persist simulations,
// ensembles, and experiments.
//
// Exit codes are stable API:
//   0 success, 2 configuration error, 3 numerical blow-up, 4 internal error.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

#include "snls/config.hpp"
#include "snls/dynamics.hpp"
#include "snls/experiments.hpp"
#include "snls/functionals.hpp"
#include "snls/parallel.hpp"
#include "snls/trajectory_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitBlowup = 3;
constexpr int kExitInternal = 4;

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    int threads = 0;  // 0: hardware concurrency
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string format;
};

snls::RunConfig load_and_override(const CommonArgs& args) {
    snls::RunConfig cfg = snls::load_config(args.config_path);
    if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
    if (args.seed_set) cfg.seed = args.seed;
    if (!args.format.empty()) {
        if (args.format != "csv" && args.format != "bin" && args.format != "both") {
            throw snls::ConfigError("--format must be csv, bin or both");
        }
        cfg.formats = args.format;
    }
    return cfg;
}

snls::Trajectory run_one_path(const snls::RunConfig& cfg, std::uint64_t path_index,
                              int snapshot_stride, bool record_noise) {
    const snls::GridPtr grid = cfg.build_grid();
    const snls::ComplexField u0 = cfg.build_initial_data(grid);
    const bool noise_on = cfg.gamma0 > 0.0;
    const snls::EquationSpec spec = cfg.build_equation(noise_on);
    snls::SolveOptions opts;
    opts.snapshot_stride = snapshot_stride;
    opts.record_noise = record_noise;
    snls::NoiseModel model;
    if (noise_on) {
        model = cfg.build_noise_model(grid);
        opts.noise = &model;
    }
    opts.rng = snls::RngState{cfg.seed, path_index, 0};
    opts.blowup_growth_factor = cfg.blowup_growth;
    return snls::solve(u0, spec, cfg.t_start, cfg.t_end, cfg.dt, opts);
}

void write_trajectory(const snls::RunConfig& cfg, const snls::Trajectory& traj,
                      const std::string& stem) {
    std::filesystem::create_directories(cfg.out_dir);
    if (cfg.formats == "csv" || cfg.formats == "both") {
        snls::write_trajectory_csv(traj, cfg.out_dir + "/" + stem + ".csv");
    }
    if (cfg.formats == "bin" || cfg.formats == "both") {
        snls::write_trajectory_bin(traj, cfg.out_dir + "/" + stem + ".bin");
    }
}

int cmd_simulate(const CommonArgs& args) {
    const snls::RunConfig cfg = load_and_override(args);
    const snls::Trajectory traj = run_one_path(cfg, 0, cfg.snapshot_stride, false);

    double drift = 0.0;
    const double m0 = snls::l2_norm(traj.states.front());
    std::vector<snls::StatRow> rows;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const double m = snls::l2_norm(traj.states[i]);
        drift = std::max(drift, std::abs(m - m0) / m0);
        rows.push_back({"l2_norm", snls::format_double(traj.times[i]), m, 0.0});
        rows.push_back({"l10_norm", snls::format_double(traj.times[i]),
                        snls::lp_norm(traj.states[i], 10.0), 0.0});
        rows.push_back({"running_x2_pow5", snls::format_double(traj.times[i]),
                        traj.running_x2_pow5[i], 0.0});
    }
    write_trajectory(cfg, traj, "trajectory");
    snls::write_stats_csv(rows, cfg.out_dir + "/norms.csv");
    const snls::XNorms xs = snls::x_norms(traj, cfg.t_start, cfg.t_end);
    std::cout << "x1 = " << snls::format_double(xs.x1)
              << "  x2 = " << snls::format_double(xs.x2) << "\n";
    std::cout << "mass drift = " << snls::format_double(drift) << "\n";
    return kExitOk;
}

int cmd_ensemble(const CommonArgs& args) {
    const snls::RunConfig cfg = load_and_override(args);
    const auto paths = static_cast<std::size_t>(cfg.paths);

    std::vector<snls::Trajectory> trajs(paths);
    std::exception_ptr first_error;
    std::mutex error_mutex;
    snls::parallel_for(paths, [&](std::size_t p) {
        try {
            trajs[p] = run_one_path(cfg, p, cfg.snapshot_stride, false);
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
        }
    });
    if (first_error) std::rethrow_exception(first_error);

    std::vector<snls::StatRow> rows;
    const std::string window = "[" + snls::format_double(cfg.t_start) + "," +
                               snls::format_double(cfg.t_end) + "]";
    if (paths == 1) {
        const snls::XNorms xs = snls::x_norms(trajs[0], cfg.t_start, cfg.t_end);
        rows.push_back({"x_norm_single_path", window, xs.sum(), 0.0});
    } else {
        for (double rho : cfg.rho_list) {
            const snls::EnsembleStats stats =
                snls::ensemble_moment(trajs, rho, cfg.t_start, cfg.t_end);
            rows.push_back({"L_omega_rho_X(rho=" + snls::format_double(rho) + ")", window,
                            stats.estimate, stats.std_error});
        }
    }
    std::filesystem::create_directories(cfg.out_dir);
    snls::write_stats_csv(rows, cfg.out_dir + "/ensemble_stats.csv");
    for (const auto& r : rows) {
        std::cout << r.quantity << " = " << snls::format_double(r.value) << " +- "
                  << snls::format_double(r.std_error) << "\n";
    }
    return kExitOk;
}

int cmd_experiment(const std::string& name, const CommonArgs& args) {
    std::uint64_t seed = 1;
    std::string out_dir = "experiments_out";
    if (!args.config_path.empty()) {
        const snls::RunConfig cfg = load_and_override(args);
        seed = cfg.seed;
        out_dir = cfg.out_dir;
    }
    if (args.seed_set) seed = args.seed;
    if (!args.out_dir.empty()) out_dir = args.out_dir;

    const snls::ExperimentReport report = snls::run_experiment(name, seed);
    report.write(out_dir);
    std::cout << report.to_text();
    return report.passed() ? kExitOk : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pseudospectral laboratory for the 1-D quintic Schroedinger "
                 "equation with conservative multiplicative noise"};
    app.require_subcommand(1);

    CommonArgs args;
    std::string experiment_name;

    auto add_common = [&](CLI::App* cmd, bool config_required) {
        cmd->add_option("--config", args.config_path, "run configuration file")
            ->required(config_required);
        cmd->add_option("--out", args.out_dir, "output directory (overrides config)");
        cmd->add_option("--threads", args.threads, "worker threads (0 = all cores)");
        cmd->add_option("--seed", args.seed, "seed override")->each([&](const std::string&) {
            args.seed_set = true;
        });
        cmd->add_option("--format", args.format, "csv | bin | both");
    };

    CLI::App* sim = app.add_subcommand("simulate", "run one path, write trajectory + norms");
    add_common(sim, true);
    CLI::App* ens = app.add_subcommand("ensemble", "run independent paths, write moment stats");
    add_common(ens, true);
    CLI::App* exp = app.add_subcommand("experiment", "run a named experiment");
    exp->add_option("name", experiment_name, "experiment name")->required();
    add_common(exp, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfig;
    }

    snls::set_thread_count(args.threads);

    try {
        if (sim->parsed()) return cmd_simulate(args);
        if (ens->parsed()) return cmd_ensemble(args);
        if (exp->parsed()) return cmd_experiment(experiment_name, args);
        return kExitConfig;
    } catch (const snls::BlowupError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBlowup;
    } catch (const snls::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}
