#include "snls/trajectory_io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace snls {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "t,x,re_u,im_u\n";
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const std::string t = format_double(traj.times[i]);
        for (int j = 0; j < traj.grid->n; ++j) {
            out << t << ',' << format_double(traj.grid->points[j]) << ','
                << format_double(traj.states[i].values[j].real()) << ','
                << format_double(traj.states[i].values[j].imag()) << '\n';
        }
    }
}

namespace {

void put_u32(std::ofstream& out, std::uint32_t v) {
    char b[4];
    std::memcpy(b, &v, 4);
    out.write(b, 4);
}

void put_u64(std::ofstream& out, std::uint64_t v) {
    char b[8];
    std::memcpy(b, &v, 8);
    out.write(b, 8);
}

void put_f64(std::ofstream& out, double v) {
    char b[8];
    std::memcpy(b, &v, 8);
    out.write(b, 8);
}

}  // namespace

void write_trajectory_bin(const Trajectory& traj, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out.write("SNLS", 4);
    put_u32(out, 1u);
    put_u64(out, static_cast<std::uint64_t>(traj.grid->n));
    put_u64(out, static_cast<std::uint64_t>(traj.times.size()));
    put_f64(out, traj.grid->half_width);
    for (double t : traj.times) put_f64(out, t);
    for (const auto& state : traj.states) {
        for (const auto& v : state.values) {
            put_f64(out, v.real());
            put_f64(out, v.imag());
        }
    }
}

Trajectory read_trajectory_bin(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "SNLS", 4) != 0) {
        throw std::runtime_error(path + ": bad magic");
    }
    std::uint32_t version = 0;
    in.read(reinterpret_cast<char*>(&version), 4);
    if (version != 1) throw std::runtime_error(path + ": unsupported version");
    std::uint64_t n = 0, count = 0;
    in.read(reinterpret_cast<char*>(&n), 8);
    in.read(reinterpret_cast<char*>(&count), 8);
    double half_width = 0.0;
    in.read(reinterpret_cast<char*>(&half_width), 8);
    if (!in) throw std::runtime_error(path + ": truncated header");

    Trajectory traj;
    traj.grid = make_grid(half_width, static_cast<int>(n));
    traj.times.resize(count);
    for (auto& t : traj.times) in.read(reinterpret_cast<char*>(&t), 8);
    traj.states.resize(count);
    for (auto& state : traj.states) {
        state.grid = traj.grid;
        state.values.resize(n);
        for (auto& v : state.values) {
            double re = 0.0, im = 0.0;
            in.read(reinterpret_cast<char*>(&re), 8);
            in.read(reinterpret_cast<char*>(&im), 8);
            v = cdouble(re, im);
        }
    }
    if (!in) throw std::runtime_error(path + ": truncated payload");
    traj.running_x2_pow5.assign(count, 0.0);
    if (count > 1) traj.step_dt = traj.times[1] - traj.times[0];
    traj.total_steps = count > 0 ? count - 1 : 0;
    return traj;
}

void write_stats_csv(const std::vector<StatRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "quantity,window,value,std_error\n";
    for (const auto& r : rows) {
        out << r.quantity << ',' << r.window << ',' << format_double(r.value) << ','
            << format_double(r.std_error) << '\n';
    }
}

}  // namespace snls
