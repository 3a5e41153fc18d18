#pragma once

#include <string>
#include <vector>

#include "snls/dynamics.hpp"

namespace snls {

/// Long-form CSV: header "t,x,re_u,im_u", one row per (time, point).
void write_trajectory_csv(const Trajectory& traj, const std::string& path);

/// Binary layout (little-endian, see FORMATS.md):
///   magic "SNLS" | version u32 | n u64 | snapshot count u64
///   then raw 8-byte floats: L, times[count], count * n * (re, im).
void write_trajectory_bin(const Trajectory& traj, const std::string& path);

/// Reads the binary format back (round-trip checks, downstream tooling).
Trajectory read_trajectory_bin(const std::string& path);

struct StatRow {
    std::string quantity;
    std::string window;
    double value = 0.0;
    double std_error = 0.0;
};

/// Statistics CSV: header "quantity,window,value,std_error".
void write_stats_csv(const std::vector<StatRow>& rows, const std::string& path);

/// Fixed shortest-roundtrip double formatting shared by all CSV writers, so
/// identical runs produce byte-identical files.
std::string format_double(double v);

}  // namespace snls
