#pragma once

// CSV and JSON emission. Floats are printed with 17 significant digits so
// outputs round-trip exactly.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "dampkit/divisibility.hpp"
#include "dampkit/dynamics.hpp"
#include "dampkit/scalarflow.hpp"

namespace dampkit {

using Json = nlohmann::ordered_json;

std::string format_double(double v);

// "# delta_weight=<re>,<im>" followed by "t,re,im" rows.
void write_signal_csv(std::ostream& os, const EigenSignal& s);
void write_signal_csv(const std::filesystem::path& path, const EigenSignal& s);
// Inverse of write_signal_csv. Throws IoError on malformed input.
EigenSignal read_signal_csv(std::istream& is);
EigenSignal read_signal_csv(const std::filesystem::path& path);

// t, <name>_1, ... for real-valued series.
void write_real_series_csv(const std::filesystem::path& path, const TimeGrid& grid,
                           const std::vector<std::string>& names,
                           const std::vector<std::vector<double>>& columns);
// t, r_1 .. r_m from per-time rate vectors.
void write_rates_csv(const std::filesystem::path& path, const TimeGrid& grid,
                     const std::vector<std::vector<double>>& rates);
// t, re_1, im_1, ... with the damping-basis eigenvalues of each map.
void write_trajectory_csv(const std::filesystem::path& path, const MapTrajectory& traj,
                          const DampingDecomposition& d);
// x1, x2, x3, t, exact_cp, red_cp, exact_p, red_p
void write_region_csv(std::ostream& os, const std::vector<ScanRow>& rows);
void write_region_csv(const std::filesystem::path& path, const std::vector<ScanRow>& rows);

// Row-major nested arrays of [re, im] pairs.
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);
Json superop_to_json(const SuperOp& s);
Json complex_to_json(Complex z);

void write_json(const std::filesystem::path& path, const Json& j);
// Creates the directory if needed; throws IoError when that fails.
void ensure_directory(const std::filesystem::path& dir);

} // namespace dampkit
