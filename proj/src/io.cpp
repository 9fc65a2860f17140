#include "dampkit/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "dampkit/errors.hpp"

namespace dampkit {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path)
{
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
    return os;
}

void finish(std::ofstream& os, const fs::path& path)
{
    os.flush();
    if (!os) throw IoError("failed writing '" + path.string() + "'");
}

double parse_number(const std::string& text, int line)
{
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw IoError("line " + std::to_string(line) + ": cannot parse number '" + text + "'");
    }
}

std::vector<std::string> split(const std::string& line, char sep)
{
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

} // namespace

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_signal_csv(std::ostream& os, const EigenSignal& s)
{
    os << "# delta_weight=" << format_double(s.delta_weight.real()) << ','
       << format_double(s.delta_weight.imag()) << '\n';
    os << "t,re,im\n";
    for (int k = 0; k < s.size(); ++k) {
        os << format_double(s.grid.time(k)) << ',' << format_double(s[k].real()) << ','
           << format_double(s[k].imag()) << '\n';
    }
}

void write_signal_csv(const fs::path& path, const EigenSignal& s)
{
    auto os = open_out(path);
    write_signal_csv(os, s);
    finish(os, path);
}

EigenSignal read_signal_csv(std::istream& is)
{
    std::string line;
    Complex delta = 0.0;
    std::vector<double> times;
    std::vector<Complex> values;
    int n = 0;
    while (std::getline(is, line)) {
        ++n;
        if (line.empty()) continue;
        if (line.rfind("# delta_weight=", 0) == 0) {
            const auto parts = split(line.substr(15), ',');
            if (parts.size() != 2) throw IoError("malformed delta_weight header");
            delta = {parse_number(parts[0], n), parse_number(parts[1], n)};
            continue;
        }
        if (line[0] == '#' || line.rfind("t,", 0) == 0) continue;
        const auto parts = split(line, ',');
        if (parts.size() != 3) throw IoError("line " + std::to_string(n) + ": expected t,re,im");
        times.push_back(parse_number(parts[0], n));
        values.emplace_back(parse_number(parts[1], n), parse_number(parts[2], n));
    }
    if (times.size() < 2 || times.front() != 0.0) throw IoError("signal CSV needs samples starting at t = 0");
    const TimeGrid grid(times.back(), static_cast<int>(times.size()) - 1);
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (std::abs(times[k] - grid.time(static_cast<int>(k))) > 1e-9 * std::max(1.0, grid.t_end())) {
            throw IoError("signal CSV times are not uniformly spaced");
        }
    }
    return EigenSignal(grid, std::move(values), delta);
}

EigenSignal read_signal_csv(const fs::path& path)
{
    std::ifstream is(path);
    if (!is) throw IoError("cannot open '" + path.string() + "'");
    return read_signal_csv(is);
}

void write_real_series_csv(const fs::path& path, const TimeGrid& grid, const std::vector<std::string>& names,
                           const std::vector<std::vector<double>>& columns)
{
    if (names.size() != columns.size()) throw DimensionMismatch("one name per column is required");
    for (const auto& c : columns) {
        if (static_cast<int>(c.size()) != grid.size()) throw DimensionMismatch("column length does not match grid");
    }
    auto os = open_out(path);
    os << 't';
    for (const auto& name : names) os << ',' << name;
    os << '\n';
    for (int k = 0; k < grid.size(); ++k) {
        os << format_double(grid.time(k));
        for (const auto& c : columns) os << ',' << format_double(c[static_cast<std::size_t>(k)]);
        os << '\n';
    }
    finish(os, path);
}

void write_rates_csv(const fs::path& path, const TimeGrid& grid, const std::vector<std::vector<double>>& rates)
{
    if (static_cast<int>(rates.size()) != grid.size()) throw DimensionMismatch("one rate vector per grid time");
    const std::size_t m = rates.empty() ? 0 : rates.front().size();
    std::vector<std::string> names;
    std::vector<std::vector<double>> columns(m, std::vector<double>(rates.size()));
    for (std::size_t a = 0; a < m; ++a) names.push_back("r_" + std::to_string(a + 1));
    for (std::size_t k = 0; k < rates.size(); ++k)
        for (std::size_t a = 0; a < m; ++a) columns[a][k] = rates[k][a];
    write_real_series_csv(path, grid, names, columns);
}

void write_trajectory_csv(const fs::path& path, const MapTrajectory& traj, const DampingDecomposition& d)
{
    auto os = open_out(path);
    os << 't';
    for (int a = 1; a <= d.channel_count(); ++a) os << ",re_" << a << ",im_" << a;
    os << '\n';
    for (int k = 0; k < traj.size(); ++k) {
        os << format_double(traj.grid.time(k));
        for (Complex z : damping_diagonal(d, traj.at(k))) os << ',' << format_double(z.real()) << ',' << format_double(z.imag());
        os << '\n';
    }
    finish(os, path);
}

void write_region_csv(std::ostream& os, const std::vector<ScanRow>& rows)
{
    os << "x1,x2,x3,t,exact_cp,red_cp,exact_p,red_p\n";
    for (const auto& r : rows) {
        os << format_double(r.x[0]) << ',' << format_double(r.x[1]) << ',' << format_double(r.x[2]) << ','
           << format_double(r.t) << ',' << int(r.exact_cp) << ',' << int(r.red_cp) << ',' << int(r.exact_p) << ','
           << int(r.red_p) << '\n';
    }
}

void write_region_csv(const fs::path& path, const std::vector<ScanRow>& rows)
{
    auto os = open_out(path);
    write_region_csv(os, rows);
    finish(os, path);
}

Json complex_to_json(Complex z)
{
    return Json::array({z.real(), z.imag()});
}

Json matrix_to_json(const Matrix& m)
{
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const Json& j)
{
    if (!j.is_array() || j.empty()) throw InvalidArgument("matrix JSON must be a non-empty array of rows");
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = static_cast<Eigen::Index>(j.front().size());
    Matrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const Json& row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
            throw InvalidArgument("matrix JSON rows must have equal length");
        }
        for (Eigen::Index c = 0; c < cols; ++c) {
            const Json& z = row[static_cast<std::size_t>(c)];
            if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number()) {
                throw InvalidArgument("matrix entries must be [re, im] pairs");
            }
            m(r, c) = {z[0].get<double>(), z[1].get<double>()};
        }
    }
    return m;
}

Json superop_to_json(const SuperOp& s)
{
    Json j;
    j["dim"] = s.dim();
    j["matrix"] = matrix_to_json(s.matrix);
    return j;
}

void write_json(const fs::path& path, const Json& j)
{
    auto os = open_out(path);
    os << j.dump(2) << '\n';
    finish(os, path);
}

void ensure_directory(const fs::path& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory '" + dir.string() + "'");
}

} // namespace dampkit
