#include "dampkit/dynamics.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "dampkit/errors.hpp"

namespace dampkit {

const char* generator_kind_name(GeneratorKind kind)
{
    switch (kind) {
    case GeneratorKind::TCL: return "tcl";
    case GeneratorKind::NZ: return "nz";
    case GeneratorKind::RED: return "red";
    }
    return "?";
}

GeneratorKind parse_generator_kind(const std::string& text)
{
    std::string s;
    for (char ch : text) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    if (s == "tcl") return GeneratorKind::TCL;
    if (s == "nz") return GeneratorKind::NZ;
    if (s == "red" || s == "redfield") return GeneratorKind::RED;
    throw InvalidArgument("unknown generator kind '" + text + "' (expected tcl, nz or red)");
}

// ---------------------------------------------------------------------------
// GeneratorSpec

GeneratorSpec::GeneratorSpec(GeneratorKind k, DampingDecomposition d, std::vector<EigenSignal> s)
    : kind(k), decomposition(std::move(d)), signals(std::move(s))
{
    if (static_cast<int>(signals.size()) != decomposition.channel_count()) {
        throw DimensionMismatch("one eigen-signal per damping channel is required");
    }
    for (const auto& sig : signals) {
        if (!(sig.grid == signals.front().grid)) throw DimensionMismatch("eigen-signals use different grids");
        if (kind != GeneratorKind::NZ && sig.has_delta()) {
            throw InvalidArgument("only memory kernels may carry a delta at the origin");
        }
    }
}

std::vector<Complex> GeneratorSpec::values_at(int k) const
{
    std::vector<Complex> v;
    v.reserve(signals.size());
    for (const auto& s : signals) v.push_back(s[k]);
    return v;
}

SuperOp GeneratorSpec::at(int k) const
{
    const auto v = values_at(k);
    return decomposition.compose(v);
}

SuperOp GeneratorSpec::delta_part() const
{
    std::vector<Complex> v;
    v.reserve(signals.size());
    for (const auto& s : signals) v.push_back(s.delta_weight);
    return decomposition.compose(v);
}

bool GeneratorSpec::has_delta() const
{
    return std::any_of(signals.begin(), signals.end(), [](const EigenSignal& s) { return s.has_delta(); });
}

namespace {

bool is_zero(const EigenSignal& s)
{
    if (s.has_delta()) return false;
    return std::all_of(s.samples.begin(), s.samples.end(), [](Complex z) { return z == Complex(0.0); });
}

EigenSignal convert_channel(const EigenSignal& s, GeneratorKind from, GeneratorKind to,
                            const FlowOptions& options)
{
    if (from == to) return s;
    if (is_zero(s)) return EigenSignal(s.grid);
    switch (from) {
    case GeneratorKind::TCL:
        return to == GeneratorKind::NZ ? tcl_to_nz(s, options) : tcl_to_redfield(s, options);
    case GeneratorKind::NZ:
        return to == GeneratorKind::TCL ? nz_to_tcl(s, options) : nz_to_redfield(s);
    case GeneratorKind::RED:
        return to == GeneratorKind::NZ ? redfield_to_nz(s) : nz_to_tcl(redfield_to_nz(s), options);
    }
    return s;
}

MapTrajectory make_trajectory(const TimeGrid& grid, int record_every)
{
    if (record_every < 1 || grid.n_steps() % record_every != 0) {
        throw InvalidArgument("record_every must divide the number of steps");
    }
    return MapTrajectory{TimeGrid(grid.t_end(), grid.n_steps() / record_every), {}};
}

// Time-local RK4 in the operator basis; the generator at the half step is the
// mean of its end-point values.
MapTrajectory rk4_time_local(const GeneratorSpec& gen, const PropagationOptions& options)
{
    const TimeGrid& grid = gen.grid();
    MapTrajectory traj = make_trajectory(grid, options.record_every);
    const int n2 = gen.basis()->size();
    const double h = grid.dt();

    Matrix lambda = Matrix::Identity(n2, n2);
    traj.maps.push_back({gen.basis(), lambda});
    Matrix k_now = gen.at(0).matrix;
    for (int k = 0; k < grid.n_steps(); ++k) {
        Matrix k_next = gen.at(k + 1).matrix;
        const Matrix k_mid = 0.5 * (k_now + k_next);
        const Matrix s1 = k_now * lambda;
        const Matrix s2 = k_mid * (lambda + 0.5 * h * s1);
        const Matrix s3 = k_mid * (lambda + 0.5 * h * s2);
        const Matrix s4 = k_next * (lambda + h * s3);
        lambda += (h / 6.0) * (s1 + 2.0 * s2 + 2.0 * s3 + s4);
        k_now = std::move(k_next);
        if ((k + 1) % options.record_every == 0) traj.maps.push_back({gen.basis(), lambda});
    }
    return traj;
}

MapTrajectory from_diagonals(const GeneratorSpec& gen, const std::vector<EigenSignal>& diag,
                             const PropagationOptions& options)
{
    const TimeGrid& grid = gen.grid();
    MapTrajectory traj = make_trajectory(grid, options.record_every);
    std::vector<Complex> v(diag.size());
    for (int k = 0; k < grid.size(); k += options.record_every) {
        for (std::size_t a = 0; a < diag.size(); ++a) v[a] = diag[a][k];
        traj.maps.push_back(gen.decomposition.compose(v));
    }
    return traj;
}

} // namespace

GeneratorSpec convert_generator(const GeneratorSpec& gen, GeneratorKind target, const FlowOptions& options)
{
    std::vector<EigenSignal> out;
    out.reserve(gen.signals.size());
    for (const auto& s : gen.signals) out.push_back(convert_channel(s, gen.kind, target, options));
    return GeneratorSpec(target, gen.decomposition, std::move(out));
}

std::vector<EigenSignal> map_eigenvalues(const GeneratorSpec& gen, const FlowOptions& options)
{
    std::vector<EigenSignal> out;
    out.reserve(gen.signals.size());
    for (const auto& s : gen.signals) {
        out.push_back(gen.kind == GeneratorKind::NZ ? nz_to_map(s, options) : tcl_to_map(s));
    }
    return out;
}

MapTrajectory propagate_tcl(const GeneratorSpec& gen, const PropagationOptions& options)
{
    if (gen.kind != GeneratorKind::TCL) throw InvalidArgument("propagate_tcl needs a time-local generator");
    return rk4_time_local(gen, options);
}

MapTrajectory propagate_redfield(const GeneratorSpec& gen, const PropagationOptions& options)
{
    if (gen.kind != GeneratorKind::RED) throw InvalidArgument("propagate_redfield needs a Redfield-like generator");
    return rk4_time_local(gen, options);
}

MapTrajectory propagate_nz(const GeneratorSpec& gen, const PropagationOptions& options)
{
    if (gen.kind != GeneratorKind::NZ) throw InvalidArgument("propagate_nz needs a memory kernel");
    const TimeGrid& grid = gen.grid();
    const int n = grid.size();
    const double h = grid.dt();

    // In damping coordinates the kernel is diagonal and Lambda(0) = 1, so each
    // diagonal entry obeys its own scalar integro-differential equation and
    // the off-diagonal entries stay zero.
    std::vector<EigenSignal> diag;
    diag.reserve(gen.signals.size());
    for (const auto& sig : gen.signals) {
        EigenSignal y(grid);
        y[0] = 1.0;
        const Complex c = sig.delta_weight;
        const Complex r0 = sig[0];
        auto history = [&](int k) {
            if (k == 0) return Complex(0.0);
            Complex s = 0.5 * sig[k] * y[0];
            for (int j = 1; j < k; ++j) s += sig[k - j] * y[j];
            return h * s;
        };
        auto rhs = [&](int k, Complex value, Complex hist) {
            Complex f = c * value + hist;
            if (k > 0) f += 0.5 * h * r0 * value;
            return f;
        };
        Complex hist_now = 0.0;
        for (int k = 0; k + 1 < n; ++k) {
            const Complex f0 = rhs(k, y[k], hist_now);
            const Complex predictor = y[k] + h * f0;
            const Complex hist_next = history(k + 1);
            const Complex f1 = rhs(k + 1, predictor, hist_next);
            y[k + 1] = y[k] + 0.5 * h * (f0 + f1);
            hist_now = hist_next;
        }
        diag.push_back(std::move(y));
    }
    return from_diagonals(gen, diag, options);
}

MapTrajectory propagate(const GeneratorSpec& gen, const PropagationOptions& options)
{
    switch (gen.kind) {
    case GeneratorKind::TCL: return propagate_tcl(gen, options);
    case GeneratorKind::NZ: return propagate_nz(gen, options);
    case GeneratorKind::RED: return propagate_redfield(gen, options);
    }
    throw InvalidArgument("unknown generator kind");
}

MapTrajectory closed_form_trajectory(const GeneratorSpec& gen, const PropagationOptions& options,
                                     const FlowOptions& flow)
{
    return from_diagonals(gen, map_eigenvalues(gen, flow), options);
}

// ---------------------------------------------------------------------------
// Complete positivity

Matrix choi_matrix(const SuperOp& map)
{
    const int n = map.dim();
    Matrix c = Matrix::Zero(n * n, n * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            Operator unit = Operator::Zero(n, n);
            unit(i, j) = 1.0;
            c.block(i * n, j * n, n, n) = map.apply(unit);
        }
    }
    return c;
}

double choi_min_eigenvalue(const SuperOp& map)
{
    const Matrix c = choi_matrix(map);
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (c + c.adjoint()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

double trace_preservation_residual(const SuperOp& map)
{
    const int n = map.dim();
    const Operator one = Operator::Identity(n, n);
    return max_abs(dual(map).apply(one) - one);
}

CptpReport cptp_check(const MapTrajectory& traj, double tol)
{
    CptpReport out;
    out.min_choi_eigenvalue = std::numeric_limits<double>::infinity();
    for (int k = 0; k < traj.size(); ++k) {
        const double e = choi_min_eigenvalue(traj.at(k));
        const double tr = trace_preservation_residual(traj.at(k));
        out.min_choi_eigenvalue = std::min(out.min_choi_eigenvalue, e);
        out.max_trace_residual = std::max(out.max_trace_residual, tr);
        if ((e < -tol || tr > tol) && out.ok) {
            out.ok = false;
            out.first_violation_time = traj.grid.time(k);
        }
    }
    return out;
}

double trajectory_distance(const MapTrajectory& a, const MapTrajectory& b)
{
    if (!(a.grid == b.grid) || a.size() != b.size()) throw DimensionMismatch("trajectories use different grids");
    double d = 0.0;
    for (int k = 0; k < a.size(); ++k) d = std::max(d, max_abs(a.at(k).matrix - b.at(k).matrix));
    return d;
}

std::vector<Complex> damping_diagonal(const DampingDecomposition& d, const SuperOp& map)
{
    const Matrix m = d.to_damping_coordinates(map.matrix);
    std::vector<Complex> out(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index a = 0; a < m.rows(); ++a) out[static_cast<std::size_t>(a)] = m(a, a);
    return out;
}

} // namespace dampkit
