#pragma once

// Commutative generators in damping-basis form and the three propagators
// (time-local, memory kernel, Redfield-like).

#include <optional>
#include <string>
#include <vector>

#include "dampkit/qops.hpp"
#include "dampkit/scalarflow.hpp"

namespace dampkit {

enum class GeneratorKind { TCL, NZ, RED };

const char* generator_kind_name(GeneratorKind kind);
// Accepts "tcl", "nz", "red" in any case. Throws InvalidArgument.
GeneratorKind parse_generator_kind(const std::string& text);

// K(t) = sum_a m_a(t) |tau_a><varsigma_a|, plus sum_a c_a delta(t) |tau_a><varsigma_a|
// for memory kernels.
struct GeneratorSpec {
    GeneratorKind kind = GeneratorKind::TCL;
    DampingDecomposition decomposition;
    std::vector<EigenSignal> signals;

    GeneratorSpec(GeneratorKind k, DampingDecomposition d, std::vector<EigenSignal> s);

    const TimeGrid& grid() const { return signals.front().grid; }
    int channel_count() const { return decomposition.channel_count(); }
    const BasisPtr& basis() const { return decomposition.basis; }

    std::vector<Complex> values_at(int k) const;
    // Regular part of the generator at grid index k.
    SuperOp at(int k) const;
    // Superoperator multiplying delta(t); zero unless kind == NZ.
    SuperOp delta_part() const;
    bool has_delta() const;
};

// Channel-wise conversion through the scalar transforms.
GeneratorSpec convert_generator(const GeneratorSpec& gen, GeneratorKind target,
                                const FlowOptions& options = {});

// Map eigenvalues m_a(t) from the eigen-signals (no matrix propagation).
std::vector<EigenSignal> map_eigenvalues(const GeneratorSpec& gen, const FlowOptions& options = {});

struct MapTrajectory {
    TimeGrid grid;
    std::vector<SuperOp> maps;

    const SuperOp& at(int k) const { return maps[static_cast<std::size_t>(k)]; }
    int size() const { return static_cast<int>(maps.size()); }
};

struct PropagationOptions {
    // Keep every record_every-th step; the trajectory grid is coarsened to match.
    int record_every = 1;
};

MapTrajectory propagate_tcl(const GeneratorSpec& gen, const PropagationOptions& options = {});
MapTrajectory propagate_nz(const GeneratorSpec& gen, const PropagationOptions& options = {});
MapTrajectory propagate_redfield(const GeneratorSpec& gen, const PropagationOptions& options = {});
// Dispatch on gen.kind.
MapTrajectory propagate(const GeneratorSpec& gen, const PropagationOptions& options = {});
// Lambda(t) = sum_a m_a(t) |tau_a><varsigma_a| with m_a from the scalar transforms.
MapTrajectory closed_form_trajectory(const GeneratorSpec& gen, const PropagationOptions& options = {},
                                     const FlowOptions& flow = {});

// Choi matrix sum_ij |i><j| (x) Lambda(|i><j|), N^2 x N^2.
Matrix choi_matrix(const SuperOp& map);
double choi_min_eigenvalue(const SuperOp& map);
// max |Lambda'(1) - 1|
double trace_preservation_residual(const SuperOp& map);

struct CptpReport {
    bool ok = true;
    std::optional<double> first_violation_time;
    double min_choi_eigenvalue = 0.0;
    double max_trace_residual = 0.0;
};
CptpReport cptp_check(const MapTrajectory& traj, double tol);

// max over k of max |A_k - B_k|; the trajectories must share a grid.
double trajectory_distance(const MapTrajectory& a, const MapTrajectory& b);

// Eigenvalues of Lambda(t_k) in the damping basis (diagonal of the damping coordinates).
std::vector<Complex> damping_diagonal(const DampingDecomposition& d, const SuperOp& map);

} // namespace dampkit
