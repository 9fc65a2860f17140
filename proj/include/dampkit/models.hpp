#pragma once

// Built-in commutative models with closed-form generators and reference data.

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dampkit/dynamics.hpp"

namespace dampkit {

enum class ModelId {
    AmplitudeDamping,  // qubit, time-local gamma(t) D[s-]
    SigmaPmKernel,     // qubit, memory kernel k(t) (D[s-] + D[s+])
    PureDephasing,     // qubit, time-local gamma(t) L with L = P0.P0 + P1.P1 - 1
    DephasingBar,      // qubit, memory kernel k(t) (sz.sz - 1)
    RandomDephasing,   // qubit, mixture of dephasing semigroups along x, y, z
    QutritLadder,      // qutrit, memory kernel k(t) (D[S-] + D[S+])
};

const char* model_id_name(ModelId id);   // e.g. "RANDOM_DEPHASING"
const char* model_alias(ModelId id);     // e.g. "ex4"
// Accepts either spelling, case-insensitive. Throws UnknownModel.
ModelId parse_model_id(const std::string& text);
const std::vector<ModelId>& all_models();

using SimplexPoint = std::array<double, 3>;
// Throws InvalidArgument unless x_i >= 0 and |sum - 1| <= 1e-12.
void validate_simplex(const SimplexPoint& x);

struct ModelConfig {
    ModelId id = ModelId::RandomDephasing;
    std::string profile;      // empty selects the model default
    double amplitude = 1.0;   // scales gamma(t) or k(t) where applicable
    SimplexPoint x{0.5, 0.5, 0.0};
    TimeGrid grid{5.0, 2000};
};

// Profiles: AMPLITUDE_DAMPING {one_minus_exp, constant}; SIGMA_PM_KERNEL and
// QUTRIT_LADDER {exp, constant}; PURE_DEPHASING {exp}; DEPHASING_BAR {exp, exp_cos}.
std::string default_profile(ModelId id);
std::vector<std::string> model_profiles(ModelId id);

struct Model {
    ModelConfig config;
    std::string profile;
    SuperOp structure;            // fixed superoperator sharing the damping basis
    GeneratorSpec generator;      // native description (TCL or NZ)
    std::function<Matrix(double)> native_regular;  // closed-form regular part at time t
    Matrix native_delta;          // delta(t) coefficient (zero unless NZ with a delta)
};

// Throws UnknownModel / InvalidArgument.
Model build(const ModelConfig& config);

// The six models with parameters for which every map eigenvalue stays away
// from zero on [0, grid.t_end()] (kernel amplitudes 1/16 for the ladder kernels).
std::vector<ModelConfig> zoo(const TimeGrid& grid);

// --- random dephasing closed forms ----------------------------------------

std::array<double, 3> random_dephasing_mu(const SimplexPoint& x, double t);
std::array<double, 3> random_dephasing_rates(const SimplexPoint& x, double t);
std::array<double, 3> random_dephasing_map_eigenvalues(const SimplexPoint& x, double t);
// Y_k(t) = e^{-2 x_k t}(x_k - 1)
std::array<double, 3> random_dephasing_y(const SimplexPoint& x, double t);
std::array<double, 3> random_dephasing_redfield_rates(const SimplexPoint& x, double t);

std::array<EigenSignal, 3> reference_exact_rates(const SimplexPoint& x, const TimeGrid& grid);
std::array<EigenSignal, 3> reference_redfield_rates(const SimplexPoint& x, const TimeGrid& grid);

// --- Pauli channels --------------------------------------------------------

// Channel indices carrying sx, sy, sz. Throws PreconditionViolated if the
// damping basis is not the Pauli one.
std::array<int, 3> pauli_channels(const DampingDecomposition& d);
// gamma_i from m_k = -(gamma_i + gamma_j): gamma_1 = (m_1 - m_2 - m_3) / 2, etc.
std::array<EigenSignal, 3> pauli_rates(const std::array<EigenSignal, 3>& m);
std::array<EigenSignal, 3> pauli_rates(const GeneratorSpec& gen);

// --- barred dephasing -------------------------------------------------------

struct BarDephasing {
    EigenSignal phi_bar;            // closed form
    EigenSignal phi_bar_talbot;     // numerical Laplace inversion
    EigenSignal gamma_bar;          // -(1/2) d/dt ln|phi_bar|
    EigenSignal gamma_bar_integral; // -(1/2) ln|phi_bar|
    EigenSignal redfield_rate;      // K(t) = int_0^t k, delta counted once
};

// Laplace transform of d(phi)/dt for a dephasing profile.
LaplaceFn phi_dot_laplace(const std::string& phi_profile);
// (1/u)(1 + f)/(1 - f) with f the transform of d(phi)/dt.
LaplaceFn phi_bar_laplace(const std::string& phi_profile);
BarDephasing reference_bar_dephasing(const std::string& phi_profile, const TimeGrid& grid,
                                     int contour_nodes = 32);

} // namespace dampkit
