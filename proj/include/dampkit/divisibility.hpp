#pragma once

// CP- and P-divisibility of exact and Redfield-like dynamics.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "dampkit/dynamics.hpp"
#include "dampkit/lindblad.hpp"
#include "dampkit/models.hpp"

namespace dampkit {

inline constexpr double kRateTolerance = 1e-9;

struct DivisibilityReport {
    TimeGrid grid;
    std::vector<std::vector<double>> rates;  // canonical rates per grid time (CP analysis only)
    // Last grid time before the first violation, t_end when none; empty when
    // not evaluated.
    std::optional<double> cp_divisible_until;
    std::optional<double> first_cp_violation;
    std::optional<double> p_divisible_until;  // empty when not evaluated
    std::optional<double> first_p_violation;
    std::string model;
    GeneratorKind kind = GeneratorKind::TCL;
};

// Canonical-rate positivity at every grid time. Throws PreconditionViolated
// for memory kernels or generators that fail the GKS conditions.
DivisibilityReport cp_divisibility(const GeneratorSpec& gen, double tol = kRateTolerance);

// gamma_i + gamma_j >= -tol for all i != j.
DivisibilityReport pauli_p_divisibility(const std::array<EigenSignal, 3>& gamma, double tol = kRateTolerance);

// CP analysis plus, for qubit Pauli generators, the Pauli P criterion.
DivisibilityReport analyze_divisibility(const GeneratorSpec& gen, double tol = kRateTolerance);

// --- random-dephasing region scan ---------------------------------------

struct ScanOptions {
    double horizon = 20.0;  // closed forms are sampled on [0, horizon]
    double dt = 0.01;
    double tol = kRateTolerance;
    int threads = 0;        // 0: hardware concurrency
};

struct ScanRow {
    int i = 0, j = 0, k = 0;  // barycentric indices, i + j + k = resolution
    SimplexPoint x{};
    double t = 0.0;
    bool exact_cp = false;
    bool red_cp = false;
    bool exact_p = false;
    bool red_p = false;
};

// Rows ordered by point (lexicographic in i, j) and then by the given times.
std::vector<ScanRow> figure2_scan(int resolution, const std::vector<double>& times,
                                  const ScanOptions& options = {});

// x_i = x_j <= x_k for some permutation, on the integer grid.
bool on_tripod(int i, int j, int k);

struct RegionSummary {
    double t = 0.0;
    int points = 0;
    int exact_cp = 0;
    int red_cp = 0;
    int red_cp_on_tripod = 0;
    int red_cp_off_tripod = 0;
    int tripod_points = 0;
    // Max over both directions of the grid distance between the Redfield-CP set and the tripod.
    int red_tripod_hausdorff = 0;
    // Exact-CP points that are not Redfield-CP.
    int exact_only = 0;
};
std::vector<RegionSummary> summarize_scan(const std::vector<ScanRow>& rows, int resolution);

// --- single-eigenvalue and generalized Pauli checks -------------------------

struct Corollary2Result {
    Complex ell = 0.0;            // the nonzero eigenvalue of L
    bool instance = false;        // rate gamma(t) >= -tol everywhere it exists
    bool rate_changes_sign = false;
    double min_rate = 0.0;
    double min_redfield_ratio = 0.0;  // min_t m_red(t) / ell
    bool redfield_nonnegative = false;
    bool confirmed = false;       // instance && redfield_nonnegative
    EigenSignal rate;             // gamma(t), NaN-free; zero where the map eigenvalue vanishes
    EigenSignal redfield_ratio;
};

// rate is gamma(t) for kind TCL or k(t) (with delta) for kind NZ, so the
// generator is rate * L. Throws PreconditionViolated unless L has exactly one
// distinct nonzero eigenvalue, which must be real and negative.
Corollary2Result corollary2_check(const SuperOp& l, const EigenSignal& rate, GeneratorKind kind,
                                  double tol = 1e-8, const FlowOptions& flow = {});

enum class PauliVerdict { NotPDivisible, Inconclusive };
const char* pauli_verdict_name(PauliVerdict v);

struct GenPauliResult {
    PauliVerdict verdict = PauliVerdict::Inconclusive;
    double max_redfield_eigenvalue = 0.0;
    int channel = -1;
    double at_time = 0.0;
    // Empirical |G~(u)| < 1 status on u in [0.1, 100], worst channel.
    LaplaceBound laplace;
};

// gen must be time-local with real eigen-signals (PreconditionViolated otherwise).
GenPauliResult gen_pauli_necessary(const GeneratorSpec& gen, double tol = 1e-9, const FlowOptions& flow = {});

} // namespace dampkit
