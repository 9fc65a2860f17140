#pragma once

// Canonical GKS/Lindblad form of trace- and Hermiticity-preserving generators.

#include <vector>

#include "dampkit/qops.hpp"

namespace dampkit {

struct GeneratorConditions {
    double trace_residual = 0.0;        // max_b |Tr K(s_b)|
    double hermiticity_residual = 0.0;  // max_b ||K(s_b^dag) - K(s_b)^dag||_max
    double tolerance = 0.0;             // absolute tolerance actually applied
    bool ok() const { return trace_residual <= tolerance && hermiticity_residual <= tolerance; }
};

// Residuals of Tr K(w) = 0 and K(w^dag) = K(w)^dag over the basis. The
// tolerance is relative: tol * max(1, max|K_ab|).
GeneratorConditions generator_conditions(const SuperOp& generator, double tol = 1e-10);
bool check_generator_conditions(const SuperOp& generator, double tol = 1e-10);

struct GKSMatrix {
    BasisPtr basis;
    Matrix kappa;          // (N^2 - 1) x (N^2 - 1), Hermitian
    Operator hamiltonian;  // N x N, Hermitian
};

// Throws PreconditionViolated when the generator conditions fail and
// InvalidArgument when the basis does not end with 1/sqrt(N).
GKSMatrix gks_matrix(const SuperOp& generator, double tol = 1e-10);

struct CanonicalForm {
    std::vector<double> rates;  // descending
    std::vector<Operator> lindblad_ops;
    Operator hamiltonian;
};

CanonicalForm canonical_form(const GKSMatrix& gks);
SuperOp reconstruct(const CanonicalForm& canon, const BasisPtr& basis);

int count_rates_above(const CanonicalForm& canon, double threshold);
// Channels with |rate| > threshold, negative rates included.
int count_nonzero_rates(const CanonicalForm& canon, double threshold);
double min_rate(const CanonicalForm& canon);

// Qubit only: coefficient of (sz w sz - w) in the GKS expansion, kappa_zz / 2
// with z the sz/sqrt(2) slot. Throws InvalidArgument for other dimensions.
double qubit_dephasing_coefficient(const GKSMatrix& gks);

// ||a - b||_F / max(||b||_F, 1e-300)
double relative_frobenius(const Matrix& a, const Matrix& b);

} // namespace dampkit
