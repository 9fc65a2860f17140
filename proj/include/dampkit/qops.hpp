#pragma once

// Operator and superoperator algebra on B(H) for a finite-dimensional H.
//
// Superoperators are stored as N^2 x N^2 matrices in a Hilbert-Schmidt
// orthonormal operator basis {s_a}:  M_ab = Tr[s_a^dag X(s_b)].
// Operators are expanded as w = sum_a Tr[s_a^dag w] s_a.

#include <complex>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace dampkit {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Operator = Eigen::MatrixXcd;

inline constexpr double kBasisTolerance = 1e-12;

// Tr[a^dag b]
Complex hs_inner(const Operator& a, const Operator& b);

bool all_finite(const Matrix& m);

class OperatorBasis {
public:
    // Throws InvalidArgument when the elements are not N^2 square N x N
    // matrices orthonormal within kBasisTolerance, or when the identity flag is
    // set but the last element is not 1/sqrt(N).
    OperatorBasis(std::vector<Operator> elements, bool last_is_normalized_identity);

    int dim() const noexcept { return dim_; }
    int size() const noexcept { return static_cast<int>(elements_.size()); }
    bool last_is_normalized_identity() const noexcept { return identity_last_; }

    const Operator& operator[](int alpha) const { return elements_[static_cast<std::size_t>(alpha)]; }
    const std::vector<Operator>& elements() const noexcept { return elements_; }

    // c_a = Tr[s_a^dag w]
    Vector coefficients(const Operator& op) const;
    // sum_a c_a s_a
    Operator compose(const Vector& coefficients) const;

    Matrix gram() const;
    // max_ab |Tr[s_a^dag s_b] - delta_ab|
    double orthonormality_residual() const;

private:
    int dim_ = 0;
    std::vector<Operator> elements_;
    bool identity_last_ = false;
};

using BasisPtr = std::shared_ptr<const OperatorBasis>;

// {sx, sy, sz, 1} / sqrt(2), identity last.
BasisPtr pauli_basis();
// The eight normalized Gell-Mann matrices followed by 1/sqrt(3).
BasisPtr gell_mann_basis();
// Pauli basis for N = 2, Gell-Mann for N = 3.
BasisPtr default_basis(int dim);

namespace pauli {
Operator identity();
Operator x();
Operator y();
Operator z();
// |0><1| with sz = diag(1, -1), i.e. the raising operator.
Operator plus();
Operator minus();
} // namespace pauli

using OperatorMap = std::function<Operator(const Operator&)>;

struct SuperOp {
    BasisPtr basis;
    Matrix matrix;

    int dim() const { return basis->dim(); }
    Operator apply(const Operator& op) const;
};

SuperOp superop_identity(const BasisPtr& basis);
SuperOp superop_zero(const BasisPtr& basis);

// M_ab = Tr[s_a^dag action(s_b)]. Throws DimensionMismatch when the action
// returns operators of the wrong size.
SuperOp to_superop(const OperatorMap& action, const BasisPtr& basis);

// Adjoint map with respect to the Hilbert-Schmidt product.
SuperOp dual(const SuperOp& superop);

// Dissipator D_A(w) = A w A^dag - {A^dag A, w}/2 as an operator map.
OperatorMap dissipator(const Operator& jump);

struct DecompositionOptions {
    double max_condition = 1e8;
    double degeneracy_tolerance = 1e-8;
};

// Bi-orthogonal damping basis of a diagonalizable superoperator:
//   X(w) = sum_a lambda_a Tr[varsigma_a^dag w] tau_a,  Tr[varsigma_a^dag tau_b] = delta_ab.
// Channels are ordered by descending real part, then descending imaginary part.
// Inside a degenerate group the tau's are an orthonormal but otherwise
// arbitrary basis of the eigenspace; only the group projector is unique.
struct DampingDecomposition {
    BasisPtr basis;
    std::vector<Complex> eigenvalues;
    std::vector<Operator> tau;
    std::vector<Operator> sigma_dual;
    Matrix right;  // column a holds the basis coefficients of tau_a
    Matrix left;   // column a holds the basis coefficients of varsigma_a
    std::vector<std::vector<int>> groups;
    bool degenerate = false;

    int dim() const { return basis->dim(); }
    int channel_count() const { return static_cast<int>(eigenvalues.size()); }

    // |tau_a><varsigma_a| as an N^2 x N^2 matrix.
    Matrix projector(int alpha) const;
    // sum_a values[a] |tau_a><varsigma_a|
    SuperOp compose(std::span<const Complex> values) const;
    // Coordinates of a superoperator in the damping basis: S M R.
    Matrix to_damping_coordinates(const Matrix& m) const;
    Matrix from_damping_coordinates(const Matrix& d) const;

    double biorthogonality_residual() const;
    double completeness_residual() const;
};

DampingDecomposition damping_decompose(const SuperOp& superop,
                                       const DecompositionOptions& options = {});

// Index of the channel whose group projector leaves `op` invariant, or -1.
int find_channel(const DampingDecomposition& decomposition, const Operator& op,
                 double tolerance = 1e-9);

double commutator_norm(const SuperOp& a, const SuperOp& b);
// True iff max |(AB - BA)_ij| <= tol. Throws DimensionMismatch.
bool commute_test(const SuperOp& a, const SuperOp& b, double tol);

double max_abs(const Matrix& m);

} // namespace dampkit
