#include "dampkit/qops.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "dampkit/errors.hpp"

namespace dampkit {

Complex hs_inner(const Operator& a, const Operator& b)
{
    return (a.adjoint() * b).trace();
}

bool all_finite(const Matrix& m)
{
    for (Eigen::Index i = 0; i < m.size(); ++i) {
        const Complex z = m.data()[i];
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    }
    return true;
}

double max_abs(const Matrix& m)
{
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------
// OperatorBasis

OperatorBasis::OperatorBasis(std::vector<Operator> elements, bool last_is_normalized_identity)
    : elements_(std::move(elements)), identity_last_(last_is_normalized_identity)
{
    if (elements_.empty()) throw InvalidArgument("operator basis is empty");
    dim_ = static_cast<int>(elements_.front().rows());
    if (dim_ <= 0 || static_cast<int>(elements_.size()) != dim_ * dim_) {
        throw InvalidArgument("operator basis must contain N^2 elements");
    }
    for (const auto& e : elements_) {
        if (e.rows() != dim_ || e.cols() != dim_) {
            throw InvalidArgument("operator basis elements must all be N x N");
        }
        if (!all_finite(e)) throw InvalidArgument("operator basis element is not finite");
    }
    const double residual = orthonormality_residual();
    if (residual > kBasisTolerance) {
        std::ostringstream msg;
        msg << "operator basis is not Hilbert-Schmidt orthonormal (residual " << residual << ")";
        throw InvalidArgument(msg.str());
    }
    if (identity_last_) {
        const Operator expected = Operator::Identity(dim_, dim_) / std::sqrt(static_cast<double>(dim_));
        if (max_abs(elements_.back() - expected) > kBasisTolerance) {
            throw InvalidArgument("last basis element is not the normalized identity");
        }
    }
}

Vector OperatorBasis::coefficients(const Operator& op) const
{
    if (op.rows() != dim_ || op.cols() != dim_) {
        throw DimensionMismatch("operator dimension does not match basis");
    }
    Vector c(size());
    for (int a = 0; a < size(); ++a) c(a) = hs_inner(elements_[static_cast<std::size_t>(a)], op);
    return c;
}

Operator OperatorBasis::compose(const Vector& coefficients) const
{
    if (coefficients.size() != size()) {
        throw DimensionMismatch("coefficient vector length does not match basis");
    }
    Operator out = Operator::Zero(dim_, dim_);
    for (int a = 0; a < size(); ++a) out += coefficients(a) * elements_[static_cast<std::size_t>(a)];
    return out;
}

Matrix OperatorBasis::gram() const
{
    Matrix g(size(), size());
    for (int a = 0; a < size(); ++a)
        for (int b = 0; b < size(); ++b)
            g(a, b) = hs_inner(elements_[static_cast<std::size_t>(a)], elements_[static_cast<std::size_t>(b)]);
    return g;
}

double OperatorBasis::orthonormality_residual() const
{
    return max_abs(gram() - Matrix::Identity(size(), size()));
}

// ---------------------------------------------------------------------------
// Standard bases

namespace pauli {
Operator identity() { return Operator::Identity(2, 2); }
Operator x()
{
    Operator m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}
Operator y()
{
    Operator m(2, 2);
    m << 0, Complex(0, -1), Complex(0, 1), 0;
    return m;
}
Operator z()
{
    Operator m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}
Operator plus()
{
    Operator m = Operator::Zero(2, 2);
    m(0, 1) = 1;
    return m;
}
Operator minus()
{
    Operator m = Operator::Zero(2, 2);
    m(1, 0) = 1;
    return m;
}
} // namespace pauli

BasisPtr pauli_basis()
{
    static const BasisPtr basis = [] {
        const double s = 1.0 / std::sqrt(2.0);
        return std::make_shared<const OperatorBasis>(
            std::vector<Operator>{s * pauli::x(), s * pauli::y(), s * pauli::z(), s * pauli::identity()},
            true);
    }();
    return basis;
}

BasisPtr gell_mann_basis()
{
    static const BasisPtr basis = [] {
        const Complex i(0, 1);
        const double s2 = 1.0 / std::sqrt(2.0);
        auto zero = [] { return Operator::Zero(3, 3).eval(); };
        std::vector<Operator> g(9, zero());
        g[0](0, 1) = g[0](1, 0) = s2;
        g[1](0, 1) = -i * s2;
        g[1](1, 0) = i * s2;
        g[2](0, 0) = s2;
        g[2](1, 1) = -s2;
        g[3](0, 2) = g[3](2, 0) = s2;
        g[4](0, 2) = -i * s2;
        g[4](2, 0) = i * s2;
        g[5](1, 2) = g[5](2, 1) = s2;
        g[6](1, 2) = -i * s2;
        g[6](2, 1) = i * s2;
        const double s6 = 1.0 / std::sqrt(6.0);
        g[7](0, 0) = s6;
        g[7](1, 1) = s6;
        g[7](2, 2) = -2.0 * s6;
        g[8] = Operator::Identity(3, 3) / std::sqrt(3.0);
        return std::make_shared<const OperatorBasis>(std::move(g), true);
    }();
    return basis;
}

BasisPtr default_basis(int dim)
{
    switch (dim) {
    case 2: return pauli_basis();
    case 3: return gell_mann_basis();
    default: throw InvalidArgument("no built-in operator basis for dimension " + std::to_string(dim));
    }
}

// ---------------------------------------------------------------------------
// SuperOp

Operator SuperOp::apply(const Operator& op) const
{
    return basis->compose(matrix * basis->coefficients(op));
}

SuperOp superop_identity(const BasisPtr& basis)
{
    return {basis, Matrix::Identity(basis->size(), basis->size())};
}

SuperOp superop_zero(const BasisPtr& basis)
{
    return {basis, Matrix::Zero(basis->size(), basis->size())};
}

SuperOp to_superop(const OperatorMap& action, const BasisPtr& basis)
{
    const int n = basis->size();
    Matrix m(n, n);
    for (int b = 0; b < n; ++b) {
        const Operator image = action((*basis)[b]);
        if (image.rows() != basis->dim() || image.cols() != basis->dim()) {
            throw DimensionMismatch("action output dimension does not match basis dimension");
        }
        m.col(b) = basis->coefficients(image);
    }
    return {basis, std::move(m)};
}

SuperOp dual(const SuperOp& superop)
{
    return {superop.basis, superop.matrix.adjoint()};
}

OperatorMap dissipator(const Operator& jump)
{
    const Operator jd = jump.adjoint();
    const Operator jdj = jd * jump;
    return [jump, jd, jdj](const Operator& w) -> Operator {
        return jump * w * jd - 0.5 * (jdj * w + w * jdj);
    };
}

// ---------------------------------------------------------------------------
// Damping decomposition

Matrix DampingDecomposition::projector(int alpha) const
{
    return right.col(alpha) * left.col(alpha).adjoint();
}

SuperOp DampingDecomposition::compose(std::span<const Complex> values) const
{
    if (static_cast<int>(values.size()) != channel_count()) {
        throw DimensionMismatch("eigenvalue count does not match damping basis");
    }
    Vector v(channel_count());
    for (int a = 0; a < channel_count(); ++a) v(a) = values[static_cast<std::size_t>(a)];
    return {basis, right * v.asDiagonal() * left.adjoint()};
}

Matrix DampingDecomposition::to_damping_coordinates(const Matrix& m) const
{
    return left.adjoint() * m * right;
}

Matrix DampingDecomposition::from_damping_coordinates(const Matrix& d) const
{
    return right * d * left.adjoint();
}

double DampingDecomposition::biorthogonality_residual() const
{
    const int n = channel_count();
    Matrix g(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            g(a, b) = hs_inner(sigma_dual[static_cast<std::size_t>(a)], tau[static_cast<std::size_t>(b)]);
    return max_abs(g - Matrix::Identity(n, n));
}

double DampingDecomposition::completeness_residual() const
{
    const int n = channel_count();
    Matrix sum = Matrix::Zero(n, n);
    for (int a = 0; a < n; ++a) sum += projector(a);
    return max_abs(sum - Matrix::Identity(n, n));
}

namespace {

bool eigen_order(Complex a, Complex b)
{
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
}

// Rotate the global phase so the largest-magnitude entry is real positive.
void fix_phase(Eigen::Ref<Vector> v)
{
    Eigen::Index best = 0;
    double best_abs = -1.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        // ties resolved toward the lowest index for determinism
        if (std::abs(v(i)) > best_abs + 1e-12) {
            best_abs = std::abs(v(i));
            best = i;
        }
    }
    if (best_abs > 0) v *= std::conj(v(best)) / best_abs;
}

} // namespace

DampingDecomposition damping_decompose(const SuperOp& superop, const DecompositionOptions& options)
{
    const Matrix& m = superop.matrix;
    const int n = static_cast<int>(m.rows());
    if (m.cols() != n || n != superop.basis->size()) {
        throw DimensionMismatch("superoperator matrix does not match its basis");
    }
    if (!all_finite(m)) throw InvalidArgument("superoperator has non-finite entries");

    Eigen::ComplexEigenSolver<Matrix> solver(m, true);
    if (solver.info() != Eigen::Success) throw NotDiagonalizable("eigensolver did not converge");
    const Vector values = solver.eigenvalues();
    const Matrix vectors = solver.eigenvectors();

    // Union-find grouping of numerically degenerate eigenvalues.
    std::vector<int> parent(static_cast<std::size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int i) {
        while (parent[static_cast<std::size_t>(i)] != i) {
            parent[static_cast<std::size_t>(i)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(i)])];
            i = parent[static_cast<std::size_t>(i)];
        }
        return i;
    };
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double scale = std::max(1.0, std::max(std::abs(values(i)), std::abs(values(j))));
            if (std::abs(values(i) - values(j)) <= options.degeneracy_tolerance * scale) {
                parent[static_cast<std::size_t>(find(i))] = find(j);
            }
        }
    }
    std::vector<std::vector<int>> raw_groups;
    {
        std::vector<int> slot(static_cast<std::size_t>(n), -1);
        for (int i = 0; i < n; ++i) {
            const int root = find(i);
            if (slot[static_cast<std::size_t>(root)] < 0) {
                slot[static_cast<std::size_t>(root)] = static_cast<int>(raw_groups.size());
                raw_groups.emplace_back();
            }
            raw_groups[static_cast<std::size_t>(slot[static_cast<std::size_t>(root)])].push_back(i);
        }
    }

    struct Group {
        Complex mean;
        std::vector<int> members;
    };
    std::vector<Group> groups;
    for (auto& members : raw_groups) {
        Complex mean = 0;
        for (int i : members) mean += values(i);
        mean /= static_cast<double>(members.size());
        groups.push_back({mean, std::move(members)});
    }
    std::stable_sort(groups.begin(), groups.end(),
                     [](const Group& a, const Group& b) { return eigen_order(a.mean, b.mean); });

    const double norm = std::max(1.0, m.operatorNorm());
    DampingDecomposition out;
    out.basis = superop.basis;
    out.right = Matrix(n, n);
    int column = 0;
    for (const auto& g : groups) {
        const int d = static_cast<int>(g.members.size());
        if (d == 1) {
            Vector v = vectors.col(g.members.front());
            v.normalize();
            fix_phase(v);
            out.right.col(column) = v;
        } else {
            // Orthonormal basis of the eigenspace from the d smallest singular vectors.
            const Matrix shifted = m - g.mean * Matrix::Identity(n, n);
            Eigen::JacobiSVD<Matrix> svd(shifted, Eigen::ComputeFullV);
            const auto& sv = svd.singularValues();
            if (sv(n - d) > 1e-6 * norm) {
                std::ostringstream msg;
                msg << "eigenvalue " << g.mean << " has algebraic multiplicity " << d
                    << " but a smaller eigenspace (Jordan block)";
                throw NotDiagonalizable(msg.str());
            }
            for (int k = 0; k < d; ++k) {
                Vector v = svd.matrixV().col(n - d + k);
                fix_phase(v);
                out.right.col(column + k) = v;
            }
            out.degenerate = true;
        }
        std::vector<int> group_columns(static_cast<std::size_t>(d));
        std::iota(group_columns.begin(), group_columns.end(), column);
        out.groups.push_back(std::move(group_columns));
        for (int k = 0; k < d; ++k) out.eigenvalues.push_back(g.mean);
        column += d;
    }

    Eigen::JacobiSVD<Matrix> cond_svd(out.right);
    const auto& s = cond_svd.singularValues();
    const double condition = s(n - 1) > 0 ? s(0) / s(n - 1) : std::numeric_limits<double>::infinity();
    if (!(condition <= options.max_condition)) {
        std::ostringstream msg;
        msg << "eigenvector matrix condition number " << condition << " exceeds "
            << options.max_condition << " (superoperator is not diagonalizable)";
        throw NotDiagonalizable(msg.str());
    }

    out.left = out.right.inverse().adjoint();
    out.tau.reserve(static_cast<std::size_t>(n));
    out.sigma_dual.reserve(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a) {
        out.tau.push_back(superop.basis->compose(out.right.col(a)));
        out.sigma_dual.push_back(superop.basis->compose(out.left.col(a)));
    }
    return out;
}

int find_channel(const DampingDecomposition& decomposition, const Operator& op, double tolerance)
{
    const Vector c = decomposition.basis->coefficients(op);
    const double scale = std::max(1.0, c.norm());
    for (const auto& group : decomposition.groups) {
        Matrix p = Matrix::Zero(c.size(), c.size());
        for (int a : group) p += decomposition.projector(a);
        if ((p * c - c).norm() <= tolerance * scale && c.norm() > 0) return group.front();
    }
    return -1;
}

double commutator_norm(const SuperOp& a, const SuperOp& b)
{
    if (a.matrix.rows() != b.matrix.rows() || a.matrix.cols() != b.matrix.cols()) {
        throw DimensionMismatch("superoperators have different dimensions");
    }
    return max_abs(a.matrix * b.matrix - b.matrix * a.matrix);
}

bool commute_test(const SuperOp& a, const SuperOp& b, double tol)
{
    return commutator_norm(a, b) <= tol;
}

} // namespace dampkit
