#include "dampkit/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "dampkit/errors.hpp"

namespace dampkit {

GeneratorConditions generator_conditions(const SuperOp& generator, double tol)
{
    const OperatorBasis& basis = *generator.basis;
    GeneratorConditions out;
    out.tolerance = tol * std::max(1.0, max_abs(generator.matrix));
    for (int b = 0; b < basis.size(); ++b) {
        const Operator image = generator.apply(basis[b]);
        out.trace_residual = std::max(out.trace_residual, std::abs(image.trace()));
        const Operator image_dag = generator.apply(basis[b].adjoint());
        out.hermiticity_residual =
            std::max(out.hermiticity_residual, max_abs(image_dag - image.adjoint()));
    }
    return out;
}

bool check_generator_conditions(const SuperOp& generator, double tol)
{
    return generator_conditions(generator, tol).ok();
}

GKSMatrix gks_matrix(const SuperOp& generator, double tol)
{
    const OperatorBasis& basis = *generator.basis;
    if (!basis.last_is_normalized_identity()) {
        throw InvalidArgument("GKS extraction needs a basis whose last element is 1/sqrt(N)");
    }
    const GeneratorConditions cond = generator_conditions(generator, tol);
    if (!cond.ok()) {
        throw PreconditionViolated("generator is not trace and Hermiticity preserving (trace residual " +
                                   std::to_string(cond.trace_residual) + ", hermiticity residual " +
                                   std::to_string(cond.hermiticity_residual) + ")");
    }

    const int n2 = basis.size();
    const int n = basis.dim();
    std::vector<Operator> images;
    images.reserve(static_cast<std::size_t>(n2));
    for (int c = 0; c < n2; ++c) images.push_back(generator.apply(basis[c]));

    // c_ab = sum_chi Tr[s_b s_chi^dag s_a^dag K(s_chi)] = Tr[s_b X_a]
    Matrix c(n2, n2);
    for (int a = 0; a < n2; ++a) {
        Operator x = Operator::Zero(n, n);
        const Operator sa_dag = basis[a].adjoint();
        for (int chi = 0; chi < n2; ++chi) x += basis[chi].adjoint() * sa_dag * images[static_cast<std::size_t>(chi)];
        for (int b = 0; b < n2; ++b) c(a, b) = (basis[b] * x).trace();
    }

    GKSMatrix out;
    out.basis = generator.basis;
    const Matrix block = c.topLeftCorner(n2 - 1, n2 - 1);
    out.kappa = 0.5 * (block + block.adjoint());

    Operator s = Operator::Zero(n, n);
    for (int a = 0; a < n2 - 1; ++a) s += c(a, n2 - 1) * basis[a];
    s /= std::sqrt(static_cast<double>(n));
    const Operator h = (s.adjoint() - s) / Complex(0.0, 2.0);
    out.hamiltonian = 0.5 * (h + h.adjoint());
    return out;
}

CanonicalForm canonical_form(const GKSMatrix& gks)
{
    const int m = static_cast<int>(gks.kappa.rows());
    const int n = gks.basis->dim();
    CanonicalForm out;
    out.hamiltonian = gks.hamiltonian;
    if (m == 0) return out;

    Eigen::SelfAdjointEigenSolver<Matrix> es(gks.kappa);
    const Eigen::VectorXd values = es.eigenvalues();
    const Matrix& v = es.eigenvectors();

    std::vector<int> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return values(a) > values(b); });

    for (int col : order) {
        out.rates.push_back(values(col));
        Operator l = Operator::Zero(n, n);
        for (int b = 0; b < m; ++b) l += v(b, col) * (*gks.basis)[b];
        out.lindblad_ops.push_back(std::move(l));
    }
    return out;
}

SuperOp reconstruct(const CanonicalForm& canon, const BasisPtr& basis)
{
    const int n = basis->dim();
    Operator h = canon.hamiltonian;
    if (h.size() == 0) h = Operator::Zero(n, n);
    auto action = [&](const Operator& w) -> Operator {
        Operator out = Complex(0.0, -1.0) * (h * w - w * h);
        for (std::size_t a = 0; a < canon.rates.size(); ++a) {
            if (canon.rates[a] == 0.0) continue;
            out += canon.rates[a] * dissipator(canon.lindblad_ops[a])(w);
        }
        return out;
    };
    return to_superop(action, basis);
}

int count_rates_above(const CanonicalForm& canon, double threshold)
{
    return static_cast<int>(
        std::count_if(canon.rates.begin(), canon.rates.end(), [&](double r) { return r > threshold; }));
}

int count_nonzero_rates(const CanonicalForm& canon, double threshold)
{
    return static_cast<int>(std::count_if(canon.rates.begin(), canon.rates.end(),
                                          [&](double r) { return std::abs(r) > threshold; }));
}

double min_rate(const CanonicalForm& canon)
{
    if (canon.rates.empty()) return 0.0;
    return *std::min_element(canon.rates.begin(), canon.rates.end());
}

double qubit_dephasing_coefficient(const GKSMatrix& gks)
{
    if (gks.basis->dim() != 2) throw InvalidArgument("dephasing coefficient is defined for qubits only");
    const Vector c = gks.basis->coefficients(pauli::z() / std::sqrt(2.0));
    // c picks out the sz/sqrt(2) direction even if the basis is permuted
    const Vector head = c.head(gks.kappa.rows());
    return 0.5 * (head.adjoint() * gks.kappa * head)(0, 0).real();
}

double relative_frobenius(const Matrix& a, const Matrix& b)
{
    return (a - b).norm() / std::max(b.norm(), 1e-300);
}

} // namespace dampkit
