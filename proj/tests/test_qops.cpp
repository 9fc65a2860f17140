#include <doctest.h>

#include <algorithm>
#include <random>

#include "dampkit/errors.hpp"
#include "dampkit/qops.hpp"
#include "oracles.hpp"

using namespace dampkit;
using oracle::Mat;

namespace {

std::vector<Complex> sorted_eigs(const Mat& m)
{
    Eigen::ComplexEigenSolver<Mat> es(m);
    std::vector<Complex> v(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(v.begin(), v.end(), [](Complex a, Complex b) {
        return a.real() != b.real() ? a.real() > b.real() : a.imag() > b.imag();
    });
    return v;
}

Mat random_matrix(int n, std::mt19937_64& rng)
{
    std::normal_distribution<double> nd;
    Mat m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = Complex(nd(rng), nd(rng));
    return m;
}

SuperOp from_oracle(const BasisPtr& b, const oracle::Action& a)
{
    std::vector<Mat> list(b->elements().begin(), b->elements().end());
    return SuperOp{b, oracle::superop(list, a)};
}

} // namespace

TEST_CASE("pauli basis elements and gram matrix")
{
    const auto b = pauli_basis();
    const auto ref = oracle::pauli_list();
    REQUIRE(b->size() == 4);
    CHECK(b->dim() == 2);
    CHECK(b->last_is_normalized_identity());
    for (int a = 0; a < 4; ++a) CHECK(oracle::max_abs((*b)[a] - ref[static_cast<std::size_t>(a)]) < 1e-15);
    CHECK(oracle::max_abs(b->gram() - Mat::Identity(4, 4)) < 1e-12);
    CHECK(b->orthonormality_residual() <= 1e-12);
    CHECK(std::abs((*b)[2](0, 0) - 1.0 / std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs((*b)[2](1, 1) + 1.0 / std::sqrt(2.0)) < 1e-15);
}

TEST_CASE("gell-mann basis matches the standard matrices")
{
    const auto b = gell_mann_basis();
    const auto ref = oracle::gell_mann_list();
    REQUIRE(b->size() == 9);
    for (int a = 0; a < 9; ++a) CHECK(oracle::max_abs((*b)[a] - ref[static_cast<std::size_t>(a)]) < 1e-15);
    CHECK(oracle::max_abs(b->gram() - Mat::Identity(9, 9)) < 1e-12);
    // lambda_8 / sqrt(2) has diagonal (1, 1, -2)/sqrt(6); lambda_4 / sqrt(2) has entry (1,3) = 1/sqrt(2)
    CHECK(std::abs((*b)[7](2, 2) + 2.0 / std::sqrt(6.0)) < 1e-15);
    CHECK(std::abs((*b)[3](0, 2) - 1.0 / std::sqrt(2.0)) < 1e-15);
    for (int a = 0; a < 8; ++a) CHECK(std::abs((*b)[a].trace()) < 1e-15);
    CHECK(default_basis(3)->size() == 9);
    CHECK_THROWS_AS(default_basis(4), InvalidArgument);
}

TEST_CASE("basis construction rejects non-orthonormal sets")
{
    auto els = pauli_basis()->elements();
    els[0] *= 2.0;
    CHECK_THROWS_AS(OperatorBasis(els, true), InvalidArgument);
    auto swapped = pauli_basis()->elements();
    std::swap(swapped[0], swapped[3]);
    CHECK_THROWS_AS(OperatorBasis(swapped, true), InvalidArgument);
    CHECK_NOTHROW(OperatorBasis(swapped, false));
}

TEST_CASE("coefficients and compose are inverse")
{
    std::mt19937_64 rng(7);
    const auto b = gell_mann_basis();
    const Mat w = random_matrix(3, rng);
    CHECK(oracle::max_abs(b->compose(b->coefficients(w)) - w) < 1e-13);
}

TEST_CASE("to_superop on simple actions")
{
    const auto b = pauli_basis();
    const auto id = to_superop([](const Operator& w) { return w; }, b);
    CHECK(oracle::max_abs(id.matrix - Mat::Identity(4, 4)) < 1e-15);
    CHECK(oracle::max_abs(superop_identity(b).matrix - Mat::Identity(4, 4)) < 1e-15);

    // w -> sz w sz: diag(-1, -1, 1, 1) in the order (sx, sy, sz, 1)
    const auto zz = to_superop([](const Operator& w) { Operator z = pauli::z(); return Operator(z * w * z); }, b);
    Mat expect = Mat::Zero(4, 4);
    expect.diagonal() << -1, -1, 1, 1;
    CHECK(oracle::max_abs(zz.matrix - expect) < 1e-15);

    CHECK_THROWS_AS(to_superop([](const Operator&) { return Operator(Operator::Zero(3, 3)); }, b), DimensionMismatch);
}

TEST_CASE("dissipator matches the oracle action")
{
    const auto b = pauli_basis();
    const auto lib = to_superop(dissipator(pauli::minus()), b);
    const auto ref = from_oracle(b, oracle::dissipator(oracle::lower()));
    CHECK(oracle::max_abs(lib.matrix - ref.matrix) < 1e-15);
    CHECK(oracle::max_abs(pauli::plus() - oracle::raise()) < 1e-15);
}

TEST_CASE("dual satisfies the adjoint relation")
{
    std::mt19937_64 rng(11);
    const auto b = gell_mann_basis();
    const SuperOp x{b, random_matrix(9, rng)};
    const SuperOp xd = dual(x);
    for (int trial = 0; trial < 5; ++trial) {
        const Mat a = random_matrix(3, rng), c = random_matrix(3, rng);
        const Complex lhs = (a.adjoint() * x.apply(c)).trace();
        const Complex rhs = (xd.apply(a).adjoint() * c).trace();
        CHECK(std::abs(lhs - rhs) < 1e-11);
    }
    // the sigma+- kernel is self-adjoint
    const auto k = to_superop(
        [](const Operator& w) { return Operator(dissipator(pauli::minus())(w) + dissipator(pauli::plus())(w)); }, pauli_basis());
    CHECK(oracle::max_abs(dual(k).matrix - k.matrix) < 1e-15);
}

TEST_CASE("amplitude damping decomposition")
{
    const auto b = pauli_basis();
    const auto x = to_superop(dissipator(pauli::minus()), b);
    const auto d = damping_decompose(x);
    REQUIRE(d.channel_count() == 4);
    const std::vector<Complex> expect{0.0, -0.5, -0.5, -1.0};
    for (int a = 0; a < 4; ++a) CHECK(std::abs(d.eigenvalues[static_cast<std::size_t>(a)] - expect[static_cast<std::size_t>(a)]) < 1e-12);
    CHECK(d.degenerate);
    CHECK(d.biorthogonality_residual() < 1e-10);

    // stationary tau is proportional to (1 - sz)/2
    const Mat stat = 0.5 * (Mat::Identity(2, 2) - oracle::sz());
    const Mat t0 = d.tau[0] / d.tau[0].trace();
    CHECK(oracle::max_abs(t0 - stat) < 1e-12);

    // sz, s+ and s- sit in the expected eigenspaces
    const int cz = find_channel(d, pauli::z() - (pauli::z().trace() / 2.0) * Operator::Identity(2, 2));
    CHECK(cz == 3);
    const int cp = find_channel(d, pauli::plus());
    const int cm = find_channel(d, pauli::minus());
    CHECK(cp == 1);
    CHECK(cm == 1);
    CHECK(find_channel(d, pauli::x() + pauli::z()) == -1);
}

TEST_CASE("sigma+- kernel has a self-dual damping basis")
{
    const auto k = to_superop(
        [](const Operator& w) { return Operator(dissipator(pauli::minus())(w) + dissipator(pauli::plus())(w)); }, pauli_basis());
    const auto d = damping_decompose(k);
    const std::vector<Complex> expect{0.0, -1.0, -1.0, -2.0};
    for (int a = 0; a < 4; ++a) CHECK(std::abs(d.eigenvalues[static_cast<std::size_t>(a)] - expect[static_cast<std::size_t>(a)]) < 1e-12);
    for (int a = 0; a < 4; ++a) CHECK(oracle::max_abs(d.tau[static_cast<std::size_t>(a)] - d.sigma_dual[static_cast<std::size_t>(a)]) < 1e-10);
}

TEST_CASE("qutrit ladder kernel eigenvalues")
{
    const auto b = gell_mann_basis();
    Mat sp = Mat::Zero(3, 3);
    sp(0, 1) = 1.0;
    sp(1, 2) = 1.0;
    const auto x = from_oracle(b, oracle::sum(oracle::dissipator(sp), oracle::dissipator(Mat(sp.adjoint()))));
    const auto d = damping_decompose(x);
    std::vector<double> got;
    for (auto z : d.eigenvalues) {
        CHECK(std::abs(z.imag()) < 1e-12);
        got.push_back(z.real());
    }
    std::sort(got.begin(), got.end(), std::greater<>());
    const std::vector<double> spec{0, -0.5, -0.5, -1, -1, -1, -2.5, -2.5, -3};
    REQUIRE(got.size() == 9);
    for (std::size_t i = 0; i < 9; ++i) CHECK(std::abs(got[i] - spec[i]) < 1e-9);
}

TEST_CASE("zero superoperator decomposes to zeros")
{
    const auto d = damping_decompose(superop_zero(pauli_basis()));
    for (auto z : d.eigenvalues) CHECK(std::abs(z) < 1e-15);
}

TEST_CASE("jordan block is rejected")
{
    Mat m = Mat::Zero(4, 4);
    m(0, 1) = 1.0;
    CHECK_THROWS_AS(damping_decompose(SuperOp{pauli_basis(), m}), NotDiagonalizable);
}

TEST_CASE("property: random diagonalizable superops")
{
    std::mt19937_64 rng(20240501);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = trial % 2 ? 4 : 9;
        const auto b = n == 4 ? pauli_basis() : gell_mann_basis();
        const SuperOp x{b, random_matrix(n, rng)};
        const auto d = damping_decompose(x);
        CHECK(d.biorthogonality_residual() < 1e-10);
        const Mat back = d.compose(d.eigenvalues).matrix;
        CHECK((back - x.matrix).norm() / x.matrix.norm() < 1e-9);
        const auto ref = sorted_eigs(x.matrix);
        for (std::size_t a = 0; a < ref.size(); ++a) CHECK(std::abs(d.eigenvalues[a] - ref[a]) < 1e-9);
        // dual eigen-operators: X'(varsigma_a) = conj(lambda_a) varsigma_a
        const SuperOp xd = dual(x);
        for (int a = 0; a < d.channel_count(); ++a) {
            const auto ua = static_cast<std::size_t>(a);
            const Mat lhs = xd.apply(d.sigma_dual[ua]);
            CHECK(oracle::max_abs(lhs - std::conj(d.eigenvalues[ua]) * d.sigma_dual[ua]) < 1e-9 * std::max(1.0, d.sigma_dual[ua].norm()));
        }
        // damping coordinates of X are diagonal
        const Mat dc = d.to_damping_coordinates(x.matrix);
        CHECK((dc - Mat(dc.diagonal().asDiagonal())).norm() < 1e-9 * x.matrix.norm());
        CHECK(oracle::max_abs(d.from_damping_coordinates(dc) - x.matrix) < 1e-9 * x.matrix.norm());
    }
}

TEST_CASE("property: hermiticity-preserving spectra are closed under conjugation")
{
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 10; ++trial) {
        const auto basis = trial % 2 ? oracle::pauli_list() : oracle::gell_mann_list();
        const auto b = trial % 2 ? pauli_basis() : gell_mann_basis();
        const auto lind = oracle::random_lindblad(basis, rng);
        const auto d = damping_decompose(from_oracle(b, lind.action));
        for (auto z : d.eigenvalues) {
            double best = 1e300;
            for (auto w : d.eigenvalues) best = std::min(best, std::abs(std::conj(z) - w));
            CHECK(best < 1e-9);
        }
    }
}

TEST_CASE("commute_test")
{
    const auto b = pauli_basis();
    const auto ad = to_superop(dissipator(pauli::minus()), b);
    const auto conj_x = to_superop([](const Operator& w) { Operator x = pauli::x(); return Operator(x * w * x); }, b);
    CHECK(commute_test(ad, ad, 1e-12));
    CHECK_FALSE(commute_test(conj_x, ad, 1e-6));
    CHECK_FALSE(commute_test(ad, conj_x, 1e-6));
    CHECK(commutator_norm(ad, conj_x) == doctest::Approx(commutator_norm(conj_x, ad)));

    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        const SuperOp a{b, random_matrix(4, rng)}, c{b, random_matrix(4, rng)};
        CHECK(commute_test(a, c, 1e-3) == commute_test(c, a, 1e-3));
    }
    CHECK_THROWS_AS(commute_test(ad, superop_identity(gell_mann_basis()), 1e-9), DimensionMismatch);
}
