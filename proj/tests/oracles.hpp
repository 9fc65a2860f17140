#pragma once

// Reference constructions for the tests, written independently of the
// library internals: explicit Pauli/Gell-Mann matrices, superoperator matrices
// by direct trace evaluation, matrix exponentials via Eigen.

#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

namespace oracle {

using C = std::complex<double>;
using Mat = Eigen::MatrixXcd;

inline const C I{0.0, 1.0};

inline Mat m2(C a, C b, C c, C d)
{
    Mat m(2, 2);
    m << a, b, c, d;
    return m;
}

inline Mat sx() { return m2(0, 1, 1, 0); }
inline Mat sy() { return m2(0, -I, I, 0); }
inline Mat sz() { return m2(1, 0, 0, -1); }
inline Mat id2() { return Mat::Identity(2, 2); }
// |0><1| and |1><0| with sz|0> = |0>
inline Mat raise() { return m2(0, 1, 0, 0); }
inline Mat lower() { return m2(0, 0, 1, 0); }

inline std::vector<Mat> pauli_list()
{
    const double s = 1.0 / std::sqrt(2.0);
    return {s * sx(), s * sy(), s * sz(), s * id2()};
}

inline Mat unit(int n, int i, int j)
{
    Mat m = Mat::Zero(n, n);
    m(i, j) = 1.0;
    return m;
}

// Standard Gell-Mann ordering lambda_1..lambda_8 scaled by 1/sqrt(2), identity last.
inline std::vector<Mat> gell_mann_list()
{
    const double s = 1.0 / std::sqrt(2.0);
    std::vector<Mat> out;
    out.push_back(s * (unit(3, 0, 1) + unit(3, 1, 0)));
    out.push_back(s * (-I * unit(3, 0, 1) + I * unit(3, 1, 0)));
    out.push_back(s * (unit(3, 0, 0) - unit(3, 1, 1)));
    out.push_back(s * (unit(3, 0, 2) + unit(3, 2, 0)));
    out.push_back(s * (-I * unit(3, 0, 2) + I * unit(3, 2, 0)));
    out.push_back(s * (unit(3, 1, 2) + unit(3, 2, 1)));
    out.push_back(s * (-I * unit(3, 1, 2) + I * unit(3, 2, 1)));
    out.push_back((unit(3, 0, 0) + unit(3, 1, 1) - 2.0 * unit(3, 2, 2)) / std::sqrt(6.0));
    out.push_back(Mat::Identity(3, 3) / std::sqrt(3.0));
    return out;
}

using Action = std::function<Mat(const Mat&)>;

// M_ab = Tr[s_a^dag X(s_b)]
inline Mat superop(const std::vector<Mat>& basis, const Action& x)
{
    const auto n = static_cast<Eigen::Index>(basis.size());
    Mat m(n, n);
    for (Eigen::Index b = 0; b < n; ++b) {
        const Mat xb = x(basis[static_cast<std::size_t>(b)]);
        for (Eigen::Index a = 0; a < n; ++a) m(a, b) = (basis[static_cast<std::size_t>(a)].adjoint() * xb).trace();
    }
    return m;
}

inline Action dissipator(const Mat& l)
{
    return [l](const Mat& w) {
        const Mat ll = l.adjoint() * l;
        return Mat(l * w * l.adjoint() - 0.5 * (ll * w + w * ll));
    };
}

inline Action sum(const Action& a, const Action& b)
{
    return [a, b](const Mat& w) { return Mat(a(w) + b(w)); };
}

inline Action scaled(double s, const Action& a)
{
    return [s, a](const Mat& w) { return Mat(s * a(w)); };
}

inline Mat expm(const Mat& m)
{
    return m.exp();
}

inline double max_abs(const Mat& m)
{
    return m.cwiseAbs().maxCoeff();
}

// Random GKSL action: -i[H, w] + sum_ab kappa_ab (F_a w F_b^dag - {F_b^dag F_a, w}/2)
// with F the traceless part of the basis and kappa >= 0.
struct RandomLindblad {
    Mat h;
    Mat kappa;
    Action action;
};

inline RandomLindblad random_lindblad(const std::vector<Mat>& basis, std::mt19937_64& rng, double rate_scale = 1.0)
{
    std::normal_distribution<double> nd;
    const int n = static_cast<int>(basis.front().rows());
    const int m = static_cast<int>(basis.size()) - 1;
    Mat a(n, n), b(m, m);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = C(nd(rng), nd(rng));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) b(i, j) = C(nd(rng), nd(rng));
    RandomLindblad r;
    r.h = 0.5 * (a + a.adjoint());
    r.h -= (r.h.trace() / double(n)) * Mat::Identity(n, n);
    r.kappa = rate_scale * b * b.adjoint() / double(m);
    const Mat h = r.h, kappa = r.kappa;
    const std::vector<Mat> f(basis.begin(), basis.end() - 1);
    r.action = [h, kappa, f](const Mat& w) {
        Mat out = -I * (h * w - w * h);
        for (std::size_t i = 0; i < f.size(); ++i) {
            for (std::size_t j = 0; j < f.size(); ++j) {
                const C k = kappa(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
                const Mat fbfa = f[j].adjoint() * f[i];
                out += k * (f[i] * w * f[j].adjoint() - 0.5 * (fbfa * w + w * fbfa));
            }
        }
        return out;
    };
    return r;
}

// Simpson-free trapezoid on a uniform grid, for oracle integrals.
inline double trapezoid(const std::function<double(double)>& f, double a, double b, int n)
{
    const double h = (b - a) / n;
    double s = 0.5 * (f(a) + f(b));
    for (int i = 1; i < n; ++i) s += f(a + i * h);
    return s * h;
}

} // namespace oracle
