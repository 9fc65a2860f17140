#pragma once

// Scalar eigenvalue-function machinery for commutative dynamics.
//
// Every superoperator of a commutative family shares one damping basis, so the
// time-local generator, the memory kernel, the Redfield-like generator and the
// map itself are each described channel by channel by a scalar function of
// time. This header converts between those functions:
//
//   m_tcl  --tcl_to_map-->  m = exp(int m_tcl)
//   m_tcl  --tcl_to_g-->    G = dm/dt
//   G      --g_to_redfield--> m_red,  m_red = G - G * m_red     (Volterra)
//   m_red  --redfield_to_nz--> m_nz = m_red(0) delta(t) + dm_red/dt
//   m_nz   --nz_to_tcl-->   m_tcl = G / (1 + int G)
//
// All transforms run in the time domain on a uniform grid. Laplace inversion
// (fixed Talbot) is available as an independent cross-check.

#include <complex>
#include <functional>
#include <vector>

namespace dampkit {

using Complex = std::complex<double>;

class TimeGrid {
public:
    // Throws InvalidArgument unless t_end > 0 and n_steps >= 1.
    TimeGrid(double t_end, int n_steps);

    double t_end() const noexcept { return t_end_; }
    int n_steps() const noexcept { return n_steps_; }
    int size() const noexcept { return n_steps_ + 1; }
    double dt() const noexcept { return t_end_ / n_steps_; }
    double time(int k) const noexcept { return k == n_steps_ ? t_end_ : k * dt(); }

    // Index of the last grid point with time <= t (clamped to the grid).
    int index_at_or_before(double t) const;

    bool operator==(const TimeGrid&) const = default;

private:
    double t_end_;
    int n_steps_;
};

// Samples f(t_k) of a scalar function on a grid, plus the weight of a Dirac
// delta at t = 0. Only memory-kernel eigenvalues carry a nonzero delta.
struct EigenSignal {
    TimeGrid grid;
    std::vector<Complex> samples;
    Complex delta_weight{0.0};

    explicit EigenSignal(TimeGrid g);
    EigenSignal(TimeGrid g, std::vector<Complex> s, Complex delta = 0.0);

    static EigenSignal from_function(const TimeGrid& g, const std::function<Complex(double)>& f,
                                     Complex delta = 0.0);

    int size() const noexcept { return static_cast<int>(samples.size()); }
    Complex operator[](int k) const { return samples[static_cast<std::size_t>(k)]; }
    Complex& operator[](int k) { return samples[static_cast<std::size_t>(k)]; }
    bool has_delta() const noexcept { return delta_weight != Complex(0.0); }

    // Linear interpolation between grid samples (delta excluded).
    Complex at(double t) const;
};

using LaplaceFn = std::function<Complex(Complex)>;

struct FlowOptions {
    // |m(t)| at or below this is treated as a zero of the map eigenvalue.
    double singular_floor = 1e-12;
    // Richardson-extrapolate the trapezoidal Volterra solves (h and 2h grids).
    bool richardson = true;
};

// --- elementary grid operations ------------------------------------------

// Cumulative trapezoid int_0^t f; the delta weight is not included.
EigenSignal cumulative_integral(const EigenSignal& f);
// Centered second-order differences, one-sided second order at the ends.
EigenSignal derivative(const EigenSignal& f);
// (a * b)(t) = int_0^t a(t - s) b(s) ds by the trapezoid rule.
EigenSignal convolve(const EigenSignal& a, const EigenSignal& b);
// Solves y(t) = f(t) + int_0^t kernel(t - s) y(s) ds.
EigenSignal solve_volterra(const EigenSignal& forcing, const EigenSignal& kernel, bool richardson);

// --- transforms between eigenvalue functions -------------------------------

EigenSignal tcl_to_map(const EigenSignal& m_tcl);
// Throws SingularMap where |m| <= singular_floor.
EigenSignal map_to_tcl(const EigenSignal& m, const FlowOptions& options = {});
EigenSignal tcl_to_g(const EigenSignal& m_tcl);
EigenSignal g_to_redfield(const EigenSignal& g, const FlowOptions& options = {});
EigenSignal redfield_to_nz(const EigenSignal& m_red);
// m_red(t) = int_0^t m_nz, the delta at the origin counted once.
EigenSignal nz_to_redfield(const EigenSignal& m_nz);
EigenSignal tcl_to_redfield(const EigenSignal& m_tcl, const FlowOptions& options = {});
EigenSignal tcl_to_nz(const EigenSignal& m_tcl, const FlowOptions& options = {});
// G(t) for a memory-kernel eigenvalue: G' = r + c G + r * G, G(0) = c.
EigenSignal nz_to_g(const EigenSignal& m_nz, const FlowOptions& options = {});
// Map eigenvalue m(t) = 1 + int_0^t G for a memory-kernel eigenvalue.
EigenSignal nz_to_map(const EigenSignal& m_nz, const FlowOptions& options = {});
// Throws SingularMap where the map eigenvalue 1 + int G reaches singular_floor.
EigenSignal nz_to_tcl(const EigenSignal& m_nz, const FlowOptions& options = {});

// sum_{j=1}^{j_max} (-1)^{j+1} G^{*j}
EigenSignal neumann_series_partial(const EigenSignal& g, int j_max);

// --- Laplace domain --------------------------------------------------------

inline constexpr double kInitialValueAbscissa = 1e8;

// Fixed-Talbot inversion at a single t > 0. Throws ContourFailure when a
// summand overflows.
Complex talbot_inverse_at(const LaplaceFn& f, double t, int contour_nodes);
// Samples for t > 0; the t = 0 sample is the initial-value limit u f(u) at
// u = kInitialValueAbscissa.
EigenSignal talbot_inverse_laplace(const LaplaceFn& f, const TimeGrid& grid, int contour_nodes = 32);

// Truncated numerical Laplace transform of a sampled signal (delta included).
Complex laplace_transform(const EigenSignal& f, double u);

// Empirical status of |G~(u)| < 1 on a logarithmic grid of real u.
struct LaplaceBound {
    double max_abs = 0.0;
    double argmax_u = 0.0;
    bool holds = true;
};
LaplaceBound laplace_bound_check(const EigenSignal& g, double u_min = 0.1, double u_max = 100.0,
                                 int points = 64);

double max_abs_difference(const EigenSignal& a, const EigenSignal& b);

} // namespace dampkit
