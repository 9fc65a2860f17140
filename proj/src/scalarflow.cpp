#include "dampkit/scalarflow.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "dampkit/errors.hpp"

namespace dampkit {

namespace {

bool finite(Complex z)
{
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

void require_same_grid(const EigenSignal& a, const EigenSignal& b)
{
    if (!(a.grid == b.grid)) throw DimensionMismatch("signals live on different time grids");
}

void require_no_delta(const EigenSignal& f, const char* op)
{
    if (f.has_delta()) {
        throw InvalidArgument(std::string(op) + " expects a signal without a delta at the origin");
    }
}

// Plain trapezoidal marching for y = f + kernel * y with step h.
std::vector<Complex> march_volterra(const std::vector<Complex>& f, const std::vector<Complex>& kernel,
                                    double h)
{
    const std::size_t n = f.size();
    std::vector<Complex> y(n);
    if (n == 0) return y;
    y[0] = f[0];
    const Complex denom = 1.0 - 0.5 * h * kernel[0];
    if (std::abs(denom) < 1e-300) throw InvalidArgument("Volterra step is singular");
    for (std::size_t k = 1; k < n; ++k) {
        Complex s = 0.5 * kernel[k] * y[0];
        for (std::size_t j = 1; j < k; ++j) s += kernel[k - j] * y[j];
        y[k] = (f[k] + h * s) / denom;
    }
    return y;
}

std::vector<Complex> every_other(const std::vector<Complex>& v)
{
    std::vector<Complex> out;
    out.reserve(v.size() / 2 + 1);
    for (std::size_t k = 0; k < v.size(); k += 2) out.push_back(v[k]);
    return out;
}

} // namespace

// ---------------------------------------------------------------------------
// TimeGrid / EigenSignal

TimeGrid::TimeGrid(double t_end, int n_steps) : t_end_(t_end), n_steps_(n_steps)
{
    if (!(t_end > 0.0) || !std::isfinite(t_end)) throw InvalidArgument("time grid needs t_end > 0");
    if (n_steps < 1) throw InvalidArgument("time grid needs at least one step");
}

int TimeGrid::index_at_or_before(double t) const
{
    if (t <= 0.0) return 0;
    if (t >= t_end_) return n_steps_;
    const int k = static_cast<int>(std::floor(t / dt() + 1e-9));
    return std::min(k, n_steps_);
}

EigenSignal::EigenSignal(TimeGrid g) : grid(g), samples(static_cast<std::size_t>(g.size()), 0.0) {}

EigenSignal::EigenSignal(TimeGrid g, std::vector<Complex> s, Complex delta)
    : grid(g), samples(std::move(s)), delta_weight(delta)
{
    if (static_cast<int>(samples.size()) != grid.size()) {
        throw DimensionMismatch("sample count does not match the time grid");
    }
    for (const auto& z : samples) {
        if (!finite(z)) throw InvalidArgument("eigen-signal samples must be finite");
    }
    if (!finite(delta_weight)) throw InvalidArgument("delta weight must be finite");
}

EigenSignal EigenSignal::from_function(const TimeGrid& g, const std::function<Complex(double)>& f,
                                       Complex delta)
{
    std::vector<Complex> s(static_cast<std::size_t>(g.size()));
    for (int k = 0; k < g.size(); ++k) s[static_cast<std::size_t>(k)] = f(g.time(k));
    return EigenSignal(g, std::move(s), delta);
}

Complex EigenSignal::at(double t) const
{
    if (t <= 0.0) return samples.front();
    if (t >= grid.t_end()) return samples.back();
    const double x = t / grid.dt();
    const int k = std::min(static_cast<int>(std::floor(x)), grid.n_steps() - 1);
    const double w = x - k;
    return (1.0 - w) * (*this)[k] + w * (*this)[k + 1];
}

// ---------------------------------------------------------------------------
// Grid operations

EigenSignal cumulative_integral(const EigenSignal& f)
{
    EigenSignal out(f.grid);
    const double h = f.grid.dt();
    for (int k = 1; k < f.size(); ++k) out[k] = out[k - 1] + 0.5 * h * (f[k - 1] + f[k]);
    return out;
}

EigenSignal derivative(const EigenSignal& f)
{
    EigenSignal out(f.grid);
    const int n = f.size();
    const double h = f.grid.dt();
    if (n == 2) {
        out[0] = out[1] = (f[1] - f[0]) / h;
        return out;
    }
    if (n < 5) {
        for (int k = 1; k + 1 < n; ++k) out[k] = (f[k + 1] - f[k - 1]) / (2.0 * h);
        out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
        out[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
        return out;
    }
    // fourth order throughout, one-sided five-point stencils at the ends
    const double s = 1.0 / (12.0 * h);
    for (int k = 2; k + 2 < n; ++k) out[k] = s * (f[k - 2] - 8.0 * f[k - 1] + 8.0 * f[k + 1] - f[k + 2]);
    out[0] = s * (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]);
    out[1] = s * (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]);
    out[n - 2] = s * (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - f[n - 5]);
    out[n - 1] = s * (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] + 3.0 * f[n - 5]);
    return out;
}

EigenSignal convolve(const EigenSignal& a, const EigenSignal& b)
{
    require_same_grid(a, b);
    EigenSignal out(a.grid);
    const double h = a.grid.dt();
    for (int k = 1; k < a.size(); ++k) {
        Complex s = 0.5 * (a[k] * b[0] + a[0] * b[k]);
        for (int j = 1; j < k; ++j) s += a[k - j] * b[j];
        out[k] = h * s;
    }
    return out;
}

EigenSignal solve_volterra(const EigenSignal& forcing, const EigenSignal& kernel, bool richardson)
{
    require_same_grid(forcing, kernel);
    const double h = forcing.grid.dt();
    std::vector<Complex> y = march_volterra(forcing.samples, kernel.samples, h);
    const int n = forcing.grid.n_steps();
    if (!richardson || n < 4) return EigenSignal(forcing.grid, std::move(y));

    // Trapezoidal marching has an h^2 error expansion; combine with the 2h
    // solution on the even points and carry the correction to odd points.
    const std::vector<Complex> coarse =
        march_volterra(every_other(forcing.samples), every_other(kernel.samples), 2.0 * h);
    std::vector<Complex> correction(y.size());
    const int last_even = n - (n % 2);
    for (int k = 0; k <= last_even; k += 2) {
        correction[static_cast<std::size_t>(k)] = (y[static_cast<std::size_t>(k)] - coarse[static_cast<std::size_t>(k / 2)]) / 3.0;
    }
    for (int k = 1; k <= n; k += 2) {
        const auto c = [&](int i) { return correction[static_cast<std::size_t>(i)]; };
        if (k + 1 <= last_even) {
            correction[static_cast<std::size_t>(k)] = 0.5 * (c(k - 1) + c(k + 1));
        } else if (k >= 3) {
            correction[static_cast<std::size_t>(k)] = 1.5 * c(k - 1) - 0.5 * c(k - 3);
        } else {
            correction[static_cast<std::size_t>(k)] = c(k - 1);
        }
    }
    for (std::size_t k = 0; k < y.size(); ++k) y[k] += correction[k];
    return EigenSignal(forcing.grid, std::move(y));
}

// ---------------------------------------------------------------------------
// Transforms

EigenSignal tcl_to_map(const EigenSignal& m_tcl)
{
    require_no_delta(m_tcl, "tcl_to_map");
    EigenSignal out = cumulative_integral(m_tcl);
    for (auto& z : out.samples) z = std::exp(z);
    return out;
}

namespace {

// Cumulative trapezoid with the Euler-Maclaurin end correction, used where the
// integrand itself is fourth-order accurate (Richardson-extrapolated solves).
EigenSignal integral_matching(const EigenSignal& f, bool high_order)
{
    EigenSignal out = cumulative_integral(f);
    if (!high_order || f.size() < 5) return out;
    const EigenSignal d = derivative(f);
    const double c = f.grid.dt() * f.grid.dt() / 12.0;
    for (int k = 1; k < out.size(); ++k) out[k] -= c * (d[k] - d[0]);
    return out;
}

// Throws SingularMap when a sample, or the chord between neighbouring samples,
// comes within floor of zero. The chord test catches sign changes between grid points.
void require_invertible(const std::vector<Complex>& m, const TimeGrid& grid, double floor)
{
    for (std::size_t k = 0; k < m.size(); ++k) {
        double dist = std::abs(m[k]);
        if (k > 0) {
            const Complex a = m[k - 1], d = m[k] - m[k - 1];
            const double dd = std::norm(d);
            if (dd > 0.0) {
                const double s = std::clamp(-(std::conj(d) * a).real() / dd, 0.0, 1.0);
                dist = std::min(dist, std::abs(a + s * d));
            }
        }
        if (dist <= floor) {
            std::ostringstream msg;
            msg << "map eigenvalue vanishes near t = " << grid.time(static_cast<int>(k))
                << "; no time-local generator exists there";
            throw SingularMap(msg.str());
        }
    }
}

} // namespace

EigenSignal map_to_tcl(const EigenSignal& m, const FlowOptions& options)
{
    require_no_delta(m, "map_to_tcl");
    if (std::abs(m[0] - 1.0) > 1e-9) throw InvalidArgument("map eigenvalue must start at 1");
    require_invertible(m.samples, m.grid, options.singular_floor);
    EigenSignal out = derivative(m);
    for (int k = 0; k < m.size(); ++k) out[k] /= m[k];
    return out;
}

EigenSignal tcl_to_g(const EigenSignal& m_tcl)
{
    const EigenSignal m = tcl_to_map(m_tcl);
    EigenSignal out(m_tcl.grid);
    for (int k = 0; k < out.size(); ++k) out[k] = m_tcl[k] * m[k];
    return out;
}

EigenSignal g_to_redfield(const EigenSignal& g, const FlowOptions& options)
{
    require_no_delta(g, "g_to_redfield");
    EigenSignal kernel = g;
    for (auto& z : kernel.samples) z = -z;
    return solve_volterra(g, kernel, options.richardson);
}

EigenSignal redfield_to_nz(const EigenSignal& m_red)
{
    require_no_delta(m_red, "redfield_to_nz");
    EigenSignal out = derivative(m_red);
    out.delta_weight = m_red[0];
    return out;
}

EigenSignal nz_to_redfield(const EigenSignal& m_nz)
{
    EigenSignal out = cumulative_integral(m_nz);
    for (auto& z : out.samples) z += m_nz.delta_weight;
    return out;
}

EigenSignal tcl_to_redfield(const EigenSignal& m_tcl, const FlowOptions& options)
{
    return g_to_redfield(tcl_to_g(m_tcl), options);
}

EigenSignal tcl_to_nz(const EigenSignal& m_tcl, const FlowOptions& options)
{
    return redfield_to_nz(tcl_to_redfield(m_tcl, options));
}

EigenSignal nz_to_g(const EigenSignal& m_nz, const FlowOptions& options)
{
    // Integrating G' = r + cG + r*G once gives a second-kind equation with
    // kernel and forcing both equal to c + R(t), R = int_0^t r.
    EigenSignal kernel = integral_matching(m_nz, options.richardson);
    kernel.delta_weight = 0.0;
    for (auto& z : kernel.samples) z += m_nz.delta_weight;
    return solve_volterra(kernel, kernel, options.richardson);
}

EigenSignal nz_to_map(const EigenSignal& m_nz, const FlowOptions& options)
{
    EigenSignal m = integral_matching(nz_to_g(m_nz, options), options.richardson);
    for (auto& z : m.samples) z += 1.0;
    return m;
}

EigenSignal nz_to_tcl(const EigenSignal& m_nz, const FlowOptions& options)
{
    const EigenSignal g = nz_to_g(m_nz, options);
    const EigenSignal integral = integral_matching(g, options.richardson);
    std::vector<Complex> m(integral.samples.size());
    for (std::size_t k = 0; k < m.size(); ++k) m[k] = 1.0 + integral.samples[k];
    require_invertible(m, m_nz.grid, options.singular_floor);
    EigenSignal out(m_nz.grid);
    for (int k = 0; k < out.size(); ++k) out[k] = g[k] / m[static_cast<std::size_t>(k)];
    return out;
}

EigenSignal neumann_series_partial(const EigenSignal& g, int j_max)
{
    require_no_delta(g, "neumann_series_partial");
    if (j_max < 1) throw InvalidArgument("neumann_series_partial needs j_max >= 1");
    EigenSignal power = g;
    EigenSignal sum = g;
    for (int j = 2; j <= j_max; ++j) {
        power = convolve(g, power);
        const double sign = (j % 2 == 0) ? -1.0 : 1.0;
        for (int k = 0; k < sum.size(); ++k) sum[k] += sign * power[k];
    }
    return sum;
}

// ---------------------------------------------------------------------------
// Laplace domain

Complex talbot_inverse_at(const LaplaceFn& f, double t, int contour_nodes)
{
    if (!(t > 0.0)) throw InvalidArgument("Talbot inversion needs t > 0");
    if (contour_nodes < 2) throw InvalidArgument("Talbot inversion needs at least two nodes");
    const int m = contour_nodes;
    const double r = 2.0 * m / (5.0 * t);
    const Complex i(0.0, 1.0);

    // Trapezoid over theta in (-pi, pi) on s(theta) = r theta (cot theta + i);
    // the +/- theta terms are paired so complex-valued originals are handled.
    Complex sum = 0.5 * std::exp(r * t) * f(Complex(r, 0.0));
    if (!finite(sum)) throw ContourFailure("Talbot summand overflowed at theta = 0");
    for (int k = 1; k < m; ++k) {
        const double theta = k * std::numbers::pi / m;
        const double cot = 1.0 / std::tan(theta);
        const double sigma = theta + (theta * cot - 1.0) * cot;
        for (double sign : {1.0, -1.0}) {
            const Complex s = r * theta * Complex(cot, sign);
            const Complex term = std::exp(t * s) * f(s) * (1.0 + i * sign * sigma);
            if (!finite(term)) {
                std::ostringstream msg;
                msg << "Talbot summand overflowed at t = " << t << ", node " << k;
                throw ContourFailure(msg.str());
            }
            sum += 0.5 * term;
        }
    }
    return (r / m) * sum;
}

EigenSignal talbot_inverse_laplace(const LaplaceFn& f, const TimeGrid& grid, int contour_nodes)
{
    EigenSignal out(grid);
    const Complex u0(kInitialValueAbscissa, 0.0);
    out[0] = u0 * f(u0);
    if (!finite(out[0])) throw ContourFailure("initial-value limit is not finite");
    for (int k = 1; k < grid.size(); ++k) out[k] = talbot_inverse_at(f, grid.time(k), contour_nodes);
    return out;
}

Complex laplace_transform(const EigenSignal& f, double u)
{
    const double h = f.grid.dt();
    Complex s = 0.0;
    for (int k = 0; k < f.size(); ++k) {
        const double w = (k == 0 || k == f.size() - 1) ? 0.5 : 1.0;
        s += w * f[k] * std::exp(-u * f.grid.time(k));
    }
    return f.delta_weight + h * s;
}

LaplaceBound laplace_bound_check(const EigenSignal& g, double u_min, double u_max, int points)
{
    LaplaceBound out;
    for (int i = 0; i < points; ++i) {
        const double frac = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
        const double u = u_min * std::pow(u_max / u_min, frac);
        const double v = std::abs(laplace_transform(g, u));
        if (v > out.max_abs) {
            out.max_abs = v;
            out.argmax_u = u;
        }
    }
    out.holds = out.max_abs < 1.0;
    return out;
}

double max_abs_difference(const EigenSignal& a, const EigenSignal& b)
{
    require_same_grid(a, b);
    double d = std::abs(a.delta_weight - b.delta_weight);
    for (int k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a[k] - b[k]));
    return d;
}

} // namespace dampkit
