#include "dampkit/divisibility.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "dampkit/errors.hpp"

namespace dampkit {

namespace {

void record_violation(const TimeGrid& grid, int k, std::optional<double>& first, std::optional<double>& until)
{
    if (first) return;
    first = grid.time(k);
    until = k == 0 ? 0.0 : grid.time(k - 1);
}

bool is_pauli_generator(const GeneratorSpec& gen)
{
    if (gen.basis()->dim() != 2 || gen.kind == GeneratorKind::NZ) return false;
    try {
        pauli_channels(gen.decomposition);
    } catch (const PreconditionViolated&) {
        return false;
    }
    return true;
}

} // namespace

DivisibilityReport cp_divisibility(const GeneratorSpec& gen, double tol)
{
    if (gen.kind == GeneratorKind::NZ) {
        throw PreconditionViolated("CP-divisibility needs a time-local (TCL or Redfield-like) generator");
    }
    const TimeGrid& grid = gen.grid();
    DivisibilityReport report{grid, {}, grid.t_end(), {}, {}, {}, "", gen.kind};
    report.rates.reserve(static_cast<std::size_t>(grid.size()));
    for (int k = 0; k < grid.size(); ++k) {
        const CanonicalForm canon = canonical_form(gks_matrix(gen.at(k)));
        if (min_rate(canon) < -tol) record_violation(grid, k, report.first_cp_violation, report.cp_divisible_until);
        report.rates.push_back(canon.rates);
    }
    return report;
}

DivisibilityReport pauli_p_divisibility(const std::array<EigenSignal, 3>& gamma, double tol)
{
    const TimeGrid& grid = gamma[0].grid;
    DivisibilityReport report{grid, {}, {}, {}, grid.t_end(), {}, "", GeneratorKind::TCL};
    for (int k = 0; k < grid.size(); ++k) {
        bool ok = true;
        for (int i = 0; i < 3; ++i) {
            for (int j = i + 1; j < 3; ++j) ok = ok && (gamma[static_cast<std::size_t>(i)][k].real() + gamma[static_cast<std::size_t>(j)][k].real() >= -tol);
        }
        if (!ok) record_violation(grid, k, report.first_p_violation, report.p_divisible_until);
    }
    return report;
}

DivisibilityReport analyze_divisibility(const GeneratorSpec& gen, double tol)
{
    DivisibilityReport report = cp_divisibility(gen, tol);
    if (is_pauli_generator(gen)) {
        const DivisibilityReport p = pauli_p_divisibility(pauli_rates(gen), tol);
        report.p_divisible_until = p.p_divisible_until;
        report.first_p_violation = p.first_p_violation;
    }
    return report;
}

// ---------------------------------------------------------------------------
// Region scan

bool on_tripod(int i, int j, int k)
{
    return (i == j && i <= k) || (i == k && i <= j) || (j == k && j <= i);
}

std::vector<ScanRow> figure2_scan(int resolution, const std::vector<double>& times, const ScanOptions& options)
{
    if (resolution < 2) throw InvalidArgument("scan resolution must be at least 2");
    if (times.empty()) throw InvalidArgument("scan needs at least one time");
    if (!(options.dt > 0.0) || !(options.horizon > 0.0)) throw InvalidArgument("scan needs dt > 0 and horizon > 0");
    for (double t : times) {
        if (!(t >= 0.0) || t > options.horizon + 1e-12) {
            throw InvalidArgument("scan times must lie in [0, " + std::to_string(options.horizon) + "]");
        }
    }
    const int steps = static_cast<int>(std::llround(options.horizon / options.dt));
    const TimeGrid grid(options.horizon, std::max(steps, 1));

    struct Point { int i, j, k; };
    std::vector<Point> points;
    for (int i = 0; i <= resolution; ++i)
        for (int j = 0; j <= resolution - i; ++j) points.push_back({i, j, resolution - i - j});

    const std::size_t nt = times.size();
    std::vector<ScanRow> rows(points.size() * nt);
    const double inf = std::numeric_limits<double>::infinity();

    auto work = [&](std::size_t p) {
        const Point& pt = points[p];
        const SimplexPoint x{static_cast<double>(pt.i) / resolution, static_cast<double>(pt.j) / resolution,
                             static_cast<double>(pt.k) / resolution};
        // first grid time at which each criterion fails
        double exact_cp = inf, red_cp = inf, exact_p = inf, red_p = inf;
        for (int m = 0; m < grid.size(); ++m) {
            const double t = grid.time(m);
            const auto g = random_dephasing_rates(x, t);
            const auto r = random_dephasing_redfield_rates(x, t);
            const auto neg = [&](const std::array<double, 3>& v) {
                return std::min({v[0], v[1], v[2]}) < -options.tol;
            };
            const auto pair_neg = [&](const std::array<double, 3>& v) {
                return std::min({v[0] + v[1], v[0] + v[2], v[1] + v[2]}) < -options.tol;
            };
            if (exact_cp == inf && neg(g)) exact_cp = t;
            if (red_cp == inf && neg(r)) red_cp = t;
            if (exact_p == inf && pair_neg(g)) exact_p = t;
            if (red_p == inf && pair_neg(r)) red_p = t;
        }
        for (std::size_t q = 0; q < nt; ++q) {
            const double t = times[q];
            // a violation at grid time s counts for every t >= s
            rows[p * nt + q] = ScanRow{pt.i, pt.j, pt.k, x, t,
                                       exact_cp > t + 1e-12, red_cp > t + 1e-12,
                                       exact_p > t + 1e-12, red_p > t + 1e-12};
        }
    };

    unsigned workers = options.threads > 0 ? static_cast<unsigned>(options.threads)
                                           : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(points.size()));
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t p = next++; p < points.size(); p = next++) work(p);
        });
    }
    for (auto& th : pool) th.join();
    return rows;
}

std::vector<RegionSummary> summarize_scan(const std::vector<ScanRow>& rows, int resolution)
{
    std::vector<double> times;
    for (const auto& r : rows) {
        if (std::find(times.begin(), times.end(), r.t) == times.end()) times.push_back(r.t);
    }
    auto grid_distance = [](const ScanRow& a, int i, int j, int k) {
        return (std::abs(a.i - i) + std::abs(a.j - j) + std::abs(a.k - k)) / 2;
    };

    std::vector<RegionSummary> out;
    for (double t : times) {
        RegionSummary s;
        s.t = t;
        std::vector<const ScanRow*> red;
        std::vector<const ScanRow*> tripod;
        for (const auto& r : rows) {
            if (r.t != t) continue;
            ++s.points;
            const bool tri = on_tripod(r.i, r.j, r.k);
            if (tri) {
                ++s.tripod_points;
                tripod.push_back(&r);
            }
            if (r.exact_cp) ++s.exact_cp;
            if (r.exact_cp && !r.red_cp) ++s.exact_only;
            if (r.red_cp) {
                ++s.red_cp;
                red.push_back(&r);
                ++(tri ? s.red_cp_on_tripod : s.red_cp_off_tripod);
            }
        }
        if (red.empty()) {
            s.red_tripod_hausdorff = resolution;
        } else {
            int h = 0;
            for (const ScanRow* a : red) {
                int best = resolution;
                for (const ScanRow* b : tripod) best = std::min(best, grid_distance(*a, b->i, b->j, b->k));
                h = std::max(h, best);
            }
            for (const ScanRow* b : tripod) {
                int best = resolution;
                for (const ScanRow* a : red) best = std::min(best, grid_distance(*a, b->i, b->j, b->k));
                h = std::max(h, best);
            }
            s.red_tripod_hausdorff = h;
        }
        out.push_back(s);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Single nonzero eigenvalue

Corollary2Result corollary2_check(const SuperOp& l, const EigenSignal& rate, GeneratorKind kind, double tol,
                                  const FlowOptions& flow)
{
    if (kind == GeneratorKind::RED) throw InvalidArgument("corollary2_check takes a TCL rate or an NZ kernel");
    if (kind == GeneratorKind::TCL && rate.has_delta()) throw InvalidArgument("a time-local rate has no delta part");

    const DampingDecomposition d = damping_decompose(l);
    const double scale = std::max(1.0, max_abs(l.matrix));
    std::vector<Complex> nonzero;
    for (Complex v : d.eigenvalues) {
        if (std::abs(v) <= 1e-8 * scale) continue;
        const bool seen = std::any_of(nonzero.begin(), nonzero.end(),
                                      [&](Complex w) { return std::abs(v - w) <= 1e-8 * std::max(1.0, std::abs(v)); });
        if (!seen) nonzero.push_back(v);
    }
    if (nonzero.size() != 1) {
        throw PreconditionViolated("L must have exactly one distinct nonzero eigenvalue (found " +
                                   std::to_string(nonzero.size()) + ")");
    }
    const Complex ell = nonzero.front();
    if (std::abs(ell.imag()) > 1e-10 * scale || !(ell.real() < 0.0)) {
        throw PreconditionViolated("the nonzero eigenvalue of L must be real and negative");
    }

    EigenSignal m = rate;
    for (auto& z : m.samples) z *= ell;
    m.delta_weight *= ell;

    Corollary2Result out{ell, false, false, 0.0, 0.0, false, false, EigenSignal(rate.grid), EigenSignal(rate.grid)};
    EigenSignal m_red(rate.grid);
    bool crossed_zero = false;
    if (kind == GeneratorKind::TCL) {
        out.rate = rate;
        m_red = tcl_to_redfield(m, flow);
    } else {
        // gamma = (dm/dt / m) / ell from the map eigenvalue; where m vanishes the
        // rate diverges and changes sign
        const EigenSignal map = nz_to_map(m, flow);
        const EigenSignal dm = derivative(map);
        for (int k = 0; k < map.size(); ++k) {
            if (std::abs(map[k]) <= flow.singular_floor) {
                crossed_zero = true;
                continue;
            }
            out.rate[k] = (dm[k] / map[k]) / ell;
        }
        for (int k = 1; k < map.size(); ++k) {
            if (map[k].real() * map[k - 1].real() < 0.0) crossed_zero = true;
        }
        m_red = nz_to_redfield(m);
    }

    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& z : out.rate.samples) {
        lo = std::min(lo, z.real());
        hi = std::max(hi, z.real());
    }
    out.min_rate = lo;
    out.instance = lo >= -tol && !crossed_zero;
    out.rate_changes_sign = crossed_zero || (lo < -tol && hi > tol);

    out.min_redfield_ratio = std::numeric_limits<double>::infinity();
    for (int k = 0; k < m_red.size(); ++k) {
        out.redfield_ratio[k] = m_red[k] / ell;
        out.min_redfield_ratio = std::min(out.min_redfield_ratio, out.redfield_ratio[k].real());
    }
    out.redfield_nonnegative = out.min_redfield_ratio >= -tol;
    out.confirmed = out.instance && out.redfield_nonnegative;
    return out;
}

// ---------------------------------------------------------------------------
// Generalized Pauli

const char* pauli_verdict_name(PauliVerdict v)
{
    return v == PauliVerdict::NotPDivisible ? "NOT_P_DIVISIBLE" : "INCONCLUSIVE";
}

GenPauliResult gen_pauli_necessary(const GeneratorSpec& gen, double tol, const FlowOptions& flow)
{
    if (gen.kind != GeneratorKind::TCL) throw PreconditionViolated("the generalized Pauli test needs a TCL generator");
    for (const auto& s : gen.signals) {
        for (const auto& z : s.samples) {
            if (std::abs(z.imag()) > 1e-12 * std::max(1.0, std::abs(z.real()))) {
                throw PreconditionViolated("generalized Pauli generators have real eigen-signals");
            }
        }
    }
    GenPauliResult out;
    out.max_redfield_eigenvalue = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < gen.channel_count(); ++a) {
        const EigenSignal g = tcl_to_g(gen.signals[static_cast<std::size_t>(a)]);
        const EigenSignal red = g_to_redfield(g, flow);
        for (int k = 0; k < red.size(); ++k) {
            if (red[k].real() > out.max_redfield_eigenvalue) {
                out.max_redfield_eigenvalue = red[k].real();
                out.channel = a;
                out.at_time = red.grid.time(k);
            }
        }
        const LaplaceBound b = laplace_bound_check(g);
        if (b.max_abs >= out.laplace.max_abs) out.laplace = b;
    }
    out.laplace.holds = out.laplace.max_abs < 1.0;
    if (out.max_redfield_eigenvalue > tol) out.verdict = PauliVerdict::NotPDivisible;
    return out;
}

} // namespace dampkit
