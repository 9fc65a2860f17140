#include "dampkit/models.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "dampkit/errors.hpp"

namespace dampkit {

namespace {

std::string lower(std::string s)
{
    for (auto& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return s;
}

Operator ladder_plus()
{
    Operator s = Operator::Zero(3, 3);
    s(0, 1) = 1.0;
    s(1, 2) = 1.0;
    return s;
}

OperatorMap conjugation_minus_identity(const Operator& a)
{
    return [a](const Operator& w) -> Operator { return a * w * a.adjoint() - w; };
}

OperatorMap sum_of(const OperatorMap& f, const OperatorMap& g)
{
    return [f, g](const Operator& w) -> Operator { return f(w) + g(w); };
}

std::function<double(double)> time_profile(ModelId id, const std::string& profile, double amplitude)
{
    if (id == ModelId::AmplitudeDamping) {
        if (profile == "one_minus_exp") return [amplitude](double t) { return amplitude * (1.0 - std::exp(-t)); };
        if (profile == "constant") return [amplitude](double) { return amplitude; };
    } else if (id == ModelId::SigmaPmKernel || id == ModelId::QutritLadder) {
        if (profile == "exp") return [amplitude](double t) { return amplitude * std::exp(-t); };
        if (profile == "constant") return [amplitude](double) { return amplitude; };
    }
    throw InvalidArgument("profile '" + profile + "' is not available for " + model_id_name(id));
}

void check_profile(ModelId id, const std::string& profile)
{
    const auto p = model_profiles(id);
    if (std::find(p.begin(), p.end(), profile) == p.end()) {
        std::string msg = "profile '" + profile + "' is not available for " + model_id_name(id) + " (choose from";
        for (const auto& s : p) msg += " " + s;
        throw InvalidArgument(msg + ")");
    }
}

// Eigen-signals as projections of the closed-form generator onto the damping
// channels, with a check that the family really is diagonal there.
std::vector<EigenSignal> project_signals(const DampingDecomposition& d, const TimeGrid& grid,
                                         const std::function<Matrix(double)>& regular,
                                         const Matrix& delta)
{
    const int n = d.channel_count();
    std::vector<std::vector<Complex>> samples(static_cast<std::size_t>(n),
                                              std::vector<Complex>(static_cast<std::size_t>(grid.size())));
    for (int k = 0; k < grid.size(); ++k) {
        const Matrix m = d.to_damping_coordinates(regular(grid.time(k)));
        const double off = max_abs(m - Matrix(m.diagonal().asDiagonal()));
        if (off > 1e-9 * std::max(1.0, max_abs(m))) {
            throw InvalidArgument("generator family is not diagonal in the structure damping basis");
        }
        for (int a = 0; a < n; ++a) samples[static_cast<std::size_t>(a)][static_cast<std::size_t>(k)] = m(a, a);
    }
    const Matrix dd = d.to_damping_coordinates(delta);
    std::vector<EigenSignal> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a) {
        Complex w = dd(a, a);
        if (std::abs(w) < 1e-14) w = 0.0;
        out.emplace_back(grid, std::move(samples[static_cast<std::size_t>(a)]), w);
    }
    return out;
}

} // namespace

const char* model_id_name(ModelId id)
{
    switch (id) {
    case ModelId::AmplitudeDamping: return "AMPLITUDE_DAMPING";
    case ModelId::SigmaPmKernel: return "SIGMA_PM_KERNEL";
    case ModelId::PureDephasing: return "PURE_DEPHASING";
    case ModelId::DephasingBar: return "DEPHASING_BAR";
    case ModelId::RandomDephasing: return "RANDOM_DEPHASING";
    case ModelId::QutritLadder: return "QUTRIT_LADDER";
    }
    return "?";
}

const char* model_alias(ModelId id)
{
    switch (id) {
    case ModelId::AmplitudeDamping: return "ex1";
    case ModelId::SigmaPmKernel: return "ex2";
    case ModelId::PureDephasing: return "ex3";
    case ModelId::DephasingBar: return "ex3bar";
    case ModelId::RandomDephasing: return "ex4";
    case ModelId::QutritLadder: return "qutrit";
    }
    return "?";
}

const std::vector<ModelId>& all_models()
{
    static const std::vector<ModelId> ids{ModelId::AmplitudeDamping, ModelId::SigmaPmKernel,
                                          ModelId::PureDephasing,    ModelId::DephasingBar,
                                          ModelId::RandomDephasing,  ModelId::QutritLadder};
    return ids;
}

ModelId parse_model_id(const std::string& text)
{
    const std::string s = lower(text);
    for (ModelId id : all_models()) {
        if (s == lower(model_id_name(id)) || s == model_alias(id)) return id;
    }
    throw UnknownModel("unknown model '" + text + "'");
}

void validate_simplex(const SimplexPoint& x)
{
    double sum = 0.0;
    for (double v : x) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidArgument("simplex coordinates must be nonnegative");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw InvalidArgument("simplex coordinates must sum to 1");
}

std::string default_profile(ModelId id)
{
    return model_profiles(id).front();
}

std::vector<std::string> model_profiles(ModelId id)
{
    switch (id) {
    case ModelId::AmplitudeDamping: return {"one_minus_exp", "constant"};
    case ModelId::SigmaPmKernel:
    case ModelId::QutritLadder: return {"exp", "constant"};
    case ModelId::PureDephasing: return {"exp"};
    case ModelId::DephasingBar: return {"exp", "exp_cos"};
    case ModelId::RandomDephasing: return {"closed_form"};
    }
    return {};
}

Model build(const ModelConfig& config)
{
    const ModelId id = config.id;
    const std::string profile = config.profile.empty() ? default_profile(id) : config.profile;
    if (id == ModelId::PureDephasing && profile == "exp_cos") {
        throw InvalidArgument("PURE_DEPHASING needs a monotonically decreasing phi; exp_cos gives a "
                              "divergent rate (use DEPHASING_BAR for that profile)");
    }
    check_profile(id, profile);
    if (!std::isfinite(config.amplitude)) throw InvalidArgument("amplitude must be finite");

    BasisPtr basis = default_basis(id == ModelId::QutritLadder ? 3 : 2);
    GeneratorKind kind = GeneratorKind::TCL;
    SuperOp structure;
    std::function<Matrix(double)> regular;
    Matrix delta = Matrix::Zero(basis->size(), basis->size());

    switch (id) {
    case ModelId::AmplitudeDamping: {
        structure = to_superop(dissipator(pauli::minus()), basis);
        const auto g = time_profile(id, profile, config.amplitude);
        const Matrix l = structure.matrix;
        regular = [g, l](double t) -> Matrix { return g(t) * l; };
        break;
    }
    case ModelId::SigmaPmKernel:
    case ModelId::QutritLadder: {
        kind = GeneratorKind::NZ;
        const Operator sp = id == ModelId::QutritLadder ? ladder_plus() : pauli::plus();
        structure = to_superop(sum_of(dissipator(sp.adjoint()), dissipator(sp)), basis);
        const auto k = time_profile(id, profile, config.amplitude);
        const Matrix l = structure.matrix;
        regular = [k, l](double t) -> Matrix { return k(t) * l; };
        break;
    }
    case ModelId::PureDephasing: {
        // phi = e^{-t} gives gamma = -phi'/phi = 1
        const Operator p0 = pauli::plus() * pauli::minus();
        const Operator p1 = pauli::minus() * pauli::plus();
        structure = to_superop(
            [p0, p1](const Operator& w) -> Operator { return p0 * w * p0 + p1 * w * p1 - w; }, basis);
        const Matrix l = structure.matrix;
        regular = [l](double) -> Matrix { return l; };
        break;
    }
    case ModelId::DephasingBar: {
        // k~ = -phi'~/phi~: exp -> delta(t); exp_cos -> delta(t) + e^{-t}
        kind = GeneratorKind::NZ;
        structure = to_superop(conjugation_minus_identity(pauli::z()), basis);
        const Matrix l = structure.matrix;
        delta = l;
        if (profile == "exp_cos") {
            regular = [l](double t) -> Matrix { return std::exp(-t) * l; };
        } else {
            regular = [l](double) -> Matrix { return Matrix::Zero(l.rows(), l.cols()); };
        }
        break;
    }
    case ModelId::RandomDephasing: {
        validate_simplex(config.x);
        const std::array<Operator, 3> s{pauli::x(), pauli::y(), pauli::z()};
        std::array<Matrix, 3> l;
        for (int i = 0; i < 3; ++i) l[static_cast<std::size_t>(i)] = to_superop(conjugation_minus_identity(s[static_cast<std::size_t>(i)]), basis).matrix;
        // distinct weights separate the three dephasing channels
        structure = {basis, l[0] + 2.0 * l[1] + 4.0 * l[2]};
        const SimplexPoint x = config.x;
        regular = [x, l](double t) -> Matrix {
            const auto g = random_dephasing_rates(x, t);
            return 0.5 * (g[0] * l[0] + g[1] * l[1] + g[2] * l[2]);
        };
        break;
    }
    }

    DampingDecomposition d = damping_decompose(structure);
    auto signals = project_signals(d, config.grid, regular, delta);
    Model model{config, profile, structure, GeneratorSpec(kind, std::move(d), std::move(signals)), regular, delta};
    model.config.profile = profile;
    return model;
}

std::vector<ModelConfig> zoo(const TimeGrid& grid)
{
    std::vector<ModelConfig> out;
    for (ModelId id : all_models()) {
        ModelConfig c;
        c.id = id;
        c.grid = grid;
        c.profile = default_profile(id);
        if (id == ModelId::SigmaPmKernel || id == ModelId::QutritLadder) c.amplitude = 1.0 / 16.0;
        if (id == ModelId::RandomDephasing) c.x = {0.2, 0.3, 0.5};
        out.push_back(c);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Random dephasing

std::array<double, 3> random_dephasing_mu(const SimplexPoint& x, double t)
{
    std::array<double, 3> mu{};
    const double decay = std::exp(-2.0 * t);
    for (std::size_t k = 0; k < 3; ++k) {
        // -(1 - x_k) / ((1 - x_k) + e^{2t} x_k), scaled to avoid overflow
        const double rest = (1.0 - x[k]) * decay;
        mu[k] = -rest / (rest + x[k]);
    }
    return mu;
}

std::array<double, 3> random_dephasing_rates(const SimplexPoint& x, double t)
{
    const auto mu = random_dephasing_mu(x, t);
    return {mu[0] - mu[1] - mu[2], -mu[0] + mu[1] - mu[2], -mu[0] - mu[1] + mu[2]};
}

std::array<double, 3> random_dephasing_map_eigenvalues(const SimplexPoint& x, double t)
{
    const double decay = std::exp(-2.0 * t);
    return {x[0] + (1.0 - x[0]) * decay, x[1] + (1.0 - x[1]) * decay, x[2] + (1.0 - x[2]) * decay};
}

std::array<double, 3> random_dephasing_y(const SimplexPoint& x, double t)
{
    std::array<double, 3> y{};
    for (std::size_t k = 0; k < 3; ++k) y[k] = std::exp(-2.0 * x[k] * t) * (x[k] - 1.0);
    return y;
}

std::array<double, 3> random_dephasing_redfield_rates(const SimplexPoint& x, double t)
{
    const auto y = random_dephasing_y(x, t);
    return {y[0] - y[1] - y[2], -y[0] + y[1] - y[2], -y[0] - y[1] + y[2]};
}

namespace {

std::array<EigenSignal, 3> sample3(const TimeGrid& grid,
                                   const std::function<std::array<double, 3>(double)>& f)
{
    std::array<std::vector<Complex>, 3> s;
    for (auto& v : s) v.resize(static_cast<std::size_t>(grid.size()));
    for (int k = 0; k < grid.size(); ++k) {
        const auto v = f(grid.time(k));
        for (std::size_t i = 0; i < 3; ++i) s[i][static_cast<std::size_t>(k)] = v[i];
    }
    return {EigenSignal(grid, std::move(s[0])), EigenSignal(grid, std::move(s[1])),
            EigenSignal(grid, std::move(s[2]))};
}

} // namespace

std::array<EigenSignal, 3> reference_exact_rates(const SimplexPoint& x, const TimeGrid& grid)
{
    validate_simplex(x);
    return sample3(grid, [&](double t) { return random_dephasing_rates(x, t); });
}

std::array<EigenSignal, 3> reference_redfield_rates(const SimplexPoint& x, const TimeGrid& grid)
{
    validate_simplex(x);
    return sample3(grid, [&](double t) { return random_dephasing_redfield_rates(x, t); });
}

// ---------------------------------------------------------------------------
// Pauli channels

std::array<int, 3> pauli_channels(const DampingDecomposition& d)
{
    if (d.dim() != 2) throw PreconditionViolated("Pauli channels need a qubit generator");
    const std::array<Operator, 3> s{pauli::x(), pauli::y(), pauli::z()};
    std::array<int, 3> out{};
    for (std::size_t i = 0; i < 3; ++i) {
        out[i] = find_channel(d, s[i]);
        if (out[i] < 0) throw PreconditionViolated("damping basis is not diagonal in the Pauli operators");
    }
    if (find_channel(d, pauli::identity()) < 0) throw PreconditionViolated("Pauli channels must be unital");
    return out;
}

std::array<EigenSignal, 3> pauli_rates(const std::array<EigenSignal, 3>& m)
{
    std::array<EigenSignal, 3> out{EigenSignal(m[0].grid), EigenSignal(m[0].grid), EigenSignal(m[0].grid)};
    for (int k = 0; k < m[0].size(); ++k) {
        out[0][k] = 0.5 * (m[0][k] - m[1][k] - m[2][k]);
        out[1][k] = 0.5 * (m[1][k] - m[0][k] - m[2][k]);
        out[2][k] = 0.5 * (m[2][k] - m[0][k] - m[1][k]);
    }
    return out;
}

std::array<EigenSignal, 3> pauli_rates(const GeneratorSpec& gen)
{
    if (gen.kind == GeneratorKind::NZ) throw PreconditionViolated("Pauli rates need a time-local generator");
    const auto idx = pauli_channels(gen.decomposition);
    return pauli_rates(std::array<EigenSignal, 3>{gen.signals[static_cast<std::size_t>(idx[0])],
                                                  gen.signals[static_cast<std::size_t>(idx[1])],
                                                  gen.signals[static_cast<std::size_t>(idx[2])]});
}

// ---------------------------------------------------------------------------
// Barred dephasing

LaplaceFn phi_dot_laplace(const std::string& phi_profile)
{
    if (phi_profile == "exp") return [](Complex u) { return -1.0 / (u + 1.0); };
    if (phi_profile == "exp_cos") {
        return [](Complex u) { return -(u + 2.0) / ((u + 1.0) * (u + 1.0) + 1.0); };
    }
    throw InvalidArgument("unknown dephasing profile '" + phi_profile + "'");
}

LaplaceFn phi_bar_laplace(const std::string& phi_profile)
{
    const LaplaceFn f = phi_dot_laplace(phi_profile);
    return [f](Complex u) {
        const Complex v = f(u);
        return (1.0 + v) / ((1.0 - v) * u);
    };
}

BarDephasing reference_bar_dephasing(const std::string& phi_profile, const TimeGrid& grid, int contour_nodes)
{
    std::function<double(double)> phi, gamma, k_int;
    if (phi_profile == "exp") {
        phi = [](double t) { return std::exp(-2.0 * t); };
        gamma = [](double) { return 1.0; };
        k_int = [](double) { return 1.0; };
    } else if (phi_profile == "exp_cos") {
        // phi_bar~ = (u + 1)/(u^2 + 3u + 4)
        const double w = std::sqrt(7.0) / 2.0;
        const double r7 = std::sqrt(7.0);
        phi = [w, r7](double t) { return std::exp(-1.5 * t) * (std::cos(w * t) - std::sin(w * t) / r7); };
        gamma = [w, r7](double t) {
            const double c = std::cos(w * t), s = std::sin(w * t);
            return (c + s / r7) / (c - s / r7);
        };
        k_int = [](double t) { return 2.0 - std::exp(-t); };
    } else {
        throw InvalidArgument("unknown dephasing profile '" + phi_profile + "'");
    }

    auto real_signal = [&](const std::function<double(double)>& f, const char* what) {
        std::vector<Complex> s(static_cast<std::size_t>(grid.size()));
        for (int k = 0; k < grid.size(); ++k) {
            const double v = f(grid.time(k));
            if (!std::isfinite(v)) {
                throw SingularMap(std::string(what) + " is singular at t = " + std::to_string(grid.time(k)));
            }
            s[static_cast<std::size_t>(k)] = v;
        }
        return EigenSignal(grid, std::move(s));
    };

    return BarDephasing{
        real_signal(phi, "phi_bar"),
        talbot_inverse_laplace(phi_bar_laplace(phi_profile), grid, contour_nodes),
        real_signal(gamma, "gamma_bar"),
        real_signal([&](double t) { return -0.5 * std::log(std::abs(phi(t))); }, "integrated gamma_bar"),
        real_signal(k_int, "K"),
    };
}

} // namespace dampkit
