#include <doctest.h>

#include <random>

#include "dampkit/dynamics.hpp"
#include "dampkit/errors.hpp"
#include "dampkit/models.hpp"
#include "oracles.hpp"

using namespace dampkit;
using oracle::Mat;

namespace {

GeneratorSpec constant_generator(const SuperOp& l, GeneratorKind kind, const TimeGrid& g, double scale, bool as_delta)
{
    auto d = damping_decompose(l);
    std::vector<EigenSignal> sig;
    for (auto ev : d.eigenvalues) {
        if (as_delta) sig.emplace_back(g, std::vector<Complex>(static_cast<std::size_t>(g.size()), 0.0), scale * ev);
        else sig.push_back(EigenSignal::from_function(g, [=](double) { return scale * ev; }));
    }
    return GeneratorSpec(kind, std::move(d), std::move(sig));
}

SuperOp amplitude_damping()
{
    return to_superop(dissipator(pauli::minus()), pauli_basis());
}

Model model(ModelId id, const std::string& profile, double amplitude, SimplexPoint x, TimeGrid g)
{
    ModelConfig c;
    c.id = id;
    c.profile = profile;
    c.amplitude = amplitude;
    c.x = x;
    c.grid = g;
    return build(c);
}

} // namespace

TEST_CASE("generator kinds")
{
    CHECK(parse_generator_kind("TCL") == GeneratorKind::TCL);
    CHECK(parse_generator_kind("nz") == GeneratorKind::NZ);
    CHECK(parse_generator_kind("Red") == GeneratorKind::RED);
    CHECK(std::string(generator_kind_name(GeneratorKind::RED)) == "red");
    CHECK_THROWS_AS(parse_generator_kind("markov"), InvalidArgument);
}

TEST_CASE("generator spec validation")
{
    const TimeGrid g(1.0, 10);
    auto d = damping_decompose(amplitude_damping());
    std::vector<EigenSignal> three(3, EigenSignal(g));
    CHECK_THROWS_AS(GeneratorSpec(GeneratorKind::TCL, d, three), DimensionMismatch);
    std::vector<EigenSignal> mixed{EigenSignal(g), EigenSignal(g), EigenSignal(g), EigenSignal(TimeGrid(2.0, 10))};
    CHECK_THROWS_AS(GeneratorSpec(GeneratorKind::TCL, d, mixed), DimensionMismatch);
    std::vector<EigenSignal> delta(4, EigenSignal(g));
    delta[1].delta_weight = 1.0;
    CHECK_THROWS_AS(GeneratorSpec(GeneratorKind::TCL, d, delta), InvalidArgument);
    CHECK_NOTHROW(GeneratorSpec(GeneratorKind::NZ, d, delta));
}

TEST_CASE("zero generator propagates to the identity")
{
    const TimeGrid g(2.0, 200);
    const auto gen = constant_generator(amplitude_damping(), GeneratorKind::TCL, g, 0.0, false);
    const auto traj = propagate_tcl(gen);
    for (int k = 0; k < traj.size(); ++k) CHECK(oracle::max_abs(traj.at(k).matrix - Mat::Identity(4, 4)) == 0.0);
}

TEST_CASE("constant generator matches the matrix exponential")
{
    const TimeGrid g(3.0, 3000);
    const SuperOp l = amplitude_damping();
    const auto gen = constant_generator(l, GeneratorKind::TCL, g, 0.8, false);
    const auto traj = propagate_tcl(gen);
    for (int k : {0, 1000, 3000}) {
        const Mat ref = oracle::expm(0.8 * g.time(k) * l.matrix);
        CHECK(oracle::max_abs(traj.at(k).matrix - ref) < 1e-10);
    }
    // the same semigroup as a pure delta kernel and as a Redfield-like generator
    const auto nz = constant_generator(l, GeneratorKind::NZ, g, 0.8, true);
    CHECK(trajectory_distance(propagate_nz(nz), traj) < 1e-6);
    const auto red = constant_generator(l, GeneratorKind::RED, g, 0.8, false);
    CHECK(trajectory_distance(propagate_redfield(red), traj) < 1e-12);
    CHECK_THROWS_AS(propagate_tcl(nz), InvalidArgument);
    CHECK_THROWS_AS(propagate_nz(gen), InvalidArgument);
}

TEST_CASE("random dephasing eternal point: brute-force map eigenvalues")
{
    const TimeGrid g(5.0, 5000);
    const SimplexPoint x{0.5, 0.5, 0.0};
    const auto m = model(ModelId::RandomDephasing, "", 1.0, x, g);
    const auto traj = propagate_tcl(m.generator);
    // Lambda(t) = sum_k x_k exp(t L_k),  L_k(w) = s_k w s_k - w
    const std::vector<Mat> s{oracle::sx(), oracle::sy(), oracle::sz()};
    std::vector<Mat> lk;
    for (const auto& sk : s)
        lk.push_back(oracle::superop(oracle::pauli_list(), [sk](const Mat& w) { return Mat(sk * w * sk - w); }));
    for (int k : {500, 2000, 5000}) {
        const double t = g.time(k);
        Mat ref = Mat::Zero(4, 4);
        for (int i = 0; i < 3; ++i) ref += x[static_cast<std::size_t>(i)] * oracle::expm(t * lk[static_cast<std::size_t>(i)]);
        CHECK(oracle::max_abs(traj.at(k).matrix - ref) < 1e-6);
        for (int i = 0; i < 3; ++i) {
            const double lam = x[static_cast<std::size_t>(i)] + (1.0 - x[static_cast<std::size_t>(i)]) * std::exp(-2.0 * t);
            CHECK(std::abs(traj.at(k).matrix(i, i) - lam) < 1e-6);
        }
    }
}

TEST_CASE("RK4 and closed-form path agree at dt = 1e-3")
{
    const auto m = model(ModelId::AmplitudeDamping, "", 1.0, {0.5, 0.5, 0.0}, TimeGrid(5.0, 5000));
    CHECK(trajectory_distance(propagate_tcl(m.generator), closed_form_trajectory(m.generator)) < 1e-8);
}

TEST_CASE("pure dephasing: NZ and TCL trajectories coincide")
{
    const auto m = model(ModelId::PureDephasing, "", 1.0, {0.5, 0.5, 0.0}, TimeGrid(5.0, 2000));
    const auto nz = convert_generator(m.generator, GeneratorKind::NZ);
    CHECK(trajectory_distance(propagate_tcl(m.generator), propagate_nz(nz)) < 1e-6);
    const auto red = convert_generator(m.generator, GeneratorKind::RED);
    const auto rt = propagate_redfield(red);
    CHECK(cptp_check(rt, 1e-9).ok);
}

TEST_CASE("sigma+- kernel: NZ trajectory equals the TCL trajectory from nz_to_tcl")
{
    const auto m = model(ModelId::SigmaPmKernel, "", 1.0 / 16.0, {0.5, 0.5, 0.0}, TimeGrid(5.0, 2000));
    const auto tcl = convert_generator(m.generator, GeneratorKind::TCL);
    CHECK(trajectory_distance(propagate_nz(m.generator), propagate_tcl(tcl)) < 1e-5);
}

TEST_CASE("random dephasing Redfield eigenvalues")
{
    const TimeGrid g(5.0, 5000);
    const SimplexPoint x{0.2, 0.3, 0.5};
    const auto m = model(ModelId::RandomDephasing, "", 1.0, x, g);
    const auto red = convert_generator(m.generator, GeneratorKind::RED);
    const auto traj = propagate_redfield(red);
    // Lambda_red eigenvalue of s_k: exp(int 2 Y_k) = exp((x_k - 1)(1 - e^{-2 x_k t}) / x_k)
    for (int k : {1000, 3000, 5000}) {
        const double t = g.time(k);
        for (int i = 0; i < 3; ++i) {
            const double xi = x[static_cast<std::size_t>(i)];
            const double lam = std::exp((xi - 1.0) * (1.0 - std::exp(-2.0 * xi * t)) / xi);
            CHECK(std::abs(traj.at(k).matrix(i, i) - lam) < 1e-5);
        }
    }
}

TEST_CASE("choi matrix")
{
    const auto b = pauli_basis();
    const auto id = superop_identity(b);
    const Mat choi = choi_matrix(id);
    const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Mat>(choi).eigenvalues();
    CHECK(ev(3) == doctest::Approx(2.0));
    CHECK(std::abs(ev(0)) < 1e-14);
    const auto transpose = to_superop([](const Operator& w) { return Operator(w.transpose()); }, b);
    CHECK(choi_min_eigenvalue(transpose) == doctest::Approx(-1.0));
    CHECK(trace_preservation_residual(transpose) < 1e-15);
    CHECK(trace_preservation_residual(SuperOp{b, 2.0 * Mat::Identity(4, 4)}) == doctest::Approx(1.0));
}

TEST_CASE("random dephasing maps are CPTP across the simplex")
{
    const TimeGrid g(2.0, 400);
    for (int i = 0; i <= 10; ++i) {
        for (int j = 0; i + j <= 10; ++j) {
            const SimplexPoint x{i / 10.0, j / 10.0, (10 - i - j) / 10.0};
            const auto m = model(ModelId::RandomDephasing, "", 1.0, x, g);
            const auto traj = closed_form_trajectory(m.generator);
            for (double t : {0.5, 1.0, 2.0}) CHECK(choi_min_eigenvalue(traj.at(g.index_at_or_before(t))) > -1e-9);
        }
    }
}

TEST_CASE("cptp_check")
{
    const TimeGrid g(3.0, 600);
    const auto good = model(ModelId::AmplitudeDamping, "", 1.0, {0.5, 0.5, 0.0}, g);
    const auto rep = cptp_check(propagate_tcl(good.generator), 1e-9);
    CHECK(rep.ok);
    CHECK_FALSE(rep.first_violation_time.has_value());

    const auto bad = constant_generator(amplitude_damping(), GeneratorKind::TCL, g, -1.0, false);
    const auto r2 = cptp_check(propagate_tcl(bad), 1e-9);
    CHECK_FALSE(r2.ok);
    REQUIRE(r2.first_violation_time.has_value());
    CHECK(*r2.first_violation_time == doctest::Approx(g.dt()));

    const auto zero = constant_generator(amplitude_damping(), GeneratorKind::TCL, g, 0.0, false);
    CHECK(cptp_check(propagate_tcl(zero), 1e-12).ok);
}

TEST_CASE("record_every coarsens the trajectory")
{
    const auto m = model(ModelId::AmplitudeDamping, "", 1.0, {0.5, 0.5, 0.0}, TimeGrid(5.0, 1000));
    PropagationOptions opts;
    opts.record_every = 10;
    const auto coarse = propagate_tcl(m.generator, opts);
    const auto full = propagate_tcl(m.generator);
    CHECK(coarse.size() == 101);
    CHECK(coarse.grid.dt() == doctest::Approx(0.05));
    CHECK(oracle::max_abs(coarse.at(100).matrix - full.at(1000).matrix) == 0.0);
    opts.record_every = 7;
    CHECK_THROWS_AS(propagate_tcl(m.generator, opts), InvalidArgument);
}

TEST_CASE("property: zoo invariants under all three propagators")
{
    const TimeGrid g(5.0, 1000);
    for (const auto& cfg : zoo(g)) {
        const auto m = build(cfg);
        const auto tcl = convert_generator(m.generator, GeneratorKind::TCL);
        const auto nz = convert_generator(m.generator, GeneratorKind::NZ);
        const auto red = convert_generator(m.generator, GeneratorKind::RED);
        const MapTrajectory trajs[] = {propagate_tcl(tcl), propagate_nz(nz), propagate_redfield(red)};
        for (const auto& tr : trajs) {
            double trace = 0.0, comm = 0.0;
            for (int k = 0; k < tr.size(); k += 50) trace = std::max(trace, trace_preservation_residual(tr.at(k)));
            for (int k = 0; k < tr.size(); k += 170)
                for (int l = k + 85; l < tr.size(); l += 230) comm = std::max(comm, commutator_norm(tr.at(k), tr.at(l)));
            CHECK(trace <= 1e-8);
            CHECK(comm <= 1e-8);
        }
        // eigen-consistency of the propagated map with the scalar transforms
        const auto lam = map_eigenvalues(tcl);
        const auto diag = damping_diagonal(tcl.decomposition, trajs[0].at(g.n_steps()));
        for (std::size_t a = 0; a < diag.size(); ++a) CHECK(std::abs(diag[a] - lam[a][g.n_steps()]) < 1e-6);
    }
}

TEST_CASE("property: TCL and NZ trajectories converge at second order")
{
    for (const auto& cfg0 : zoo(TimeGrid(5.0, 500))) {
        double prev = 0.0;
        for (int n : {500, 1000, 2000}) {
            ModelConfig cfg = cfg0;
            cfg.grid = TimeGrid(5.0, n);
            const auto m = build(cfg);
            const auto tcl = convert_generator(m.generator, GeneratorKind::TCL);
            const auto nz = convert_generator(m.generator, GeneratorKind::NZ);
            const double d = trajectory_distance(propagate_tcl(tcl), propagate_nz(nz));
            const double dt = cfg.grid.dt();
            CHECK(d <= 5.0 * dt * dt);
            if (prev > 0.0) CHECK(std::log2(prev / d) >= 1.9);
            prev = d;
        }
    }
}
