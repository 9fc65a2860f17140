#include <doctest.h>

#include "dampkit/divisibility.hpp"
#include "dampkit/errors.hpp"
#include "random_generators.hpp"

using namespace dampkit;

namespace {

Model model(ModelId id, const std::string& profile = "", double amplitude = 1.0,
            SimplexPoint x = {0.5, 0.5, 0.0}, TimeGrid g = TimeGrid(5.0, 1000))
{
    ModelConfig c;
    c.id = id;
    c.profile = profile;
    c.amplitude = amplitude;
    c.x = x;
    c.grid = g;
    return build(c);
}

// independent region flags at one point, sampled on [0, t]
struct Flags {
    bool exact_cp, red_cp;
};

Flags oracle_flags(const SimplexPoint& x, double t, double dt)
{
    Flags f{true, true};
    for (double s = 0.0; s <= t + 1e-12; s += dt) {
        double mu[3], y[3];
        for (int k = 0; k < 3; ++k) {
            const double xk = x[static_cast<std::size_t>(k)];
            mu[k] = -(1.0 - xk) / ((1.0 - xk) + std::exp(2.0 * s) * xk);
            y[k] = std::exp(-2.0 * xk * s) * (xk - 1.0);
        }
        for (int k = 0; k < 3; ++k) {
            const int i = (k + 1) % 3, j = (k + 2) % 3;
            if (mu[k] - mu[i] - mu[j] < -1e-9) f.exact_cp = false;
            if (y[k] - y[i] - y[j] < -1e-9) f.red_cp = false;
        }
    }
    return f;
}

} // namespace

TEST_CASE("eternal point is P- but not CP-divisible")
{
    const auto m = model(ModelId::RandomDephasing);
    const auto r = analyze_divisibility(m.generator);
    REQUIRE(r.cp_divisible_until.has_value());
    CHECK(*r.cp_divisible_until == 0.0);
    CHECK(*r.first_cp_violation == doctest::Approx(0.005));
    REQUIRE(r.p_divisible_until.has_value());
    CHECK(*r.p_divisible_until == 5.0);
    CHECK_FALSE(r.first_p_violation.has_value());
    CHECK(r.rates.size() == 1001);
    // rates at t: {1, 1, -tanh t} sorted
    CHECK(r.rates[1000][0] == doctest::Approx(1.0));
    CHECK(r.rates[1000][2] == doctest::Approx(-std::tanh(5.0)));
}

TEST_CASE("uniform point stays CP-divisible")
{
    const auto m = model(ModelId::RandomDephasing, "", 1.0, {1.0 / 3, 1.0 / 3, 1.0 / 3});
    const auto r = analyze_divisibility(m.generator);
    CHECK(*r.cp_divisible_until == 5.0);
    CHECK_FALSE(r.first_cp_violation.has_value());
    CHECK(*r.p_divisible_until == 5.0);
    const auto red = analyze_divisibility(convert_generator(m.generator, GeneratorKind::RED));
    CHECK(*red.cp_divisible_until == 5.0);
}

TEST_CASE("non-Pauli generators leave P unevaluated")
{
    const auto m = model(ModelId::AmplitudeDamping);
    const auto r = analyze_divisibility(m.generator);
    CHECK(*r.cp_divisible_until == 5.0);
    CHECK_FALSE(r.p_divisible_until.has_value());
    CHECK_THROWS_AS(cp_divisibility(model(ModelId::SigmaPmKernel, "", 1.0 / 16).generator), PreconditionViolated);
}

TEST_CASE("pauli P criterion")
{
    const TimeGrid g(1.0, 10);
    auto constant = [&](double a, double b, double c) {
        return std::array<EigenSignal, 3>{EigenSignal::from_function(g, [a](double) { return a; }),
                                          EigenSignal::from_function(g, [b](double) { return b; }),
                                          EigenSignal::from_function(g, [c](double) { return c; })};
    };
    CHECK_FALSE(pauli_p_divisibility(constant(1, 1, -1)).first_p_violation.has_value());
    const auto bad = pauli_p_divisibility(constant(1, 1, -2));
    REQUIRE(bad.first_p_violation.has_value());
    CHECK(*bad.first_p_violation == 0.0);
    // violation that starts later
    const std::array<EigenSignal, 3> late{EigenSignal::from_function(g, [](double) { return 1.0; }),
                                          EigenSignal::from_function(g, [](double) { return 1.0; }),
                                          EigenSignal::from_function(g, [](double t) { return -2.0 * t; })};
    const auto r = pauli_p_divisibility(late);
    CHECK(*r.first_p_violation == doctest::Approx(0.6));
    CHECK(*r.p_divisible_until == doctest::Approx(0.5));
}

TEST_CASE("tripod membership")
{
    CHECK(on_tripod(2, 2, 2));
    CHECK(on_tripod(1, 1, 4));
    CHECK(on_tripod(0, 3, 0));
    CHECK_FALSE(on_tripod(3, 3, 0));
    CHECK_FALSE(on_tripod(1, 2, 3));
}

TEST_CASE("region scan agrees with an independent oracle")
{
    const int res = 6;
    const std::vector<double> times{0.0, 1.0, 3.0};
    ScanOptions opts;
    opts.horizon = 3.0;
    opts.dt = 0.01;
    opts.threads = 2;
    const auto rows = figure2_scan(res, times, opts);
    CHECK(rows.size() == 28 * 3);
    for (const auto& r : rows) {
        CHECK(r.i + r.j + r.k == res);
        const auto f = oracle_flags(r.x, r.t, 0.01);
        CHECK(r.exact_cp == f.exact_cp);
        CHECK(r.red_cp == f.red_cp);
        // CP implies P
        if (r.exact_cp) CHECK(r.exact_p);
        if (r.red_cp) CHECK(r.red_p);
    }
    CHECK_THROWS_AS(figure2_scan(1, times, opts), InvalidArgument);
    CHECK_THROWS_AS(figure2_scan(4, {5.0}, opts), InvalidArgument);
}

TEST_CASE("region summaries at resolution 60")
{
    const std::vector<double> times{0.0, 1.0, 3.0, 20.0};
    const auto rows = figure2_scan(60, times);
    const auto sum = summarize_scan(rows, 60);
    REQUIRE(sum.size() == 4);
    const int points = 61 * 62 / 2;
    CHECK(sum[0].points == points);
    CHECK(sum[0].red_cp == points);
    CHECK(sum[0].exact_cp == points);
    CHECK(sum[3].red_tripod_hausdorff <= 1);
    CHECK(sum[3].red_cp_on_tripod > 0);
    CHECK(sum[2].exact_only > 0);
    for (std::size_t q = 1; q < sum.size(); ++q) {
        CHECK(sum[q].red_cp <= sum[q - 1].red_cp);
        CHECK(sum[q].exact_cp <= sum[q - 1].exact_cp);
    }
    // the uniform point is CP for both at all times
    for (const auto& r : rows)
        if (r.i == 20 && r.j == 20) {
            CHECK(r.exact_cp);
            CHECK(r.red_cp);
        }
}

TEST_CASE("single nonzero eigenvalue: pure dephasing")
{
    const auto m = model(ModelId::PureDephasing);
    const auto c = corollary2_check(m.structure, EigenSignal::from_function(m.generator.grid(), [](double) { return 1.0; }),
                                    GeneratorKind::TCL);
    CHECK(std::abs(c.ell + 1.0) < 1e-12);
    CHECK(c.instance);
    CHECK_FALSE(c.rate_changes_sign);
    CHECK(c.confirmed);
    CHECK(c.min_redfield_ratio >= -1e-8);
    // constant rate: m_red = ell
    CHECK(std::abs(c.redfield_ratio[500] - 1.0) < 1e-8);
    CHECK_THROWS_AS(corollary2_check(model(ModelId::AmplitudeDamping).structure, c.rate, GeneratorKind::TCL), PreconditionViolated);
    CHECK_THROWS_AS(corollary2_check(m.structure, c.rate, GeneratorKind::RED), InvalidArgument);
}

TEST_CASE("single nonzero eigenvalue: barred dephasing kernel")
{
    const auto m = model(ModelId::DephasingBar, "exp_cos", 1.0, {0.5, 0.5, 0.0}, TimeGrid(5.0, 2000));
    const auto k = EigenSignal::from_function(m.generator.grid(), [](double t) { return std::exp(-t); }, 1.0);
    const auto c = corollary2_check(m.structure, k, GeneratorKind::NZ);
    CHECK(std::abs(c.ell + 2.0) < 1e-12);
    CHECK_FALSE(c.instance);
    CHECK(c.rate_changes_sign);
    CHECK(c.redfield_nonnegative);
    CHECK(c.min_redfield_ratio == doctest::Approx(1.0));
}

TEST_CASE("generalized Pauli necessary condition")
{
    const auto eternal = model(ModelId::RandomDephasing, "", 1.0, {0.5, 0.5, 0.0}, TimeGrid(5.0, 1000));
    const auto r = gen_pauli_necessary(eternal.generator);
    CHECK(r.verdict == PauliVerdict::Inconclusive);
    CHECK(std::string(pauli_verdict_name(r.verdict)) == "INCONCLUSIVE");

    // a map eigenvalue that grows: positive TCL eigenvalue
    const TimeGrid g(2.0, 400);
    const std::array<EigenSignal, 3> grow{EigenSignal::from_function(g, [](double) { return -0.5; }),
                                          EigenSignal::from_function(g, [](double) { return -0.5; }),
                                          EigenSignal::from_function(g, [](double) { return 1.0; })};
    const auto gr = gen_pauli_necessary(testgen::pauli_generator(grow));
    CHECK(gr.verdict == PauliVerdict::NotPDivisible);
    CHECK(gr.max_redfield_eigenvalue > 0.0);

    const std::array<EigenSignal, 3> zero{EigenSignal(g), EigenSignal(g), EigenSignal(g)};
    CHECK(gen_pauli_necessary(testgen::pauli_generator(zero)).verdict == PauliVerdict::Inconclusive);

    CHECK_THROWS_AS(gen_pauli_necessary(model(ModelId::SigmaPmKernel, "", 1.0 / 16).generator), PreconditionViolated);
}

TEST_CASE("property: P-divisible Pauli generators give P-divisible Redfield rates")
{
    std::mt19937_64 rng(7);
    const TimeGrid g(5.0, 1000);
    for (int trial = 0; trial < 25; ++trial) {
        const auto gamma = testgen::random_p_divisible_rates(g, rng);
        const auto gen = testgen::pauli_generator(gamma);
        CHECK_FALSE(pauli_p_divisibility(gamma).first_p_violation.has_value());
        const auto red = pauli_rates(convert_generator(gen, GeneratorKind::RED));
        double lo = 1e300;
        for (int k = 0; k < g.size(); ++k)
            lo = std::min({lo, (red[0][k] + red[1][k]).real(), (red[0][k] + red[2][k]).real(), (red[1][k] + red[2][k]).real()});
        CHECK(lo >= -1e-8);
    }
}

TEST_CASE("property: CP-divisible single-eigenvalue generators give nonnegative Redfield ratios")
{
    std::mt19937_64 rng(11);
    const TimeGrid g(5.0, 1000);
    for (int trial = 0; trial < 10; ++trial) {
        const auto c = testgen::random_single_eigenvalue(g, rng);
        const auto res = corollary2_check(c.l, c.rate, GeneratorKind::TCL);
        CHECK(res.instance);
        CHECK(res.min_redfield_ratio >= -1e-8);
    }
}
