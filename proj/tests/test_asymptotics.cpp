#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "szego/asymptotics.hpp"
#include "szego/symbols.hpp"

using namespace szego;

namespace {

const std::vector<double> Ls{8, 12, 16, 24, 32, 48, 64, 96, 128, 192, 256};

std::vector<double> sample(const std::vector<double>& L, auto f)
{
    std::vector<double> out;
    for (double x : L) out.push_back(f(x));
    return out;
}

const QuadratureSpec quad{1e-10, 1e-16, 30, 400000};

} // namespace

TEST_CASE("log fit recovers an exact model")
{
    const auto v = sample(Ls, [](double L) { return 0.5 * std::log(L) + 1.0; });
    const LogFit f = fit_log_constant(Ls, v, std::vector<double>(Ls.size(), 1e-10));
    CHECK(f.w == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(f.c == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(f.a_corr) < 1e-8);
    CHECK(f.points == Ls.size());
    CHECK(f.drift_ok);
    CHECK(f.cond < 1e8);
    CHECK(f.accepted());
}

TEST_CASE("the 1/L correction removes the bias")
{
    const auto v = sample(Ls, [](double L) { return 0.5 * std::log(L) + 1.0 + 0.3 / L; });
    const std::vector<double> err(Ls.size(), 1e-9);
    FitOptions plain;
    plain.correction_term = false;
    const LogFit biased = fit_log_constant(Ls, v, err, plain);
    const LogFit corrected = fit_log_constant(Ls, v, err);
    CHECK(std::abs(biased.w - 0.5) > 1e-3);
    CHECK(!biased.has_correction);
    CHECK(corrected.has_correction);
    CHECK(corrected.w == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(corrected.a_corr == doctest::Approx(0.3).epsilon(1e-5));
}

TEST_CASE("noisy data: uncertainty covers the truth")
{
    std::mt19937 rng(7);
    std::normal_distribution<double> noise(0.0, 1e-6);
    const auto v = sample(Ls, [&](double L) { return 0.25 * std::log(L) - 0.1 + noise(rng); });
    const LogFit f = fit_log_constant(Ls, v, std::vector<double>(Ls.size(), 1e-6));
    CHECK(f.w_err > 0.0);
    CHECK(std::abs(f.w - 0.25) < 5.0 * f.w_err);
    CHECK(f.chi2_dof < 5.0);
    CHECK(f.drift_ok);
}

TEST_CASE("drift between window halves is detected")
{
    const auto v = sample(Ls, [](double L) { return L < 40 ? 0.5 * std::log(L) : 0.6 * std::log(L) - 0.1 * std::log(40.0); });
    const LogFit f = fit_log_constant(Ls, v, std::vector<double>(Ls.size(), 1e-8));
    CHECK(!f.drift_ok);
    CHECK(!f.accepted());
    CHECK(std::abs(f.w_first - f.w_second) > 3.0 * f.drift_sigma);
}

TEST_CASE("window selection and preconditions")
{
    const auto v = sample(Ls, [](double L) { return std::log(L); });
    const std::vector<double> err(Ls.size(), 1e-10);
    FitOptions opts;
    opts.window_min = 16;
    opts.window_max = 128;
    const LogFit f = fit_log_constant(Ls, v, err, opts);
    CHECK(f.points == 7);
    CHECK(f.L_min == 16);
    CHECK(f.L_max == 128);
    opts.window_max = 24;
    CHECK_THROWS_AS(fit_log_constant(Ls, v, err, opts), ConfigError);
    CHECK_THROWS_AS(fit_log_constant({8, 16, 32}, {1, 2, 3}, {0, 0, 0}), ConfigError);
    CHECK_THROWS_AS(fit_log_constant({8, 16}, {1, 2, 3}, {0, 0, 0}), ConfigError);
}

TEST_CASE("curve overload")
{
    VertexTraceCurve curve;
    for (double L : Ls) curve.points.push_back({L, 2.0 * std::log(L), 1e-10});
    CHECK(fit_log_constant(curve).w == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("full expansion fit")
{
    const std::vector<double> L{2, 3, 4, 6, 8, 12, 16};
    const auto v = sample(L, [](double x) { return 3.0 * x * x + 2.0 * x + 0.5 * std::log(x) + 1.0; });
    const ExpansionFit f = fit_full_expansion(L, v, 2);
    REQUIRE(f.a.size() == 2);
    CHECK(f.a[0] == doctest::Approx(0.75).epsilon(1e-6));
    CHECK(f.a[1] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(f.tail == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(f.constant == doctest::Approx(1.0).epsilon(1e-6));

    const auto vol = sample(L, [](double x) { return 5.0 * x * x; });
    const ExpansionFit g = fit_full_expansion(L, vol, 2);
    CHECK(g.a[0] == doctest::Approx(1.25).epsilon(1e-10));
    CHECK(std::abs(g.a[1]) < 1e-8 * g.a[0]);
    CHECK(std::abs(g.tail) < 1e-8 * g.a[0]);
    CHECK(std::abs(g.constant) < 1e-8 * g.a[0]);
}

TEST_CASE("log coefficient oracle")
{
    CHECK(oracle_W(Polynomial::monomial(1), 2, quad) == 0.0);
    const double w2 = oracle_W(Polynomial::monomial(2), 2, quad);
    CHECK(w2 == doctest::Approx(1.0 / (4.0 * std::numbers::pi * std::numbers::pi)).epsilon(1e-8));
    CHECK(oracle_W(Polynomial::monomial(3), 2, quad) == doctest::Approx(1.5 * w2).epsilon(1e-12));
    CHECK(oracle_W(Polynomial{0.2, 1.0, -2.0}, 2, quad) == doctest::Approx(-2.0 * w2).epsilon(1e-12));
    CHECK_THROWS_AS(oracle_W(Polynomial::monomial(4), 2, quad), ConfigError);
}

TEST_CASE("volume oracle against a momentum-space grid")
{
    const CliffordBasis basis = build_clifford_basis(2);
    const Polynomial g{0.3, 1.0, -0.5};
    for (double b : {1.0, 2.0}) {
        const double top = b + 1.0;
        const int N = 800;
        const double step = 2.0 * top / N;
        double sum = 0.0;
        Vec xi(2);
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) {
                xi << -top + (i + 0.5) * step, -top + (j + 0.5) * step;
                sum += symbol_trace_g(g, basis, b, xi);
            }
        const double grid = sum * step * step / (4.0 * std::numbers::pi * std::numbers::pi);
        CHECK(oracle_A0(g, b, 2, quad) == doctest::Approx(grid).epsilon(1e-6));
    }
}

TEST_CASE("surface oracle")
{
    double prev = 0.0;
    for (double b : {1.0, 2.0, 4.0}) {
        const double s = surface_deficit_g2(b, 2, quad, 48.0);
        CHECK(s > prev);
        prev = s;
    }
    const double a1 = oracle_A1_g2(1.0, 2, quad);
    CHECK(a1 < 0.0);
    CHECK(a1 == doctest::Approx(-4.0 * surface_deficit_g2(1.0, 2, quad, 48.0)).epsilon(1e-5));
    CHECK_THROWS_AS(surface_deficit_g2(1.0, 1, quad), ConfigError);
}

TEST_CASE("comparison verdicts")
{
    const double W = 1.0 / (4.0 * std::numbers::pi * std::numbers::pi);
    LogFit g2;
    g2.w = W / 4.0 * 1.02;
    g2.cond = 10.0;
    g2.drift_ok = true;
    g2.points = 11;
    LogFit g2b = g2;
    g2b.w *= 1.01;
    LogFit g3 = g2;
    g3.w = 1.5 * g2.w;

    CompareInputs in;
    in.b_list = {1.0, 2.0};
    in.g = Polynomial::monomial(2);
    in.g2_fits = {g2, g2b};
    in.g3_fit = g3;
    in.W_oracle = W;
    in.has_volume = true;
    in.a0_fit = 1.0;
    in.a0_oracle = 1.01;
    in.a1_fit = -2.0;
    in.a1_oracle = -2.1;
    const OracleReport ok = compare_report(in);
    CHECK(ok.all_pass());
    CHECK(ok.verdicts.size() == 7);
    CHECK(ok.rel_dev == doctest::Approx(0.02));
    CHECK(ok.ratio_g3_g2 == doctest::Approx(1.5));
    CHECK(ok.b_sweep.size() == 2);

    in.W_oracle = 1.5 * W;
    const OracleReport bad = compare_report(in);
    CHECK(!bad.all_pass());
    CHECK(!bad.verdicts.at("log_coefficient"));

    in.W_oracle = W;
    in.g = Polynomial{0.0, 0.0, 1.0};
    const OracleReport cubic = compare_report(in);
    CHECK(cubic.w_fit == doctest::Approx(1.5 * g2.w));

    in.g = Polynomial::monomial(2);
    in.g2_fits[1].w *= 1.2;
    CHECK(!compare_report(in).verdicts.at("b_independence"));
}
