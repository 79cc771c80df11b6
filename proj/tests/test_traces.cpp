#include <doctest.h>

#include <cmath>

#include "szego/traces.hpp"

using namespace szego;

namespace {

const KernelTable& table_b1()
{
    static const KernelTable t = tabulate_kernel(build_clifford_basis(2), 1.0, MomentumGrid{2.0, 512}, 0.25, 64.0);
    return t;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

} // namespace

TEST_CASE("method names")
{
    CHECK(to_string(TraceMethod::reduced) == "reduced-quadrature");
    CHECK(trace_method_from_string("fast") == TraceMethod::reduced);
    CHECK(trace_method_from_string("bruteforce") == TraceMethod::bruteforce);
    CHECK_THROWS_AS(trace_method_from_string("magic"), ConfigError);
}

TEST_CASE("degree-one vertex trace vanishes")
{
    const KernelField field(table_b1());
    for (double L : {1.0, 4.0, 64.0}) CHECK(vertex_trace(Polynomial::monomial(1), field, L).value == 0.0);
    const TraceValue bf = vertex_trace_bruteforce(Polynomial::monomial(1), field, 2.0, {0.25, 8.0, 6000});
    CHECK(std::abs(bf.value) < 1e-12);
}

TEST_CASE("vertex traces are linear in the coefficients")
{
    const KernelField field(table_b1());
    const double t2 = vertex_trace_g2(field, 8.0).value;
    const double t3 = vertex_trace_g3(field, 8.0).value;
    const double mixed = vertex_trace(Polynomial{0.7, 2.0, -3.0}, field, 8.0).value;
    CHECK(mixed == doctest::Approx(2.0 * t2 - 3.0 * t3).epsilon(1e-15));
    CHECK_THROWS_AS(vertex_trace(Polynomial::monomial(4), field, 8.0), ConfigError);
}

TEST_CASE("reduced quadrature against brute force, small instances")
{
    const KernelField field(table_b1());
    const double g2 = vertex_trace_g2(field, 2.0).value;
    const double g2_bf = vertex_trace_bruteforce(Polynomial::monomial(2), field, 2.0, {0.25, 32.0, 6000}).value;
    CHECK(rel(g2_bf, g2) < 0.01);
    const double g2_bf_wide = vertex_trace_bruteforce(Polynomial::monomial(2), field, 2.0, {0.25, 64.0, 6000}).value;
    CHECK(rel(g2_bf_wide, g2_bf) < 0.005);

    const double g3 = vertex_trace_g3(field, 1.5).value;
    const double g3_bf = vertex_trace_bruteforce(Polynomial::monomial(3), field, 1.5, {0.5, 12.0, 6000}).value;
    CHECK(rel(g3_bf, g3) < 0.02);
}

TEST_CASE("streamed and dense brute force agree")
{
    const KernelField field(table_b1());
    const Polynomial g{0.0, 0.5, 1.0};
    const double dense = vertex_trace_bruteforce(g, field, 1.0, {0.5, 6.0, 6000}).value;
    const double streamed = vertex_trace_bruteforce(g, field, 1.0, {0.5, 6.0, 10}, 2).value;
    CHECK(streamed == doctest::Approx(dense).epsilon(1e-12));
}

TEST_CASE("cube trace: pair identity equals the eigendecomposition")
{
    const KernelField field(table_b1());
    const Polynomial g{0.3, 1.0};
    const double identity = cube_trace(g, field, 1.0, {0.25, 6000, false});
    const double dense = cube_trace(g, field, 1.0, {0.25, 6000, true});
    CHECK(identity == doctest::Approx(dense).epsilon(1e-11));
    CHECK_THROWS_AS(cube_trace(Polynomial::monomial(3), field, 8.0, {0.25, 6000, false}), ResourceCap);
}

TEST_CASE("cube and vertex traces under axis permutation and reflection")
{
    const KernelTable& t = table_b1();
    const KernelField field(t);
    const Polynomial g{0.0, 1.0, 1.0};
    const double cube = cube_trace(g, field, 1.0, {0.25, 6000, true});
    const double g3 = vertex_trace_g3(field, 4.0).value;
    for (auto [perm, flips] : {std::pair{std::vector<int>{1, 0}, std::vector<int>{1, 1}},
                               {std::vector<int>{0, 1}, std::vector<int>{-1, 1}},
                               {std::vector<int>{1, 0}, std::vector<int>{-1, -1}}}) {
        const KernelTable moved = t.transformed(perm, flips);
        const KernelField mf(moved);
        CHECK(cube_trace(g, mf, 1.0, {0.25, 6000, true}) == doctest::Approx(cube).epsilon(1e-10));
        CHECK(vertex_trace_g3(mf, 4.0).value == doctest::Approx(g3).epsilon(1e-10));
    }
}

TEST_CASE("curves do not depend on the thread count")
{
    const KernelField field(table_b1());
    const std::vector<double> Ls{4, 8, 16};
    const auto a = vertex_trace_curve(Polynomial::monomial(2), field, Ls, {}, 1);
    const auto b = vertex_trace_curve(Polynomial::monomial(2), field, Ls, {}, 3);
    REQUIRE(a.points.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(a.points[i].L == Ls[i]);
        CHECK(a.points[i].value == b.points[i].value);
        CHECK(a.points[i].quad_err == b.points[i].quad_err);
    }
}

TEST_CASE("trace norm of the degree-one vertex operator is positive")
{
    const KernelField field(table_b1());
    CHECK(trace_norm_vertex(Polynomial::monomial(1), field, 2.0, {1.0, 8.0, 6000}) > 0.0);
    CHECK(trace_norm_vertex(Polynomial::monomial(2), field, 2.0, {1.0, 8.0, 6000}) > 0.0);
    CHECK_THROWS_AS(trace_norm_vertex(Polynomial::monomial(3), field, 2.0, {1.0, 8.0, 6000}), ConfigError);
}

TEST_CASE("grid preconditions")
{
    const KernelField field(table_b1());
    CHECK_THROWS_AS(vertex_trace_bruteforce(Polynomial::monomial(2), field, 2.0, {0.3, 8.0, 6000}), ConfigError);
    CHECK_THROWS_AS(vertex_trace_bruteforce(Polynomial::monomial(2), field, 9.0, {0.25, 8.0, 6000}), ConfigError);
    CHECK_THROWS_AS(vertex_trace_g2(field, 1.1), ConfigError);
}

TEST_CASE("three-dimensional smoke run")
{
    const KernelTable t = tabulate_kernel(build_clifford_basis(3), 1.0, MomentumGrid{2.0, 64}, 0.5, 8.0);
    const KernelField field(t);
    VertexTraceOptions opts;
    opts.quad = {1e-10, 1e-12, 30, 400000};
    const double red = vertex_trace_g2(field, 1.0, opts).value;
    const double bf = vertex_trace_bruteforce(Polynomial::monomial(2), field, 1.0, {0.5, 6.0, 6000}).value;
    CHECK(red < 0.0);
    CHECK(rel(bf, red) < 0.05);
    CHECK(vertex_trace_g1(3, 1.0) == 0.0);
}
