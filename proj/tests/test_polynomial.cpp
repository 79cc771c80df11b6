#include <doctest.h>

#include <cmath>

#include "szego/polynomial.hpp"

using namespace szego;

TEST_CASE("coefficients and evaluation")
{
    const Polynomial g{0.5, -2.0, 3.0};
    CHECK(g.degree() == 3);
    CHECK(g.omega(1) == 0.5);
    CHECK(g.omega(3) == 3.0);
    CHECK(g.omega(7) == 0.0);
    CHECK(g(0.0) == 0.0);
    CHECK(g(2.0) == doctest::Approx(0.5 * 2 - 2.0 * 4 + 3.0 * 8));
    CHECK(Polynomial::monomial(2)(0.3) == doctest::Approx(0.09));
}

TEST_CASE("constant term is rejected")
{
    CHECK_THROWS_AS(Polynomial::from_coefficients({1.0, 2.0}), ConfigError);
    const Polynomial g = Polynomial::from_coefficients({0.0, 2.0, 0.0, 1.0});
    CHECK(g.degree() == 3);
    CHECK(g.omega(1) == 2.0);
    CHECK(g.omega(2) == 0.0);
}

TEST_CASE("arithmetic is coefficientwise")
{
    const Polynomial a{1.0, 2.0}, b{0.0, -2.0, 4.0};
    const Polynomial s = a + b;
    CHECK(s.omega(1) == 1.0);
    CHECK(s.omega(2) == 0.0);
    CHECK(s.omega(3) == 4.0);
    CHECK((a - a).degree() <= 0);
    CHECK((3.0 * b).omega(3) == 12.0);
}

TEST_CASE("trace of a Hermitian matrix sums g over the spectrum")
{
    CMat A(3, 3);
    A << Complex(0.5, 0), Complex(0.1, 0.2), Complex(0, 0), Complex(0.1, -0.2), Complex(0.3, 0), Complex(0, -0.1),
        Complex(0, 0), Complex(0, 0.1), Complex(0.9, 0);
    const Polynomial g{0.0, 1.0, -1.0};
    const CMat A2 = A * A;
    const double direct = (A2 - A2 * A).trace().real();
    CHECK(g.trace_of(A) == doctest::Approx(direct).epsilon(1e-13));
}
