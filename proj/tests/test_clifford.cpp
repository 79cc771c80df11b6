#include <doctest.h>

#include <cmath>

#include "szego/clifford.hpp"

using namespace szego;

TEST_CASE("spinor dimension")
{
    CHECK(spinor_dimension(2) == 2);
    CHECK(spinor_dimension(3) == 4);
    CHECK(spinor_dimension(4) == 4);
    CHECK(spinor_dimension(5) == 8);
    CHECK(spinor_dimension(6) == 8);
}

TEST_CASE("relations hold exactly for d = 2..6")
{
    for (int d = 2; d <= 6; ++d) {
        const CliffordBasis basis = build_clifford_basis(d);
        REQUIRE(static_cast<int>(basis.alphas.size()) == d);
        CHECK(basis.n == spinor_dimension(d));
        const CliffordReport r = check_clifford(basis);
        CHECK(r.passed());
        CHECK(r.anticommutation == 0.0);
        CHECK(r.gram == 0.0);
    }
}

TEST_CASE("d < 2 is rejected")
{
    CHECK_THROWS_AS(build_clifford_basis(1), ConfigError);
}

TEST_CASE("odd products are traceless")
{
    for (int d = 3; d <= 6; ++d) {
        const CliffordBasis basis = build_clifford_basis(d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                for (int k = 0; k < d; ++k) {
                    const Complex t = (basis.alpha(i) * basis.alpha(j) * basis.alpha(k)).trace();
                    CHECK(std::abs(t) == 0.0);
                }
    }
}

TEST_CASE("a corrupted entry is located")
{
    CliffordBasis basis = build_clifford_basis(3);
    basis.alphas[1](0, 3) += Complex(1e-3, 0.0);
    const CliffordReport r = check_clifford(basis);
    CHECK_FALSE(r.passed());
    CHECK(r.hermiticity > 0.0);
    CHECK((r.worst_pair.first == 2 || r.worst_pair.second == 2));
}

TEST_CASE("unitary conjugation preserves the relations up to rounding")
{
    const CliffordBasis basis = build_clifford_basis(4);
    // alpha_1^2 = id, so cos t + i sin t alpha_1 is unitary.
    const double t = 0.7;
    const CMat U = std::cos(t) * CMat::Identity(basis.n, basis.n) + Complex(0, std::sin(t)) * basis.alpha(0);
    const CliffordReport r = check_clifford(conjugate_basis(basis, U));
    CHECK(r.anticommutation < 1e-14);
    CHECK(r.hermiticity < 1e-14);
    CHECK(r.gram < 1e-13);
}
