#pragma once

#include <initializer_list>
#include <string>
#include <vector>

#include "szego/common.hpp"

namespace szego {

/// Real polynomial g(t) = sum_{p>=1} omega_p t^p with g(0) = 0.
///
/// The constant coefficient is not stored; `from_coefficients` accepts a full
/// coefficient list and rejects a nonzero constant term.
class Polynomial {
public:
    Polynomial() = default;

    /// omega_1, omega_2, ... (no constant term).
    explicit Polynomial(std::vector<double> omegas);
    Polynomial(std::initializer_list<double> omegas) : Polynomial(std::vector<double>(omegas)) {}

    /// Coefficients c_0, c_1, ...; throws ConfigError if c_0 != 0.
    static Polynomial from_coefficients(const std::vector<double>& coefficients);

    /// The monomial t^p.
    static Polynomial monomial(int p);

    /// Highest p with a nonzero omega_p; 0 for the zero polynomial.
    int degree() const;

    /// omega_p for p >= 1, zero beyond the stored range.
    double omega(int p) const;
    const std::vector<double>& omegas() const { return omegas_; }

    double operator()(double t) const;

    /// trace g(A) for a Hermitian matrix via eigendecomposition.
    double trace_of(const CMat& hermitian) const;

    Polynomial operator+(const Polynomial& other) const;
    Polynomial operator-(const Polynomial& other) const;
    Polynomial operator*(double s) const;

    std::string to_string() const;

private:
    std::vector<double> omegas_;
};

inline Polynomial operator*(double s, const Polynomial& g) { return g * s; }

} // namespace szego
