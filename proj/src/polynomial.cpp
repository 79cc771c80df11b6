#include "szego/polynomial.hpp"

#include <cmath>
#include <sstream>

namespace szego {

Polynomial::Polynomial(std::vector<double> omegas) : omegas_(std::move(omegas))
{
    while (!omegas_.empty() && omegas_.back() == 0.0) omegas_.pop_back();
}

Polynomial Polynomial::from_coefficients(const std::vector<double>& coefficients)
{
    if (!coefficients.empty() && coefficients.front() != 0.0)
        throw ConfigError("test function must satisfy g(0) = 0");
    if (coefficients.empty()) return {};
    return Polynomial(std::vector<double>(coefficients.begin() + 1, coefficients.end()));
}

Polynomial Polynomial::monomial(int p)
{
    if (p < 1) throw ConfigError("monomial degree must be >= 1");
    std::vector<double> w(static_cast<std::size_t>(p), 0.0);
    w.back() = 1.0;
    return Polynomial(std::move(w));
}

int Polynomial::degree() const
{
    return static_cast<int>(omegas_.size());
}

double Polynomial::omega(int p) const
{
    if (p < 1 || p > degree()) return 0.0;
    return omegas_[static_cast<std::size_t>(p - 1)];
}

double Polynomial::operator()(double t) const
{
    double acc = 0.0;
    for (int p = degree(); p >= 1; --p) acc = (acc + omega(p)) * t;
    return acc;
}

double Polynomial::trace_of(const CMat& hermitian) const
{
    Eigen::SelfAdjointEigenSolver<CMat> solver(hermitian, Eigen::EigenvaluesOnly);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) acc += (*this)(solver.eigenvalues()[i]);
    return acc;
}

Polynomial Polynomial::operator+(const Polynomial& other) const
{
    std::vector<double> w(static_cast<std::size_t>(std::max(degree(), other.degree())), 0.0);
    for (std::size_t i = 0; i < w.size(); ++i)
        w[i] = omega(static_cast<int>(i) + 1) + other.omega(static_cast<int>(i) + 1);
    return Polynomial(std::move(w));
}

Polynomial Polynomial::operator-(const Polynomial& other) const
{
    return *this + other * -1.0;
}

Polynomial Polynomial::operator*(double s) const
{
    std::vector<double> w = omegas_;
    for (auto& x : w) x *= s;
    return Polynomial(std::move(w));
}

std::string Polynomial::to_string() const
{
    std::ostringstream os;
    bool first = true;
    for (int p = 1; p <= degree(); ++p) {
        if (omega(p) == 0.0) continue;
        if (!first) os << " + ";
        os << omega(p) << "*t^" << p;
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

} // namespace szego
