#include "szego/symbols.hpp"

#include <cmath>

namespace szego {

namespace {

double bump_tail(double s)
{
    return s > 0.0 ? std::exp(-1.0 / s) : 0.0;
}

void require_dimension(const CliffordBasis& basis, const Vec& xi)
{
    if (xi.size() != basis.d) throw ConfigError("momentum vector dimension does not match the basis");
}

} // namespace

double smooth_step(double t)
{
    if (t >= 0.0) return 1.0;
    if (t <= -1.0) return 0.0;
    const double up = bump_tail(t + 1.0);
    const double down = bump_tail(-t);
    return up / (up + down);
}

Cutoff::Cutoff(double b) : b_(b)
{
    if (!(b >= 0.0)) throw ConfigError("cutoff parameter b must be >= 0");
}

CMat dirac_projection(const CliffordBasis& basis, const Vec& xi)
{
    require_dimension(basis, xi);
    const auto n = static_cast<Eigen::Index>(basis.n);
    CMat out = 0.5 * CMat::Identity(n, n);
    const double norm = xi.norm();
    if (norm == 0.0) return out;
    for (int k = 0; k < basis.d; ++k) out -= (0.5 * xi[k] / norm) * basis.alpha(k);
    return out;
}

CMat fermi_symbol(const CliffordBasis& basis, double b, const Vec& xi)
{
    const double psi = Cutoff(b)(xi);
    if (psi == 0.0) return CMat::Zero(basis.n, basis.n);
    return psi * dirac_projection(basis, xi);
}

double symbol_trace_g(const Polynomial& g, const CliffordBasis& basis, double b, const Vec& xi)
{
    require_dimension(basis, xi);
    return 0.5 * basis.n * g(Cutoff(b)(xi));
}

} // namespace szego
