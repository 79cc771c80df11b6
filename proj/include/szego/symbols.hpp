#pragma once

#include "szego/clifford.hpp"
#include "szego/polynomial.hpp"

namespace szego {

/// Smooth monotone step: 0 for t <= -1, 1 for t >= 0, C-infinity in between.
/// Profile f(t+1) / (f(t+1) + f(-t)) with f(s) = exp(-1/s) for s > 0.
double smooth_step(double t);

/// Radial ultraviolet cutoff psi_b(xi) = smooth_step(b - |xi|).
class Cutoff {
public:
    explicit Cutoff(double b);

    double b() const { return b_; }
    double support_radius() const { return b_ + 1.0; }

    double radial(double r) const { return smooth_step(b_ - r); }
    template <typename Derived>
    double operator()(const Eigen::MatrixBase<Derived>& xi) const
    {
        return radial(xi.norm());
    }

private:
    double b_;
};

/// D(xi) = (id - sum_k alpha_k xi_k / |xi|) / 2; D(0) = id / 2.
CMat dirac_projection(const CliffordBasis& basis, const Vec& xi);

/// psi_b(xi) D(xi).
CMat fermi_symbol(const CliffordBasis& basis, double b, const Vec& xi);

/// Closed form (n/2) g(psi_b(xi)). Valid because D is a projection.
double symbol_trace_g(const Polynomial& g, const CliffordBasis& basis, double b, const Vec& xi);

} // namespace szego
