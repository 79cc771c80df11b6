#pragma once

#include <array>
#include <functional>
#include <vector>

#include "szego/clifford.hpp"
#include "szego/quadrature.hpp"

namespace szego {

/// Midpoint momentum grid xi_j = -Xi + (j + 1/2) dxi, dxi = 2 Xi / M, on every axis.
/// With M even the origin sits on a cell corner and is never sampled.
struct MomentumGrid {
    double xi_max = 2.0;
    int points = 512;

    double spacing() const { return 2.0 * xi_max / points; }
    double node(int j) const { return -xi_max + (j + 0.5) * spacing(); }
    /// Period of the spatial images produced by the discrete transform, pi M / Xi.
    double aliasing_period() const;
    void validate(double b) const;
};

/// Lattice-sampled kernel K(x), x = m h with m in [-R, R]^d, R = R0 / h.
///
/// The n x n matrices are the canonical data. The scalar part s and the
/// vector part u of K = s/2 id + i sum_k alpha_k u_k are derived from them, so
/// a table rebuilt from saved matrices is bitwise identical to the original.
class KernelTable {
public:
    KernelTable(CliffordBasis basis, double b, double h, double R0, MomentumGrid grid,
                std::vector<Complex> matrices);

    int d() const { return basis_.d; }
    int n() const { return basis_.n; }
    double b() const { return b_; }
    double h() const { return h_; }
    double R0() const { return R0_; }
    const MomentumGrid& grid() const { return grid_; }
    const CliffordBasis& basis() const { return basis_; }
    double aliasing_period() const { return grid_.aliasing_period(); }

    /// Lattice half-extent R in units of h.
    int radius() const { return radius_; }
    int side() const { return 2 * radius_ + 1; }
    std::size_t sites() const { return sites_; }

    bool contains(const int* m) const;
    /// Row-major site index of the lattice point m (components in [-R, R]).
    std::size_t index(const int* m) const;
    Vec position(std::size_t site) const;

    CMat matrix(std::size_t site) const;
    const std::vector<Complex>& raw() const { return matrices_; }

    double s(std::size_t site) const { return s_[static_cast<Eigen::Index>(site)]; }
    double u(std::size_t site, int k) const { return u_[static_cast<std::size_t>(k)][static_cast<Eigen::Index>(site)]; }
    const Vec& s_values() const { return s_; }
    const Vec& u_values(int k) const { return u_[static_cast<std::size_t>(k)]; }

    /// ||K(x)||_HS^2 = n (s^2/4 + |u|^2).
    double hs_norm_sq(std::size_t site) const;

    /// Kernel of the relabelled operator: the new axis k reads the old axis
    /// perm[k] with orientation flips[k] (+1 or -1).
    KernelTable transformed(const std::vector<int>& perm, const std::vector<int>& flips) const;

private:
    CliffordBasis basis_;
    double b_, h_, R0_;
    MomentumGrid grid_;
    int radius_ = 0;
    std::size_t sites_ = 0;
    std::vector<Complex> matrices_;
    Vec s_;
    std::vector<Vec> u_;
};

/// Discrete inverse Fourier transform of psi_b D on the momentum grid,
/// evaluated on the spatial lattice h Z^d cut to [-R0, R0]^d. Separable:
/// one dense phase matrix per axis.
///
/// Throws ConfigError when Xi < b + 1, M is odd, R0 is not a multiple of h, or
/// R0 violates the aliasing guard R0 < pi M / (2 Xi).
KernelTable tabulate_kernel(const CliffordBasis& basis, double b, const MomentumGrid& grid, double h,
                            double R0, unsigned threads = 1);

struct RefinementStudy {
    std::vector<int> points;        // M values
    std::vector<double> deviations; // max entry deviation between consecutive M
    double worst_ratio = 0.0;       // min over consecutive deviation ratios
};

/// Self-convergence of the tabulation under M -> 2M -> 4M on the common lattice.
RefinementStudy refinement_study(const CliffordBasis& basis, double b, const MomentumGrid& coarse,
                                 double h, double R0, unsigned threads = 1);

/// c_d = Gamma((d+1)/2) / pi^{(d+1)/2}.
double riesz_constant(int d);

/// Off-diagonal kernel of Op(D): (c_d / (2i)) sum_k alpha_k x_k / |x|^{d+1}.
/// Throws ConfigError at x = 0.
CMat riesz_kernel(const CliffordBasis& basis, const Vec& x);

/// ||riesz_kernel(x)||_HS^2 = n (c_d/2)^2 |x|^{-2d}.
double far_field_hs_norm_sq(int d, const Vec& x);

/// Components (s, u) of the kernel on the lattice h Z^d: table values inside
/// [-R0, R0]^d, the Riesz far field s = 0, u_k = -(c_d/2) x_k / |x|^{d+1} outside.
class KernelField {
public:
    explicit KernelField(const KernelTable& table);

    const KernelTable& table() const { return *table_; }
    int d() const { return table_->d(); }
    int n() const { return table_->n(); }
    double h() const { return table_->h(); }

    /// Writes s and u_1..u_d at the lattice point m.
    void components(const int* m, double& s, double* u) const;
    double hs_norm_sq(const int* m) const;
    CMat matrix(const int* m) const;

    /// Far-field components at an arbitrary point x != 0.
    static void far_components(int d, const double* x, double& s, double* u);

private:
    const KernelTable* table_;
    double far_scale_;
};

/// Radial profile from the Hankel transform of the cutoff:
/// s(r) = (2 pi)^{-d/2} r^{1-d/2} int psi(rho) J_{d/2-1}(rho r) rho^{d/2} d rho and
/// u(x) = u_radial(|x|) x / |x| with
/// u_radial(r) = -(1/2) (2 pi)^{-d/2} r^{1-d/2} int psi(rho) J_{d/2}(rho r) rho^{d/2} d rho.
struct RadialProfile {
    double s = 0.0;
    double u_radial = 0.0;
    double hs_norm_sq(int n) const { return n * (0.25 * s * s + u_radial * u_radial); }
};
RadialProfile radial_kernel_profile(int d, double b, double r, const QuadratureSpec& quad);

/// K_{g2}(x, z) = (-1)^d int_{(-inf,0)^d} K0(x, y) K0(y, z) dy with K0 the Riesz kernel.
/// x and z must lie in the closed positive quadrant, away from the origin.
QuadratureResult<CMat> product_kernel(const CliffordBasis& basis, const Vec& x, const Vec& z,
                                      const QuadratureSpec& quad);

/// tr K_{g2}(x, z) = (-1)^d n (c_d/2)^2 int_{u>0} (x+u).(z+u) / (|x+u|^{d+1} |z+u|^{d+1}) du.
QuadratureResult<double> product_kernel_trace(int d, const Vec& x, const Vec& z, const QuadratureSpec& quad);

/// tr K_{g2}(z, z) = (-1)^d n (c_d/2)^2 int_{u>0} |z+u|^{-2d} du.
QuadratureResult<double> product_kernel_trace_diag(int d, const Vec& z, const QuadratureSpec& quad);

struct DecayFit {
    double slope = 0.0;
    double intercept = 0.0;
    std::size_t samples = 0;
};

/// Least-squares slope of log ||K(x)||_HS against log |x| along the lattice
/// rays e_k, the diagonal and (for d = 2) the (2,1), (1,2) directions.
DecayFit kernel_decay_exponent(const KernelTable& table, double rmin, double rmax);

/// Same fit for an arbitrary field given as x -> ||K(x)||_HS, sampled on the
/// same rays with `per_ray` log-spaced radii.
DecayFit kernel_decay_exponent(int d, const std::function<double(const Vec&)>& hs_norm, double rmin,
                               double rmax, int per_ray = 24);

struct HoelderScan {
    double delta_z = 0.0;
    std::vector<double> distances; // |x - z|
    std::vector<double> ratios;    // |tr K(z,z) - tr K(x,z)| / (sqrt|x-z| |tr K(x,z)|)
    bool bounded = false;
};

/// Ratios along the given offsets; every x = z + offset must lie in the box of
/// half-width delta_z = min_j (z_j/2)^2 around z. `bounded` holds when no ratio
/// exceeds twice the ratio at the largest offset.
HoelderScan hoelder_ratio_scan(int d, const Vec& z, const std::vector<Vec>& offsets, const QuadratureSpec& quad);

} // namespace szego
