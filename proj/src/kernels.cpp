#include "szego/kernels.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "szego/symbols.hpp"

namespace szego {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

using RowMat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

std::size_t ipow(std::size_t base, int e)
{
    std::size_t out = 1;
    for (int i = 0; i < e; ++i) out *= base;
    return out;
}

// Applies E (X x M) along every axis of a row-major M^d array.
std::vector<Complex> separable_transform(std::vector<Complex> data, int d, const CMat& E, unsigned threads)
{
    std::vector<std::size_t> dims(static_cast<std::size_t>(d), static_cast<std::size_t>(E.cols()));
    const auto X = static_cast<std::size_t>(E.rows());
    const CMat Et = E.transpose();
    for (int a = 0; a < d; ++a) {
        std::size_t outer = 1, inner = 1;
        for (int j = 0; j < a; ++j) outer *= dims[j];
        for (int j = a + 1; j < d; ++j) inner *= dims[j];
        const std::size_t len = dims[a];
        std::vector<Complex> next(outer * X * inner);
        const std::size_t chunks = outer == 1 ? 16 : 1;
        const std::size_t step = (inner + chunks - 1) / chunks;
        parallel_for(outer * chunks, threads, [&](std::size_t task) {
            const std::size_t o = task / chunks, c = task % chunks;
            const std::size_t r0 = c * step;
            if (r0 >= inner) return;
            const std::size_t rn = std::min(step, inner - r0);
            Eigen::Map<const CMat> in(data.data() + o * len * inner, static_cast<Eigen::Index>(inner),
                                      static_cast<Eigen::Index>(len));
            Eigen::Map<CMat> out(next.data() + o * X * inner, static_cast<Eigen::Index>(inner),
                                 static_cast<Eigen::Index>(X));
            out.middleRows(static_cast<Eigen::Index>(r0), static_cast<Eigen::Index>(rn)).noalias() =
                in.middleRows(static_cast<Eigen::Index>(r0), static_cast<Eigen::Index>(rn)) * Et;
        });
        dims[a] = X;
        data = std::move(next);
    }
    return data;
}

void assemble(const CliffordBasis& basis, double s, const double* u, Complex* out)
{
    const int n = basis.n;
    Eigen::Map<RowMat> K(out, n, n);
    K.setZero();
    K.diagonal().setConstant(0.5 * s);
    for (int k = 0; k < basis.d; ++k) K += Complex(0.0, u[k]) * basis.alpha(k);
}

int lattice_radius(double h, double R0)
{
    if (!(h > 0.0) || !(R0 > 0.0)) throw ConfigError("lattice spacing h and extent R0 must be positive");
    const double ratio = R0 / h;
    const long R = std::lround(ratio);
    if (R < 1 || std::abs(ratio - static_cast<double>(R)) > 1e-9 * ratio)
        throw ConfigError("R0 must be a positive integer multiple of h");
    return static_cast<int>(R);
}

double ray_fit(const std::vector<double>& lx, const std::vector<double>& ly, DecayFit& fit)
{
    const auto count = static_cast<Eigen::Index>(lx.size());
    Eigen::MatrixXd A(count, 2);
    Vec y(count);
    for (Eigen::Index i = 0; i < count; ++i) {
        A(i, 0) = lx[static_cast<std::size_t>(i)];
        A(i, 1) = 1.0;
        y[i] = ly[static_cast<std::size_t>(i)];
    }
    const Vec coef = A.colPivHouseholderQr().solve(y);
    fit.slope = coef[0];
    fit.intercept = coef[1];
    fit.samples = lx.size();
    return fit.slope;
}

std::vector<Eigen::VectorXi> decay_rays(int d)
{
    std::vector<Eigen::VectorXi> rays;
    for (int k = 0; k < d; ++k) rays.push_back(Eigen::VectorXi::Unit(d, k));
    rays.push_back(Eigen::VectorXi::Ones(d));
    if (d == 2) {
        rays.push_back((Eigen::VectorXi(2) << 2, 1).finished());
        rays.push_back((Eigen::VectorXi(2) << 1, 2).finished());
    }
    return rays;
}

void require_quadrant_point(const Vec& x, int d, const char* name)
{
    if (x.size() != d) throw ConfigError(std::string(name) + " has the wrong dimension");
    if ((x.array() < 0.0).any() || x.norm() == 0.0)
        throw ConfigError(std::string(name) + " must lie in the closed positive quadrant, away from 0");
}

} // namespace

double MomentumGrid::aliasing_period() const
{
    return std::numbers::pi * points / xi_max;
}

void MomentumGrid::validate(double b) const
{
    if (points < 2 || points % 2 != 0) throw ConfigError("momentum grid needs an even number of points");
    if (!(xi_max >= b + 1.0))
        throw ConfigError("momentum half-extent xi_max = " + std::to_string(xi_max) +
                          " does not cover the cutoff support b + 1 = " + std::to_string(b + 1.0));
}

KernelTable::KernelTable(CliffordBasis basis, double b, double h, double R0, MomentumGrid grid,
                         std::vector<Complex> matrices)
    : basis_(std::move(basis)), b_(b), h_(h), R0_(R0), grid_(grid), matrices_(std::move(matrices))
{
    radius_ = lattice_radius(h, R0);
    const int d = basis_.d, n = basis_.n;
    sites_ = ipow(static_cast<std::size_t>(side()), d);
    if (matrices_.size() != sites_ * static_cast<std::size_t>(n * n))
        throw ConfigError("kernel payload size does not match the lattice");

    s_.resize(static_cast<Eigen::Index>(sites_));
    u_.assign(static_cast<std::size_t>(d), Vec(static_cast<Eigen::Index>(sites_)));
    for (std::size_t site = 0; site < sites_; ++site) {
        Eigen::Map<const RowMat> K(matrices_.data() + site * static_cast<std::size_t>(n * n), n, n);
        s_[static_cast<Eigen::Index>(site)] = 2.0 * K.trace().real() / n;
        for (int k = 0; k < d; ++k) {
            const CMat& a = basis_.alpha(k);
            Complex acc = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    if (a(j, i) != 0.0) acc += a(j, i) * K(i, j);
            u_[static_cast<std::size_t>(k)][static_cast<Eigen::Index>(site)] = acc.imag() / n;
        }
    }
}

bool KernelTable::contains(const int* m) const
{
    for (int j = 0; j < d(); ++j)
        if (m[j] < -radius_ || m[j] > radius_) return false;
    return true;
}

std::size_t KernelTable::index(const int* m) const
{
    std::size_t idx = 0;
    for (int j = 0; j < d(); ++j) idx = idx * static_cast<std::size_t>(side()) + static_cast<std::size_t>(m[j] + radius_);
    return idx;
}

Vec KernelTable::position(std::size_t site) const
{
    Vec x(d());
    for (int j = d() - 1; j >= 0; --j) {
        x[j] = (static_cast<double>(site % static_cast<std::size_t>(side())) - radius_) * h_;
        site /= static_cast<std::size_t>(side());
    }
    return x;
}

CMat KernelTable::matrix(std::size_t site) const
{
    const int n = this->n();
    return Eigen::Map<const RowMat>(matrices_.data() + site * static_cast<std::size_t>(n * n), n, n);
}

double KernelTable::hs_norm_sq(std::size_t site) const
{
    double uu = 0.0;
    for (int k = 0; k < d(); ++k) uu += u(site, k) * u(site, k);
    const double sv = s(site);
    return n() * (0.25 * sv * sv + uu);
}

KernelTable KernelTable::transformed(const std::vector<int>& perm, const std::vector<int>& flips) const
{
    const int d = this->d(), n = this->n();
    if (static_cast<int>(perm.size()) != d || static_cast<int>(flips.size()) != d)
        throw ConfigError("axis map must have one entry per dimension");
    std::vector<bool> seen(static_cast<std::size_t>(d), false);
    for (int k = 0; k < d; ++k) {
        if (perm[k] < 0 || perm[k] >= d || seen[perm[k]]) throw ConfigError("axis map is not a permutation");
        seen[perm[k]] = true;
        if (flips[k] != 1 && flips[k] != -1) throw ConfigError("axis flips must be +1 or -1");
    }
    std::vector<Complex> out(matrices_.size());
    std::vector<int> mnew(static_cast<std::size_t>(d)), mold(static_cast<std::size_t>(d));
    std::vector<double> u(static_cast<std::size_t>(d));
    for (std::size_t site = 0; site < sites_; ++site) {
        std::size_t rem = site;
        for (int j = d - 1; j >= 0; --j) {
            mnew[j] = static_cast<int>(rem % static_cast<std::size_t>(side())) - radius_;
            rem /= static_cast<std::size_t>(side());
        }
        for (int k = 0; k < d; ++k) mold[perm[k]] = flips[k] * mnew[k];
        const std::size_t src = index(mold.data());
        for (int k = 0; k < d; ++k) u[k] = flips[k] * this->u(src, perm[k]);
        assemble(basis_, s(src), u.data(), out.data() + site * static_cast<std::size_t>(n * n));
    }
    return KernelTable(basis_, b_, h_, R0_, grid_, std::move(out));
}

KernelTable tabulate_kernel(const CliffordBasis& basis, double b, const MomentumGrid& grid, double h, double R0,
                            unsigned threads)
{
    const Cutoff cutoff(b);
    grid.validate(b);
    const int R = lattice_radius(h, R0);
    if (!(R0 < 0.5 * grid.aliasing_period()))
        throw ConfigError("R0 = " + std::to_string(R0) + " violates the aliasing guard pi M / (2 Xi) = " +
                          std::to_string(0.5 * grid.aliasing_period()));
    const int d = basis.d, n = basis.n, M = grid.points;
    const std::size_t cells = ipow(static_cast<std::size_t>(M), d);

    // Symbol fields psi and psi xi_k / |xi| on the momentum grid.
    std::vector<std::vector<Complex>> fields(static_cast<std::size_t>(d + 1), std::vector<Complex>(cells));
    std::vector<double> xi(static_cast<std::size_t>(d));
    for (std::size_t c = 0; c < cells; ++c) {
        std::size_t rem = c;
        double r2 = 0.0;
        for (int j = d - 1; j >= 0; --j) {
            xi[j] = grid.node(static_cast<int>(rem % static_cast<std::size_t>(M)));
            rem /= static_cast<std::size_t>(M);
            r2 += xi[j] * xi[j];
        }
        const double r = std::sqrt(r2);
        const double psi = cutoff.radial(r);
        fields[0][c] = psi;
        for (int k = 0; k < d; ++k) fields[static_cast<std::size_t>(k + 1)][c] = psi * xi[k] / r;
    }

    const int X = 2 * R + 1;
    CMat E(X, M);
    for (int a = 0; a < X; ++a)
        for (int j = 0; j < M; ++j) {
            const double phase = (a - R) * h * grid.node(j);
            E(a, j) = Complex(std::cos(phase), std::sin(phase));
        }
    const double scale = std::pow(grid.spacing() / two_pi, d);

    std::vector<std::vector<Complex>> spatial;
    for (auto& f : fields) spatial.push_back(separable_transform(std::move(f), d, E, threads));

    const std::size_t sites = ipow(static_cast<std::size_t>(X), d);
    std::vector<Complex> matrices(sites * static_cast<std::size_t>(n * n));
    std::vector<double> u(static_cast<std::size_t>(d));
    for (std::size_t site = 0; site < sites; ++site) {
        const double s = scale * spatial[0][site].real();
        for (int k = 0; k < d; ++k) u[k] = -0.5 * scale * spatial[static_cast<std::size_t>(k + 1)][site].imag();
        assemble(basis, s, u.data(), matrices.data() + site * static_cast<std::size_t>(n * n));
    }
    return KernelTable(basis, b, h, R0, grid, std::move(matrices));
}

RefinementStudy refinement_study(const CliffordBasis& basis, double b, const MomentumGrid& coarse, double h,
                                 double R0, unsigned threads)
{
    RefinementStudy study;
    std::vector<KernelTable> tables;
    for (int level = 0; level < 3; ++level) {
        MomentumGrid g = coarse;
        g.points = coarse.points << level;
        study.points.push_back(g.points);
        tables.push_back(tabulate_kernel(basis, b, g, h, R0, threads));
    }
    for (std::size_t i = 0; i + 1 < tables.size(); ++i) {
        double dev = 0.0;
        const auto& a = tables[i].raw();
        const auto& c = tables[i + 1].raw();
        for (std::size_t k = 0; k < a.size(); ++k) dev = std::max(dev, std::abs(a[k] - c[k]));
        study.deviations.push_back(dev);
    }
    study.worst_ratio = study.deviations[0] / study.deviations[1];
    return study;
}

double riesz_constant(int d)
{
    return std::tgamma(0.5 * (d + 1)) / std::pow(std::numbers::pi, 0.5 * (d + 1));
}

CMat riesz_kernel(const CliffordBasis& basis, const Vec& x)
{
    if (x.size() != basis.d) throw ConfigError("position has the wrong dimension");
    const double r = x.norm();
    if (r == 0.0) throw ConfigError("the Riesz kernel is singular at x = 0");
    const Complex pref = Complex(0.0, -0.5 * riesz_constant(basis.d)) / std::pow(r, basis.d + 1);
    CMat out = CMat::Zero(basis.n, basis.n);
    for (int k = 0; k < basis.d; ++k) out += (pref * x[k]) * basis.alpha(k);
    return out;
}

double far_field_hs_norm_sq(int d, const Vec& x)
{
    const double r = x.norm();
    if (r == 0.0) throw ConfigError("the far field is singular at x = 0");
    const double half_c = 0.5 * riesz_constant(d);
    return spinor_dimension(d) * half_c * half_c * std::pow(r, -2.0 * d);
}

KernelField::KernelField(const KernelTable& table) : table_(&table), far_scale_(-0.5 * riesz_constant(table.d())) {}

void KernelField::far_components(int d, const double* x, double& s, double* u)
{
    double r2 = 0.0;
    for (int k = 0; k < d; ++k) r2 += x[k] * x[k];
    const double r = std::sqrt(r2);
    const double scale = -0.5 * riesz_constant(d) / std::pow(r, d + 1);
    s = 0.0;
    for (int k = 0; k < d; ++k) u[k] = scale * x[k];
}

void KernelField::components(const int* m, double& s, double* u) const
{
    const int d = this->d();
    if (table_->contains(m)) {
        const std::size_t site = table_->index(m);
        s = table_->s(site);
        for (int k = 0; k < d; ++k) u[k] = table_->u(site, k);
        return;
    }
    double r2 = 0.0;
    for (int k = 0; k < d; ++k) r2 += static_cast<double>(m[k]) * m[k];
    const double h = table_->h();
    const double scale = far_scale_ / std::pow(std::sqrt(r2) * h, d + 1);
    s = 0.0;
    for (int k = 0; k < d; ++k) u[k] = scale * m[k] * h;
}

double KernelField::hs_norm_sq(const int* m) const
{
    double s;
    std::array<double, 16> u{};
    components(m, s, u.data());
    double uu = 0.0;
    for (int k = 0; k < d(); ++k) uu += u[k] * u[k];
    return n() * (0.25 * s * s + uu);
}

CMat KernelField::matrix(const int* m) const
{
    double s;
    std::array<double, 16> u{};
    components(m, s, u.data());
    CMat K(n(), n());
    RowMat tmp(n(), n());
    assemble(table_->basis(), s, u.data(), tmp.data());
    K = tmp;
    return K;
}

RadialProfile radial_kernel_profile(int d, double b, double r, const QuadratureSpec& quad)
{
    if (d < 2) throw ConfigError("radial profile requires d >= 2");
    if (r < 0.0) throw ConfigError("radius must be non-negative");
    const Cutoff cutoff(b);
    const double half = 0.5 * d;
    auto integral = [&](auto&& f) {
        double acc = 0.0;
        if (b > 0.0) acc += integrate_1d(f, 0.0, b, quad).value;
        acc += integrate_1d(f, b, b + 1.0, quad).value;
        return acc;
    };
    RadialProfile out;
    if (r == 0.0) {
        const double sphere = 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
        out.s = std::pow(two_pi, -d) * sphere *
                integral([&](double rho) { return cutoff.radial(rho) * std::pow(rho, d - 1); });
        return out;
    }
    const double pref = std::pow(two_pi, -half) * std::pow(r, 1.0 - half);
    out.s = pref * integral([&](double rho) {
        return cutoff.radial(rho) * std::cyl_bessel_j(half - 1.0, rho * r) * std::pow(rho, half);
    });
    out.u_radial = -0.5 * pref * integral([&](double rho) {
        return cutoff.radial(rho) * std::cyl_bessel_j(half, rho * r) * std::pow(rho, half);
    });
    return out;
}

QuadratureResult<CMat> product_kernel(const CliffordBasis& basis, const Vec& x, const Vec& z,
                                      const QuadratureSpec& quad)
{
    const int d = basis.d;
    require_quadrant_point(x, d, "x");
    require_quadrant_point(z, d, "z");
    const double half_c = 0.5 * riesz_constant(d);
    const double pref = (d % 2 == 0 ? 1.0 : -1.0) * half_c * half_c;
    auto f = [&](const Vec& u) -> CMat {
        const Vec xu = x + u, zu = z + u;
        CMat A = CMat::Zero(basis.n, basis.n), B = CMat::Zero(basis.n, basis.n);
        for (int k = 0; k < d; ++k) {
            A += xu[k] * basis.alpha(k);
            B += zu[k] * basis.alpha(k);
        }
        const double denom = std::pow(xu.norm(), d + 1) * std::pow(zu.norm(), d + 1);
        return (pref / denom) * (A * B);
    };
    auto result = integrate_adaptive<CMat>(f, Region::quadrant(Vec::Zero(d)), quad);
    if (!result.converged)
        throw NonConvergence("product kernel quadrature did not converge", result.value.trace().real(), result.error);
    return result;
}

QuadratureResult<double> product_kernel_trace(int d, const Vec& x, const Vec& z, const QuadratureSpec& quad)
{
    require_quadrant_point(x, d, "x");
    require_quadrant_point(z, d, "z");
    const double half_c = 0.5 * riesz_constant(d);
    const double pref = (d % 2 == 0 ? 1.0 : -1.0) * spinor_dimension(d) * half_c * half_c;
    auto f = [&](const Vec& u) {
        const Vec xu = x + u, zu = z + u;
        return pref * xu.dot(zu) / (std::pow(xu.norm(), d + 1) * std::pow(zu.norm(), d + 1));
    };
    return integrate_checked(f, Region::quadrant(Vec::Zero(d)), quad);
}

QuadratureResult<double> product_kernel_trace_diag(int d, const Vec& z, const QuadratureSpec& quad)
{
    require_quadrant_point(z, d, "z");
    const double half_c = 0.5 * riesz_constant(d);
    const double pref = (d % 2 == 0 ? 1.0 : -1.0) * spinor_dimension(d) * half_c * half_c;
    auto f = [&](const Vec& u) { return pref * std::pow((z + u).squaredNorm(), -static_cast<double>(d)); };
    return integrate_checked(f, Region::quadrant(Vec::Zero(d)), quad);
}

DecayFit kernel_decay_exponent(const KernelTable& table, double rmin, double rmax)
{
    if (!(rmin > 0.0) || !(rmin < rmax)) throw ConfigError("decay fit needs 0 < rmin < rmax");
    if (rmax > table.R0() * (1.0 + 1e-12)) throw ConfigError("decay fit range exceeds the tabulated extent");
    std::vector<double> lx, ly;
    const int d = table.d();
    std::vector<int> m(static_cast<std::size_t>(d));
    for (const auto& ray : decay_rays(d)) {
        for (int t = 1;; ++t) {
            for (int k = 0; k < d; ++k) m[k] = t * ray[k];
            if (!table.contains(m.data())) break;
            double r = 0.0;
            for (int k = 0; k < d; ++k) r += static_cast<double>(m[k]) * m[k];
            r = std::sqrt(r) * table.h();
            if (r < rmin || r > rmax) continue;
            lx.push_back(std::log(r));
            ly.push_back(0.5 * std::log(table.matrix(table.index(m.data())).squaredNorm()));
        }
    }
    if (lx.size() < 4) throw ConfigError("decay fit has fewer than four samples in range");
    DecayFit fit;
    ray_fit(lx, ly, fit);
    return fit;
}

DecayFit kernel_decay_exponent(int d, const std::function<double(const Vec&)>& hs_norm, double rmin, double rmax,
                               int per_ray)
{
    if (!(rmin > 0.0) || !(rmin < rmax)) throw ConfigError("decay fit needs 0 < rmin < rmax");
    if (per_ray < 2) throw ConfigError("decay fit needs at least two radii per ray");
    std::vector<double> lx, ly;
    for (const auto& ray : decay_rays(d)) {
        const Vec dir = ray.cast<double>().normalized();
        for (int i = 0; i < per_ray; ++i) {
            const double r = rmin * std::pow(rmax / rmin, static_cast<double>(i) / (per_ray - 1));
            lx.push_back(std::log(r));
            ly.push_back(std::log(hs_norm(r * dir)));
        }
    }
    DecayFit fit;
    ray_fit(lx, ly, fit);
    return fit;
}

HoelderScan hoelder_ratio_scan(int d, const Vec& z, const std::vector<Vec>& offsets, const QuadratureSpec& quad)
{
    require_quadrant_point(z, d, "z");
    HoelderScan scan;
    scan.delta_z = std::pow(0.5 * z.minCoeff(), 2);
    for (const auto& off : offsets) {
        if (off.size() != d) throw ConfigError("offset has the wrong dimension");
        if (off.cwiseAbs().maxCoeff() > scan.delta_z * (1.0 + 1e-12))
            throw ConfigError("offset leaves the admissible box of half-width delta_z");
    }
    const double diag = product_kernel_trace_diag(d, z, quad).value;
    double reference = 0.0, largest = -1.0;
    for (const auto& off : offsets) {
        const double dist = off.norm();
        double ratio = 0.0;
        if (dist > 0.0) {
            const double off_diag = product_kernel_trace(d, z + off, z, quad).value;
            ratio = std::abs(diag - off_diag) / (std::sqrt(dist) * std::abs(off_diag));
        }
        scan.distances.push_back(dist);
        scan.ratios.push_back(ratio);
        if (dist > largest) {
            largest = dist;
            reference = ratio;
        }
    }
    scan.bounded = !scan.ratios.empty();
    for (double r : scan.ratios)
        if (!std::isfinite(r) || r > 2.0 * reference) scan.bounded = false;
    return scan;
}

} // namespace szego
