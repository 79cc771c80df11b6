#include "szego/traces.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace szego {

namespace {

double parity_sign(int d)
{
    return d % 2 == 0 ? 1.0 : -1.0;
}

int lattice_steps(double length, double spacing, const char* what)
{
    const double ratio = length / spacing;
    const long k = std::lround(ratio);
    if (k < 1 || std::abs(ratio - static_cast<double>(k)) > 1e-9 * std::max(1.0, ratio))
        throw ConfigError(std::string(what) + " must be a positive multiple of the lattice spacing");
    return static_cast<int>(k);
}

// n (c_d/2)^2 int |z|^{-2d} prod_j min(z_j, L) over {z > 0} minus [0, inner]^d.
TraceValue far_field_vertex_integral(int d, double L, double inner, const QuadratureSpec& quad)
{
    const double half_c = 0.5 * riesz_constant(d);
    const double pref = spinor_dimension(d) * half_c * half_c;
    std::vector<double> cuts{0.0, inner};
    if (L != inner) cuts.push_back(L);
    std::sort(cuts.begin(), cuts.end());
    cuts.push_back(std::numeric_limits<double>::infinity());
    const int pieces = static_cast<int>(cuts.size()) - 1;

    auto f = [&](const Vec& z) {
        double w = 1.0;
        for (int j = 0; j < d; ++j) w *= std::min(z[j], L);
        return pref * w * std::pow(z.squaredNorm(), -static_cast<double>(d));
    };

    CompensatedSum value, error;
    std::vector<int> sel(static_cast<std::size_t>(d), 0);
    for (;;) {
        bool outside = false;
        Vec lo(d), hi(d);
        for (int j = 0; j < d; ++j) {
            lo[j] = cuts[static_cast<std::size_t>(sel[j])];
            hi[j] = cuts[static_cast<std::size_t>(sel[j] + 1)];
            if (hi[j] > inner) outside = true;
        }
        if (outside) {
            const auto r = integrate_checked(f, Region::box(lo, hi), quad);
            value += r.value;
            error += r.error;
        }
        int j = d - 1;
        while (j >= 0 && ++sel[j] == pieces) sel[j--] = 0;
        if (j < 0) break;
    }
    return {value.value(), error.value()};
}

using RowArray = Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Sub-lattice view of a two-dimensional table: arrays indexed [i + ext][j + ext].
struct CubicLattice {
    int ext = 0;
    double spacing = 0.0;
    RowArray s, u1, u2;
};

CubicLattice sample_cubic_lattice(const KernelTable& table, int stride, int ext)
{
    CubicLattice lat;
    lat.ext = ext;
    lat.spacing = table.h() * stride;
    const int side = 2 * ext + 1;
    lat.s.resize(side, side);
    lat.u1.resize(side, side);
    lat.u2.resize(side, side);
    int m[2];
    for (int i = -ext; i <= ext; ++i)
        for (int j = -ext; j <= ext; ++j) {
            m[0] = i * stride;
            m[1] = j * stride;
            const std::size_t site = table.index(m);
            lat.s(i + ext, j + ext) = table.s(site);
            lat.u1(i + ext, j + ext) = table.u(site, 0);
            lat.u2(i + ext, j + ext) = table.u(site, 1);
        }
    return lat;
}

struct LocalisedSum {
    double total = 0.0;
    double outer_shell = 0.0;
};

// sum_{|p|,|q| <= local} loc(p,q) sum_{|i|,|j| <= span} w(p,i) w(q,j) tau_i tau_j
//     sum_f F(p+i, q+j) F(i, j)
// where tau is 1/2 on |i| = span when `faces` is set and 1 otherwise.
template <typename Weight>
LocalisedSum localised_sum(const CubicLattice& lat, const RowArray& loc, const std::vector<const RowArray*>& fields,
                           int local, int span, bool faces, Weight&& w)
{
    const int ext = lat.ext;
    const int width = 2 * span + 1;
    auto tau = [&](int i) { return faces && (i == -span || i == span) ? 0.5 : 1.0; };

    // Row weights per transverse offset q.
    RowArray row_weight(2 * local + 1, width);
    for (int q = -local; q <= local; ++q)
        for (int j = -span; j <= span; ++j) row_weight(q + local, j + span) = w(q, j) * tau(j);

    const int shell = std::max(1, local / 12);
    CompensatedSum total, outer;
    for (int p = -local; p <= local; ++p) {
        for (int q = -local; q <= local; ++q) {
            const double lv = loc(p + ext, q + ext);
            if (lv == 0.0) continue;
            const auto rw = row_weight.row(q + local);
            CompensatedSum inner;
            for (int i = -span; i <= span; ++i) {
                const double wi = w(p, i) * tau(i);
                if (wi == 0.0) continue;
                double acc = 0.0;
                for (const RowArray* F : fields) {
                    const auto shifted = F->row(p + i + ext).segment(q - span + ext, width);
                    const auto centred = F->row(i + ext).segment(ext - span, width);
                    acc += (shifted * centred * rw).sum();
                }
                inner += wi * acc;
            }
            const double contribution = lv * inner.value();
            total += contribution;
            if (std::max(std::abs(p), std::abs(q)) > local - shell) outer += contribution;
        }
    }
    return {total.value(), outer.value()};
}

} // namespace

std::string to_string(TraceMethod method)
{
    return method == TraceMethod::reduced ? "reduced-quadrature" : "dense-bruteforce";
}

TraceMethod trace_method_from_string(const std::string& name)
{
    if (name == "reduced-quadrature" || name == "fast") return TraceMethod::reduced;
    if (name == "dense-bruteforce" || name == "bruteforce") return TraceMethod::bruteforce;
    throw ConfigError("unknown trace method '" + name + "'");
}

double vertex_trace_g1(int d, double L)
{
    if (d < 2) throw ConfigError("vertex traces require d >= 2");
    if (!(L > 0.0)) throw ConfigError("L must be positive");
    return 0.0;
}

TraceValue vertex_trace_g2(const KernelField& field, double L, const VertexTraceOptions& opts)
{
    const KernelTable& table = field.table();
    const int d = table.d(), R = table.radius();
    const double h = table.h();
    lattice_steps(L, h, "L");

    CompensatedSum near, mismatch;
    const int shell_start = (3 * R) / 4;
    std::vector<int> m(static_cast<std::size_t>(d), 1);
    Vec x(d);
    for (;;) {
        double w = 1.0;
        int top = 0;
        for (int j = 0; j < d; ++j) {
            w *= std::min(m[j] * h, L) * (m[j] == R ? 0.5 : 1.0);
            top = std::max(top, m[j]);
            x[j] = m[j] * h;
        }
        const double hs = table.hs_norm_sq(table.index(m.data()));
        near += w * hs;
        if (top > shell_start) mismatch += w * (hs - far_field_hs_norm_sq(d, x));
        int j = d - 1;
        while (j >= 0 && ++m[j] > R) m[j--] = 1;
        if (j < 0) break;
    }
    const double cell = std::pow(h, d);
    const TraceValue far = far_field_vertex_integral(d, L, table.R0(), opts.quad);
    return {parity_sign(d) * (cell * near.value() + far.value), far.error + cell * std::abs(mismatch.value())};
}

TraceValue vertex_trace_g3(const KernelField& field, double L, const VertexTraceOptions& opts)
{
    const KernelTable& table = field.table();
    if (table.d() != 2) throw ConfigError("the reduced cubic vertex trace is implemented for d = 2");
    const int stride = lattice_steps(opts.cubic_spacing, table.h(), "cubic_spacing");
    const double hs = opts.cubic_spacing;
    const int local = lattice_steps(opts.cubic_local_radius, hs, "cubic_local_radius");
    const int span = lattice_steps(opts.cubic_near_radius, hs, "cubic_near_radius");
    lattice_steps(L, hs, "L");
    if ((local + span) * stride > table.radius())
        throw ConfigError("cubic_local_radius + cubic_near_radius exceeds the tabulated extent");

    const CubicLattice lat = sample_cubic_lattice(table, stride, local + span);
    const std::vector<const RowArray*> vector_part{&lat.u1, &lat.u2};
    const std::vector<const RowArray*> scalar_part{&lat.s};

    // Weight factors in lattice units; W(a, c) = prod_j min(L, max(0, a_j, -c_j)).
    auto w_loc_first = [&](int p, int i) { return std::min(L, hs * std::max({0, p, -i})); };
    auto w_loc_middle = [&](int p, int i) { return std::min(L, hs * std::max({0, i, i + p})); };

    // s(a) u(-a-c).u(c) with a localised, and s(b) u(a).u(-a-b) with b localised.
    const LocalisedSum first = localised_sum(lat, lat.s, vector_part, local, span, true, w_loc_first);
    const LocalisedSum middle = localised_sum(lat, lat.s, vector_part, local, span, true, w_loc_middle);
    const LocalisedSum scalar = localised_sum(lat, lat.s, scalar_part, local, local, false, w_loc_first);

    const double cell2 = std::pow(hs, 4);
    const int n = table.n();
    const TraceValue far = far_field_vertex_integral(2, L, opts.cubic_near_radius, opts.quad);
    const double first_total = -cell2 * first.total - far.value / n;
    const double middle_total = -cell2 * middle.total - far.value / n;
    const double value = n * (0.125 * cell2 * scalar.total - 0.5 * (2.0 * first_total + middle_total));
    const double shell = n * cell2 * (std::abs(first.outer_shell) + 0.5 * std::abs(middle.outer_shell) +
                                      0.125 * std::abs(scalar.outer_shell));
    return {value, 1.5 * far.error + shell};
}

TraceValue vertex_trace(const Polynomial& g, const KernelField& field, double L, const VertexTraceOptions& opts)
{
    if (g.degree() > 3) throw ConfigError("reduced vertex traces support polynomials of degree <= 3");
    const int d = field.d();
    TraceValue out{g.omega(1) * vertex_trace_g1(d, L), 0.0};
    if (g.omega(2) != 0.0) {
        const TraceValue t = vertex_trace_g2(field, L, opts);
        out.value += g.omega(2) * t.value;
        out.error += std::abs(g.omega(2)) * t.error;
    }
    if (g.omega(3) != 0.0) {
        const TraceValue t = vertex_trace_g3(field, L, opts);
        out.value += g.omega(3) * t.value;
        out.error += std::abs(g.omega(3)) * t.error;
    }
    return out;
}

VertexTraceCurve vertex_trace_curve(const Polynomial& g, const KernelField& field, const std::vector<double>& Ls,
                                    const VertexTraceOptions& opts, unsigned threads)
{
    for (std::size_t i = 1; i < Ls.size(); ++i)
        if (!(Ls[i] > Ls[i - 1])) throw ConfigError("L values must be strictly increasing");
    VertexTraceCurve curve;
    curve.g = g;
    curve.b = field.table().b();
    curve.d = field.d();
    curve.method = TraceMethod::reduced;
    curve.points.resize(Ls.size());
    parallel_for(Ls.size(), threads, [&](std::size_t i) {
        const TraceValue t = vertex_trace(g, field, Ls[i], opts);
        curve.points[i] = {Ls[i], t.value, t.error};
    });
    return curve;
}

double cube_trace(const Polynomial& g, const KernelField& field, double L, const CubeTraceOptions& opts)
{
    const KernelTable& table = field.table();
    const int d = table.d(), n = table.n();
    const int stride = lattice_steps(opts.h, table.h(), "cube spacing h");
    const int N = lattice_steps(2.0 * L, opts.h, "2L");
    const double cell = std::pow(opts.h, d);
    std::size_t sites = 1;
    for (int j = 0; j < d; ++j) sites *= static_cast<std::size_t>(N);

    if (!opts.dense && g.degree() <= 2) {
        std::vector<int> zero(static_cast<std::size_t>(d), 0);
        const double linear = g.omega(1) * static_cast<double>(sites) * cell * n * 0.5 *
                              table.s(table.index(zero.data()));
        if (g.omega(2) == 0.0) return linear;
        CompensatedSum pairs;
        std::vector<int> delta(static_cast<std::size_t>(d), -(N - 1)), m(static_cast<std::size_t>(d));
        for (;;) {
            double w = 1.0;
            for (int j = 0; j < d; ++j) {
                w *= static_cast<double>(N - std::abs(delta[j]));
                m[j] = delta[j] * stride;
            }
            pairs += w * field.hs_norm_sq(m.data());
            int j = d - 1;
            while (j >= 0 && ++delta[j] > N - 1) delta[j--] = -(N - 1);
            if (j < 0) break;
        }
        return linear + g.omega(2) * cell * cell * pairs.value();
    }

    if (sites * static_cast<std::size_t>(n) > opts.dense_cap)
        throw ResourceCap("cube_trace: " + std::to_string(sites * n) + " rows exceed the dense cap of " +
                          std::to_string(opts.dense_cap));
    std::vector<std::vector<int>> coords(sites, std::vector<int>(static_cast<std::size_t>(d)));
    for (std::size_t s = 0; s < sites; ++s) {
        std::size_t rem = s;
        for (int j = d - 1; j >= 0; --j) {
            coords[s][j] = static_cast<int>(rem % static_cast<std::size_t>(N));
            rem /= static_cast<std::size_t>(N);
        }
    }
    const auto dim = static_cast<Eigen::Index>(sites) * n;
    CMat A(dim, dim);
    std::vector<int> m(static_cast<std::size_t>(d));
    for (std::size_t r = 0; r < sites; ++r)
        for (std::size_t c = 0; c < sites; ++c) {
            for (int j = 0; j < d; ++j) m[j] = (coords[r][j] - coords[c][j]) * stride;
            A.block(static_cast<Eigen::Index>(r) * n, static_cast<Eigen::Index>(c) * n, n, n) =
                cell * field.matrix(m.data());
        }
    return g.trace_of(A);
}

} // namespace szego
