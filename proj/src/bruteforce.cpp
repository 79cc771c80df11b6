#include "szego/traces.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <memory>

namespace szego {

namespace {

constexpr std::size_t block_sites = 64;

int steps(double length, double spacing, const char* what)
{
    const double ratio = length / spacing;
    const long k = std::lround(ratio);
    if (k < 1 || std::abs(ratio - static_cast<double>(k)) > 1e-9 * std::max(1.0, ratio))
        throw ConfigError(std::string(what) + " must be a positive multiple of the lattice spacing");
    return static_cast<int>(k);
}

// Cell-centred sites of the truncation box, indexed by the integer i with
// position (i + 1/2) h, i in [-NR, NR).
struct Box {
    int d = 0;
    int NR = 0;
    int NL = 0;
    int stride = 1;
    double cell = 1.0;
};

Box make_box(const KernelField& field, double L, const BruteForceGrid& grid)
{
    Box box;
    box.d = field.d();
    box.stride = steps(grid.h, field.h(), "brute-force spacing h");
    box.NR = steps(grid.R_trunc, grid.h, "R_trunc");
    box.NL = steps(L, grid.h, "L");
    if (box.NL > box.NR) throw ConfigError("the truncation box must contain [0, L]^d");
    box.cell = std::pow(grid.h, box.d);
    return box;
}

// Sites of H_M within the box: axes in `mask` span [-NR, NR), the others [0, NR).
std::vector<int> half_space_sites(const Box& box, unsigned mask)
{
    std::vector<int> lo(static_cast<std::size_t>(box.d));
    std::size_t count = 1;
    for (int j = 0; j < box.d; ++j) {
        lo[j] = (mask >> j) & 1U ? -box.NR : 0;
        count *= static_cast<std::size_t>(box.NR - lo[j]);
    }
    std::vector<int> coords;
    coords.reserve(count * static_cast<std::size_t>(box.d));
    std::vector<int> i(lo);
    for (;;) {
        coords.insert(coords.end(), i.begin(), i.end());
        int j = box.d - 1;
        while (j >= 0 && ++i[j] == box.NR) {
            i[j] = lo[j];
            --j;
        }
        if (j < 0) break;
    }
    return coords;
}

std::vector<std::size_t> cube_positions(const Box& box, const std::vector<int>& coords)
{
    std::vector<std::size_t> out;
    const std::size_t sites = coords.size() / static_cast<std::size_t>(box.d);
    for (std::size_t s = 0; s < sites; ++s) {
        bool inside = true;
        for (int j = 0; j < box.d; ++j) {
            const int c = coords[s * box.d + j];
            if (c < 0 || c >= box.NL) inside = false;
        }
        if (inside) out.push_back(s);
    }
    return out;
}

// Matrices K(delta h) h^d for delta in [-(2NR-1), 2NR-1]^d, column-major blocks.
class DifferenceTable {
public:
    DifferenceTable(const KernelField& field, const Box& box, bool matrices)
        : d_(box.d), n_(field.n()), span_(2 * box.NR - 1), side_(2 * span_ + 1)
    {
        std::size_t count = 1;
        for (int j = 0; j < d_; ++j) count *= static_cast<std::size_t>(side_);
        norms_.resize(count);
        if (matrices) blocks_.resize(count * static_cast<std::size_t>(n_ * n_));
        std::vector<int> delta(static_cast<std::size_t>(d_), -span_), m(static_cast<std::size_t>(d_));
        for (std::size_t k = 0; k < count; ++k) {
            for (int j = 0; j < d_; ++j) m[j] = delta[j] * box.stride;
            norms_[k] = field.hs_norm_sq(m.data()) * box.cell * box.cell;
            if (matrices) {
                const CMat K = box.cell * field.matrix(m.data());
                std::copy(K.data(), K.data() + n_ * n_, blocks_.begin() + static_cast<std::ptrdiff_t>(k * n_ * n_));
            }
            int j = d_ - 1;
            while (j >= 0 && ++delta[j] > span_) delta[j--] = -span_;
        }
    }

    std::size_t index(const int* a, const int* b) const
    {
        std::size_t k = 0;
        for (int j = 0; j < d_; ++j) k = k * static_cast<std::size_t>(side_) + static_cast<std::size_t>(a[j] - b[j] + span_);
        return k;
    }
    double norm(const int* a, const int* b) const { return norms_[index(a, b)]; }
    const Complex* block(const int* a, const int* b) const { return blocks_.data() + index(a, b) * n_ * n_; }

private:
    int d_, n_, span_, side_;
    std::vector<double> norms_;
    std::vector<Complex> blocks_;
};

// Rows [r0, r1) x columns [c0, c1) of A = (K(x_r - x_c) h^d) over the site list.
CMat assemble_block(const DifferenceTable& diff, const std::vector<int>& coords, int d, int n, std::size_t r0,
                    std::size_t r1, std::size_t c0, std::size_t c1)
{
    CMat out(static_cast<Eigen::Index>((r1 - r0) * n), static_cast<Eigen::Index>((c1 - c0) * n));
    for (std::size_t c = c0; c < c1; ++c)
        for (std::size_t r = r0; r < r1; ++r) {
            const Complex* src = diff.block(&coords[r * d], &coords[c * d]);
            out.block(static_cast<Eigen::Index>((r - r0) * n), static_cast<Eigen::Index>((c - c0) * n), n, n) =
                Eigen::Map<const CMat>(src, n, n);
        }
    return out;
}

CMat assemble_columns(const DifferenceTable& diff, const std::vector<int>& coords, int d, int n,
                      const std::vector<std::size_t>& cols)
{
    const std::size_t sites = coords.size() / static_cast<std::size_t>(d);
    CMat out(static_cast<Eigen::Index>(sites * n), static_cast<Eigen::Index>(cols.size() * n));
    for (std::size_t k = 0; k < cols.size(); ++k)
        for (std::size_t r = 0; r < sites; ++r) {
            const Complex* src = diff.block(&coords[r * d], &coords[cols[k] * d]);
            out.block(static_cast<Eigen::Index>(r * n), static_cast<Eigen::Index>(k * n), n, n) =
                Eigen::Map<const CMat>(src, n, n);
        }
    return out;
}

// A * V with A generated block-row by block-row, or from a dense copy.
CMat apply_operator(const DifferenceTable& diff, const std::vector<int>& coords, int d, int n, const CMat* dense,
                    const CMat& V, unsigned threads)
{
    if (dense) return (*dense) * V;
    const std::size_t sites = coords.size() / static_cast<std::size_t>(d);
    CMat out(V.rows(), V.cols());
    const std::size_t blocks = (sites + block_sites - 1) / block_sites;
    parallel_for(blocks, threads, [&](std::size_t b) {
        const std::size_t r0 = b * block_sites, r1 = std::min(sites, r0 + block_sites);
        const CMat rows = assemble_block(diff, coords, d, n, r0, r1, 0, sites);
        out.middleRows(static_cast<Eigen::Index>(r0 * n), static_cast<Eigen::Index>((r1 - r0) * n)).noalias() = rows * V;
    });
    return out;
}

} // namespace

TraceValue vertex_trace_bruteforce(const Polynomial& g, const KernelField& field, double L,
                                   const BruteForceGrid& grid, unsigned threads)
{
    const Box box = make_box(field, L, grid);
    const int d = box.d, n = field.n(), P = g.degree();
    if (P == 0) return {};
    const DifferenceTable diff(field, box, P >= 3);

    CompensatedSum total;
    for (unsigned mask = 0; mask < (1U << d); ++mask) {
        const double sign = std::popcount(mask) % 2 == 0 ? 1.0 : -1.0;
        const std::vector<int> coords = half_space_sites(box, mask);
        const std::size_t sites = coords.size() / static_cast<std::size_t>(d);
        const std::vector<std::size_t> cube = cube_positions(box, coords);

        CompensatedSum part;
        if (g.omega(1) != 0.0) {
            std::vector<int> origin(static_cast<std::size_t>(d), 0);
            part += g.omega(1) * static_cast<double>(cube.size()) * 0.5 * n * field.table().s(field.table().index(origin.data())) * box.cell;
        }
        if (g.omega(2) != 0.0) {
            CompensatedSum frob;
            for (std::size_t q : cube)
                for (std::size_t y = 0; y < sites; ++y) frob += diff.norm(&coords[q * d], &coords[y * d]);
            part += g.omega(2) * frob.value();
        }
        if (P >= 3) {
            std::unique_ptr<CMat> dense;
            if (sites * static_cast<std::size_t>(n) <= grid.dense_cap)
                dense = std::make_unique<CMat>(assemble_block(diff, coords, d, n, 0, sites, 0, sites));
            const CMat V1 = assemble_columns(diff, coords, d, n, cube);
            CMat Vk = V1;
            for (int p = 3; p <= P; ++p) {
                Vk = apply_operator(diff, coords, d, n, dense.get(), Vk, threads);
                if (g.omega(p) != 0.0) part += g.omega(p) * V1.cwiseProduct(Vk.conjugate()).sum().real();
            }
        }
        total += sign * part.value();
    }
    return {total.value(), 0.0};
}

double trace_norm_vertex(const Polynomial& g, const KernelField& field, double L, const BruteForceGrid& grid)
{
    if (g.degree() > 2) throw ConfigError("trace_norm_vertex supports polynomials of degree <= 2");
    const Box box = make_box(field, L, grid);
    const int d = box.d, n = field.n();
    const DifferenceTable diff(field, box, true);

    const std::vector<int> full = half_space_sites(box, (1U << d) - 1);
    const std::size_t full_sites = full.size() / static_cast<std::size_t>(d);
    std::vector<int> cube_coords;
    for (std::size_t q : cube_positions(box, full))
        cube_coords.insert(cube_coords.end(), full.begin() + q * d, full.begin() + (q + 1) * d);
    const std::size_t cube_sites = cube_coords.size() / static_cast<std::size_t>(d);
    const auto rows = static_cast<Eigen::Index>(cube_sites * n);
    if (static_cast<double>(rows) * static_cast<double>(full_sites * n) > 1e8)
        throw ResourceCap("trace_norm_vertex: operator rows exceed the memory cap");

    auto orthant = [&](const int* c) {
        unsigned bits = 0;
        for (int j = 0; j < d; ++j) bits |= (c[j] >= 0 ? 1U : 0U) << j;
        return bits;
    };
    // Rows Q x columns `cols` of A.
    auto gather = [&](const std::vector<int>& row_coords, const std::vector<int>& col_coords) {
        const std::size_t r = row_coords.size() / static_cast<std::size_t>(d);
        const std::size_t c = col_coords.size() / static_cast<std::size_t>(d);
        CMat out(static_cast<Eigen::Index>(r * n), static_cast<Eigen::Index>(c * n));
        for (std::size_t k = 0; k < c; ++k)
            for (std::size_t i = 0; i < r; ++i)
                out.block(static_cast<Eigen::Index>(i * n), static_cast<Eigen::Index>(k * n), n, n) =
                    Eigen::Map<const CMat>(diff.block(&row_coords[i * d], &col_coords[k * d]), n, n);
        return out;
    };

    // Summing over the faces, column c of the vertex operator is
    // (-1)^d [omega_1 delta_{c < 0} A(., c) + omega_2 (A 1_{Y(c)} A)(., c)] with
    // Y(c) = {y : y_j < 0 wherever c_j >= 0}. Columns of different orthants
    // are disjoint, so R R^* accumulates orthant by orthant.
    CMat G = CMat::Zero(rows, rows);
    for (unsigned sigma = 0; sigma < (1U << d); ++sigma) {
        std::vector<int> cols, inner;
        for (std::size_t k = 0; k < full_sites; ++k) {
            const int* c = &full[k * d];
            if (orthant(c) == sigma) cols.insert(cols.end(), c, c + d);
            if ((orthant(c) & sigma) == 0) inner.insert(inner.end(), c, c + d);
        }
        CMat Z;
        if (g.omega(2) != 0.0) Z = gather(cube_coords, inner);
        const std::size_t count = cols.size() / static_cast<std::size_t>(d);
        for (std::size_t c0 = 0; c0 < count; c0 += block_sites) {
            const std::size_t c1 = std::min(count, c0 + block_sites);
            const std::vector<int> chunk(cols.begin() + c0 * d, cols.begin() + c1 * d);
            CMat part = CMat::Zero(rows, static_cast<Eigen::Index>((c1 - c0) * n));
            if (g.omega(1) != 0.0 && sigma == 0) part += g.omega(1) * gather(cube_coords, chunk);
            if (g.omega(2) != 0.0) part.noalias() += g.omega(2) * (Z * gather(inner, chunk));
            G.noalias() += part * part.adjoint();
        }
    }
    Eigen::SelfAdjointEigenSolver<CMat> solver(G, Eigen::EigenvaluesOnly);
    CompensatedSum norm;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) norm += std::sqrt(std::max(0.0, solver.eigenvalues()[i]));
    return norm.value();
}

} // namespace szego
