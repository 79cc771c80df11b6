#pragma once

#include <string>
#include <vector>

#include "szego/kernels.hpp"
#include "szego/polynomial.hpp"

namespace szego {

struct TraceValue {
    double value = 0.0;
    double error = 0.0;
};

enum class TraceMethod { reduced, bruteforce };
std::string to_string(TraceMethod method);
TraceMethod trace_method_from_string(const std::string& name);

struct TracePoint {
    double L = 0.0;
    double value = 0.0;
    double quad_err = 0.0;
};

struct VertexTraceCurve {
    Polynomial g;
    double b = 0.0;
    int d = 0;
    TraceMethod method = TraceMethod::reduced;
    std::vector<TracePoint> points;
};

/// Resolution knobs of the reduced vertex traces.
struct VertexTraceOptions {
    QuadratureSpec quad{1e-10, 1e-16, 30, 400000};
    /// Cubic term: lattice spacing (a multiple of the table spacing), the
    /// half-width of the box holding the localised variable and the half-width
    /// of the box over which the slowly decaying variable is summed.
    double cubic_spacing = 0.5;
    double cubic_local_radius = 24.0;
    double cubic_near_radius = 40.0;
};

/// Degree-one vertex trace: identically zero, since the alternating sum of
/// face restrictions collapses to the negative quadrant.
double vertex_trace_g1(int d, double L);

/// (-1)^d int_{z>0} ||K(z)||^2 prod_j min(z_j, L) dz. Lattice sum over the
/// table (trapezoid weight 1/2 on the outer faces) plus adaptive quadrature
/// of the far field outside [0, R0]^d. L must be a multiple of the table spacing.
TraceValue vertex_trace_g2(const KernelField& field, double L, const VertexTraceOptions& opts = {});

/// (-1)^d int int tr[K(a) K(-a-c) K(c)] prod_j min(L, max(0, a_j, -c_j)) da dc.
/// Two-dimensional tables only.
TraceValue vertex_trace_g3(const KernelField& field, double L, const VertexTraceOptions& opts = {});

/// Sum of omega_p times the monomial traces; degree at most three.
TraceValue vertex_trace(const Polynomial& g, const KernelField& field, double L, const VertexTraceOptions& opts = {});

/// Evaluates vertex_trace on every L (increasing) in parallel; each point is
/// computed independently so the curve does not depend on the thread count.
VertexTraceCurve vertex_trace_curve(const Polynomial& g, const KernelField& field, const std::vector<double>& Ls,
                                    const VertexTraceOptions& opts = {}, unsigned threads = 1);

/// Cell-centred lattice (i + 1/2) h in the truncation box [-R_trunc, R_trunc]^d.
struct BruteForceGrid {
    double h = 0.25;
    double R_trunc = 12.0;
    /// Largest sites * n for which dense matrices are formed.
    std::size_t dense_cap = 6000;
};

/// tr over [0, L]^d of sum_M (-1)^{|M|} g(1_{H_M} K 1_{H_M}), H_M = {y_j >= 0 for j not in M},
/// with matrix entries K(x - y) h^d. Dense matrix powers when the box fits
/// the dense cap, otherwise streamed: exact per-pair sums for degree two and
/// row-blocked products tr(V^* A V) for degree three.
TraceValue vertex_trace_bruteforce(const Polynomial& g, const KernelField& field, double L,
                                   const BruteForceGrid& grid, unsigned threads = 1);

struct CubeTraceOptions {
    double h = 0.25;
    std::size_t dense_cap = 6000;
    /// Forces the eigendecomposition path.
    bool dense = false;
};

/// tr g(1_C K 1_C) on the cube C = [0, 2L]^d sampled at the cell centres.
/// Degree <= 2 uses the pair identity sum_delta ||K(delta)||^2 h^{2d} prod (N - |delta_j|);
/// anything else the dense eigendecomposition (ResourceCap beyond the cap).
double cube_trace(const Polynomial& g, const KernelField& field, double L, const CubeTraceOptions& opts = {});

/// Schatten-1 norm of the rows [0, L]^d of the vertex operator for g on the
/// cell-centred lattice of the truncation box. Degree at most two.
double trace_norm_vertex(const Polynomial& g, const KernelField& field, double L, const BruteForceGrid& grid);

} // namespace szego
