#pragma once

#include <algorithm>
#include <type_traits>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <span>
#include <vector>

#include "szego/common.hpp"

namespace szego {

/// Neumaier compensated accumulator.
class CompensatedSum {
public:
    void add(double x)
    {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    CompensatedSum& operator+=(double x)
    {
        add(x);
        return *this;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

double compensated_sum(std::span<const double> values);

struct QuadratureSpec {
    double rel_tol = 1e-8;
    double abs_tol = 1e-14;
    int max_depth = 24;
    std::size_t max_cells = 400000;

    void validate() const;
};

/// Axis-aligned integration region. Infinite bounds are mapped to the unit
/// interval with the rational substitution u = t / (1 - t) per axis.
struct Region {
    Vec lower;
    Vec upper;

    static Region box(const Vec& lower, const Vec& upper) { return {lower, upper}; }
    /// (origin_j, +inf) on every axis.
    static Region quadrant(const Vec& origin);
    int dim() const { return static_cast<int>(lower.size()); }
};

template <typename T>
struct QuadratureResult {
    T value;
    double error = 0.0;
    std::size_t evaluations = 0;
    bool converged = false;
};

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
GaussRule gauss_legendre(int points);

namespace detail {

struct EmbeddedRule {
    std::vector<double> nodes;  // on [-1, 1]
    std::vector<double> high;   // Kronrod weights
    std::vector<double> low;    // Gauss weights, zero on Kronrod-only nodes
};

const EmbeddedRule& kronrod15();
const EmbeddedRule& kronrod7();

inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(const CMat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

template <typename T>
T zero_like(const T& sample)
{
    if constexpr (std::is_arithmetic_v<T>)
        return T(0);
    else
        return T::Zero(sample.rows(), sample.cols());
}

struct AxisMap {
    enum class Kind { finite, upper_infinite, lower_infinite, both_infinite } kind;
    double lo, hi;

    // Maps the cell coordinate t to x and returns the Jacobian dx/dt.
    double apply(double t, double& x) const
    {
        switch (kind) {
        case Kind::finite:
            x = t;
            return 1.0;
        case Kind::upper_infinite: {
            const double r = 1.0 / (1.0 - t);
            x = lo + t * r;
            return r * r;
        }
        case Kind::lower_infinite: {
            const double r = 1.0 / (1.0 - t);
            x = hi - t * r;
            return r * r;
        }
        case Kind::both_infinite: {
            const double r = 1.0 / (1.0 - t * t);
            x = t * r;
            return (1.0 + t * t) * r * r;
        }
        }
        return 0.0;
    }
};

} // namespace detail

/// Global adaptive cubature with a tensor Gauss-Kronrod rule (K15/G7 in up
/// to two dimensions, K7/G3 above) and dyadic subdivision of the worst cell.
/// Deterministic: the cell order and the final compensated reduction depend
/// only on the integrand and the spec.
template <typename T, typename F>
QuadratureResult<T> integrate_adaptive(F&& f, const Region& region, const QuadratureSpec& spec)
{
    spec.validate();
    const int dim = region.dim();
    if (dim < 1 || region.upper.size() != dim) throw ConfigError("integration region is malformed");

    std::vector<detail::AxisMap> maps(static_cast<std::size_t>(dim));
    Vec t_lo(dim), t_hi(dim);
    for (int j = 0; j < dim; ++j) {
        const double lo = region.lower[j], hi = region.upper[j];
        if (!(lo < hi)) throw ConfigError("integration region has an empty axis");
        const bool lo_inf = std::isinf(lo), hi_inf = std::isinf(hi);
        using K = detail::AxisMap::Kind;
        if (!lo_inf && !hi_inf) {
            maps[j] = {K::finite, lo, hi};
            t_lo[j] = lo;
            t_hi[j] = hi;
        } else if (!lo_inf) {
            maps[j] = {K::upper_infinite, lo, hi};
            t_lo[j] = 0.0;
            t_hi[j] = 1.0;
        } else if (!hi_inf) {
            maps[j] = {K::lower_infinite, lo, hi};
            t_lo[j] = 0.0;
            t_hi[j] = 1.0;
        } else {
            maps[j] = {K::both_infinite, lo, hi};
            t_lo[j] = -1.0;
            t_hi[j] = 1.0;
        }
    }

    const detail::EmbeddedRule& rule = dim <= 2 ? detail::kronrod15() : detail::kronrod7();
    const std::size_t m = rule.nodes.size();
    std::size_t points_per_cell = 1;
    for (int j = 0; j < dim; ++j) points_per_cell *= m;

    struct Cell {
        Vec lo, hi;
        T value;
        double error;
        int depth;
        bool leaf;
    };
    std::size_t evaluations = 0;
    Vec x(dim);
    std::vector<std::size_t> idx(static_cast<std::size_t>(dim));

    auto evaluate = [&](Cell& cell) {
        bool have = false;
        T hi_sum{}, lo_sum{};
        for (std::size_t p = 0; p < points_per_cell; ++p) {
            std::size_t rem = p;
            double w_hi = 1.0, w_lo = 1.0, jac = 1.0;
            for (int j = 0; j < dim; ++j) {
                idx[j] = rem % m;
                rem /= m;
                const double half = 0.5 * (cell.hi[j] - cell.lo[j]);
                const double mid = 0.5 * (cell.hi[j] + cell.lo[j]);
                const double t = mid + half * rule.nodes[idx[j]];
                double xj = 0.0;
                jac *= maps[j].apply(t, xj) * half;
                x[j] = xj;
                w_hi *= rule.high[idx[j]];
                w_lo *= rule.low[idx[j]];
            }
            const T fx = f(x);
            ++evaluations;
            if (!have) {
                hi_sum = detail::zero_like(fx);
                lo_sum = detail::zero_like(fx);
                have = true;
            }
            hi_sum += (w_hi * jac) * fx;
            if (w_lo != 0.0) lo_sum += (w_lo * jac) * fx;
        }
        cell.value = hi_sum;
        cell.error = detail::magnitude(T(hi_sum - lo_sum));
    };

    // Cells are never removed, so an index is a stable id and creation order
    // fixes the reduction order.
    std::vector<Cell> cells;
    cells.reserve(1024);
    auto worse = [&cells](std::size_t a, std::size_t b) {
        if (cells[a].error != cells[b].error) return cells[a].error < cells[b].error;
        return a > b;
    };
    std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(worse)> queue(worse);

    cells.push_back(Cell{t_lo, t_hi, T{}, 0.0, 0, true});
    evaluate(cells.back());
    queue.push(0);

    auto reduce = [&](T& value, double& error) {
        CompensatedSum e;
        bool first = true;
        if constexpr (std::is_arithmetic_v<T>) {
            CompensatedSum v;
            for (const Cell& c : cells)
                if (c.leaf) {
                    v += c.value;
                    e += c.error;
                }
            value = v.value();
        } else {
            for (const Cell& c : cells)
                if (c.leaf) {
                    if (first) {
                        value = c.value;
                        first = false;
                    } else {
                        value += c.value;
                    }
                    e += c.error;
                }
        }
        error = e.value();
    };

    T value;
    double error = 0.0;
    reduce(value, error);
    // Running totals between exact reductions.
    T run_value = value;
    double run_error = error;
    std::size_t since_reduce = 0;
    bool converged = false;
    const std::size_t fan = std::size_t(1) << dim;

    for (;;) {
        const double target = std::max(spec.abs_tol, spec.rel_tol * detail::magnitude(run_value));
        if (run_error <= target) {
            reduce(value, error);
            run_value = value;
            run_error = error;
            since_reduce = 0;
            if (error <= std::max(spec.abs_tol, spec.rel_tol * detail::magnitude(value))) {
                converged = true;
                break;
            }
        }
        if (queue.empty() || cells.size() + fan > spec.max_cells) break;
        const std::size_t worst = queue.top();
        queue.pop();
        if (cells[worst].depth >= spec.max_depth) continue; // stays a leaf, no longer refinable

        cells[worst].leaf = false;
        run_value -= cells[worst].value;
        run_error -= cells[worst].error;
        const Vec lo = cells[worst].lo, hi = cells[worst].hi;
        const int depth = cells[worst].depth + 1;
        for (std::size_t child = 0; child < fan; ++child) {
            Vec clo(dim), chi(dim);
            for (int j = 0; j < dim; ++j) {
                const double mid = 0.5 * (lo[j] + hi[j]);
                const bool upper_half = (child >> j) & 1U;
                clo[j] = upper_half ? mid : lo[j];
                chi[j] = upper_half ? hi[j] : mid;
            }
            cells.push_back(Cell{clo, chi, T{}, 0.0, depth, true});
            evaluate(cells.back());
            run_value += cells.back().value;
            run_error += cells.back().error;
            queue.push(cells.size() - 1);
        }
        if (++since_reduce >= 256) {
            reduce(run_value, run_error);
            since_reduce = 0;
        }
    }
    if (!converged) reduce(value, error);
    return {value, error, evaluations, converged};
}

/// As integrate_adaptive but throws NonConvergence when the tolerance is not met.
template <typename F>
QuadratureResult<double> integrate_checked(F&& f, const Region& region, const QuadratureSpec& spec)
{
    auto result = integrate_adaptive<double>(std::forward<F>(f), region, spec);
    if (!result.converged)
        throw NonConvergence("adaptive quadrature did not reach tolerance", result.value, result.error);
    return result;
}

/// One-dimensional convenience wrapper.
template <typename F>
QuadratureResult<double> integrate_1d(F&& f, double a, double b, const QuadratureSpec& spec)
{
    Region r{Vec::Constant(1, a), Vec::Constant(1, b)};
    return integrate_adaptive<double>([&](const Vec& x) { return f(x[0]); }, r, spec);
}

/// Quadrature rule on the part of the unit sphere in the open positive orthant.
struct SphereRulePositive {
    int dim = 0;
    std::vector<Vec> nodes;
    std::vector<double> weights;
};

/// Surface measure of the positive part of S^{d-1}: |S^{d-1}| / 2^d.
double positive_sphere_area(int d);

/// d = 2: Gauss-Legendre in the polar angle on (0, pi/2).
/// d = 3: Gauss-Legendre product rule in (theta, phi) on the positive octant.
/// `resolution` is the number of nodes per angle. Throws ConfigError otherwise.
SphereRulePositive sphere_rule_positive(int d, int resolution);

} // namespace szego
