#include "szego/quadrature.hpp"

#include <numbers>
#include <string>

namespace szego {

double compensated_sum(std::span<const double> values)
{
    CompensatedSum acc;
    for (double v : values) acc += v;
    return acc.value();
}

void QuadratureSpec::validate() const
{
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw ConfigError("quadrature tolerances must be positive");
    if (max_depth < 1 || max_depth > 40) throw ConfigError("quadrature max_depth must lie in [1, 40]");
    if (max_cells < 1) throw ConfigError("quadrature max_cells must be positive");
}

Region Region::quadrant(const Vec& origin)
{
    return {origin, Vec::Constant(origin.size(), std::numeric_limits<double>::infinity())};
}

namespace detail {

namespace {

EmbeddedRule symmetric_rule(const std::vector<double>& xk, const std::vector<double>& wk,
                            const std::vector<double>& wg)
{
    // xk holds the non-negative Kronrod abscissae in decreasing order, ending
    // with 0; Gauss nodes are the odd positions (1, 3, ...).
    EmbeddedRule r;
    const std::size_t h = xk.size();
    for (std::size_t i = 0; i < h; ++i) {
        const bool gauss = (i % 2) == 1;
        const double g = gauss ? wg[i / 2] : 0.0;
        if (xk[i] == 0.0) {
            r.nodes.push_back(0.0);
            r.high.push_back(wk[i]);
            r.low.push_back(g);
        } else {
            r.nodes.push_back(-xk[i]);
            r.high.push_back(wk[i]);
            r.low.push_back(g);
            r.nodes.push_back(xk[i]);
            r.high.push_back(wk[i]);
            r.low.push_back(g);
        }
    }
    return r;
}

} // namespace

const EmbeddedRule& kronrod15()
{
    static const EmbeddedRule rule = symmetric_rule(
        {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
         0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
         0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
         0.207784955007898467600689403773245, 0.0},
        {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
         0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
         0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
         0.204432940075298892414161999234649, 0.209482141084727828012999174891714},
        {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
         0.381830050505118944950369775488975, 0.417959183673469387755102040816327});
    return rule;
}

const EmbeddedRule& kronrod7()
{
    static const EmbeddedRule rule = symmetric_rule(
        {0.960491268708020283423507092629080, 0.774596669241483377035853079956480,
         0.434243749346802558002071502844628, 0.0},
        {0.104656226026467265193823857192073, 0.268488089868333440728569280666710,
         0.401397414775962222905051818618432, 0.450916538658474142345110087045571},
        {0.555555555555555555555555555555556, 0.888888888888888888888888888888889});
    return rule;
}

} // namespace detail

GaussRule gauss_legendre(int points)
{
    if (points < 1) throw ConfigError("Gauss-Legendre rule needs at least one node");
    GaussRule rule;
    rule.nodes.resize(static_cast<std::size_t>(points));
    rule.weights.resize(static_cast<std::size_t>(points));
    const int half = (points + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (points + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= points; ++k) {
                const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            if (points == 1) {
                p1 = x;
                p0 = 1.0;
            }
            dp = points * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // Recompute the derivative at the converged node.
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= points; ++k) {
            const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = pk;
        }
        dp = points == 1 ? 1.0 : points * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[static_cast<std::size_t>(i)] = -x;
        rule.nodes[static_cast<std::size_t>(points - 1 - i)] = x;
        rule.weights[static_cast<std::size_t>(i)] = w;
        rule.weights[static_cast<std::size_t>(points - 1 - i)] = w;
    }
    if (points % 2 == 1) rule.nodes[static_cast<std::size_t>(points / 2)] = 0.0;
    return rule;
}

double positive_sphere_area(int d)
{
    // |S^{d-1}| = 2 pi^{d/2} / Gamma(d/2)
    const double full = 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
    return full / std::ldexp(1.0, d);
}

SphereRulePositive sphere_rule_positive(int d, int resolution)
{
    if (resolution < 1) throw ConfigError("sphere rule resolution must be positive");
    const GaussRule gl = gauss_legendre(resolution);
    const double quarter = 0.25 * std::numbers::pi; // half-length of (0, pi/2)
    SphereRulePositive rule;
    rule.dim = d;
    if (d == 2) {
        for (int i = 0; i < resolution; ++i) {
            const double theta = quarter * (1.0 + gl.nodes[static_cast<std::size_t>(i)]);
            Vec y(2);
            y << std::cos(theta), std::sin(theta);
            rule.nodes.push_back(y);
            rule.weights.push_back(quarter * gl.weights[static_cast<std::size_t>(i)]);
        }
    } else if (d == 3) {
        for (int i = 0; i < resolution; ++i) {
            const double theta = quarter * (1.0 + gl.nodes[static_cast<std::size_t>(i)]);
            for (int j = 0; j < resolution; ++j) {
                const double phi = quarter * (1.0 + gl.nodes[static_cast<std::size_t>(j)]);
                Vec y(3);
                y << std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta);
                rule.nodes.push_back(y);
                rule.weights.push_back(quarter * quarter * gl.weights[static_cast<std::size_t>(i)] *
                                       gl.weights[static_cast<std::size_t>(j)] * std::sin(theta));
            }
        }
    } else {
        throw ConfigError("positive sphere rule supports d in {2, 3}, got d = " + std::to_string(d));
    }
    return rule;
}

} // namespace szego
