#pragma once

#include <map>
#include <string>
#include <vector>

#include "szego/traces.hpp"

namespace szego {

struct FitOptions {
    /// Adds a/L to the model w log L + c.
    bool correction_term = true;
    /// Points with L outside [window_min, window_max] are ignored.
    double window_min = 0.0;
    double window_max = std::numeric_limits<double>::infinity();
    /// Largest ratio between point weights; quad_err below max/weight_range is floored.
    double weight_range = 100.0;
    /// Drift acceptance: |w_first - w_second| <= drift_sigmas * combined uncertainty.
    double drift_sigmas = 3.0;
};

struct LogFit {
    double w = 0.0;
    double c = 0.0;
    double a_corr = 0.0;
    double w_err = 0.0;
    double c_err = 0.0;
    double residual = 0.0; // max |data - model|
    double cond = 0.0;     // condition number of the column-scaled weighted design
    double chi2_dof = 0.0;
    double L_min = 0.0;
    double L_max = 0.0;
    std::size_t points = 0;
    bool has_correction = false;

    double w_first = 0.0;
    double w_second = 0.0;
    double drift_sigma = 0.0;
    bool drift_ok = false;

    bool accepted() const { return cond < 1e8 && drift_ok; }
};

/// Weighted least squares of w log L + c (+ a/L) with sigma_i = quad_err_i.
/// Uncertainties are inflated by sqrt(chi^2/dof) when that exceeds one; with
/// all errors zero they are scaled by it outright. The drift check refits the
/// first and second halves of the window with the same model.
LogFit fit_log_constant(const std::vector<double>& L, const std::vector<double>& values,
                        const std::vector<double>& errors, const FitOptions& opts = {});
LogFit fit_log_constant(const VertexTraceCurve& curve, const FitOptions& opts = {});

struct ExpansionFit {
    int d = 0;
    std::vector<double> a; // coefficients of (2L)^{d-m}, m = 0..d-1
    double tail = 0.0;     // log L coefficient
    double constant = 0.0;
    double residual = 0.0;
    double cond = 0.0;
};

/// Least squares of sum_{m<d} a_m (2L)^{d-m} + tail log L + constant.
ExpansionFit fit_full_expansion(const std::vector<double>& L, const std::vector<double>& values, int d);

/// 2^d (omega_2 + 3/2 omega_3) int_{S^{d-1}_+} tr K_{g2}(y, y) dy on the
/// positive sphere rule. Throws ConfigError for degree > 3.
double oracle_W(const Polynomial& g, int d, const QuadratureSpec& quad, int resolution = 24);

/// (n/2) (2 pi)^{-d} |S^{d-1}| int_0^{b+1} g(psi_b(r)) r^{d-1} dr.
double oracle_A0(const Polynomial& g, double b, int d, const QuadratureSpec& quad);

/// int (z_1)_+ ||K(z)||^2 dz from the radial Hankel profile plus the far-field
/// tail beyond `radius`. The Hankel integrals use an absolute tolerance of at
/// least 1e-13.
double surface_deficit_g2(double b, int d, const QuadratureSpec& quad, double radius = 96.0);

/// Coefficient of (2L)^{d-1} in tr (1_C K 1_C)^2: -2d times the surface deficit.
double oracle_A1_g2(double b, int d, const QuadratureSpec& quad);

struct Tolerances {
    double w_rel = 0.10;
    double ratio_lo = 1.35;
    double ratio_hi = 1.65;
    double b_rel = 0.10;
    double a0_rel = 0.05;
    double a1_rel = 0.10;
};

struct CompareInputs {
    int d = 2;
    std::vector<double> b_list;
    Polynomial g;
    std::vector<LogFit> g2_fits; // one per b
    LogFit g3_fit;               // first b; points == 0 when absent
    double W_oracle = 0.0;
    bool has_volume = false;
    double a0_fit = 0.0, a0_oracle = 0.0, a1_fit = 0.0, a1_oracle = 0.0;
};

struct OracleReport {
    int d = 0;
    std::vector<double> b_list;
    std::vector<double> g; // omega_1..omega_3
    double w_fit = 0.0;
    double w_fit_err = 0.0;
    double W_oracle = 0.0;
    double rel_dev = 0.0;
    double ratio_g3_g2 = 0.0;
    std::vector<std::pair<double, double>> b_sweep; // (b, w_fit)
    std::vector<double> constants;                  // fitted c per b
    double a0_fit = 0.0, a0_oracle = 0.0, a1_fit = 0.0, a1_oracle = 0.0;
    std::map<std::string, bool> verdicts;

    bool all_pass() const;
};

/// Verdicts: per-vertex log coefficient against W_oracle / 2^d, window drift,
/// the cubic-to-quadratic slope ratio, b-independence and the volume and
/// surface coefficients, each present only when its inputs are.
OracleReport compare_report(const CompareInputs& in, const Tolerances& tol = {});

} // namespace szego
