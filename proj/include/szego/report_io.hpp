#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "szego/asymptotics.hpp"

namespace szego {

/// Columns L, value, quad_err, method, omega_1..omega_P, b, d, manifest with
/// P the largest degree among the curves. Rows in curve order, then by L.
void write_curve_csv(std::ostream& out, const std::vector<VertexTraceCurve>& curves, const std::string& manifest);

/// Columns L, trace, model for the fitted w log L + c (+ a/L).
void write_fit_plot_csv(std::ostream& out, const VertexTraceCurve& curve, const LogFit& fit);

/// Fixed-schema report: d, b_list, g, w_fit, w_fit_err, W_oracle, rel_dev,
/// ratio_g3_g2, a0_fit, a0_oracle, a1_fit, a1_oracle, verdicts, manifest.
nlohmann::json report_to_json(const OracleReport& rep, const nlohmann::json& manifest);

/// %.17g
std::string format_double(double v);

void write_text_file(const std::string& path, const std::string& text);

} // namespace szego
