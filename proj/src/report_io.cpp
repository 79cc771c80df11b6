#include "szego/report_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace szego {

using nlohmann::json;

std::string format_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_curve_csv(std::ostream& out, const std::vector<VertexTraceCurve>& curves, const std::string& manifest)
{
    int P = 1;
    for (const auto& c : curves) P = std::max(P, c.g.degree());
    out << "L,value,quad_err,method";
    for (int p = 1; p <= P; ++p) out << ",omega_" << p;
    out << ",b,d,manifest\n";
    for (const auto& c : curves) {
        for (const auto& pt : c.points) {
            out << format_double(pt.L) << ',' << format_double(pt.value) << ',' << format_double(pt.quad_err) << ','
                << to_string(c.method);
            for (int p = 1; p <= P; ++p) out << ',' << format_double(c.g.omega(p));
            out << ',' << format_double(c.b) << ',' << c.d << ',' << manifest << '\n';
        }
    }
}

void write_fit_plot_csv(std::ostream& out, const VertexTraceCurve& curve, const LogFit& fit)
{
    out << "L,trace,model\n";
    for (const auto& pt : curve.points) {
        double model = fit.w * std::log(pt.L) + fit.c;
        if (fit.has_correction) model += fit.a_corr / pt.L;
        out << format_double(pt.L) << ',' << format_double(pt.value) << ',' << format_double(model) << '\n';
    }
}

json report_to_json(const OracleReport& rep, const json& manifest)
{
    json verdicts = json::object();
    for (const auto& [name, ok] : rep.verdicts) verdicts[name] = ok ? "pass" : "fail";
    json sweep = json::array();
    for (const auto& [b, w] : rep.b_sweep) sweep.push_back({{"b", b}, {"w_fit", w}});
    json j;
    j["schema_version"] = 1;
    j["d"] = rep.d;
    j["b_list"] = rep.b_list;
    j["g"] = rep.g;
    j["w_fit"] = rep.w_fit;
    j["w_fit_err"] = rep.w_fit_err;
    j["W_oracle"] = rep.W_oracle;
    j["rel_dev"] = rep.rel_dev;
    j["ratio_g3_g2"] = rep.ratio_g3_g2;
    j["b_sweep"] = sweep;
    j["constants"] = rep.constants;
    j["a0_fit"] = rep.a0_fit;
    j["a0_oracle"] = rep.a0_oracle;
    j["a1_fit"] = rep.a1_fit;
    j["a1_oracle"] = rep.a1_oracle;
    j["verdicts"] = verdicts;
    j["manifest"] = manifest;
    return j;
}

void write_text_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
    if (!out) throw std::runtime_error("failed writing " + path);
}

} // namespace szego
