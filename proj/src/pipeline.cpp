#include "szego/pipeline.hpp"

#include <chrono>
#include <filesystem>
#include <sstream>

#include "szego/report_io.hpp"

namespace szego {

using nlohmann::json;

namespace {

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

std::vector<Polynomial> reduced_polynomials(const RunConfig& cfg)
{
    std::vector<Polynomial> out{Polynomial::monomial(1), Polynomial::monomial(2)};
    if (cfg.d == 2) out.push_back(Polynomial::monomial(3));
    const Polynomial g = cfg.polynomial();
    if (cfg.d != 2 && g.omega(3) != 0.0) throw ConfigError("cubic terms need d = 2");
    out.push_back(g);
    return out;
}

} // namespace

KernelTable tabulate_for(const RunConfig& cfg, double b, unsigned threads)
{
    return tabulate_kernel(build_clifford_basis(cfg.d), b, cfg.grid_for(b), cfg.h, cfg.R0, threads);
}

std::vector<VertexTraceCurve> scan_curves(const RunConfig& cfg, TraceMethod method, unsigned threads)
{
    std::vector<VertexTraceCurve> curves;
    for (double b : cfg.b_list) {
        const KernelTable table = tabulate_for(cfg, b, threads);
        const KernelField field(table);
        if (method == TraceMethod::reduced) {
            for (const auto& g : reduced_polynomials(cfg)) {
                const auto& Ls = g.degree() == 3 ? cfg.g3_L_list : cfg.L_list;
                if (Ls.empty()) continue;
                VertexTraceCurve c = vertex_trace_curve(g, field, Ls, cfg.trace, threads);
                c.b = b;
                curves.push_back(std::move(c));
            }
        } else {
            for (const auto& g : {Polynomial::monomial(1), cfg.polynomial()}) {
                VertexTraceCurve c;
                c.g = g;
                c.b = b;
                c.d = cfg.d;
                c.method = TraceMethod::bruteforce;
                for (double L : cfg.bruteforce_L) {
                    const TraceValue v = vertex_trace_bruteforce(g, field, L, cfg.bruteforce, threads);
                    c.points.push_back({L, v.value, v.error});
                }
                curves.push_back(std::move(c));
            }
        }
    }
    return curves;
}

json report_manifest(const RunConfig& cfg)
{
    return {{"grid",
             {{"xi_max", cfg.grid.xi_max},
              {"points", cfg.grid.points},
              {"h", cfg.h},
              {"R0", cfg.R0},
              {"bruteforce_h", cfg.bruteforce.h},
              {"bruteforce_R_trunc", cfg.bruteforce.R_trunc}}},
            {"quad", {{"rel_tol", cfg.quad.rel_tol}, {"abs_tol", cfg.quad.abs_tol}, {"max_depth", cfg.quad.max_depth}}},
            {"window",
             {{"L_min", cfg.fit.window_min},
              {"L_max", cfg.fit.window_max},
              {"correction_term", cfg.fit.correction_term},
              {"weight_range", cfg.fit.weight_range},
              {"drift_sigmas", cfg.fit.drift_sigmas}}},
            {"version", tool_version},
            {"config_hash", config_hash(cfg)}};
}

FitAndCompareResult fit_and_compare(const RunConfig& cfg, unsigned threads)
{
    cfg.validate();
    FitAndCompareResult out;
    const Polynomial g = cfg.polynomial();
    if (g.omega(3) != 0.0 && cfg.d != 2) throw ConfigError("cubic terms need d = 2");

    CompareInputs in;
    in.d = cfg.d;
    in.b_list = cfg.b_list;
    in.g = g;
    std::vector<VertexTraceCurve> curves;

    for (std::size_t i = 0; i < cfg.b_list.size(); ++i) {
        const double b = cfg.b_list[i];
        Stopwatch tab_clock;
        const KernelTable table = tabulate_for(cfg, b, threads);
        const KernelField field(table);
        out.stages.push_back({"tabulate b=" + format_double(b), tab_clock.seconds()});

        Stopwatch scan_clock;
        VertexTraceCurve c2 = vertex_trace_curve(Polynomial::monomial(2), field, cfg.L_list, cfg.trace, threads);
        c2.b = b;
        in.g2_fits.push_back(fit_log_constant(c2, cfg.fit));
        if (i == 0) {
            std::ostringstream plot;
            write_fit_plot_csv(plot, c2, in.g2_fits.back());
            out.files["plot.csv"] = plot.str();
        }
        curves.push_back(std::move(c2));
        if (i == 0 && cfg.d == 2 && !cfg.g3_L_list.empty()) {
            VertexTraceCurve c3 = vertex_trace_curve(Polynomial::monomial(3), field, cfg.g3_L_list, cfg.trace, threads);
            c3.b = b;
            in.g3_fit = fit_log_constant(c3, cfg.fit);
            curves.push_back(std::move(c3));
        }
        out.stages.push_back({"scan b=" + format_double(b), scan_clock.seconds()});

        if (i == 0 && cfg.volume) {
            Stopwatch vol_clock;
            std::vector<double> values;
            for (double L : cfg.volume_L) values.push_back(cube_trace(Polynomial::monomial(2), field, L, {cfg.h}));
            const ExpansionFit ef = fit_full_expansion(cfg.volume_L, values, cfg.d);
            in.has_volume = true;
            in.a0_fit = ef.a[0];
            in.a1_fit = ef.a[1];
            in.a0_oracle = oracle_A0(Polynomial::monomial(2), b, cfg.d, cfg.quad);
            in.a1_oracle = oracle_A1_g2(b, cfg.d, cfg.quad);
            out.stages.push_back({"volume", vol_clock.seconds()});
        }
    }

    Stopwatch oracle_clock;
    in.W_oracle = oracle_W(g, cfg.d, cfg.quad);
    out.stages.push_back({"oracle", oracle_clock.seconds()});

    out.report = compare_report(in);
    out.files["report.json"] = report_to_json(out.report, report_manifest(cfg)).dump(2) + "\n";
    std::ostringstream csv;
    write_curve_csv(csv, curves, config_hash(cfg));
    out.files["curves.csv"] = csv.str();
    return out;
}

void write_outputs(const std::string& dir, const OutputFiles& files)
{
    std::filesystem::create_directories(dir);
    for (const auto& [name, text] : files) write_text_file((std::filesystem::path(dir) / name).string(), text);
}

} // namespace szego
