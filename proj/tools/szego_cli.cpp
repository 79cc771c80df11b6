#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "szego/kernel_io.hpp"
#include "szego/pipeline.hpp"
#include "szego/report_io.hpp"

using namespace szego;
using nlohmann::json;

namespace {

enum Exit { pass = 0, verdict_fail = 1, config_error = 2, non_convergence = 3 };

struct Global {
    std::string config_path;
    std::string out_dir;
    unsigned threads = 0;
    bool deterministic = false;
    std::string method = "fast";
};

RunConfig resolve_config(const Global& gl)
{
    RunConfig cfg = gl.config_path.empty() ? RunConfig{} : load_config(gl.config_path);
    if (!gl.out_dir.empty()) cfg.out_dir = gl.out_dir;
    if (gl.threads > 0) cfg.threads = gl.threads;
    if (gl.deterministic) cfg.threads = 1;
    cfg.validate();
    return cfg;
}

RunManifest start_manifest(const RunConfig& cfg, const Global& gl)
{
    RunManifest m;
    m.config_hash = config_hash(cfg);
    m.started = utc_timestamp();
    m.deterministic = gl.deterministic;
    m.threads = cfg.threads;
    return m;
}

void finish_manifest(RunManifest& m, const std::string& dir)
{
    m.finished = utc_timestamp();
    std::filesystem::create_directories(dir);
    write_text_file((std::filesystem::path(dir) / "manifest.json").string(), manifest_to_json(m).dump(2) + "\n");
}

std::vector<int> parse_d_list(const std::string& text)
{
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto dash = item.find('-', 1);
        try {
            if (dash == std::string::npos) {
                out.push_back(std::stoi(item));
            } else {
                const int lo = std::stoi(item.substr(0, dash)), hi = std::stoi(item.substr(dash + 1));
                for (int d = lo; d <= hi; ++d) out.push_back(d);
            }
        } catch (const std::logic_error&) {
            throw ConfigError("bad --d-list entry '" + item + "'");
        }
    }
    if (out.empty()) throw ConfigError("--d-list is empty");
    return out;
}

int verify_algebra(const Global& gl, const std::string& d_list, bool corrupt)
{
    const std::string dir = gl.out_dir.empty() ? "out" : gl.out_dir;
    json results = json::array();
    bool ok = true;
    for (int d : parse_d_list(d_list)) {
        CliffordBasis basis = build_clifford_basis(d);
        if (corrupt) basis.alphas.back()(0, basis.n - 1) += Complex(1e-3, 0.0);
        const CliffordReport r = check_clifford(basis);
        ok = ok && r.passed();
        results.push_back({{"d", d},
                           {"n", r.n},
                           {"hermiticity", r.hermiticity},
                           {"anticommutation", r.anticommutation},
                           {"tracelessness", r.tracelessness},
                           {"gram", r.gram},
                           {"worst_pair", {r.worst_pair.first, r.worst_pair.second}},
                           {"passed", r.passed()}});
        std::printf("d=%d n=%d %s", d, r.n, r.passed() ? "pass" : "FAIL");
        if (!r.passed())
            std::printf(" (anticommutation %.3g at alpha_%d, alpha_%d; hermiticity %.3g)", r.anticommutation,
                        r.worst_pair.first, r.worst_pair.second, r.hermiticity);
        std::printf("\n");
    }
    std::filesystem::create_directories(dir);
    write_text_file((std::filesystem::path(dir) / "algebra.json").string(),
                    json{{"results", results}, {"passed", ok}}.dump(2) + "\n");
    return ok ? pass : verdict_fail;
}

int tabulate(const Global& gl, bool refine)
{
    const RunConfig cfg = resolve_config(gl);
    RunManifest manifest = start_manifest(cfg, gl);
    std::filesystem::create_directories(cfg.out_dir);
    json refinement = json::array();
    bool ok = true;
    for (double b : cfg.b_list) {
        const auto t0 = std::chrono::steady_clock::now();
        const KernelTable table = tabulate_for(cfg, b, cfg.threads);
        const std::string name = "kernel_b" + format_double(b) + ".csv";
        save_kernel_table(table, (std::filesystem::path(cfg.out_dir) / name).string(), manifest.config_hash);
        manifest.stages.push_back(
            {"tabulate b=" + format_double(b),
             std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()});
        std::printf("b=%s: %zu sites, aliasing period %.6g -> %s\n", format_double(b).c_str(), table.sites(),
                    table.aliasing_period(), name.c_str());
        if (refine) {
            const RefinementStudy st =
                refinement_study(table.basis(), b, cfg.grid_for(b), cfg.h, cfg.R0, cfg.threads);
            const bool converging = st.worst_ratio > 1.0;
            ok = ok && converging;
            refinement.push_back({{"b", b},
                                  {"points", st.points},
                                  {"deviations", st.deviations},
                                  {"worst_ratio", st.worst_ratio},
                                  {"converging", converging}});
            std::printf("  refinement deviations %.3g %.3g ratio %.3g\n", st.deviations[0], st.deviations[1],
                        st.worst_ratio);
        }
    }
    if (refine)
        write_text_file((std::filesystem::path(cfg.out_dir) / "refinement.json").string(),
                        json{{"studies", refinement}, {"config_hash", manifest.config_hash}}.dump(2) + "\n");
    finish_manifest(manifest, cfg.out_dir);
    return ok ? pass : verdict_fail;
}

int trace_scan(const Global& gl)
{
    const RunConfig cfg = resolve_config(gl);
    RunManifest manifest = start_manifest(cfg, gl);
    std::vector<TraceMethod> methods;
    if (gl.method == "fast" || gl.method == "both") methods.push_back(TraceMethod::reduced);
    if (gl.method == "bruteforce" || gl.method == "both") methods.push_back(TraceMethod::bruteforce);

    std::vector<VertexTraceCurve> all;
    for (TraceMethod m : methods) {
        const auto t0 = std::chrono::steady_clock::now();
        auto curves = scan_curves(cfg, m, cfg.threads);
        manifest.stages.push_back(
            {"scan " + to_string(m), std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()});
        all.insert(all.end(), curves.begin(), curves.end());
    }
    std::ostringstream csv;
    write_curve_csv(csv, all, manifest.config_hash);
    write_outputs(cfg.out_dir, {{"traces.csv", csv.str()}});

    int status = pass;
    if (methods.size() == 2) {
        // Cross-check: reduced path against every brute-force point.
        for (double b : cfg.b_list) {
            const KernelTable table = tabulate_for(cfg, b, cfg.threads);
            const KernelField field(table);
            for (const auto& bf : all) {
                if (bf.method != TraceMethod::bruteforce || bf.b != b) continue;
                for (const auto& p : bf.points) {
                    const double fast = vertex_trace(bf.g, field, p.L, cfg.trace).value;
                    const double scale = std::max(std::abs(fast), 1e-12);
                    const double dev = std::abs(fast - p.value) / scale;
                    const bool ok = bf.g.degree() == 1 ? std::abs(p.value) < 1e-12 : dev < 0.01;
                    std::printf("cross-check %s b=%s L=%s: reduced %.10g bruteforce %.10g %s\n",
                                bf.g.to_string().c_str(), format_double(bf.b).c_str(), format_double(p.L).c_str(),
                                fast, p.value, ok ? "pass" : "FAIL");
                    if (!ok) status = verdict_fail;
                }
            }
        }
    }
    finish_manifest(manifest, cfg.out_dir);
    std::printf("wrote %zu curves to %s\n", all.size(), (std::filesystem::path(cfg.out_dir) / "traces.csv").c_str());
    return status;
}

int fit_compare(const Global& gl)
{
    const RunConfig cfg = resolve_config(gl);
    RunManifest manifest = start_manifest(cfg, gl);
    FitAndCompareResult res = fit_and_compare(cfg, cfg.threads);
    manifest.stages = res.stages;
    write_outputs(cfg.out_dir, res.files);
    finish_manifest(manifest, cfg.out_dir);
    const OracleReport& r = res.report;
    std::printf("w_fit %.8g +- %.2g, W_oracle/2^d %.8g, rel_dev %.4g, ratio g3/g2 %.4g\n", r.w_fit, r.w_fit_err,
                std::ldexp(r.W_oracle, -r.d), r.rel_dev, r.ratio_g3_g2);
    for (const auto& [name, ok] : r.verdicts) std::printf("  %-22s %s\n", name.c_str(), ok ? "pass" : "FAIL");
    return r.all_pass() ? pass : verdict_fail;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Szego-type trace asymptotics for the regularised massless Dirac Fermi projection"};
    app.require_subcommand(1);
    Global gl;
    app.add_option("--config", gl.config_path, "JSON run configuration")->check(CLI::ExistingFile);
    app.add_option("--out-dir", gl.out_dir, "Output directory (overrides the config)");
    app.add_option("--threads", gl.threads, "Worker threads (overrides the config)")->check(CLI::PositiveNumber);
    app.add_flag("--deterministic", gl.deterministic, "Single-threaded run with fixed reduction order");
    app.add_option("--method", gl.method, "Trace method")->check(CLI::IsMember({"fast", "bruteforce", "both"}));

    auto* alg = app.add_subcommand("verify-algebra", "Check the Clifford relations of the alpha matrices");
    std::string d_list = "2-6";
    bool corrupt = false;
    alg->add_option("--d-list", d_list, "Dimensions, e.g. 2,3 or 2-6");
    alg->add_flag("--corrupt", corrupt, "Perturb one matrix entry (test mode)");
    auto* tab = app.add_subcommand("tabulate", "Tabulate the kernel on the spatial lattice");
    bool refine = false;
    tab->add_flag("--refine", refine, "Run the M, 2M, 4M self-convergence study");
    auto* scan = app.add_subcommand("trace-scan", "Vertex trace curves over L");
    auto* fit = app.add_subcommand("fit-and-compare", "Fit the log coefficient and compare with the oracles");
    for (auto* sub : {alg, tab, scan, fit}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? pass : config_error;
    }

    try {
        if (alg->parsed()) return verify_algebra(gl, d_list, corrupt);
        if (tab->parsed()) return tabulate(gl, refine);
        if (scan->parsed()) return trace_scan(gl);
        if (fit->parsed()) return fit_compare(gl);
    } catch (const NonConvergence& e) {
        std::fprintf(stderr, "non-convergence: %s (best %.6g, error %.3g)\n", e.what(), e.best_value(),
                     e.achieved_error());
        return non_convergence;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return config_error;
    } catch (const ResourceCap& e) {
        std::fprintf(stderr, "resource cap: %s\n", e.what());
        return config_error;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return config_error;
    }
    return config_error;
}
