#include "szego/config.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>

namespace szego {

using nlohmann::json;

namespace {

template <class T>
void read(const json& j, const char* key, T& out)
{
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config field '") + key + "': " + e.what());
    }
}

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where)
{
    if (!j.is_object()) throw ConfigError(where + " must be an object");
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* k : allowed) known = known || item.key() == k;
        if (!known) throw ConfigError("unknown config field '" + where + "." + item.key() + "'");
    }
}

bool on_lattice(double L, double h)
{
    const double q = L / h;
    return std::abs(q - std::round(q)) < 1e-9;
}

void check_increasing(const std::vector<double>& v, const char* name)
{
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!(v[i] > 0.0)) throw ConfigError(std::string(name) + " entries must be positive");
        if (i > 0 && !(v[i] > v[i - 1])) throw ConfigError(std::string(name) + " must be increasing");
    }
}

} // namespace

MomentumGrid RunConfig::grid_for(double b) const
{
    MomentumGrid g = grid;
    const double need = b + 1.0;
    if (g.xi_max < need) {
        const double dxi = grid.spacing();
        int half = static_cast<int>(std::ceil(need / dxi - 1e-9));
        g.points = 2 * half;
        g.xi_max = half * dxi;
    }
    return g;
}

void RunConfig::validate() const
{
    if (d < 2 || d > 3) throw ConfigError("d must be 2 or 3");
    if (b_list.empty()) throw ConfigError("b_list is empty");
    for (double b : b_list)
        if (!(b > 0.0)) throw ConfigError("b must be positive");
    const Polynomial p = polynomial();
    if (p.degree() > 3) throw ConfigError("g has degree above three");
    if (!(h > 0.0)) throw ConfigError("kernel spacing h must be positive");
    if (!(R0 > 0.0) || !on_lattice(R0, h)) throw ConfigError("R0 must be a positive multiple of h");
    for (double b : b_list) grid_for(b).validate(b);
    for (double b : b_list)
        if (!(R0 < 0.5 * grid_for(b).aliasing_period()))
            throw ConfigError("R0 violates the aliasing guard pi M / (2 Xi)");
    quad.validate();
    check_increasing(L_list, "L_list");
    check_increasing(g3_L_list, "g3_L_list");
    check_increasing(bruteforce_L, "bruteforce_L");
    check_increasing(volume_L, "volume_L");
    for (double L : L_list)
        if (!on_lattice(L, h)) throw ConfigError("L_list entries must be multiples of h");
    for (double L : g3_L_list)
        if (!on_lattice(L, trace.cubic_spacing)) throw ConfigError("g3_L_list entries must be multiples of the cubic spacing");
    if (!g3_L_list.empty() && d != 2) throw ConfigError("g3 curves are available for d = 2 only");
    if (!on_lattice(trace.cubic_spacing, h)) throw ConfigError("cubic spacing must be a multiple of h");
    {
        const double reach = trace.cubic_local_radius + trace.cubic_near_radius;
        if (!g3_L_list.empty() && reach > R0) throw ConfigError("cubic local + near radius exceeds R0");
    }
    if (!(fit.window_min < fit.window_max)) throw ConfigError("fit window is empty");
    if (!(fit.weight_range >= 1.0)) throw ConfigError("fit weight_range must be at least 1");
    if (!(fit.drift_sigmas > 0.0)) throw ConfigError("fit drift_sigmas must be positive");
    std::size_t in_window = 0;
    for (double L : L_list) in_window += L >= fit.window_min && L <= fit.window_max;
    if (!L_list.empty() && in_window < 4) throw ConfigError("fewer than four L values inside the fit window");
    if (!(bruteforce.h > 0.0) || !on_lattice(bruteforce.h, h)) throw ConfigError("brute-force h must be a multiple of h");
    if (!(bruteforce.R_trunc > 0.0)) throw ConfigError("brute-force R_trunc must be positive");
    if (volume && volume_L.size() < static_cast<std::size_t>(d + 3))
        throw ConfigError("volume fit needs at least d + 3 values of L");
    if (threads < 1) throw ConfigError("threads must be at least 1");
    if (out_dir.empty()) throw ConfigError("out_dir is empty");
}

RunConfig config_from_json(const json& j)
{
    check_keys(j, {"d", "b", "b_list", "g", "L_list", "g3_L_list", "grid", "kernel", "quad", "trace", "fit",
                   "bruteforce", "volume", "threads", "out_dir"},
               "config");
    RunConfig c;
    read(j, "d", c.d);
    if (j.contains("b") && j.contains("b_list")) throw ConfigError("give either b or b_list");
    if (j.contains("b")) {
        double b = 0.0;
        read(j, "b", b);
        c.b_list = {b};
    }
    read(j, "b_list", c.b_list);
    read(j, "g", c.g);
    read(j, "L_list", c.L_list);
    read(j, "g3_L_list", c.g3_L_list);
    if (j.contains("grid")) {
        const auto& g = j["grid"];
        check_keys(g, {"xi_max", "points"}, "grid");
        read(g, "xi_max", c.grid.xi_max);
        read(g, "points", c.grid.points);
    }
    if (j.contains("kernel")) {
        const auto& k = j["kernel"];
        check_keys(k, {"h", "R0"}, "kernel");
        read(k, "h", c.h);
        read(k, "R0", c.R0);
    }
    if (j.contains("quad")) {
        const auto& q = j["quad"];
        check_keys(q, {"rel_tol", "abs_tol", "max_depth", "max_cells"}, "quad");
        read(q, "rel_tol", c.quad.rel_tol);
        read(q, "abs_tol", c.quad.abs_tol);
        read(q, "max_depth", c.quad.max_depth);
        read(q, "max_cells", c.quad.max_cells);
    }
    c.trace.quad = c.quad;
    if (j.contains("trace")) {
        const auto& t = j["trace"];
        check_keys(t, {"cubic_spacing", "cubic_local_radius", "cubic_near_radius"}, "trace");
        read(t, "cubic_spacing", c.trace.cubic_spacing);
        read(t, "cubic_local_radius", c.trace.cubic_local_radius);
        read(t, "cubic_near_radius", c.trace.cubic_near_radius);
    }
    if (j.contains("fit")) {
        const auto& f = j["fit"];
        check_keys(f, {"window", "correction_term", "weight_range", "drift_sigmas"}, "fit");
        if (f.contains("window")) {
            std::vector<double> w;
            read(f, "window", w);
            if (w.size() != 2) throw ConfigError("fit.window must be [L_min, L_max]");
            c.fit.window_min = w[0];
            c.fit.window_max = w[1];
        }
        read(f, "correction_term", c.fit.correction_term);
        read(f, "weight_range", c.fit.weight_range);
        read(f, "drift_sigmas", c.fit.drift_sigmas);
    }
    if (j.contains("bruteforce")) {
        const auto& b = j["bruteforce"];
        check_keys(b, {"h", "R_trunc", "dense_cap", "L_list"}, "bruteforce");
        read(b, "h", c.bruteforce.h);
        read(b, "R_trunc", c.bruteforce.R_trunc);
        read(b, "dense_cap", c.bruteforce.dense_cap);
        read(b, "L_list", c.bruteforce_L);
    }
    if (j.contains("volume")) {
        const auto& v = j["volume"];
        check_keys(v, {"enabled", "L_list"}, "volume");
        read(v, "enabled", c.volume);
        read(v, "L_list", c.volume_L);
    }
    read(j, "threads", c.threads);
    read(j, "out_dir", c.out_dir);
    c.validate();
    return c;
}

json config_to_json(const RunConfig& c)
{
    json j;
    j["d"] = c.d;
    j["b_list"] = c.b_list;
    j["g"] = c.g;
    j["L_list"] = c.L_list;
    j["g3_L_list"] = c.g3_L_list;
    j["grid"] = {{"xi_max", c.grid.xi_max}, {"points", c.grid.points}};
    j["kernel"] = {{"h", c.h}, {"R0", c.R0}};
    j["quad"] = {{"rel_tol", c.quad.rel_tol},
                 {"abs_tol", c.quad.abs_tol},
                 {"max_depth", c.quad.max_depth},
                 {"max_cells", c.quad.max_cells}};
    j["trace"] = {{"cubic_spacing", c.trace.cubic_spacing},
                  {"cubic_local_radius", c.trace.cubic_local_radius},
                  {"cubic_near_radius", c.trace.cubic_near_radius}};
    j["fit"] = {{"window", {c.fit.window_min, c.fit.window_max}},
                {"correction_term", c.fit.correction_term},
                {"weight_range", c.fit.weight_range},
                {"drift_sigmas", c.fit.drift_sigmas}};
    j["bruteforce"] = {{"h", c.bruteforce.h},
                       {"R_trunc", c.bruteforce.R_trunc},
                       {"dense_cap", c.bruteforce.dense_cap},
                       {"L_list", c.bruteforce_L}};
    j["volume"] = {{"enabled", c.volume}, {"L_list", c.volume_L}};
    j["threads"] = c.threads;
    j["out_dir"] = c.out_dir;
    return j;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError("config " + path + ": " + e.what());
    }
    return config_from_json(j);
}

std::string config_hash(const RunConfig& cfg)
{
    json j = config_to_json(cfg);
    // Thread count and output location do not change results.
    j.erase("threads");
    j.erase("out_dir");
    const std::string text = j.dump();
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

json manifest_to_json(const RunManifest& m)
{
    json stages = json::array();
    for (const auto& s : m.stages) stages.push_back({{"stage", s.stage}, {"seconds", s.seconds}});
    return {{"config_hash", m.config_hash}, {"version", m.version},         {"started", m.started},
            {"finished", m.finished},       {"stages", stages},             {"deterministic", m.deterministic},
            {"threads", m.threads}};
}

std::string utc_timestamp()
{
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace szego
