#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "szego/asymptotics.hpp"

namespace szego {

inline constexpr const char* tool_version = "0.1.0";

struct RunConfig {
    int d = 2;
    std::vector<double> b_list{1.0, 2.0};
    std::vector<double> g{0.0, 1.0, 0.0}; // omega_1, omega_2, ...
    std::vector<double> L_list{8, 12, 16, 24, 32, 48, 64, 96, 128, 192, 256};
    std::vector<double> g3_L_list{8, 12, 16, 24, 32, 48, 64};

    /// Momentum half-width per b is max(xi_max, b + 1) with the spacing held fixed.
    MomentumGrid grid{2.0, 512};
    double h = 0.25;
    double R0 = 64.0;

    QuadratureSpec quad{1e-10, 1e-16, 30, 400000};
    VertexTraceOptions trace;
    FitOptions fit{true, 8.0, 256.0, 100.0, 3.0};

    BruteForceGrid bruteforce{0.25, 64.0, 6000};
    std::vector<double> bruteforce_L{4};

    bool volume = true;
    std::vector<double> volume_L{2, 3, 4, 6, 8, 12, 16};

    unsigned threads = 1;
    std::string out_dir = "out";

    Polynomial polynomial() const { return Polynomial(g); }
    /// Grid used for cutoff b: the configured spacing on [-Xi, Xi], Xi >= b + 1.
    MomentumGrid grid_for(double b) const;

    /// Throws ConfigError naming the first violated precondition.
    void validate() const;
};

RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& cfg);
RunConfig load_config(const std::string& path);

/// FNV-1a 64 of the canonical JSON dump, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

struct StageTiming {
    std::string stage;
    double seconds = 0.0;
};

struct RunManifest {
    std::string config_hash;
    std::string version = tool_version;
    std::string started;
    std::string finished;
    std::vector<StageTiming> stages;
    bool deterministic = false;
    unsigned threads = 1;
};

nlohmann::json manifest_to_json(const RunManifest& m);
std::string utc_timestamp();

} // namespace szego
