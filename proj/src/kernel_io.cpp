#include "szego/kernel_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

namespace szego {

namespace {

using nlohmann::json;

json matrix_json(const CMat& m)
{
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
        rows.push_back(row);
    }
    return rows;
}

CMat matrix_from_json(const json& rows, int n)
{
    CMat m(n, n);
    if (!rows.is_array() || static_cast<int>(rows.size()) != n) throw ConfigError("kernel header: malformed basis matrix");
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(rows[i].size()) != n) throw ConfigError("kernel header: malformed basis matrix");
        for (int j = 0; j < n; ++j) m(i, j) = Complex(rows[i][j][0].get<double>(), rows[i][j][1].get<double>());
    }
    return m;
}

void append_number(std::string& line, double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    line += buf;
}

} // namespace

void write_kernel_table(const KernelTable& table, std::ostream& out, const std::string& manifest)
{
    json header;
    header["format"] = "szego-kernel";
    header["version"] = kernel_format_version;
    header["d"] = table.d();
    header["n"] = table.n();
    header["b"] = table.b();
    header["h"] = table.h();
    header["R0"] = table.R0();
    header["radius"] = table.radius();
    header["sites"] = table.sites();
    header["grid"] = {{"xi_max", table.grid().xi_max}, {"points", table.grid().points}};
    header["aliasing_period"] = table.aliasing_period();
    json alphas = json::array();
    for (const auto& a : table.basis().alphas) alphas.push_back(matrix_json(a));
    header["basis"] = alphas;
    header["manifest"] = manifest;
    out << header.dump() << '\n';

    const int d = table.d();
    const std::size_t block = static_cast<std::size_t>(table.n()) * table.n();
    const auto& raw = table.raw();
    std::string line;
    for (std::size_t site = 0; site < table.sites(); ++site) {
        line.clear();
        std::size_t rest = site;
        std::vector<int> m(static_cast<std::size_t>(d));
        for (int k = d - 1; k >= 0; --k) {
            m[k] = static_cast<int>(rest % table.side()) - table.radius();
            rest /= table.side();
        }
        for (int k = 0; k < d; ++k) {
            line += std::to_string(m[k]);
            line += ',';
        }
        for (std::size_t e = 0; e < block; ++e) {
            append_number(line, raw[site * block + e].real());
            line += ',';
            append_number(line, raw[site * block + e].imag());
            if (e + 1 < block) line += ',';
        }
        line += '\n';
        out << line;
    }
    if (!out) throw std::runtime_error("failed to write kernel table");
}

KernelTable read_kernel_table(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("kernel file is empty");
    json header;
    try {
        header = json::parse(line);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("kernel header: ") + e.what());
    }
    if (header.value("format", "") != "szego-kernel") throw ConfigError("not a kernel table file");
    if (header.value("version", 0) != kernel_format_version) throw ConfigError("unsupported kernel format version");

    CliffordBasis basis;
    basis.d = header.at("d").get<int>();
    basis.n = header.at("n").get<int>();
    for (const auto& a : header.at("basis")) basis.alphas.push_back(matrix_from_json(a, basis.n));
    if (static_cast<int>(basis.alphas.size()) != basis.d) throw ConfigError("kernel header: basis size differs from d");
    MomentumGrid grid;
    grid.xi_max = header.at("grid").at("xi_max").get<double>();
    grid.points = header.at("grid").at("points").get<int>();
    const auto sites = header.at("sites").get<std::size_t>();
    const std::size_t block = static_cast<std::size_t>(basis.n) * basis.n;

    std::vector<Complex> matrices;
    matrices.reserve(sites * block);
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const char* p = line.c_str();
        char* end = nullptr;
        for (int k = 0; k < basis.d; ++k) {
            std::strtol(p, &end, 10);
            if (end == p || *end != ',') throw ConfigError("kernel row " + std::to_string(rows) + ": bad coordinates");
            p = end + 1;
        }
        for (std::size_t e = 0; e < block; ++e) {
            double parts[2];
            for (double& v : parts) {
                v = std::strtod(p, &end);
                if (end == p) throw ConfigError("kernel row " + std::to_string(rows) + ": bad entry");
                p = *end == ',' ? end + 1 : end;
            }
            matrices.emplace_back(parts[0], parts[1]);
        }
        ++rows;
    }
    if (rows != sites) throw ConfigError("kernel file holds " + std::to_string(rows) + " rows, header says " +
                                         std::to_string(sites));
    return KernelTable(std::move(basis), header.at("b").get<double>(), header.at("h").get<double>(),
                       header.at("R0").get<double>(), grid, std::move(matrices));
}

void save_kernel_table(const KernelTable& table, const std::string& path, const std::string& manifest)
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    write_kernel_table(table, out, manifest);
}

KernelTable load_kernel_table(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    return read_kernel_table(in);
}

} // namespace szego
