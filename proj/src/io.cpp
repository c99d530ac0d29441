#include "lagflow/io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#if __has_include(<nlohmann/json.hpp>)
#include <nlohmann/json.hpp>
#else
#include "json.hpp"
#endif

namespace lagflow {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream iss(line);
    std::string tok;
    while (iss >> tok) out.push_back(tok);
    return out;
}

std::string chomp(std::string line) {
    while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.pop_back();
    return line;
}

// "key=value" fragment of a header line; usage_error when the key is absent.
std::string header_value(const std::vector<std::string>& toks, const std::string& key,
                         const std::string& file) {
    for (const std::string& t : toks)
        if (t.size() > key.size() + 1 && t.compare(0, key.size(), key) == 0 && t[key.size()] == '=')
            return t.substr(key.size() + 1);
    throw usage_error(file + ": header is missing '" + key + "='");
}

long parse_long(const std::string& tok, const std::string& what) {
    errno = 0;
    char* end = nullptr;
    long v = std::strtol(tok.c_str(), &end, 10);
    if (errno != 0 || end == tok.c_str() || *end != '\0')
        throw usage_error(what + ": expected an integer, got '" + tok + "'");
    return v;
}

} // namespace

std::string format_sig17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

double parse_double(const std::string& token) {
    errno = 0;
    const char* s = token.c_str();
    char* end = nullptr;
    double v = std::strtod(s, &end);
    if (end == s || *end != '\0' || errno == ERANGE)
        throw usage_error("expected a number, got '" + token + "'");
    return v;
}

void write_field(const ScalarField& u, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw usage_error("write_field: cannot open '" + path + "' for writing");
    out << "lagflow-field v1\n";
    out << "dim=" << u.grid.dim << " m=" << u.grid.m << " R=" << format_sig17(u.grid.radius) << "\n";
    for (double v : u.v) out << format_sig17(v) << "\n";
    if (!out) throw usage_error("write_field: write to '" + path + "' failed");
}

ScalarField read_field(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw usage_error("read_field: cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || chomp(line) != "lagflow-field v1")
        throw usage_error(path + ": not a lagflow-field v1 file");
    if (!std::getline(in, line)) throw usage_error(path + ": truncated header");
    const std::vector<std::string> toks = split_ws(chomp(line));
    const int dim = static_cast<int>(parse_long(header_value(toks, "dim", path), path));
    const int m = static_cast<int>(parse_long(header_value(toks, "m", path), path));
    const double R = parse_double(header_value(toks, "R", path));
    Grid g(dim, R, m); // validates ranges

    ScalarField u(g);
    std::size_t have = 0;
    while (std::getline(in, line)) {
        line = chomp(line);
        if (line.empty()) continue;
        if (have >= u.size()) throw usage_error(path + ": more values than the header promises");
        u.v[have++] = parse_double(line);
    }
    if (have != u.size())
        throw usage_error(path + ": expected " + std::to_string(u.size()) + " values, found " +
                          std::to_string(have));
    return u;
}

void write_cone(const ConeSpec& spec, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw usage_error("write_cone: cannot open '" + path + "' for writing");
    out << "lagflow-cone v1\n";
    for (const ConeSector& s : spec.sectors) {
        for (int d = 0; d < spec.dim; ++d) {
            int sg = s.sign[static_cast<std::size_t>(d)];
            out << (d ? " " : "") << (sg > 0 ? "+1" : sg < 0 ? "-1" : "0");
        }
        for (double a : s.A.a) out << " " << format_sig17(a);
        out << "\n";
    }
    if (!out) throw usage_error("write_cone: write to '" + path + "' failed");
}

ConeSpec read_cone(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw usage_error("read_cone: cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || chomp(line) != "lagflow-cone v1")
        throw usage_error(path + ": not a lagflow-cone v1 file");

    ConeSpec spec;
    while (std::getline(in, line)) {
        line = chomp(line);
        if (line.empty() || line[0] == '#') continue; // the format is hand-editable
        const std::vector<std::string> toks = split_ws(line);
        // n sign tokens followed by n(n+1)/2 matrix entries.
        int dim = 0;
        for (int n = 1; n <= kMaxDim; ++n)
            if (toks.size() == static_cast<std::size_t>(n + n * (n + 1) / 2)) dim = n;
        if (dim == 0) throw usage_error(path + ": sector line has an impossible token count");
        if (spec.dim == 0) spec.dim = dim;
        if (dim != spec.dim) throw usage_error(path + ": sectors disagree on dimension");

        ConeSector sec;
        sec.A = SymMatrix(dim);
        for (int d = 0; d < dim; ++d) {
            const std::string& t = toks[static_cast<std::size_t>(d)];
            if (t == "+1" || t == "1")
                sec.sign[static_cast<std::size_t>(d)] = 1;
            else if (t == "-1")
                sec.sign[static_cast<std::size_t>(d)] = -1;
            else if (t == "0")
                sec.sign[static_cast<std::size_t>(d)] = 0;
            else
                throw usage_error(path + ": bad sign token '" + t + "' (want +1, -1 or 0)");
        }
        for (std::size_t k = 0; k < sec.A.a.size(); ++k)
            sec.A.a[k] = parse_double(toks[static_cast<std::size_t>(dim) + k]);
        sec.angle_value = lagrangian_angle(sec.A);
        spec.sectors.push_back(std::move(sec));
    }
    if (spec.sectors.empty()) throw usage_error(path + ": cone file has no sectors");
    return spec;
}

std::string report_csv(const FlowReport& report) {
    std::ostringstream out;
    out << "step,time,residual_sup,hess_min,hess_max,d3_sup,d3_sqrt_t,defect,change_rate\n";
    for (const ReportRow& r : report.rows) {
        out << r.step << "," << format_sig17(r.time) << "," << format_sig17(r.residual_sup) << ","
            << format_sig17(r.hess_min) << "," << format_sig17(r.hess_max) << ","
            << format_sig17(r.d3_sup) << "," << format_sig17(r.d3_sqrt_t) << ","
            << format_sig17(r.defect) << "," << format_sig17(r.change_rate) << "\n";
    }
    return out.str();
}

void write_report_csv(const FlowReport& report, const std::string& path) {
    write_text_file(path, report_csv(report));
}

std::string certificate_json(const SolitonCertificate& cert, const std::string& residual_file) {
    nlohmann::ordered_json j;
    j["kind"] = cert.kind;
    j["residual_sup_interior"] = format_sig17(cert.residual_sup_interior);
    j["condition_a_margin"] = format_sig17(cert.condition_a_margin);
    j["d3_sup"] = format_sig17(cert.d3_sup);
    j["residual_file"] = residual_file;
    nlohmann::ordered_json prov;
    for (const auto& [k, v] : cert.provenance) prov[k] = v;
    j["provenance"] = std::move(prov);
    return j.dump(2) + "\n";
}

void write_certificate(const SolitonCertificate& cert, const std::string& json_path,
                       const std::string& residual_path) {
    write_field(cert.residual_field, residual_path);
    const std::string name = std::filesystem::path(residual_path).filename().string();
    write_text_file(json_path, certificate_json(cert, name));
}

void write_manifest(const std::map<std::string, std::string>& entries, const std::string& path) {
    std::ostringstream out;
    for (const auto& [k, v] : entries) out << k << " = " << v << "\n";
    write_text_file(path, out.str());
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw usage_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw usage_error("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw usage_error("write to '" + path + "' failed");
}

} // namespace lagflow
