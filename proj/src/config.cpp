#include "lagflow/config.hpp"

#include <cerrno>
#include <cstdlib>

#include "lagflow/io.hpp"

namespace lagflow {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

int parse_int(const std::string& key, const std::string& tok) {
    errno = 0;
    char* end = nullptr;
    long v = std::strtol(tok.c_str(), &end, 10);
    if (errno != 0 || end == tok.c_str() || *end != '\0')
        throw usage_error("config: key '" + key + "' expects an integer, got '" + tok + "'");
    return static_cast<int>(v);
}

double parse_num(const std::string& key, const std::string& tok) {
    try {
        return parse_double(tok);
    } catch (const usage_error&) {
        throw usage_error("config: key '" + key + "' expects a number, got '" + tok + "'");
    }
}

} // namespace

std::map<std::string, std::string> parse_config_text(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::size_t pos = 0;
    int lineno = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string line = text.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
        pos = nl == std::string::npos ? text.size() + 1 : nl + 1;
        ++lineno;

        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;

        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw usage_error("config line " + std::to_string(lineno) + ": expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty())
            throw usage_error("config line " + std::to_string(lineno) + ": expected 'key = value'");
        if (kv.count(key))
            throw usage_error("config line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        kv.emplace(std::move(key), std::move(val));
    }
    return kv;
}

void apply_config(RunConfig& cfg, std::map<std::string, std::string>& kv) {
    auto take = [&](const char* key) -> const std::string* {
        auto it = kv.find(key);
        if (it == kv.end()) return nullptr;
        static thread_local std::string held;
        held = it->second;
        kv.erase(it);
        return &held;
    };

    if (const std::string* v = take("delta")) cfg.delta = parse_num("delta", *v);
    if (const std::string* v = take("dt_safety")) cfg.dt_safety = parse_num("dt_safety", *v);
    // One physical clock, three dialects: t_end for the physical flow, s_end
    // for the rescaled ones, horizon as the neutral name.
    for (const char* key : {"t_end", "s_end", "horizon"})
        if (const std::string* v = take(key)) cfg.horizon = parse_num(key, *v);
    if (const std::string* v = take("snapshot_stride"))
        cfg.snapshot_stride = parse_int("snapshot_stride", *v);
    if (const std::string* v = take("interior_margin_cells"))
        cfg.margin = parse_int("interior_margin_cells", *v);
    if (const std::string* v = take("stationarity_tol"))
        cfg.stationarity_tol = parse_num("stationarity_tol", *v);
    if (const std::string* v = take("residual_tol")) cfg.residual_tol = parse_num("residual_tol", *v);
}

} // namespace lagflow
