#pragma once

// Config parsing (a small TOML subset: [section], key = value, strings,
// numbers, booleans, flat arrays, # comments), semantic hashing, and
// construction of measures and parameter triples from config sections.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "rdlab/measures.hpp"

namespace rdlab {

struct ConfigValue {
    std::variant<double, bool, std::string, std::vector<double>> v;

    double num() const {
        if (auto p = std::get_if<double>(&v)) return *p;
        throw std::invalid_argument("config: expected a number");
    }
    bool boolean() const {
        if (auto p = std::get_if<bool>(&v)) return *p;
        throw std::invalid_argument("config: expected a boolean");
    }
    const std::string& str() const {
        if (auto p = std::get_if<std::string>(&v)) return *p;
        throw std::invalid_argument("config: expected a string");
    }
    const std::vector<double>& array() const {
        if (auto p = std::get_if<std::vector<double>>(&v)) return *p;
        throw std::invalid_argument("config: expected an array");
    }
};

class Config {
public:
    using Section = std::map<std::string, ConfigValue>;

    static Config parse_string(const std::string& text) {
        Config cfg;
        std::istringstream in(text);
        std::string line, section = "";
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const std::string t = strip(line);
            if (t.empty() || t[0] == '#') continue;
            if (t.front() == '[') {
                if (t.back() != ']') fail(lineno, "malformed section header");
                section = strip(t.substr(1, t.size() - 2));
                cfg.sections_[section];
                continue;
            }
            const auto eq = t.find('=');
            if (eq == std::string::npos) fail(lineno, "expected key = value");
            const std::string key = strip(t.substr(0, eq));
            const std::string val = strip(t.substr(eq + 1));
            if (key.empty()) fail(lineno, "empty key");
            cfg.sections_[section][key] = parse_value(val, lineno);
        }
        return cfg;
    }

    static Config parse_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        return parse_string(ss.str());
    }

    bool has(const std::string& section, const std::string& key) const {
        auto s = sections_.find(section);
        return s != sections_.end() && s->second.count(key) > 0;
    }

    const ConfigValue& at(const std::string& section, const std::string& key) const {
        auto s = sections_.find(section);
        if (s == sections_.end())
            throw std::invalid_argument("config: missing section [" + section + "]");
        auto k = s->second.find(key);
        if (k == s->second.end())
            throw std::invalid_argument("config: missing key '" + key + "' in [" + section + "]");
        return k->second;
    }

    double num_or(const std::string& section, const std::string& key, double fallback) const {
        return has(section, key) ? at(section, key).num() : fallback;
    }
    std::string str_or(const std::string& section, const std::string& key,
                       const std::string& fallback) const {
        return has(section, key) ? at(section, key).str() : fallback;
    }

    const std::map<std::string, Section>& sections() const { return sections_; }

    // schema check: every present key must be declared
    void require_known_keys(
        const std::map<std::string, std::vector<std::string>>& schema) const {
        for (const auto& [sec, kv] : sections_) {
            auto it = schema.find(sec);
            if (it == schema.end())
                throw std::invalid_argument("config: unknown section [" + sec + "]");
            for (const auto& [key, val] : kv) {
                (void)val;
                if (std::find(it->second.begin(), it->second.end(), key) == it->second.end())
                    throw std::invalid_argument("config: unknown key '" + key + "' in [" + sec +
                                                "]");
            }
        }
    }

    // canonical dump: sorted sections and keys, one line each
    std::string canonical() const {
        std::ostringstream os;
        for (const auto& [sec, kv] : sections_) {
            for (const auto& [key, val] : kv) {
                os << sec << "." << key << "=";
                if (auto p = std::get_if<double>(&val.v)) {
                    char buf[40];
                    snprintf(buf, sizeof buf, "%.17g", *p);
                    os << buf;
                } else if (auto b = std::get_if<bool>(&val.v)) {
                    os << (*b ? "true" : "false");
                } else if (auto s = std::get_if<std::string>(&val.v)) {
                    os << '"' << *s << '"';
                } else {
                    for (double x : std::get<std::vector<double>>(val.v)) {
                        char buf[40];
                        snprintf(buf, sizeof buf, "%.17g,", x);
                        os << buf;
                    }
                }
                os << "\n";
            }
        }
        return os.str();
    }

    std::uint64_t hash() const { // FNV-1a over the canonical dump
        std::uint64_t h = 1469598103934665603ULL;
        for (unsigned char c : canonical()) {
            h ^= c;
            h *= 1099511628211ULL;
        }
        return h;
    }

private:
    std::map<std::string, Section> sections_;

    static std::string strip(const std::string& s) {
        std::size_t a = s.find_first_not_of(" \t\r");
        if (a == std::string::npos) return "";
        std::size_t b = s.find_last_not_of(" \t\r");
        return s.substr(a, b - a + 1);
    }

    [[noreturn]] static void fail(int lineno, const std::string& what) {
        throw std::invalid_argument("config line " + std::to_string(lineno) + ": " + what);
    }

    static ConfigValue parse_value(const std::string& val, int lineno) {
        ConfigValue out;
        if (val.empty()) fail(lineno, "empty value");
        if (val.front() == '"') {
            if (val.size() < 2 || val.back() != '"') fail(lineno, "unterminated string");
            out.v = val.substr(1, val.size() - 2);
            return out;
        }
        if (val == "true" || val == "false") {
            out.v = (val == "true");
            return out;
        }
        if (val.front() == '[') {
            if (val.back() != ']') fail(lineno, "unterminated array");
            std::vector<double> xs;
            std::stringstream ss(val.substr(1, val.size() - 2));
            std::string tok;
            while (std::getline(ss, tok, ',')) {
                const std::string t = strip(tok);
                if (t.empty()) continue;
                try {
                    std::size_t used = 0;
                    xs.push_back(std::stod(t, &used));
                    if (used != t.size()) fail(lineno, "bad array element '" + t + "'");
                } catch (const std::invalid_argument&) {
                    fail(lineno, "bad array element '" + t + "'");
                }
            }
            out.v = xs;
            return out;
        }
        try {
            std::size_t used = 0;
            const double x = std::stod(val, &used);
            if (used != val.size()) fail(lineno, "bad value '" + val + "'");
            out.v = x;
        } catch (const std::invalid_argument&) {
            fail(lineno, "bad value '" + val + "'");
        }
        return out;
    }
};

// [params] n, d, alpha (alpha = "magic" picks n - d - 2)
inline GeometryParams params_from_config(const Config& cfg) {
    const int n = static_cast<int>(cfg.at("params", "n").num());
    const double d = cfg.at("params", "d").num();
    if (cfg.has("params", "alpha")) {
        const ConfigValue& a = cfg.at("params", "alpha");
        if (std::holds_alternative<std::string>(a.v)) {
            if (a.str() != "magic")
                throw std::invalid_argument("config: alpha must be a number or \"magic\"");
            return GeometryParams::with_magic_alpha(n, d);
        }
        return GeometryParams(n, d, a.num());
    }
    return GeometryParams::with_magic_alpha(n, d);
}

// graph maps by expression: "zero", "sin:eps", "linear:eps"
inline std::function<Vec(const Vec&)> psi_from_expression(const std::string& expr, int codim) {
    const auto colon = expr.find(':');
    const std::string head = expr.substr(0, colon);
    const double arg = (colon == std::string::npos) ? 0.0 : std::stod(expr.substr(colon + 1));
    if (head == "zero")
        return [codim](const Vec&) { return Vec(codim); };
    if (head == "sin")
        return [codim, arg](const Vec& y) {
            Vec v(codim);
            v[0] = arg * std::sin(y[0]);
            return v;
        };
    if (head == "linear")
        return [codim, arg](const Vec& y) {
            Vec v(codim);
            v[0] = arg * y[0];
            return v;
        };
    throw std::invalid_argument("config: unknown graph map '" + expr + "'");
}

// [measure] kind = "flat" | "graph" | "cantor"; see README for fields.
inline DiscreteMeasure measure_from_config(const Config& cfg, const GeometryParams& params) {
    const std::string kind = cfg.at("measure", "kind").str();
    if (kind == "flat") {
        const double T = cfg.num_or("measure", "truncation", 10.0);
        const double cell = cfg.num_or("measure", "cell", 0.0);
        const int di = static_cast<int>(params.d);
        const Density dens =
            density_from_expression(cfg.str_or("measure", "density", "one"), di);
        return flat_measure(params.d, params.n, dens, T, cell);
    }
    if (kind == "graph") {
        const double T = cfg.num_or("measure", "truncation", 8.0);
        const double cell = cfg.num_or("measure", "cell", 0.01);
        const int di = static_cast<int>(params.d);
        const Density phi =
            density_from_expression(cfg.str_or("measure", "density", "const:0"), di);
        const std::string map_expr = cfg.str_or("measure", "map", "zero");
        auto psi = psi_from_expression(map_expr, params.n - di);
        return graph_measure(di, params.n, psi, phi, T, cell, map_expr);
    }
    if (kind == "cantor") {
        const double ratio = cfg.num_or("measure", "ratio", 0.25);
        const int branches = static_cast<int>(cfg.num_or("measure", "branches", 2));
        const int depth = static_cast<int>(cfg.num_or("measure", "depth", 8));
        const int plane = static_cast<int>(cfg.num_or("measure", "plane_dim", 1));
        return cantor_measure(params.n, ratio, branches, depth, plane);
    }
    throw std::invalid_argument("config: unknown measure kind '" + kind + "'");
}

// Inverse of measure_from_config: the [measure] section as TOML text.  Graph
// measures require a construction-time map expression.
inline std::string measure_to_config(const DiscreteMeasure& mu) {
    std::ostringstream os;
    auto num = [](double x) {
        char buf[40];
        snprintf(buf, sizeof buf, "%.17g", x);
        return std::string(buf);
    };
    os << "[measure]\n";
    switch (mu.kind) {
        case SupportKind::FlatPlane:
            os << "kind = \"flat\"\n";
            os << "density = \"" << mu.density.name << "\"\n";
            os << "truncation = " << num(mu.truncation_radius) << "\n";
            os << "cell = " << num(mu.resolution) << "\n";
            break;
        case SupportKind::Graph:
            if (mu.map_expr.empty())
                throw std::invalid_argument("measure_to_config: graph map has no expression");
            os << "kind = \"graph\"\n";
            os << "map = \"" << mu.map_expr << "\"\n";
            os << "density = \"" << mu.density.name << "\"\n";
            os << "truncation = " << num(mu.truncation_radius) << "\n";
            os << "cell = " << num(mu.resolution) << "\n";
            break;
        case SupportKind::Cantor:
            os << "kind = \"cantor\"\n";
            os << "ratio = " << num(mu.cantor_ratio) << "\n";
            os << "branches = " << num(mu.cantor_branches) << "\n";
            os << "depth = " << num(mu.cantor_depth) << "\n";
            os << "plane_dim = " << num(mu.plane_dim) << "\n";
            break;
        default:
            throw std::invalid_argument("measure_to_config: point clouds have no config form");
    }
    return os.str();
}

} // namespace rdlab
