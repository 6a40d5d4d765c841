#pragma once

// Result tables (CSV or JSON) and the run manifest.  Numbers are always
// rendered with the same snprintf format so identical runs produce identical
// bytes.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace rdlab {

inline std::string format_number(double x) {
    char buf[40];
    snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> row) {
        if (row.size() != header.size()) throw std::invalid_argument("table: row width mismatch");
        rows.push_back(std::move(row));
    }

    std::string to_csv() const {
        std::string out;
        for (std::size_t i = 0; i < header.size(); ++i) {
            out += header[i];
            out += (i + 1 < header.size()) ? ',' : '\n';
        }
        for (const auto& row : rows)
            for (std::size_t i = 0; i < row.size(); ++i) {
                out += row[i];
                out += (i + 1 < row.size()) ? ',' : '\n';
            }
        return out;
    }

    std::string to_json() const {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& row : rows) {
            nlohmann::ordered_json obj;
            for (std::size_t i = 0; i < header.size(); ++i) obj[header[i]] = row[i];
            arr.push_back(obj);
        }
        return arr.dump(2) + "\n";
    }
};

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << content;
}

struct Manifest {
    std::string tool = "rdlab";
    std::string version = "0.1.0";
    std::string subcommand;
    std::uint64_t config_hash = 0;
    std::uint64_t seed = 0;
    double wall_seconds = 0;

    std::string to_json() const {
        nlohmann::ordered_json j;
        j["tool"] = tool;
        j["version"] = version;
        j["subcommand"] = subcommand;
        char buf[32];
        snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(config_hash));
        j["config_hash"] = buf;
        j["seed"] = seed;
        j["wall_seconds"] = format_number(wall_seconds);
        return j.dump(2) + "\n";
    }
};

class WallTimer {
public:
    WallTimer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

} // namespace rdlab
