#include "nht/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace nht::io {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot open '" + path.string() + "' for writing");
    return out;
}

}  // namespace

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15e", v);
    return buf;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream out = open_out(path);
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
        out << '\n';
    }
    if (!out) throw ConfigError("failed writing '" + path.string() + "'");
}

void write_pgm(const std::filesystem::path& path, const std::vector<std::vector<double>>& image) {
    if (image.empty() || image.front().empty()) throw ConfigError("write_pgm: empty image");
    const std::size_t width = image.front().size();
    double top = 0.0;
    for (const auto& row : image) {
        if (row.size() != width) throw ConfigError("write_pgm: ragged image");
        for (double v : row) top = std::max(top, v);
    }
    std::ofstream out = open_out(path);
    out << "P2\n" << width << ' ' << image.size() << "\n255\n";
    for (const auto& row : image) {
        for (std::size_t i = 0; i < width; ++i) {
            const long px = top > 0.0 ? std::lround(255.0 * row[i] / top) : 0;
            out << (i ? " " : "") << px;
        }
        out << '\n';
    }
    if (!out) throw ConfigError("failed writing '" + path.string() + "'");
}

void write_json(const std::filesystem::path& path, const json& value) {
    std::ofstream out = open_out(path);
    out << value.dump(2) << '\n';
    if (!out) throw ConfigError("failed writing '" + path.string() + "'");
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return json::parse(ss.str());
    } catch (const json::exception& e) {
        throw ConfigError("config '" + path.string() + "': " + e.what());
    }
}

}  // namespace nht::io
