#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "nht/error.hpp"

namespace nht::io {

using json = nlohmann::ordered_json;

// Exponent notation with 16 significant digits; NaN written as "nan".
std::string format_number(double v);

// Comma separated, '.' decimal, header row, LF newlines.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

// Plain-text 8-bit grayscale (P2); pixel = round(255 * v / max v). Rows top to bottom.
void write_pgm(const std::filesystem::path& path, const std::vector<std::vector<double>>& image);

void write_json(const std::filesystem::path& path, const json& value);

json read_json_file(const std::filesystem::path& path);

}  // namespace nht::io
