#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "nht/io.hpp"

namespace nht {

// Command-line overrides applied on top of a scenario config.
struct RunOptions {
    std::filesystem::path out_dir{"."};
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    std::optional<double> dt;
    std::optional<double> tmax;
    std::optional<std::size_t> size;
};

struct RunResult {
    std::vector<std::string> files;  // relative to out_dir
    io::json manifest;
    bool ok{true};
};

RunResult cmd_band(const io::json& config, const RunOptions& opts);
RunResult cmd_spread(const io::json& config, const RunOptions& opts);
RunResult cmd_ensemble(const io::json& config, const RunOptions& opts);
RunResult cmd_wavepacket(const io::json& config, const RunOptions& opts);
RunResult cmd_asymptotics(const io::json& config, const RunOptions& opts);
RunResult cmd_check(const io::json& config, const RunOptions& opts);

const std::vector<std::string>& command_names();

// Dispatch by subcommand name.
RunResult run_command(const std::string& name, const io::json& config, const RunOptions& opts);

}  // namespace nht
