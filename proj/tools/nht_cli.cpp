// nht: scenario runner. One subcommand per experiment; a JSON config and
// optional flag overrides in, CSV / PGM / JSON files and a manifest out.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "nht/error.hpp"
#include "nht/io.hpp"
#include "nht/scenario.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Flags {
    std::string config;
    std::string out{"."};
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    std::optional<double> dt;
    std::optional<double> tmax;
    std::optional<std::size_t> size;
};

void add_flags(CLI::App* sub, Flags& f) {
    sub->add_option("--config", f.config, "JSON scenario config")->check(CLI::ExistingFile);
    sub->add_option("--out", f.out, "output directory (created if missing)");
    sub->add_option("--seed", f.seed, "base seed (u64)");
    sub->add_option("--threads", f.threads, "worker threads for ensembles (0 = all cores)");
    sub->add_option("--dt", f.dt, "integration step")->check(CLI::PositiveNumber);
    sub->add_option("--tmax", f.tmax, "final time")->check(CLI::NonNegativeNumber);
    sub->add_option("--size", f.size, "lattice size (sites)")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"non-Hermitian zigzag lattice transport"};
    app.require_subcommand(1);

    Flags flags;
    for (const std::string& name : nht::command_names()) add_flags(app.add_subcommand(name), flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    const std::string name = app.get_subcommands().front()->get_name();
    try {
        nht::io::json config = nht::io::json::object();
        if (!flags.config.empty()) config = nht::io::read_json_file(flags.config);
        if (!config.is_object()) throw nht::ConfigError("config root must be a JSON object");

        nht::RunOptions opts;
        opts.out_dir = flags.out;
        opts.seed = flags.seed;
        opts.threads = flags.threads;
        opts.dt = flags.dt;
        opts.tmax = flags.tmax;
        opts.size = flags.size;
        std::error_code ec;
        std::filesystem::create_directories(opts.out_dir, ec);
        if (ec) throw nht::ConfigError("cannot create output directory " + flags.out + ": " + ec.message());

        const nht::RunResult res = nht::run_command(name, config, opts);
        for (const std::string& f : res.files) std::cout << (opts.out_dir / f).string() << '\n';
        if (!res.ok) {
            std::cerr << "nht " << name << ": invariant checks failed (see check.json)\n";
            return kExitNumerical;
        }
        return 0;
    } catch (const nht::NumericalError& e) {
        std::cerr << "nht " << name << ": numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const nht::DomainError& e) {
        // e.g. a step outside the integrator's stability region
        std::cerr << "nht " << name << ": numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const nht::Error& e) {
        std::cerr << "nht " << name << ": " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "nht " << name << ": " << e.what() << '\n';
        return kExitConfig;
    }
}
