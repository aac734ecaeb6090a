#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "nht/io.hpp"
#include "nht/model.hpp"

namespace nht {

// Read access to one JSON object that remembers which keys were consumed;
// finish() rejects everything else.
class ConfigReader {
public:
    ConfigReader(io::json object, std::string context);

    bool has(const std::string& key) const;

    double number(const std::string& key, double fallback);
    std::optional<double> number(const std::string& key);
    long integer(const std::string& key, long fallback);
    std::uint64_t seed(const std::string& key, std::uint64_t fallback);
    bool boolean(const std::string& key, bool fallback);
    std::string string(const std::string& key, const std::string& fallback);
    std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback);
    cplx complex(const std::string& key, cplx fallback);

    ConfigReader object(const std::string& key);
    std::vector<ConfigReader> objects(const std::string& key);

    // Throws ConfigError naming the first unknown key.
    void finish() const;

    const std::string& context() const noexcept { return context_; }

private:
    const io::json& take(const std::string& key);

    io::json obj_;
    std::string context_;
    std::set<std::string> used_;
};

// kappa (0.3), rho (1), gamma (2 kappa), phi (default_phi), phi_prime (-phi).
LatticeParams read_lattice(ConfigReader& cfg, double default_phi = 0.0);
io::json lattice_json(const LatticeParams& p);

// epsilon (0), sigma (required), u_site ([re, im], default: tuned value).
AuxiliaryParams read_auxiliary(ConfigReader& cfg, double kappa);

struct DisorderConfig {
    std::string kind{"clean"};  // clean | uniform | defect_pair
    double delta{1.0};
    double v0{1.0};
    std::optional<long> n1;     // signed positions
    std::optional<long> n2;
    std::uint64_t seed{0};
};

DisorderConfig read_disorder(ConfigReader& cfg);
io::json disorder_json(const DisorderConfig& d);

// Build the chain field for `size` sites with positions measured from `origin`.
SiteField make_field(const DisorderConfig& d, std::size_t size, std::size_t origin);

}  // namespace nht
