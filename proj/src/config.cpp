#include "nht/config.hpp"

#include <cmath>

#include "nht/ensemble.hpp"

namespace nht {

ConfigReader::ConfigReader(io::json object, std::string context)
    : obj_(std::move(object)), context_(std::move(context)) {
    if (obj_.is_null()) obj_ = io::json::object();
    if (!obj_.is_object()) throw ConfigError(context_ + ": expected a JSON object");
}

bool ConfigReader::has(const std::string& key) const { return obj_.contains(key); }

const io::json& ConfigReader::take(const std::string& key) {
    used_.insert(key);
    return obj_.at(key);
}

std::optional<double> ConfigReader::number(const std::string& key) {
    if (!has(key)) return std::nullopt;
    const io::json& v = take(key);
    if (!v.is_number()) throw ConfigError(context_ + "." + key + ": expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(context_ + "." + key + ": must be finite");
    return d;
}

double ConfigReader::number(const std::string& key, double fallback) {
    return number(key).value_or(fallback);
}

long ConfigReader::integer(const std::string& key, long fallback) {
    if (!has(key)) return fallback;
    const io::json& v = take(key);
    if (!v.is_number_integer()) throw ConfigError(context_ + "." + key + ": expected an integer");
    return v.get<long>();
}

std::uint64_t ConfigReader::seed(const std::string& key, std::uint64_t fallback) {
    if (!has(key)) return fallback;
    const io::json& v = take(key);
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<long long>() >= 0) {
        return static_cast<std::uint64_t>(v.get<long long>());
    }
    throw ConfigError(context_ + "." + key + ": expected an unsigned 64-bit integer");
}

bool ConfigReader::boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const io::json& v = take(key);
    if (!v.is_boolean()) throw ConfigError(context_ + "." + key + ": expected true/false");
    return v.get<bool>();
}

std::string ConfigReader::string(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const io::json& v = take(key);
    if (!v.is_string()) throw ConfigError(context_ + "." + key + ": expected a string");
    return v.get<std::string>();
}

std::vector<double> ConfigReader::numbers(const std::string& key,
                                          const std::vector<double>& fallback) {
    if (!has(key)) return fallback;
    const io::json& v = take(key);
    if (!v.is_array()) throw ConfigError(context_ + "." + key + ": expected an array of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
        if (!x.is_number()) throw ConfigError(context_ + "." + key + ": expected numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

cplx ConfigReader::complex(const std::string& key, cplx fallback) {
    if (!has(key)) return fallback;
    const io::json& v = take(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        throw ConfigError(context_ + "." + key + ": expected [re, im]");
    }
    return {v[0].get<double>(), v[1].get<double>()};
}

ConfigReader ConfigReader::object(const std::string& key) {
    if (!has(key)) return ConfigReader(io::json::object(), context_ + "." + key);
    return ConfigReader(take(key), context_ + "." + key);
}

std::vector<ConfigReader> ConfigReader::objects(const std::string& key) {
    std::vector<ConfigReader> out;
    if (!has(key)) return out;
    const io::json& v = take(key);
    if (!v.is_array()) throw ConfigError(context_ + "." + key + ": expected an array of objects");
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.emplace_back(v[i], context_ + "." + key + "[" + std::to_string(i) + "]");
    }
    return out;
}

void ConfigReader::finish() const {
    for (const auto& [key, value] : obj_.items()) {
        if (!used_.contains(key)) throw ConfigError(context_ + ": unknown key '" + key + "'");
    }
}

LatticeParams read_lattice(ConfigReader& cfg, double default_phi) {
    LatticeParams p;
    p.kappa = cfg.number("kappa", 0.3);
    p.rho = cfg.number("rho", 1.0);
    p.gamma = cfg.number("gamma", 2.0 * p.kappa);
    p.phi = cfg.number("phi", default_phi);
    p.phi_prime = cfg.number("phi_prime", 0.0 - p.phi);
    p.validate();
    return p;
}

io::json lattice_json(const LatticeParams& p) {
    return io::json{{"kappa", p.kappa},
                    {"rho", p.rho},
                    {"gamma", p.gamma},
                    {"phi", p.phi},
                    {"phi_prime", p.phi_prime},
                    {"delta_phi", p.delta_phi()},
                    {"dissipative", p.dissipative()}};
}

AuxiliaryParams read_auxiliary(ConfigReader& cfg, double kappa) {
    AuxiliaryParams aux;
    aux.epsilon = cfg.number("epsilon", 0.0);
    const auto sigma = cfg.number("sigma");
    if (!sigma) throw ConfigError(cfg.context() + ": auxiliary model needs 'sigma'");
    aux.sigma = *sigma;
    if (cfg.has("u_site")) {
        aux.u_site = cfg.complex("u_site", {});
    } else {
        aux.u_site = tune_auxiliary_energy(aux.epsilon, kappa, aux.sigma);
    }
    aux.validate();
    return aux;
}

DisorderConfig read_disorder(ConfigReader& cfg) {
    DisorderConfig d;
    d.kind = cfg.string("kind", "clean");
    if (d.kind != "clean" && d.kind != "uniform" && d.kind != "defect_pair") {
        throw ConfigError(cfg.context() + ".kind: expected clean, uniform or defect_pair");
    }
    d.delta = cfg.number("delta", 1.0);
    d.v0 = cfg.number("v0", 1.0);
    if (cfg.has("n1")) d.n1 = cfg.integer("n1", 0);
    if (cfg.has("n2")) d.n2 = cfg.integer("n2", 0);
    d.seed = cfg.seed("seed", 0);
    cfg.finish();
    if (d.delta < 0.0) throw ConfigError(cfg.context() + ".delta must be >= 0");
    return d;
}

io::json disorder_json(const DisorderConfig& d) {
    io::json j{{"kind", d.kind}};
    if (d.kind == "uniform") {
        j["delta"] = d.delta;
        j["seed"] = d.seed;
    }
    if (d.kind == "defect_pair") j["v0"] = d.v0;
    if (d.n1) j["n1"] = *d.n1;
    if (d.n2) j["n2"] = *d.n2;
    return j;
}

SiteField make_field(const DisorderConfig& d, std::size_t size, std::size_t origin) {
    auto index = [&](long n) -> std::size_t {
        const long i = n + static_cast<long>(origin);
        if (i < 0 || i >= static_cast<long>(size)) {
            throw ConfigError("disorder site " + std::to_string(n) + " outside the lattice");
        }
        return static_cast<std::size_t>(i);
    };
    if (d.kind == "clean") return SiteField::clean(size);
    if (d.kind == "defect_pair") {
        return SiteField::defect_pair(size, d.v0, index(d.n1.value_or(-20)), index(d.n2.value_or(0)));
    }
    if (d.n1 || d.n2) {
        const std::size_t a = index(d.n1.value_or(-static_cast<long>(origin)));
        const std::size_t b = index(d.n2.value_or(static_cast<long>(size - 1 - origin)));
        if (b < a) throw ConfigError("disorder region: n2 < n1");
        return draw_disorder(d.seed, size, d.delta, a, b);
    }
    return draw_disorder(d.seed, size, d.delta);
}

}  // namespace nht
