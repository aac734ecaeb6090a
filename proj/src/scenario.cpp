#include "nht/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "nht/asymptotics.hpp"
#include "nht/checks.hpp"
#include "nht/config.hpp"
#include "nht/ensemble.hpp"
#include "nht/observables.hpp"
#include "nht/propagator.hpp"
#include "nht/spectrum.hpp"

namespace nht {

namespace {

// Sites beyond v_max t on each side. 20 leaves Bessel-type tails above the
// edge-touch threshold for short runs and for kappa = 0.
constexpr std::size_t kSpreadMargin = 32;

constexpr double kPi = std::numbers::pi;

using io::json;

std::size_t make_odd(std::size_t n) { return std::max<std::size_t>(3, n | 1U); }

struct Stepping {
    double dt;
    std::size_t steps;
    std::size_t sample_every;
};

// Mirror of the step selection in evolve(), so sampling is known up front.
template <LatticeOperator Op>
Stepping plan_steps(const Op& op, double t_final, double dt_req, double sample_interval) {
    if (!(sample_interval > 0.0)) throw ConfigError("sample_interval must be > 0");
    double dt = dt_req > 0.0 ? dt_req : default_dt(op);
    std::size_t steps = 0;
    if (t_final > 0.0) {
        steps = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(t_final / dt - 1e-9)));
        dt = t_final / static_cast<double>(steps);
    }
    const auto every =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(sample_interval / dt)));
    return {dt, steps, every};
}

void write_amplitude_csv(const std::filesystem::path& path, const Trajectory& traj) {
    std::vector<std::string> header{"t"};
    for (std::size_t i = 0; i < traj.sites(); ++i) header.push_back(std::to_string(traj.position(i)));
    std::vector<std::vector<double>> rows;
    rows.reserve(traj.states.size());
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        std::vector<double> row{traj.times[k]};
        for (const cplx& z : traj.states[k]) row.push_back(std::abs(z));
        rows.push_back(std::move(row));
    }
    io::write_csv(path, header, rows);
}

void write_heatmap(const std::filesystem::path& path, const Trajectory& traj) {
    std::vector<std::vector<double>> image;
    image.reserve(traj.states.size());
    for (const auto& s : traj.states) {
        std::vector<double> row;
        row.reserve(s.size());
        for (const cplx& z : s) row.push_back(std::abs(z));
        image.push_back(std::move(row));
    }
    io::write_pgm(path, image);
}

// Full auxiliary-site model; only the main-lattice amplitudes are kept, renormalized,
// and ln P refers to the main-lattice weight.
Trajectory evolve_auxiliary(const LatticeParams& p, const AuxiliaryParams& aux, const SiteField& field,
                            const InitialCondition& init, EvolveOptions eo, double sample_interval) {
    const std::size_t size = field.size();
    const std::size_t origin = eo.origin.value_or(size / 2);
    const auto [va, vb] = split_sublattices(field);
    const SparseOperator op = build_auxiliary(p, aux, va, vb, size / 2);
    eo.sample_every = plan_steps(op, eo.t_final, eo.dt, sample_interval).sample_every;
    eo.origin = auxiliary_main_index(origin);
    std::vector<std::vector<cplx>> states;
    std::vector<double> log_norm;
    StateVector start{embed_in_auxiliary(prepare_state(init, size, origin)), 0.0, 0.0};
    Trajectory traj = evolve_observed(op, std::move(start), eo,
                                      [&](double, std::span<const cplx> s, double ln_p) {
                                          std::vector<cplx> main = extract_main(s);
                                          double w = 0.0;
                                          for (const cplx& z : main) w += std::norm(z);
                                          const double inv = 1.0 / std::sqrt(w);
                                          for (cplx& z : main) z *= inv;
                                          states.push_back(std::move(main));
                                          log_norm.push_back(ln_p + std::log(w));
                                      });
    traj.states = std::move(states);
    traj.log_norm = std::move(log_norm);
    traj.origin = origin;
    traj.init = init;
    traj.final_state.amps = extract_main(traj.final_state.amps);
    return traj;
}

json trajectory_metadata(const Trajectory& traj, const LatticeParams& params) {
    json j;
    j["params"] = lattice_json(params);
    j["dt"] = traj.dt;
    j["steps"] = traj.steps;
    j["sample_every"] = traj.sample_every;
    j["samples"] = traj.states.size();
    j["sites"] = traj.sites();
    j["origin_offset"] = traj.origin;
    j["edge_touch"] = traj.edge_touch;
    j["edge_touch_time"] = traj.edge_touch ? json(traj.edge_touch_time) : json(nullptr);
    j["log_norm_series"] = traj.log_norm;
    return j;
}

json initial_json(const InitialCondition& init) {
    if (init.kind == InitialCondition::Kind::single_site) {
        return json{{"kind", "single_site"}, {"n0", init.n0}};
    }
    return json{{"kind", "gaussian"}, {"n0", init.n0}, {"w0", init.w0}, {"q0", init.q0}};
}

RunResult finish_run(const std::string& name, json resolved, std::vector<std::string> files,
                     const RunOptions& opts, json extra = json::object()) {
    RunResult r;
    r.manifest["subcommand"] = name;
    r.manifest["resolved_config"] = std::move(resolved);
    for (auto& [k, v] : extra.items()) r.manifest[k] = v;
    r.manifest["files"] = files;
    io::write_json(opts.out_dir / "manifest.json", r.manifest);
    files.push_back("manifest.json");
    r.files = std::move(files);
    return r;
}

}  // namespace

// ---------------------------------------------------------------------------

RunResult cmd_band(const json& config, const RunOptions& opts) {
    ConfigReader cfg(config, "band");
    const LatticeParams base = read_lattice(cfg);
    const std::vector<double> phis = cfg.numbers("phis", {0.0, 0.25 * kPi, 0.5 * kPi});
    const long points = cfg.integer("q_points", 512);
    cfg.finish();
    if (phis.empty()) throw ConfigError("band.phis: at least one flux value is required");
    if (points < 2) throw ConfigError("band.q_points must be >= 2");

    const auto grid = q_grid(-kPi, kPi, static_cast<std::size_t>(points));
    std::vector<std::string> files;
    json sweeps = json::array();
    for (std::size_t k = 0; k < phis.size(); ++k) {
        LatticeParams p = base;
        p.phi = phis[k];
        p.phi_prime = -phis[k];
        std::vector<std::vector<double>> rows;
        rows.reserve(grid.size());
        for (double q : grid) {
            const DispersionPoint d = dispersion_chain(q, p);
            rows.push_back({q, d.e.real(), d.e.imag(), d.de.real(), d.de.imag(), d.d2e.real(),
                            d.d2e.imag()});
        }
        const std::string file = "band_" + std::to_string(k) + ".csv";
        io::write_csv(opts.out_dir / file,
                      {"q", "re_e", "im_e", "re_de", "im_de", "re_d2e", "im_d2e"}, rows);
        files.push_back(file);
        sweeps.push_back(json{{"file", file}, {"phi", p.phi}, {"phi_prime", p.phi_prime}});
    }
    json resolved = lattice_json(base);
    resolved["phis"] = phis;
    resolved["q_points"] = points;
    return finish_run("band", resolved, files, opts, json{{"sweeps", sweeps}});
}

// ---------------------------------------------------------------------------

RunResult cmd_spread(const json& config, const RunOptions& opts) {
    ConfigReader cfg(config, "spread");
    const LatticeParams p = read_lattice(cfg);
    double t_final = cfg.number("t_final", 30.0);
    if (opts.tmax) t_final = *opts.tmax;
    double dt = cfg.number("dt", 0.0);
    if (opts.dt) dt = *opts.dt;
    const double sample_interval = cfg.number("sample_interval", 0.25);
    const std::string repr = cfg.string("representation", "chain");
    const bool pgm = cfg.boolean("pgm", true);
    const long size_cfg = cfg.integer("size", 0);

    ConfigReader init_cfg = cfg.object("initial");
    const std::string kind = init_cfg.string("kind", "single_site");
    InitialCondition init;
    if (kind == "single_site") {
        init = InitialCondition::single_site(init_cfg.integer("n0", 0));
    } else if (kind == "gaussian") {
        const long n0 = init_cfg.integer("n0", 0);
        const double w0 = init_cfg.number("w0", 10.0);
        const double q0 = init_cfg.number("q0", -0.5 * kPi);
        init = InitialCondition::gaussian(n0, w0, q0);
    } else {
        throw ConfigError("spread.initial.kind: expected single_site or gaussian");
    }
    init_cfg.finish();

    ConfigReader dis_cfg = cfg.object("disorder");
    DisorderConfig dis = read_disorder(dis_cfg);
    if (opts.seed) dis.seed = *opts.seed;
    std::optional<AuxiliaryParams> aux;
    if (repr == "auxiliary") aux = read_auxiliary(cfg, p.kappa);
    cfg.finish();

    if (repr != "chain" && repr != "zigzag" && repr != "auxiliary") {
        throw ConfigError("spread.representation: expected chain, zigzag or auxiliary");
    }
    if (!(t_final >= 0.0)) throw ConfigError("spread.t_final must be >= 0");
    std::size_t size = opts.size ? *opts.size
                       : size_cfg > 0 ? static_cast<std::size_t>(size_cfg)
                                      : make_odd(min_lattice_size(p, t_final, kSpreadMargin));
    if (repr != "chain" && size % 2 != 0) {
        if (opts.size || size_cfg > 0) throw ConfigError(repr + " representation needs an even size");
        ++size;
    }
    if (size < 3) throw ConfigError("spread.size must be >= 3");
    const std::size_t origin = size / 2;
    const SiteField field = make_field(dis, size, origin);

    EvolveOptions eo;
    eo.t_final = t_final;
    eo.dt = dt;
    eo.origin = origin;
    Trajectory traj;
    if (repr == "chain") {
        const ChainOperator op = build_chain(p, field, size);
        eo.sample_every = plan_steps(op, t_final, dt, sample_interval).sample_every;
        traj = evolve(op, init, eo);
    } else if (repr == "zigzag") {
        const auto [va, vb] = split_sublattices(field);
        const SparseOperator op = build_zigzag(p, va, vb, size / 2);
        eo.sample_every = plan_steps(op, t_final, dt, sample_interval).sample_every;
        traj = evolve(op, init, eo);
    } else {
        traj = evolve_auxiliary(p, *aux, field, init, eo, sample_interval);
    }

    std::vector<std::string> files{"amplitude.csv", "metrics.csv", "trajectory.json"};
    write_amplitude_csv(opts.out_dir / "amplitude.csv", traj);
    std::vector<std::vector<double>> rows;
    for (const SpreadMetrics& m : spread_metrics(traj)) {
        rows.push_back({m.time, m.norm_log, m.mean, m.sigma});
    }
    io::write_csv(opts.out_dir / "metrics.csv", {"t", "ln_P", "mean", "sigma"}, rows);
    json meta = trajectory_metadata(traj, p);
    meta["initial"] = initial_json(init);
    meta["disorder"] = disorder_json(dis);
    io::write_json(opts.out_dir / "trajectory.json", meta);
    if (pgm) {
        write_heatmap(opts.out_dir / "heatmap.pgm", traj);
        files.push_back("heatmap.pgm");
    }

    json resolved = lattice_json(p);
    resolved["t_final"] = t_final;
    resolved["dt"] = traj.dt;
    resolved["sample_interval"] = sample_interval;
    resolved["sample_every"] = traj.sample_every;
    resolved["size"] = size;
    resolved["origin_offset"] = origin;
    resolved["representation"] = repr;
    if (aux) {
        const EffectiveParams eff = effective_params(*aux);
        resolved["epsilon"] = aux->epsilon;
        resolved["sigma"] = aux->sigma;
        resolved["u_site"] = json::array({aux->u_site.real(), aux->u_site.imag()});
        resolved["elimination_ratio"] = aux->elimination_ratio();
        resolved["kappa_eff"] = json::array({eff.kappa_eff.real(), eff.kappa_eff.imag()});
        resolved["delta"] = json::array({eff.delta.real(), eff.delta.imag()});
    }
    resolved["initial"] = initial_json(init);
    resolved["disorder"] = disorder_json(dis);
    resolved["pgm"] = pgm;
    return finish_run("spread", resolved, files, opts, json{{"edge_touch", traj.edge_touch}});
}

// ---------------------------------------------------------------------------

RunResult cmd_ensemble(const json& config, const RunOptions& opts) {
    ConfigReader cfg(config, "ensemble");
    struct Setting {
        std::string name;
        LatticeParams params;
    };
    std::vector<Setting> settings;
    for (ConfigReader& s : cfg.objects("settings")) {
        Setting st;
        st.name = s.string("name", "setting" + std::to_string(settings.size()));
        st.params = read_lattice(s);
        s.finish();
        settings.push_back(st);
    }
    if (!cfg.has("settings")) {
        settings = {{"hermitian", LatticeParams::symmetric(0.0, 1.0, 0.0, 0.0)},
                    {"nh_phi0", LatticeParams::symmetric(0.3, 1.0, 0.6, 0.0)},
                    {"nh_phi_pi4", LatticeParams::symmetric(0.3, 1.0, 0.6, 0.25 * kPi)},
                    {"nh_phi_pi2", LatticeParams::symmetric(0.3, 1.0, 0.6, 0.5 * kPi)}};
    }
    if (settings.empty()) throw ConfigError("ensemble.settings: at least one setting is required");
    const std::vector<double> deltas = cfg.numbers("deltas", {0.5, 1.0, 1.5});
    const long realizations = cfg.integer("realizations", 100);
    long size = cfg.integer("size", 400);
    double t_final = cfg.number("t_final", 100.0);
    double dt = cfg.number("dt", 0.0);
    const double sample_interval = cfg.number("sample_interval", 1.0);
    std::uint64_t seed = cfg.seed("seed", 0);
    cfg.finish();

    if (opts.seed) seed = *opts.seed;
    if (opts.tmax) t_final = *opts.tmax;
    if (opts.dt) dt = *opts.dt;
    if (opts.size) size = static_cast<long>(*opts.size);
    if (deltas.empty()) throw ConfigError("ensemble.deltas: at least one value is required");
    if (realizations < 1) throw ConfigError("ensemble.realizations must be >= 1");
    if (size < 3) throw ConfigError("ensemble.size must be >= 3");

    std::vector<std::string> files;
    json runs = json::array();
    for (const Setting& st : settings) {
        for (std::size_t k = 0; k < deltas.size(); ++k) {
            EnsembleSpec spec;
            spec.realizations = static_cast<std::size_t>(realizations);
            spec.base_seed = seed;
            spec.delta = deltas[k];
            spec.threads = opts.threads.value_or(0);
            spec.scenario.params = st.params;
            spec.scenario.size = static_cast<std::size_t>(size);
            spec.scenario.t_final = t_final;
            spec.scenario.dt = dt;
            spec.scenario.sample_interval = sample_interval;
            const EnsembleResult res = run_ensemble(spec);

            const std::string stem = "ensemble_" + st.name + "_delta" + std::to_string(k);
            std::vector<std::vector<double>> rows;
            for (std::size_t j = 0; j < res.times.size(); ++j) {
                rows.push_back({res.times[j], res.sigma_mean[j], res.sigma_stderr[j]});
            }
            io::write_csv(opts.out_dir / (stem + ".csv"), {"t", "sigma_mean", "sigma_stderr"}, rows);
            json side{{"setting", st.name},
                      {"params", lattice_json(st.params)},
                      {"delta", deltas[k]},
                      {"realizations", realizations},
                      {"base_seed", seed},
                      {"dt", res.dt},
                      {"sample_every", res.sample_every},
                      {"edge_touches", res.edge_touches},
                      {"member_seeds", res.seeds}};
            io::write_json(opts.out_dir / (stem + ".json"), side);
            files.push_back(stem + ".csv");
            files.push_back(stem + ".json");
            runs.push_back(json{{"setting", st.name}, {"delta", deltas[k]}, {"file", stem + ".csv"},
                                {"dt", res.dt}});
        }
    }

    json resolved;
    json set_json = json::array();
    for (const Setting& st : settings) {
        json j = lattice_json(st.params);
        j["name"] = st.name;
        set_json.push_back(j);
    }
    resolved["settings"] = set_json;
    resolved["deltas"] = deltas;
    resolved["realizations"] = realizations;
    resolved["size"] = size;
    resolved["origin_offset"] = size / 2;
    resolved["t_final"] = t_final;
    resolved["dt"] = dt > 0.0 ? json(dt) : json("auto: 0.05/(gamma+2kappa+2rho+delta)");
    resolved["sample_interval"] = sample_interval;
    resolved["seed"] = seed;
    resolved["initial"] = initial_json(InitialCondition::single_site(0));
    return finish_run("ensemble", resolved, files, opts, json{{"runs", runs}});
}

// ---------------------------------------------------------------------------

RunResult cmd_wavepacket(const json& config, const RunOptions& opts) {
    ConfigReader cfg(config, "wavepacket");
    const LatticeParams p = read_lattice(cfg, 0.25 * kPi);
    const double w0 = cfg.number("w0", 10.0);
    const std::vector<double> q0s = cfg.numbers("q0s", {-0.5 * kPi, 0.5 * kPi});
    const double launch_offset = cfg.number("launch_offset", 4.0 * w0);
    const double pulse_threshold = cfg.number("pulse_threshold", 0.1);
    double dt = cfg.number("dt", 0.0);
    const double sample_interval = cfg.number("sample_interval", 0.25);
    const auto t_cfg = cfg.number("t_final");
    const long size_cfg = cfg.integer("size", 0);
    const bool pgm = cfg.boolean("pgm", true);
    ConfigReader dis_cfg = cfg.object("disorder");
    DisorderConfig dis = read_disorder(dis_cfg);
    if (!config.contains("disorder") || !config["disorder"].contains("kind")) dis.kind = "defect_pair";
    cfg.finish();
    if (opts.seed) dis.seed = *opts.seed;
    if (opts.dt) dt = *opts.dt;

    if (!(w0 > 0.0)) throw ConfigError("wavepacket.w0 must be > 0");
    if (q0s.empty()) throw ConfigError("wavepacket.q0s: at least one carrier is required");
    if (dis.kind == "defect_pair") {
        if (!dis.n1) dis.n1 = -20;
        if (!dis.n2) dis.n2 = 0;
    } else if (dis.kind == "uniform") {
        if (!dis.n1) dis.n1 = 0;
        if (!dis.n2) dis.n2 = 60;
    } else {
        // free propagation: a nominal region for the scatter bookkeeping
        if (!dis.n1) dis.n1 = -20;
        if (!dis.n2) dis.n2 = 0;
    }
    const long n1 = std::min(*dis.n1, *dis.n2);
    const long n2 = std::max(*dis.n1, *dis.n2);
    const long offset = std::lround(launch_offset);
    const long probe_offset = std::lround(4.0 * w0);

    struct Run {
        double q0;
        double velocity;
        bool rightward;
        long n0;
        long probe;
        std::string label;
    };
    std::vector<Run> runs;
    double t_auto = 0.0;
    long reach = 0;
    for (double q0 : q0s) {
        if (std::abs(q0) > kPi) throw ConfigError("wavepacket.q0s: carrier outside [-pi, pi]");
        Run r;
        r.q0 = q0;
        r.velocity = dispersion_chain(q0, p).de.real();
        if (std::abs(r.velocity) < 1e-9) {
            throw ConfigError("wavepacket: carrier q0 = " + std::to_string(q0) +
                              " has zero group velocity");
        }
        r.rightward = r.velocity > 0.0;
        r.n0 = r.rightward ? n1 - offset : n2 + offset;
        r.probe = r.rightward ? n2 + probe_offset : n1 - probe_offset;
        r.label = r.rightward ? "forward" : "backward";
        for (const Run& o : runs) {
            if (o.label == r.label) r.label += "_" + std::to_string(runs.size());
        }
        const double t = (static_cast<double>(std::abs(r.probe - r.n0)) +
                          2.0 * static_cast<double>(n2 - n1) + 4.0 * w0) /
                         std::abs(r.velocity);
        t_auto = std::max(t_auto, t);
        reach = std::max({reach, std::abs(r.n0), std::abs(r.probe)});
        runs.push_back(r);
    }
    double t_final = t_cfg.value_or(t_auto);
    if (opts.tmax) t_final = *opts.tmax;
    std::size_t size = opts.size ? *opts.size
                       : size_cfg > 0
                           ? static_cast<std::size_t>(size_cfg)
                           : make_odd(min_lattice_size(p, t_final,
                                                       static_cast<std::size_t>(reach) +
                                                           static_cast<std::size_t>(probe_offset)));
    const std::size_t origin = size / 2;
    const SiteField field = make_field(dis, size, origin);
    const ChainOperator op = build_chain(p, field, size);

    EvolveOptions eo;
    eo.t_final = t_final;
    eo.dt = dt;
    eo.origin = origin;
    eo.sample_every = plan_steps(op, t_final, dt, sample_interval).sample_every;

    std::vector<std::string> files;
    json report = json::object();
    double dt_used = 0.0;
    for (const Run& r : runs) {
        const Trajectory traj = evolve(op, InitialCondition::gaussian(r.n0, w0, r.q0), eo);
        dt_used = traj.dt;
        ScatterOptions so;
        so.pulse_threshold = pulse_threshold;
        so.w0 = w0;
        so.speed = std::abs(r.velocity);
        const ScatterReport rep = scatter_report(traj, n1, n2, so);

        write_amplitude_csv(opts.out_dir / ("amplitude_" + r.label + ".csv"), traj);
        std::vector<std::vector<double>> rows;
        for (std::size_t k = 0; k < rep.probe_trace.size(); ++k) {
            rows.push_back({rep.probe_times[k], rep.probe_trace[k]});
        }
        io::write_csv(opts.out_dir / ("probe_" + r.label + ".csv"), {"t", "probe_amplitude"}, rows);
        files.push_back("amplitude_" + r.label + ".csv");
        files.push_back("probe_" + r.label + ".csv");
        if (pgm) {
            write_heatmap(opts.out_dir / ("heatmap_" + r.label + ".pgm"), traj);
            files.push_back("heatmap_" + r.label + ".pgm");
        }
        report[r.label] = json{{"q0", r.q0},
                               {"n0", r.n0},
                               {"group_velocity", r.velocity},
                               {"transmitted", rep.transmitted},
                               {"reflected", rep.reflected},
                               {"resident", rep.resident},
                               {"echoes", rep.echoes},
                               {"complete", rep.complete},
                               {"probe_site", rep.probe_site},
                               {"edge_touch", traj.edge_touch}};
    }
    io::write_json(opts.out_dir / "report.json", report);
    files.push_back("report.json");

    json resolved = lattice_json(p);
    resolved["w0"] = w0;
    resolved["q0s"] = q0s;
    resolved["launch_offset"] = offset;
    resolved["pulse_threshold"] = pulse_threshold;
    resolved["probe_offset"] = probe_offset;
    resolved["region"] = json{{"n1", n1}, {"n2", n2}};
    resolved["disorder"] = disorder_json(dis);
    resolved["t_final"] = t_final;
    resolved["dt"] = dt_used;
    resolved["sample_interval"] = sample_interval;
    resolved["sample_every"] = eo.sample_every;
    resolved["size"] = size;
    resolved["origin_offset"] = origin;
    resolved["pgm"] = pgm;
    return finish_run("wavepacket", resolved, files, opts, json{{"report", report}});
}

// ---------------------------------------------------------------------------

RunResult cmd_asymptotics(const json& config, const RunOptions& opts) {
    ConfigReader cfg(config, "asymptotics");
    const LatticeParams p = read_lattice(cfg, 0.25 * kPi);
    double t = cfg.number("t", 20.0);
    const long panels = cfg.integer("panels", static_cast<long>(kDefaultPanels));
    double dt = cfg.number("dt", 0.0);
    const long half_cfg = cfg.integer("half_width", 0);
    const long size_cfg = cfg.integer("size", 0);
    cfg.finish();
    if (opts.tmax) t = *opts.tmax;
    if (opts.dt) dt = *opts.dt;
    if (!(t > 0.0)) throw ConfigError("asymptotics.t must be > 0");
    if (panels < 64) throw ConfigError("asymptotics.panels must be >= 64");

    const long half = half_cfg > 0 ? half_cfg
                                   : static_cast<long>(std::ceil((2.0 * p.rho + 4.0 * p.kappa) * t)) + 20;
    std::size_t size = opts.size ? *opts.size
                       : size_cfg > 0 ? static_cast<std::size_t>(size_cfg)
                                      : make_odd(std::max<std::size_t>(
                                            min_lattice_size(p, t, 40),
                                            static_cast<std::size_t>(2 * half + 81)));
    const std::size_t origin = size / 2;
    if (static_cast<long>(origin) < half || static_cast<long>(size - 1 - origin) < half) {
        throw ConfigError("asymptotics: lattice smaller than the requested site window");
    }

    const auto bloch = bloch_integral_range(-half, half, t, p, static_cast<std::size_t>(panels));
    const SaddleConstants sc = saddle_constants(p);

    const ChainOperator op = build_chain(p, SiteField::clean(size), size);
    EvolveOptions eo;
    eo.t_final = t;
    eo.dt = dt;
    eo.origin = origin;
    eo.sample_every = std::numeric_limits<std::size_t>::max();
    const Trajectory traj = evolve(op, InitialCondition::single_site(0), eo);
    const std::vector<cplx> c = traj.final_state.physical();

    std::vector<std::vector<double>> rows;
    for (long n = -half; n <= half; ++n) {
        const double asym =
            sc.selective ? std::abs(asymptotic_amplitude(n, t, sc)) : std::nan("");
        rows.push_back({static_cast<double>(n), std::abs(bloch[static_cast<std::size_t>(n + half)]),
                        asym, std::abs(c[static_cast<std::size_t>(n + static_cast<long>(origin))])});
    }
    io::write_csv(opts.out_dir / "asymptotics.csv",
                  {"n", "abs_bloch", "abs_asymptotic", "abs_propagator"}, rows);

    json resolved = lattice_json(p);
    resolved["t"] = t;
    resolved["panels"] = panels;
    resolved["half_width"] = half;
    resolved["size"] = size;
    resolved["origin_offset"] = origin;
    resolved["dt"] = traj.dt;
    return finish_run("asymptotics", resolved, {"asymptotics.csv"}, opts,
                      json{{"asymptotic_valid", sc.selective},
                           {"asymptotic_note", sc.note},
                           {"edge_touch", traj.edge_touch}});
}

// ---------------------------------------------------------------------------

RunResult cmd_check(const json& config, const RunOptions& opts) {
    ConfigReader cfg(config, "check");
    cfg.finish();
    const auto results = run_invariant_checks();
    json list = json::array();
    bool ok = true;
    for (const CheckResult& r : results) {
        list.push_back(json{{"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
        ok = ok && r.passed;
    }
    io::write_json(opts.out_dir / "check.json", list);
    RunResult res = finish_run("check", json::object(), {"check.json"}, opts,
                               json{{"all_passed", ok}});
    res.ok = ok;
    return res;
}

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"band",       "spread",      "ensemble",
                                                "wavepacket", "asymptotics", "check"};
    return names;
}

RunResult run_command(const std::string& name, const json& config, const RunOptions& opts) {
    if (name == "band") return cmd_band(config, opts);
    if (name == "spread") return cmd_spread(config, opts);
    if (name == "ensemble") return cmd_ensemble(config, opts);
    if (name == "wavepacket") return cmd_wavepacket(config, opts);
    if (name == "asymptotics") return cmd_asymptotics(config, opts);
    if (name == "check") return cmd_check(config, opts);
    throw ConfigError("unknown subcommand '" + name + "'");
}

}  // namespace nht
