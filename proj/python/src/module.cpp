// Python bindings: thin wrappers over the nht library.

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "nht/asymptotics.hpp"
#include "nht/checks.hpp"
#include "nht/ensemble.hpp"
#include "nht/model.hpp"
#include "nht/observables.hpp"
#include "nht/propagator.hpp"
#include "nht/scenario.hpp"
#include "nht/spectrum.hpp"

namespace py = pybind11;
using namespace nht;

namespace {

py::array_t<cplx> to_array(const std::vector<std::vector<cplx>>& rows, std::size_t width) {
    py::array_t<cplx> a({rows.size(), width});
    auto m = a.mutable_unchecked<2>();
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < width; ++j) m(i, j) = rows[i][j];
    return a;
}

SiteField field_from(std::optional<std::vector<double>> potential, std::size_t size) {
    if (!potential) return SiteField::clean(size);
    if (potential->size() != size) throw ConfigError("potential must have one value per site");
    return SiteField::custom(std::move(*potential));
}

py::dict evolve_chain(const LatticeParams& p, std::size_t size, double t_final, double dt,
                      std::size_t sample_every, const InitialCondition& init,
                      std::optional<std::vector<double>> potential) {
    const auto op = build_chain(p, field_from(std::move(potential), size), size);
    EvolveOptions o;
    o.t_final = t_final;
    o.dt = dt;
    o.sample_every = sample_every;
    Trajectory tr;
    {
        py::gil_scoped_release release;
        tr = evolve(op, init, o);
    }
    std::vector<double> sigma, mean;
    for (const SpreadMetrics& s : spread_metrics(tr)) {
        sigma.push_back(s.sigma);
        mean.push_back(s.mean);
    }
    py::dict d;
    d["times"] = tr.times;
    d["states"] = to_array(tr.states, size);
    d["log_norm"] = tr.log_norm;
    d["sigma"] = sigma;
    d["mean"] = mean;
    d["origin"] = tr.origin;
    d["dt"] = tr.dt;
    d["edge_touch"] = tr.edge_touch;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "non-Hermitian zigzag lattice transport";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<ContractError>(m, "ContractError", PyExc_ValueError);
    py::register_exception<ResourceError>(m, "ResourceError", PyExc_MemoryError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    py::class_<LatticeParams>(m, "LatticeParams")
        .def(py::init([](double kappa, double rho, double gamma, double phi, std::optional<double> phi_prime) {
                 LatticeParams p{kappa, rho, gamma, phi, phi_prime.value_or(0.0 - phi)};
                 p.validate();
                 return p;
             }),
             py::arg("kappa") = 0.3, py::arg("rho") = 1.0, py::arg("gamma") = 0.6, py::arg("phi") = 0.0,
             py::arg("phi_prime") = py::none())
        .def_readwrite("kappa", &LatticeParams::kappa)
        .def_readwrite("rho", &LatticeParams::rho)
        .def_readwrite("gamma", &LatticeParams::gamma)
        .def_readwrite("phi", &LatticeParams::phi)
        .def_readwrite("phi_prime", &LatticeParams::phi_prime)
        .def_property_readonly("delta_phi", &LatticeParams::delta_phi)
        .def("__repr__", [](const LatticeParams& p) {
            return "LatticeParams(kappa=" + std::to_string(p.kappa) + ", rho=" + std::to_string(p.rho) +
                   ", gamma=" + std::to_string(p.gamma) + ", phi=" + std::to_string(p.phi) +
                   ", phi_prime=" + std::to_string(p.phi_prime) + ")";
        });

    m.def("dispersion", [](double q, const LatticeParams& p) {
        const DispersionPoint d = dispersion_chain(q, p);
        return py::make_tuple(d.e, d.de, d.d2e);
    }, py::arg("q"), py::arg("params"), "E(q), E'(q), E''(q) of the chain band.");

    m.def("minibands", [](double q, const LatticeParams& p) {
        const MinibandPair b = dispersion_zigzag(q, p);
        return py::make_tuple(b.e_plus, b.e_minus);
    }, py::arg("q"), py::arg("params"));

    m.def("saddle_constants", [](const LatticeParams& p) {
        const SaddleConstants s = saddle_constants(p);
        py::dict d;
        d["q1"] = s.q1;
        d["q2"] = s.q2;
        d["e1"] = s.e1;
        d["e2"] = s.e2;
        d["de1"] = s.de1;
        d["de2"] = s.de2;
        d["d2e1"] = s.d2e1;
        d["d2e2"] = s.d2e2;
        d["selective"] = s.selective;
        return d;
    }, py::arg("params"));

    m.def("chain_spectrum", [](const LatticeParams& p, std::size_t size,
                               std::optional<std::vector<double>> potential) {
        return finite_spectrum(build_chain(p, field_from(std::move(potential), size), size));
    }, py::arg("params"), py::arg("size"), py::arg("potential") = py::none());

    m.def("bloch_integral", &bloch_integral_range, py::arg("n_lo"), py::arg("n_hi"), py::arg("t"),
          py::arg("params"), py::arg("panels") = kDefaultPanels,
          "Clean-lattice amplitudes c_n(t) for n in [n_lo, n_hi] from the Bloch integral.");

    m.def("asymptotic_amplitude", [](const std::vector<long>& ns, double t, const LatticeParams& p) {
        const SaddleConstants sc = saddle_constants(p);
        std::vector<cplx> out;
        out.reserve(ns.size());
        for (long n : ns) out.push_back(asymptotic_amplitude(n, t, sc));
        return out;
    }, py::arg("n"), py::arg("t"), py::arg("params"));

    m.def("evolve",
          [](const LatticeParams& p, std::size_t size, double t_final, double dt, std::size_t sample_every,
             long n0, std::optional<double> w0, double q0, std::optional<std::vector<double>> potential) {
              const InitialCondition init =
                  w0 ? InitialCondition::gaussian(n0, *w0, q0) : InitialCondition::single_site(n0);
              return evolve_chain(p, size, t_final, dt, sample_every, init, std::move(potential));
          },
          py::arg("params"), py::arg("size"), py::arg("t_final"), py::arg("dt") = 0.0,
          py::arg("sample_every") = 1, py::arg("n0") = 0, py::arg("w0") = py::none(), py::arg("q0") = 0.0,
          py::arg("potential") = py::none(),
          "Integrate the chain; single-site start unless w0 is given. Returns a dict.");

    m.def("min_lattice_size", &min_lattice_size, py::arg("params"), py::arg("t_final"), py::arg("margin"));

    m.def("draw_disorder", [](std::uint64_t seed, std::size_t size, double delta) {
        return draw_disorder(seed, size, delta).values;
    }, py::arg("seed"), py::arg("size"), py::arg("delta"));

    m.def("run_ensemble",
          [](const LatticeParams& p, std::size_t realizations, double delta, std::uint64_t seed,
             std::size_t size, double t_final, double sample_interval, unsigned threads) {
              EnsembleSpec s;
              s.realizations = realizations;
              s.base_seed = seed;
              s.delta = delta;
              s.threads = threads;
              s.scenario.params = p;
              s.scenario.size = size;
              s.scenario.t_final = t_final;
              s.scenario.sample_interval = sample_interval;
              EnsembleResult r;
              {
                  py::gil_scoped_release release;
                  r = run_ensemble(s);
              }
              py::dict d;
              d["times"] = r.times;
              d["sigma_mean"] = r.sigma_mean;
              d["sigma_stderr"] = r.sigma_stderr;
              d["seeds"] = r.seeds;
              d["edge_touches"] = r.edge_touches;
              return d;
          },
          py::arg("params"), py::arg("realizations") = 100, py::arg("delta") = 1.0, py::arg("seed") = 0,
          py::arg("size") = 400, py::arg("t_final") = 100.0, py::arg("sample_interval") = 1.0,
          py::arg("threads") = 0);

    m.def("run_checks", [] {
        std::vector<py::dict> out;
        for (const CheckResult& c : run_invariant_checks()) {
            py::dict d;
            d["name"] = c.name;
            d["passed"] = c.passed;
            d["detail"] = c.detail;
            out.push_back(d);
        }
        return out;
    });

    m.def("command_names", &command_names);

    m.def("run_command",
          [](const std::string& name, const std::string& config_json, const std::filesystem::path& out_dir,
             std::optional<std::uint64_t> seed, std::optional<unsigned> threads) {
              RunOptions o;
              o.out_dir = out_dir;
              o.seed = seed;
              o.threads = threads;
              std::filesystem::create_directories(out_dir);
              const io::json cfg = io::json::parse(config_json.empty() ? "{}" : config_json);
              RunResult r;
              {
                  py::gil_scoped_release release;
                  r = run_command(name, cfg, o);
              }
              return py::make_tuple(r.files, r.ok);
          },
          py::arg("name"), py::arg("config_json") = "{}", py::arg("out_dir") = ".", py::arg("seed") = py::none(),
          py::arg("threads") = py::none(),
          "Run a CLI subcommand in-process; returns (files, ok).");
}
