// Python bindings for the scenario loader, the closed-loop simulator, and a
// few core numeric operations.
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dockmpc/scenario_io.hpp"
#include "dockmpc/simulation.hpp"

namespace py = pybind11;
using namespace dockmpc;

namespace {

py::dict channel_dict(const ChannelMetrics& c) {
    py::dict d;
    d["conv_time"] = c.conv_time;
    d["overshoot"] = c.overshoot;
    d["ss_rms"] = c.ss_rms;
    return d;
}

py::dict metrics_dict(const Metrics& m) {
    py::dict d;
    d["rho"] = channel_dict(m.rho);
    d["eps"] = channel_dict(m.eps);
    d["beta"] = channel_dict(m.beta);
    d["phi"] = channel_dict(m.phi);
    d["theta"] = channel_dict(m.theta);
    d["psi"] = channel_dict(m.psi);
    d["conv_time_pos"] = m.conv_time_pos;
    d["conv_time_att"] = m.conv_time_att;
    d["lvlh_rms"] = m.lvlh_rms;
    d["att_peak_deg"] = m.att_peak_deg;
    d["min_rho"] = m.min_rho;
    d["peak_beta_dev_deg"] = m.peak_beta_dev_deg;
    d["transit_mae_eps_deg"] = m.transit_mae_eps_deg;
    d["transit_mae_beta_deg"] = m.transit_mae_beta_deg;
    py::dict mv;
    for (int i = 0; i < kNumRowFamilies; ++i) {
        mv[row_family_name(static_cast<RowFamily>(i))] = m.max_violation[i];
    }
    d["max_violation"] = mv;
    d["cone_violations"] = m.cone_violations;
    d["fov_violations"] = m.fov_violations;
    d["cone_violations_unrelaxed"] = m.cone_violations_unrelaxed;
    d["fov_violations_unrelaxed"] = m.fov_violations_unrelaxed;
    d["relax_steps_p"] = m.relax_steps_p;
    d["relax_steps_a"] = m.relax_steps_a;
    d["wrap_resets"] = m.wrap_resets;
    d["max_carried_error_deg"] = m.max_carried_error_deg;
    return d;
}

py::dict result_dict(const SimResult& res) {
    const auto n = static_cast<Eigen::Index>(res.log.steps.size());
    VecX t(n);
    MatX x_p(n, 6), x_a(n, 6), xd_p(n, 6), xd_a(n, 6), u_p(n, 3), u_a(n, 3);
    for (Eigen::Index k = 0; k < n; ++k) {
        const auto& s = res.log.steps[static_cast<std::size_t>(k)];
        t[k] = s.t;
        x_p.row(k) = s.x_p;
        x_a.row(k) = s.x_a;
        xd_p.row(k) = s.xd_p;
        xd_a.row(k) = s.xd_a;
        u_p.row(k) = s.u_p;
        u_a.row(k) = s.u_a;
    }
    py::dict d;
    d["scenario"] = res.log.scenario_name;
    d["Ts"] = res.log.Ts;
    d["t"] = t;
    d["x_p"] = x_p;
    d["x_a"] = x_a;
    d["xd_p"] = xd_p;
    d["xd_a"] = xd_a;
    d["u_p"] = u_p;
    d["u_a"] = u_a;
    d["metrics"] = metrics_dict(res.metrics);
    return d;
}

}  // namespace

PYBIND11_MODULE(_dockmpc, m) {
    m.doc() = "Sampling-based predictive rendezvous and docking simulator";

    py::class_<Scenario>(m, "Scenario")
        .def_readonly("name", &Scenario::name)
        .def_readwrite("rho_d", &Scenario::rho_d)
        .def_readwrite("duration", &Scenario::duration)
        .def_readwrite("seed", &Scenario::seed)
        .def_property(
            "mode", [](const Scenario& s) { return std::string(control_mode_name(s.mode)); },
            [](Scenario& s, const std::string& v) {
                if (v == "standard") s.mode = ControlMode::Standard;
                else if (v == "sampling") s.mode = ControlMode::Sampling;
                else throw py::value_error("mode must be 'standard' or 'sampling'");
            })
        .def("validate", &Scenario::validate);

    m.def("load_scenario", &load_scenario, py::arg("path"),
          "Parse and validate a scenario file");

    m.def(
        "run",
        [](const Scenario& sc) { return result_dict(run_closed_loop(sc)); },
        py::arg("scenario"),
        "Run the closed loop; returns the trajectory arrays and summary metrics");

    m.def(
        "expm", [](const MatX& A) { return expm(A); }, py::arg("A"),
        "Matrix exponential");

    m.def(
        "discretize",
        [](const MatX& Ac, const MatX& Bc, double Ts) {
            const DiscreteModel d = discretize(Ac, Bc, Ts);
            return py::make_tuple(d.Ad, d.Bd);
        },
        py::arg("Ac"), py::arg("Bc"), py::arg("Ts"),
        "Zero-order-hold discretization; returns (Ad, Bd)");

    m.def(
        "solve_qp",
        [](const MatX& H, const VecX& f, const MatX& G, const VecX& g,
           const std::vector<bool>& soft) {
            QpProblem p;
            p.H = H;
            p.f = f;
            p.G = G;
            p.g = g;
            p.soft = soft;
            const QpSolution s = solve_qp(p);
            py::dict d;
            d["z"] = s.z;
            d["status"] = std::string(qp_status_name(s.status));
            d["iterations"] = s.iterations;
            d["active_set"] = s.active_set;
            d["relaxed_rows"] = s.relaxed_rows;
            return d;
        },
        py::arg("H"), py::arg("f"), py::arg("G") = MatX(0, 0), py::arg("g") = VecX(0),
        py::arg("soft") = std::vector<bool>{},
        "Solve min 0.5 z'Hz + f'z s.t. Gz <= g; soft rows may be relaxed");
}
