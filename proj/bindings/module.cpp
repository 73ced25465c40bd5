#include <optional>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "taperbeam/oracles.hpp"
#include "taperbeam/pinn.hpp"
#include "taperbeam/report.hpp"

namespace py = pybind11;

using namespace taperbeam;

namespace {

BeamConfig make_config(double alpha, int n, double phi, double psi,
                       double gamma, double q0, double kp,
                       const std::string& bc) {
    return BeamConfig(alpha, n, phi, psi, gamma, q0, kp, bc_from_string(bc));
}

py::dict record_to_dict(const RunRecord& rec) {
    py::list samples;
    for (const DeflectionSample& s : rec.samples) {
        samples.append(py::make_tuple(s.x, s.w_tilde));
    }
    py::dict out;
    out["method"] = rec.settings.method;
    out["samples"] = samples;
    out["final_loss"] = rec.final_loss;
    out["wall_time_s"] = rec.wall_time;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() =
        "static bending of tapered perforated beams on a Pasternak foundation";
    m.attr("__version__") = kToolVersion;

    py::class_<BeamConfig>(m, "BeamConfig")
        .def(py::init(&make_config), py::arg("alpha") = 1.0, py::arg("n") = 0,
             py::arg("phi") = 0.0, py::arg("psi") = 0.0, py::arg("gamma") = 0.0,
             py::arg("q0") = 1.0, py::arg("kp") = 0.0, py::arg("bc") = "ss")
        .def_readonly("alpha", &BeamConfig::alpha)
        .def_readonly("n", &BeamConfig::n_holes)
        .def_readonly("phi", &BeamConfig::phi)
        .def_readonly("psi", &BeamConfig::psi)
        .def_readonly("gamma", &BeamConfig::gamma)
        .def_readonly("q0", &BeamConfig::q0)
        .def_readonly("kp", &BeamConfig::kp)
        .def_property_readonly(
            "bc",
            [](const BeamConfig& c) { return std::string(to_string(c.bc)); })
        .def("__repr__", [](const BeamConfig& c) {
            char buf[160];
            std::snprintf(buf, sizeof buf,
                          "BeamConfig(alpha=%g, n=%d, phi=%g, psi=%g, "
                          "gamma=%g, q0=%g, kp=%g, bc='%s')",
                          c.alpha, c.n_holes, c.phi, c.psi, c.gamma, c.q0,
                          c.kp, to_string(c.bc));
            return std::string(buf);
        });

    m.def("stiffness_factor", &stiffness_factor, py::arg("alpha"),
          py::arg("n"),
          "Bending stiffness reduction factor of the perforated section.");

    m.def("analytic_solid_ss", &analytic_solid_ss, py::arg("x"), py::arg("q0"),
          py::arg("kp"),
          "Closed-form scaled deflection of the solid uniform hinged beam "
          "under uniform load.");

    m.def(
        "solve",
        [](const BeamConfig& cfg, const std::string& method,
           const std::vector<double>& at, std::optional<unsigned> seed,
           int order, int galerkin_n, int hidden_layers, int grid_points,
           const std::string& grid, int fd_grid_size) {
            SolverSettings s;
            s.method = method;
            s.order = order;
            s.galerkin_n = galerkin_n;
            s.hidden_layers = hidden_layers;
            s.grid_points = grid_points;
            s.grid_kind = grid_kind_from_string(grid);
            s.fd_grid_size = fd_grid_size;
            s.seed = seed ? *seed : default_pinn_seed();
            return record_to_dict(run_solver(cfg, s, at));
        },
        py::arg("config"), py::arg("method") = "dfl-tfc",
        py::arg("at") = std::vector<double>{0.5},
        py::arg("seed") = std::nullopt, py::arg("order") = 15,
        py::arg("galerkin_n") = 15, py::arg("hidden_layers") = 3,
        py::arg("grid_points") = 100, py::arg("grid") = "uniform",
        py::arg("fd_grid_size") = 401,
        "Run one solver and sample the scaled deflection at the given "
        "stations.");

    m.def(
        "fd_solve",
        [](const BeamConfig& cfg, int grid_size, bool richardson) {
            const FdSolution sol = fd_solve(cfg, grid_size, richardson);
            py::dict out;
            out["grid"] = sol.grid;
            out["w"] = sol.w;
            return out;
        },
        py::arg("config"), py::arg("grid_size") = 401,
        py::arg("richardson") = true,
        "Finite-difference reference solution on a uniform grid.");

    m.def(
        "reproduce_table",
        [](const std::string& table_id, std::optional<unsigned> seed) {
            const ReproduceReport rep = reproduce_table(
                table_id, seed ? *seed : default_pinn_seed());
            py::dict out;
            out["table"] = rep.table_id;
            out["rendered"] = rep.rendered;
            out["all_passed"] = rep.all_passed();
            return out;
        },
        py::arg("table_id"), py::arg("seed") = std::nullopt,
        "Rerun one reference table and check every cell.");

    m.def("reference_table_ids", &reference_table_ids);
}
