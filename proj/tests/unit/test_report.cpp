#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "taperbeam/report.hpp"

using namespace taperbeam;

namespace {

BeamConfig t2_base(BcKind bc) {
    return BeamConfig(0.3, 4, 0.0, 0.0, 1.0, 10.0, 10.0, bc);
}

BeamConfig solid_uniform(double kp) {
    return BeamConfig(1.0, 0, 0.0, 0.0, 0.0, 1.0, kp, BcKind::SS);
}

}  // namespace

TEST_SUITE("report") {

TEST_CASE("run record serialization round-trips losslessly") {
    RunRecord rec = run_solver(t2_base(BcKind::SS), SolverSettings{},
                               {0.1, 0.5, 0.9});
    CHECK(rec.samples.size() == 3);
    nlohmann::json j = rec.to_json();
    RunRecord back = RunRecord::from_json(j);
    CHECK(back.to_json().dump() == j.dump());
    CHECK(back.cfg.alpha == rec.cfg.alpha);
    CHECK(back.settings.method == rec.settings.method);
    CHECK(back.samples[1].w_tilde == rec.samples[1].w_tilde);
    CHECK(back.final_loss == rec.final_loss);
    CHECK(j.contains("tool_version"));
    CHECK(j.contains("timestamp"));
}

TEST_CASE("solver dispatch covers every advertised method") {
    SolverSettings s;
    for (const char* m : {"dfl-tfc", "dfl-tfc-lbfgs", "galerkin", "fd"}) {
        s.method = m;
        RunRecord rec = run_solver(t2_base(BcKind::SS), s, {0.5});
        CHECK(std::abs(rec.samples[0].w_tilde - 14.6425) <= 2e-2);
    }
    s.method = "analytic";
    RunRecord rec = run_solver(solid_uniform(10.0), s, {0.5});
    CHECK(std::abs(rec.samples[0].w_tilde - 0.6448) <= 5e-5);
    s.method = "warp-drive";
    CHECK_THROWS_AS(run_solver(solid_uniform(10.0), s, {0.5}),
                    std::invalid_argument);
}

TEST_CASE("closed-form dispatch refuses configurations it cannot represent") {
    SolverSettings s;
    s.method = "analytic";
    CHECK_THROWS_AS(run_solver(t2_base(BcKind::SS), s, {0.5}),
                    std::invalid_argument);
    s.method = "dfl-tfc";
    CHECK_THROWS_AS(run_solver(solid_uniform(0.0), s, {1.5}),
                    std::invalid_argument);
}

TEST_CASE("parameter replacement revalidates the configuration") {
    BeamConfig base = t2_base(BcKind::SS);
    BeamConfig moved = with_param(base, "alpha", 0.7);
    CHECK(moved.alpha == 0.7);
    CHECK(moved.n_holes == base.n_holes);
    BeamConfig holed = with_param(base, "n", 2.0);
    CHECK(holed.n_holes == 2);
    CHECK_THROWS_AS(with_param(base, "n", 2.5), std::invalid_argument);
    CHECK_THROWS_AS(with_param(base, "stiffness", 1.0), std::invalid_argument);
    CHECK_THROWS_AS(with_param(base, "alpha", 1.5), std::domain_error);
}

TEST_CASE("embedded reference dataset parses with the expected tables") {
    const auto ids = reference_table_ids();
    REQUIRE(ids.size() == 8);
    const char* want[] = {"T1", "T2", "T3", "T4", "T5", "T6", "L-SS", "L-CS"};
    for (size_t i = 0; i < 8; ++i) CHECK(ids[i] == want[i]);
    const auto& tables = reference_tables();
    CHECK(tables.at("tables").contains("T2"));
}

TEST_CASE("validation table reproduces against the closed form") {
    auto rep = reproduce_table("T1", 42);
    CHECK(rep.all_passed());
    CHECK(rep.rendered.find("1.3021") != std::string::npos);
    CHECK(rep.rendered.find("PASS") != std::string::npos);
    CHECK_FALSE(rep.cells.empty());
}

TEST_CASE("trend table with a known bad reference cell still gates") {
    auto rep = reproduce_table("T6", 42);
    CHECK(rep.all_passed());
    int suspects = 0;
    for (const auto& c : rep.cells) {
        if (c.suspect) ++suspects;
    }
    CHECK(suspects >= 1);
    CHECK(rep.rendered.find("excluded") != std::string::npos);
}

TEST_CASE("unknown table ids are rejected with the catalogue") {
    CHECK_THROWS_WITH_AS(reproduce_table("T9", 42),
                         doctest::Contains("T9"), std::invalid_argument);
}

TEST_CASE("sweep emits one row per value and station in request order") {
    SweepRequest req;
    req.base = t2_base(BcKind::SS);
    req.param = "alpha";
    req.values = {0.2, 0.4, 0.6, 0.8};
    req.xs = {0.25, 0.5};
    auto rows = run_sweep(req);
    REQUIRE(rows.size() == 8);
    CHECK(rows[0].param_value == 0.2);
    CHECK(rows[0].x == 0.25);
    CHECK(rows[1].x == 0.5);
    CHECK(rows[7].param_value == 0.8);
    // Thinner walls lose stiffness, so the midpoint deflection rises as
    // alpha falls: rows are ordered by increasing alpha here.
    std::vector<double> mid;
    for (const auto& r : rows) {
        if (r.x == 0.5) mid.push_back(r.w_tilde);
    }
    REQUIRE(mid.size() == 4);
    for (size_t i = 0; i + 1 < mid.size(); ++i) CHECK(mid[i] > mid[i + 1]);
}

TEST_CASE("two-parameter sweeps label each slice") {
    SweepRequest req;
    req.base = BeamConfig(0.5, 2, 0.5, 0.5, 0.0, 5.0, 10.0, BcKind::SS);
    req.param = "phi";
    req.values = {0.1, 0.5};
    req.param2 = "psi";
    req.values2 = {0.2, 0.6};
    auto rows = run_sweep(req);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].param_name == "phi@psi=0.2");
    CHECK(rows[3].param_name == "phi@psi=0.6");
}

TEST_CASE("degenerate sweep requests are rejected") {
    SweepRequest req;
    req.base = t2_base(BcKind::SS);
    req.param = "alpha";
    req.values = {};
    CHECK_THROWS_WITH_AS(run_sweep(req), doctest::Contains("empty sweep range"),
                         std::invalid_argument);
    req.values = {0.5};
    req.xs = {};
    CHECK_THROWS_AS(run_sweep(req), std::invalid_argument);
}

TEST_CASE("sweep csv obeys the column contract and is deterministic") {
    SweepRequest req;
    req.base = t2_base(BcKind::SS);
    req.param = "kp";
    req.values = {1.0, 5.0, 10.0};
    req.xs = {0.5};
    auto rows1 = run_sweep(req);
    auto rows2 = run_sweep(req);
    const std::string csv1 = sweep_csv(rows1, false);
    const std::string csv2 = sweep_csv(rows2, false);
    CHECK(csv1 == csv2);
    const std::string header =
        "param_name,param_value,X,W_tilde,method,loss,wall_time_s\n";
    CHECK(csv1.substr(0, header.size()) == header);
    // Without timings the trailing column stays empty on every data row.
    size_t pos = csv1.find('\n') + 1;
    int data_rows = 0;
    while (pos < csv1.size()) {
        size_t end = csv1.find('\n', pos);
        if (end == std::string::npos) break;
        CHECK(csv1[end - 1] == ',');
        pos = end + 1;
        ++data_rows;
    }
    CHECK(data_rows == 3);
}

TEST_CASE("single-run csv leaves the sweep columns empty") {
    RunRecord rec = run_solver(solid_uniform(0.0), SolverSettings{}, {0.5});
    const std::string csv = samples_csv(rec, false);
    size_t pos = csv.find('\n') + 1;
    REQUIRE(pos != std::string::npos);
    CHECK(csv.substr(pos, 2) == ",,");
}

TEST_CASE("sweep chart renders plottable svg") {
    SweepRequest req;
    req.base = t2_base(BcKind::SS);
    req.param = "alpha";
    req.values = {0.3, 0.5, 0.7, 0.9};
    req.xs = {0.5};
    auto rows = run_sweep(req);
    const std::string svg = sweep_svg(req, rows);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("<polyline") != std::string::npos);
    CHECK(svg.find("alpha") != std::string::npos);
}

TEST_CASE("chart handles empty and log-scale input") {
    const std::string empty = render_line_chart("t", "x", "y", {});
    CHECK(empty.find("<svg") != std::string::npos);
    ChartSeries s;
    s.label = "losses";
    s.points = {{1.0, 1e-3}, {2.0, 1e-7}, {3.0, 0.0}};  // zero dropped on log axis
    const std::string svg = render_line_chart("t", "step", "loss", {s}, true);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("1e-07") == std::string::npos);  // ticks use %.0e formatting
}

TEST_CASE("method comparison report spans the requested solvers") {
    auto rep = compare_methods(solid_uniform(10.0), {0.1, 0.5, 0.9},
                               {"dfl-tfc", "galerkin", "analytic"}, 42);
    REQUIRE(rep.runs.size() == 3);
    CHECK(rep.rendered.find("spread") != std::string::npos);
    for (size_t i = 0; i < 3; ++i) {
        double lo = rep.runs[0].samples[i].w_tilde;
        double hi = lo;
        for (const auto& run : rep.runs) {
            lo = std::min(lo, run.samples[i].w_tilde);
            hi = std::max(hi, run.samples[i].w_tilde);
        }
        CHECK(hi - lo <= 1e-4);
    }
}

TEST_CASE("loss study gates the collocation losses and timings") {
    auto study = run_loss_study(BcKind::SS, 42);
    CHECK(study.all_passed);
    // Three configurations, each with three network depths and three orders.
    CHECK(study.entries.size() == 18);
    for (const auto& e : study.entries) {
        if (e.method == "dfl-tfc") {
            CHECK(e.loss <= 1e-8);
        } else {
            CHECK_FALSE(e.trace.empty());
        }
    }
    CHECK(study.rendered.find("PASS") != std::string::npos);
}

}  // TEST_SUITE
