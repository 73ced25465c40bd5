#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "taperbeam/pinn.hpp"
#include "taperbeam/report.hpp"

namespace {

using taperbeam::BcKind;
using taperbeam::BeamConfig;
using taperbeam::RunRecord;
using taperbeam::SolverSettings;

// Config files may be TOML (the CLI11 default) or a flat JSON object of
// flag defaults; the two are told apart by the first non-space character.
// Flags given on the command line override either form.
class FlexibleConfig : public CLI::ConfigTOML {
  public:
    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        std::string content{std::istreambuf_iterator<char>(input),
                            std::istreambuf_iterator<char>()};
        const size_t first = content.find_first_not_of(" \t\r\n");
        if (first != std::string::npos && content[first] == '{') {
            const nlohmann::json j = nlohmann::json::parse(content);
            std::vector<CLI::ConfigItem> items;
            for (const auto& [key, value] : j.items()) {
                CLI::ConfigItem item;
                item.name = key;
                if (value.is_array()) {
                    for (const auto& v : value) item.inputs.push_back(scalar(v));
                } else {
                    item.inputs.push_back(scalar(value));
                }
                items.push_back(std::move(item));
            }
            return items;
        }
        std::istringstream rest(content);
        return CLI::ConfigTOML::from_config(rest);
    }

  private:
    static std::string scalar(const nlohmann::json& v) {
        return v.is_string() ? v.get<std::string>() : v.dump();
    }
};

struct BeamFlags {
    double alpha = 1.0;
    int n = 0;
    double phi = 0.0;
    double psi = 0.0;
    double gamma = 0.0;
    double q0 = 1.0;
    double kp = 0.0;
    std::string bc = "ss";

    BeamConfig build() const {
        return BeamConfig(alpha, n, phi, psi, gamma, q0, kp,
                          taperbeam::bc_from_string(bc));
    }
};

struct MethodFlags {
    SolverSettings settings;
    std::string grid = "uniform";

    SolverSettings build() const {
        SolverSettings s = settings;
        s.grid_kind = taperbeam::grid_kind_from_string(grid);
        return s;
    }
};

struct OutputFlags {
    std::string json_path;
    std::string csv_path;
    std::string svg_path;
    bool timings = false;
};

void add_beam_flags(CLI::App* cmd, BeamFlags& f) {
    cmd->add_option("--alpha", f.alpha, "filling ratio, in (0, 1]")
        ->capture_default_str();
    cmd->add_option("--n", f.n, "number of holes, >= 0")->capture_default_str();
    cmd->add_option("--phi", f.phi, "linear taper coefficient")
        ->capture_default_str();
    cmd->add_option("--psi", f.psi, "quadratic taper coefficient")
        ->capture_default_str();
    cmd->add_option("--gamma", f.gamma, "exponent of the load distribution")
        ->capture_default_str();
    cmd->add_option("--q0", f.q0, "load amplitude, >= 0")->capture_default_str();
    cmd->add_option("--kp", f.kp, "shear foundation stiffness, >= 0")
        ->capture_default_str();
    cmd->add_option("--bc", f.bc, "end conditions: hinged-hinged or clamped-hinged")
        ->check(CLI::IsMember({"ss", "cs"}))
        ->capture_default_str();
}

void add_method_flags(CLI::App* cmd, MethodFlags& f) {
    cmd->add_option("--method", f.settings.method, "solution method")
        ->check(CLI::IsMember({"dfl-tfc", "dfl-tfc-lbfgs", "galerkin", "pinn",
                               "fd", "analytic"}))
        ->capture_default_str();
    cmd->add_option("--order", f.settings.order, "expansion degree (dfl-tfc)")
        ->capture_default_str();
    cmd->add_option("--galerkin-n", f.settings.galerkin_n,
                    "total polynomial index (galerkin)")
        ->capture_default_str();
    cmd->add_option("--hidden-layers", f.settings.hidden_layers,
                    "hidden layer count (pinn)")
        ->capture_default_str();
    cmd->add_option("--grid", f.grid, "collocation grid")
        ->check(CLI::IsMember({"uniform", "cgl"}))
        ->capture_default_str();
    cmd->add_option("--grid-points", f.settings.grid_points,
                    "collocation point count")
        ->capture_default_str();
    cmd->add_option("--fd-grid-size", f.settings.fd_grid_size,
                    "finite-difference node count (fd)")
        ->capture_default_str();
    cmd->add_option("--seed", f.settings.seed,
                    "network initialization seed (default from TAPERBEAM_SEED "
                    "or 42)")
        ->capture_default_str();
}

void add_output_flags(CLI::App* cmd, OutputFlags& f) {
    cmd->add_option("--json", f.json_path, "write a JSON run record ('-' for stdout)");
    cmd->add_option("--csv", f.csv_path, "write CSV samples ('-' for stdout)");
    cmd->add_option("--svg", f.svg_path, "write an SVG plot");
    cmd->add_flag("--timings", f.timings, "include wall times in the CSV");
}

// CLI11 processes set_config only on the top-level app, so each subcommand
// carries a plain --config option and applies the file itself at the start
// of its callback.  Only options absent from the command line are filled in,
// which is what makes explicit flags win over file values.
void use_config_file(CLI::App* cmd) {
    cmd->add_option("--config",
                    "read flag defaults from a TOML or JSON file; explicit "
                    "flags win over file values");
}

void apply_config_file(CLI::App* cmd) {
    CLI::Option* copt = cmd->get_option("--config");
    if (copt->count() == 0) return;
    const auto path = copt->as<std::string>();
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config file " + path);
    const FlexibleConfig fmt;
    for (const CLI::ConfigItem& item : fmt.from_config(in)) {
        if (!item.parents.empty()) {
            throw std::runtime_error("config keys must be top level: " +
                                     item.fullname());
        }
        CLI::Option* opt = cmd->get_option_no_throw("--" + item.name);
        if (opt == nullptr) opt = cmd->get_option_no_throw(item.name);
        if (opt == nullptr) {
            throw std::runtime_error("unknown config key '" + item.name + "'");
        }
        if (!opt->empty()) continue;
        if (opt->get_expected_min() == 0 && item.inputs.size() <= 1) {
            opt->add_result(opt->get_flag_value(item.name, fmt.to_flag(item)));
        } else {
            opt->add_result(item.inputs);
        }
        opt->run_callback();
    }
}

void write_output(const std::string& path, const std::string& content) {
    if (path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

std::vector<double> linspace(double from, double to, int count) {
    std::vector<double> out;
    if (count == 1) {
        out.push_back(from);
        return out;
    }
    for (int i = 0; i < count; ++i) {
        out.push_back(from + (to - from) * i / (count - 1));
    }
    return out;
}

struct RangeFlags {
    std::vector<double> values;
    double from = std::numeric_limits<double>::quiet_NaN();
    double to = std::numeric_limits<double>::quiet_NaN();
    int count = 0;

    std::vector<double> build(const std::string& what) const {
        if (!values.empty()) {
            if (count != 0 || std::isfinite(from) || std::isfinite(to)) {
                throw CLI::ValidationError(
                    what, "give either explicit values or a from/to/count range");
            }
            return values;
        }
        if (count <= 0) {
            throw CLI::ValidationError(what,
                                       "empty sweep range: give values or a "
                                       "from/to/count range");
        }
        if (!std::isfinite(from) || !std::isfinite(to)) {
            throw CLI::ValidationError(what, "a from/to/count range needs both ends");
        }
        return linspace(from, to, count);
    }
};

}  // namespace

int main(int argc, char** argv) {
    unsigned default_seed = 42;
    try {
        default_seed = taperbeam::default_pinn_seed();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    CLI::App app{"static bending of tapered perforated beams on a Pasternak "
                 "foundation under exponentially distributed load"};
    app.require_subcommand(1);
    int exit_code = 0;

    // solve
    auto* solve = app.add_subcommand("solve", "run one solver on one configuration");
    BeamFlags solve_beam;
    MethodFlags solve_method;
    OutputFlags solve_out;
    std::vector<double> solve_at;
    solve_method.settings.seed = default_seed;
    add_beam_flags(solve, solve_beam);
    add_method_flags(solve, solve_method);
    add_output_flags(solve, solve_out);
    solve->add_option("--at", solve_at, "sample station in [0, 1], repeatable");
    use_config_file(solve);
    solve->callback([&] {
        apply_config_file(solve);
        const BeamConfig cfg = solve_beam.build();
        const SolverSettings settings = solve_method.build();
        const std::vector<double> xs =
            solve_at.empty() ? std::vector<double>{0.5} : solve_at;
        const RunRecord rec = taperbeam::run_solver(cfg, settings, xs);
        std::printf("method: %s  loss: %.6e  time: %.3fs\n",
                    rec.settings.method.c_str(), rec.final_loss, rec.wall_time);
        for (const taperbeam::DeflectionSample& s : rec.samples) {
            std::printf("X=%.4f  W=%.4f\n", s.x, s.w_tilde);
        }
        if (!solve_out.json_path.empty()) {
            write_output(solve_out.json_path, rec.to_json().dump(2) + "\n");
        }
        if (!solve_out.csv_path.empty()) {
            write_output(solve_out.csv_path,
                         taperbeam::samples_csv(rec, solve_out.timings));
        }
        if (!solve_out.svg_path.empty()) {
            taperbeam::ChartSeries series{rec.settings.method, {}};
            for (const taperbeam::DeflectionSample& s : rec.samples) {
                series.points.push_back({s.x, s.w_tilde});
            }
            write_output(solve_out.svg_path,
                         taperbeam::render_line_chart("deflection profile", "X",
                                                      "W_tilde", {series}));
        }
    });

    // reproduce
    auto* reproduce =
        app.add_subcommand("reproduce", "rerun one reference table and check "
                                        "every cell against its tolerance");
    std::string reproduce_id;
    unsigned reproduce_seed = default_seed;
    std::string reproduce_json;
    reproduce->add_option("table", reproduce_id, "table id (T1..T6, L-SS, L-CS)");
    reproduce->add_option("--seed", reproduce_seed,
                          "network initialization seed")
        ->capture_default_str();
    reproduce->add_option("--json", reproduce_json,
                          "write the cell checks as JSON ('-' for stdout)");
    use_config_file(reproduce);
    reproduce->callback([&] {
        apply_config_file(reproduce);
        if (reproduce_id.empty()) throw CLI::RequiredError("table");
        const taperbeam::ReproduceReport rep =
            taperbeam::reproduce_table(reproduce_id, reproduce_seed);
        std::cout << rep.rendered;
        if (!reproduce_json.empty()) {
            nlohmann::json cells = nlohmann::json::array();
            for (const taperbeam::CellCheck& c : rep.cells) {
                cells.push_back({{"label", c.label},
                                 {"method", c.method},
                                 {"computed", c.computed},
                                 {"reference", c.reference},
                                 {"tolerance", c.tolerance},
                                 {"suspect", c.suspect},
                                 {"pass", c.pass}});
            }
            write_output(reproduce_json,
                         nlohmann::json{{"table", rep.table_id},
                                        {"cells", cells},
                                        {"all_passed", rep.all_passed()}}
                                 .dump(2) +
                             "\n");
        }
        if (!rep.all_passed()) exit_code = 1;
    });

    // sweep
    auto* sweep = app.add_subcommand(
        "sweep", "vary one or two parameters and tabulate the deflection");
    BeamFlags sweep_beam;
    MethodFlags sweep_method;
    OutputFlags sweep_out;
    std::vector<double> sweep_at;
    std::string sweep_param, sweep_param2;
    RangeFlags sweep_range, sweep_range2;
    int sweep_workers = 0;
    sweep_method.settings.seed = default_seed;
    add_beam_flags(sweep, sweep_beam);
    add_method_flags(sweep, sweep_method);
    add_output_flags(sweep, sweep_out);
    sweep->add_option("--at", sweep_at, "sample station in [0, 1], repeatable");
    sweep->add_option("--param", sweep_param,
                      "swept parameter (alpha, n, phi, psi, gamma, q0, kp)");
    sweep->add_option("--values", sweep_range.values, "explicit sweep values");
    sweep->add_option("--from", sweep_range.from, "range start");
    sweep->add_option("--to", sweep_range.to, "range end");
    sweep->add_option("--count", sweep_range.count, "range point count");
    sweep->add_option("--param2", sweep_param2, "secondary parameter, one curve per value");
    sweep->add_option("--values2", sweep_range2.values, "secondary explicit values");
    sweep->add_option("--from2", sweep_range2.from, "secondary range start");
    sweep->add_option("--to2", sweep_range2.to, "secondary range end");
    sweep->add_option("--count2", sweep_range2.count, "secondary range point count");
    sweep->add_option("--workers", sweep_workers,
                      "worker thread count (0 = hardware)");
    use_config_file(sweep);
    sweep->callback([&] {
        apply_config_file(sweep);
        if (sweep_param.empty()) throw CLI::RequiredError("--param");
        taperbeam::SweepRequest req;
        req.base = sweep_beam.build();
        req.settings = sweep_method.build();
        req.param = sweep_param;
        req.values = sweep_range.build("--values");
        req.param2 = sweep_param2;
        if (!sweep_param2.empty()) {
            req.values2 = sweep_range2.build("--values2");
        }
        if (!sweep_at.empty()) req.xs = sweep_at;
        req.workers = sweep_workers;
        req.timings = sweep_out.timings;
        const std::vector<taperbeam::SweepRow> rows = taperbeam::run_sweep(req);
        const std::string csv = taperbeam::sweep_csv(rows, req.timings);
        if (sweep_out.csv_path.empty()) {
            std::cout << csv;
        } else {
            write_output(sweep_out.csv_path, csv);
        }
        if (!sweep_out.svg_path.empty()) {
            write_output(sweep_out.svg_path, taperbeam::sweep_svg(req, rows));
        }
    });

    // compare
    auto* compare = app.add_subcommand(
        "compare", "run several methods on one configuration and diff them");
    BeamFlags compare_beam;
    OutputFlags compare_out;
    std::vector<double> compare_at;
    std::vector<std::string> compare_methods_list{"dfl-tfc", "galerkin", "pinn",
                                                  "fd"};
    unsigned compare_seed = default_seed;
    add_beam_flags(compare, compare_beam);
    compare->add_option("--methods", compare_methods_list, "methods to compare")
        ->capture_default_str();
    compare->add_option("--at", compare_at, "sample station in [0, 1], repeatable");
    compare->add_option("--seed", compare_seed, "network initialization seed")
        ->capture_default_str();
    compare->add_option("--json", compare_out.json_path,
                        "write the run records as JSON ('-' for stdout)");
    use_config_file(compare);
    compare->callback([&] {
        apply_config_file(compare);
        const BeamConfig cfg = compare_beam.build();
        const std::vector<double> xs =
            compare_at.empty() ? std::vector<double>{0.1, 0.5, 0.9} : compare_at;
        const taperbeam::CompareReport rep =
            taperbeam::compare_methods(cfg, xs, compare_methods_list,
                                       compare_seed);
        std::cout << rep.rendered;
        if (!compare_out.json_path.empty()) {
            nlohmann::json runs = nlohmann::json::array();
            for (const RunRecord& r : rep.runs) runs.push_back(r.to_json());
            write_output(compare_out.json_path, runs.dump(2) + "\n");
        }
    });

    // loss-study
    auto* study = app.add_subcommand(
        "loss-study", "rerun the depth-vs-order training comparison");
    std::string study_bc = "both";
    unsigned study_seed = default_seed;
    std::string study_json, study_svg;
    study->add_option("--bc", study_bc, "end conditions to study")
        ->check(CLI::IsMember({"ss", "cs", "both"}))
        ->capture_default_str();
    study->add_option("--seed", study_seed, "network initialization seed")
        ->capture_default_str();
    study->add_option("--json", study_json,
                      "write the study entries as JSON ('-' for stdout)");
    study->add_option("--svg", study_svg,
                      "write the training loss traces as an SVG plot");
    use_config_file(study);
    study->callback([&] {
        apply_config_file(study);
        std::vector<BcKind> kinds;
        if (study_bc == "ss" || study_bc == "both") kinds.push_back(BcKind::SS);
        if (study_bc == "cs" || study_bc == "both") kinds.push_back(BcKind::CS);
        nlohmann::json all = nlohmann::json::array();
        std::vector<taperbeam::ChartSeries> traces;
        for (BcKind bc : kinds) {
            const taperbeam::LossStudyReport rep =
                taperbeam::run_loss_study(bc, study_seed);
            std::cout << rep.rendered << "\n";
            if (!rep.all_passed) exit_code = 1;
            for (const taperbeam::LossStudyEntry& e : rep.entries) {
                all.push_back({{"bc", taperbeam::to_string(bc)},
                               {"config", e.config_id},
                               {"method", e.method},
                               {"variant", e.variant},
                               {"loss", e.loss},
                               {"wall_time_s", e.wall_time},
                               {"published_loss", e.ref_loss},
                               {"published_time_s", e.ref_time}});
                if (!e.trace.empty()) {
                    taperbeam::ChartSeries s;
                    s.label = std::string(taperbeam::to_string(bc)) + " " +
                              e.config_id + " " + e.variant;
                    for (size_t i = 0; i < e.trace.size(); ++i) {
                        s.points.push_back(
                            {static_cast<double>(i + 1), e.trace[i]});
                    }
                    traces.push_back(std::move(s));
                }
            }
        }
        if (!study_json.empty()) write_output(study_json, all.dump(2) + "\n");
        if (!study_svg.empty()) {
            write_output(study_svg,
                         taperbeam::render_line_chart(
                             "training loss per outer step", "outer step",
                             "loss", traces, /*log_y=*/true));
        }
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return exit_code;
}
