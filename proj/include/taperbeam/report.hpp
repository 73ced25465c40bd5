#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "taperbeam/beam.hpp"
#include "taperbeam/dfl_tfc.hpp"

namespace taperbeam {

inline constexpr const char* kToolVersion = "0.1.0";

struct DeflectionSample {
    double x;
    double w_tilde;
};

// Everything needed to rerun one solve.
struct SolverSettings {
    std::string method = "dfl-tfc";  // dfl-tfc | dfl-tfc-lbfgs | galerkin |
                                     // pinn | fd | analytic
    int order = 15;                  // Chebyshev degree, dfl paths
    int galerkin_n = 15;
    int hidden_layers = 3;           // pinn
    int grid_points = 100;
    GridKind grid_kind = GridKind::Uniform;
    int fd_grid_size = 401;
    unsigned seed = 42;
};

struct RunRecord {
    BeamConfig cfg{1.0, 0, 0.0, 0.0, 0.0, 1.0, 0.0, BcKind::SS};
    SolverSettings settings;
    std::vector<DeflectionSample> samples;
    double final_loss = 0.0;
    double wall_time = 0.0;
    std::string tool_version = kToolVersion;
    std::string timestamp;  // ISO 8601, set at run time, JSON only

    nlohmann::json to_json() const;
    static RunRecord from_json(const nlohmann::json& j);
};

// Dispatches to the solver named in settings and samples the deflection.
RunRecord run_solver(const BeamConfig& cfg, const SolverSettings& settings,
                     const std::vector<double>& xs);

// Copy of base with one named parameter replaced; revalidates.
BeamConfig with_param(const BeamConfig& base, const std::string& name,
                      double value);

// Parsed embedded reference dataset (data/reference_tables.json).
const nlohmann::json& reference_tables();
std::vector<std::string> reference_table_ids();

struct CellCheck {
    std::string label;
    std::string method;
    double computed = 0.0;
    double reference = 0.0;
    double tolerance = 0.0;
    bool suspect = false;  // display only, never gates
    bool pass = true;
};

struct ReproduceReport {
    std::string table_id;
    std::vector<CellCheck> cells;
    std::string rendered;

    bool all_passed() const;
};

// Runs every cell of one reference table and renders computed vs reference
// values with per-method tolerances. Suspect reference cells are shown with
// a marker and excluded from the gate.
ReproduceReport reproduce_table(const std::string& table_id, unsigned seed);

struct SweepRow {
    std::string param_name;
    double param_value;
    double x;
    double w_tilde;
    std::string method;
    double loss;
    double wall_time;
};

struct SweepRequest {
    BeamConfig base{1.0, 0, 0.0, 0.0, 0.0, 1.0, 0.0, BcKind::SS};
    std::string param;
    std::vector<double> values;
    std::string param2;             // empty for single-parameter sweeps
    std::vector<double> values2;
    std::vector<double> xs{0.5};
    SolverSettings settings;
    int workers = 0;                // 0 = hardware concurrency
    bool timings = false;           // include wall times in the CSV
};

// One row per (sweep value, X sample), in deterministic order regardless of
// worker scheduling. For two-parameter sweeps the rows of each secondary
// value form their own curve and param_name carries the slice label.
std::vector<SweepRow> run_sweep(const SweepRequest& req);

// Column contract: param_name,param_value,X,W_tilde,method,loss,wall_time_s.
// Byte-identical across reruns; wall_time_s stays empty unless timings.
std::string sweep_csv(const std::vector<SweepRow>& rows, bool timings);

std::string samples_csv(const RunRecord& record, bool timings);

struct ChartSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

std::string render_line_chart(const std::string& title,
                              const std::string& x_label,
                              const std::string& y_label,
                              const std::vector<ChartSeries>& series,
                              bool log_y = false);

std::string sweep_svg(const SweepRequest& req,
                      const std::vector<SweepRow>& rows);

struct CompareReport {
    std::vector<RunRecord> runs;
    std::string rendered;
};

CompareReport compare_methods(const BeamConfig& cfg,
                              const std::vector<double>& xs,
                              const std::vector<std::string>& methods,
                              unsigned seed);

struct LossStudyEntry {
    std::string config_id;
    std::string method;   // "pinn" or "dfl-tfc"
    std::string variant;  // "1 layer" .. "3 layers" or "order 13" .. "order 15"
    double loss = 0.0;
    double wall_time = 0.0;
    double ref_loss = 0.0;  // published value, context only
    double ref_time = 0.0;
    std::vector<double> trace;
};

struct LossStudyReport {
    BcKind bc;
    std::vector<LossStudyEntry> entries;
    std::string rendered;
    bool all_passed = false;  // solver loss and timing properties
};

// Reruns the loss study configurations: the network with one, two and three
// hidden layers against the collocation solve at orders 13, 14 and 15.
// Published loss/time values are displayed for context; the asserted
// properties are collocation loss <= 1e-8 and collocation time below
// training time on every configuration.
LossStudyReport run_loss_study(BcKind bc, unsigned seed);

}  // namespace taperbeam
