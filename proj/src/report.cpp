#include "taperbeam/report.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <ctime>
#include <limits>
#include <map>
#include <stdexcept>
#include <thread>

#include "taperbeam/constrained_expression.hpp"
#include "taperbeam/galerkin.hpp"
#include "taperbeam/oracles.hpp"
#include "taperbeam/pinn.hpp"
#include "taperbeam/reference_tables_data.hpp"

namespace taperbeam {

namespace {

using nlohmann::json;

std::string strf(const char* format, ...) {
    char buf[256];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof buf, format, args);
    va_end(args);
    return buf;
}

std::string iso_now() {
    const std::time_t t =
        std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

CollocationGrid make_grid(const SolverSettings& s) {
    return s.grid_kind == GridKind::Uniform
               ? CollocationGrid::uniform(s.grid_points)
               : CollocationGrid::chebyshev_gauss_lobatto(s.grid_points);
}

BeamConfig with_bc(const BeamConfig& c, BcKind bc) {
    return BeamConfig(c.alpha, c.n_holes, c.phi, c.psi, c.gamma, c.q0, c.kp,
                      bc);
}

BeamConfig config_from_json(const json& j) {
    return BeamConfig(j.at("alpha").get<double>(), j.at("n").get<int>(),
                      j.at("phi").get<double>(), j.at("psi").get<double>(),
                      j.at("gamma").get<double>(), j.at("q0").get<double>(),
                      j.at("kp").get<double>(),
                      bc_from_string(j.at("bc").get<std::string>()));
}

BeamConfig apply_overrides(BeamConfig cfg, const json& set) {
    for (const auto& [key, value] : set.items()) {
        cfg = with_param(cfg, key, value.get<double>());
    }
    return cfg;
}

std::string overrides_label(const json& set) {
    if (set.empty()) return "base";
    std::string out;
    for (const auto& [key, value] : set.items()) {
        if (!out.empty()) out += ' ';
        if (key == "n") {
            out += strf("n=%d", static_cast<int>(std::llround(value.get<double>())));
        } else {
            out += strf("%s=%g", key.c_str(), value.get<double>());
        }
    }
    return out;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string pad(const std::string& s, size_t width) {
    return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

}  // namespace

json RunRecord::to_json() const {
    json samples_json = json::array();
    for (const DeflectionSample& s : samples) {
        samples_json.push_back({{"x", s.x}, {"w_tilde", s.w_tilde}});
    }
    return json{
        {"config",
         {{"alpha", cfg.alpha},
          {"n", cfg.n_holes},
          {"phi", cfg.phi},
          {"psi", cfg.psi},
          {"gamma", cfg.gamma},
          {"q0", cfg.q0},
          {"kp", cfg.kp},
          {"bc", to_string(cfg.bc)}}},
        {"settings",
         {{"method", settings.method},
          {"order", settings.order},
          {"galerkin_n", settings.galerkin_n},
          {"hidden_layers", settings.hidden_layers},
          {"grid_points", settings.grid_points},
          {"grid_kind", to_string(settings.grid_kind)},
          {"fd_grid_size", settings.fd_grid_size},
          {"seed", settings.seed}}},
        {"samples", samples_json},
        {"final_loss", final_loss},
        {"wall_time_s", wall_time},
        {"tool_version", tool_version},
        {"timestamp", timestamp},
    };
}

RunRecord RunRecord::from_json(const json& j) {
    RunRecord rec;
    rec.cfg = config_from_json(j.at("config"));
    const json& s = j.at("settings");
    rec.settings.method = s.at("method").get<std::string>();
    rec.settings.order = s.at("order").get<int>();
    rec.settings.galerkin_n = s.at("galerkin_n").get<int>();
    rec.settings.hidden_layers = s.at("hidden_layers").get<int>();
    rec.settings.grid_points = s.at("grid_points").get<int>();
    rec.settings.grid_kind =
        grid_kind_from_string(s.at("grid_kind").get<std::string>());
    rec.settings.fd_grid_size = s.at("fd_grid_size").get<int>();
    rec.settings.seed = s.at("seed").get<unsigned>();
    for (const json& sample : j.at("samples")) {
        rec.samples.push_back({sample.at("x").get<double>(),
                               sample.at("w_tilde").get<double>()});
    }
    rec.final_loss = j.at("final_loss").get<double>();
    rec.wall_time = j.at("wall_time_s").get<double>();
    rec.tool_version = j.value("tool_version", std::string(kToolVersion));
    rec.timestamp = j.value("timestamp", std::string());
    return rec;
}

RunRecord run_solver(const BeamConfig& cfg, const SolverSettings& settings,
                     const std::vector<double>& xs) {
    for (double x : xs) {
        if (!(x >= 0.0 && x <= 1.0)) {
            throw std::invalid_argument(
                strf("sample station %g outside [0, 1]", x));
        }
    }
    RunRecord rec;
    rec.cfg = cfg;
    rec.settings = settings;
    rec.timestamp = iso_now();

    const std::string& m = settings.method;
    if (m == "dfl-tfc" || m == "dfl-tfc-lbfgs") {
        const SolveResult r =
            dfl_tfc_solve(cfg, settings.order, make_grid(settings),
                          m == "dfl-tfc" ? DflMode::LeastSquares : DflMode::Lbfgs);
        const ConstrainedExpression ce = build_ce(cfg.bc);
        for (double x : xs) rec.samples.push_back({x, deflection(r, ce, x)});
        rec.final_loss = r.final_loss;
        rec.wall_time = r.wall_time;
    } else if (m == "galerkin") {
        const SolveResult r = galerkin_solve(cfg, settings.galerkin_n);
        const GalerkinBasis basis = build_basis(cfg.bc, settings.galerkin_n);
        for (double x : xs) {
            rec.samples.push_back({x, galerkin_deflection(basis, r.weights, x)});
        }
        rec.final_loss = r.final_loss;
        rec.wall_time = r.wall_time;
    } else if (m == "pinn") {
        const SolveResult r =
            train_pinn(cfg, pinn_training_settings(), settings.seed,
                       make_grid(settings), settings.hidden_layers);
        const std::vector<int> sizes = mlp_layer_sizes(settings.hidden_layers);
        const Eigen::VectorXd theta = Eigen::Map<const Eigen::VectorXd>(
            r.weights.data(), static_cast<Eigen::Index>(r.weights.size()));
        const MlpParams params =
            MlpParams::from_theta(sizes, theta, settings.seed);
        for (double x : xs) rec.samples.push_back({x, pinn_deflection(params, x)});
        rec.final_loss = r.final_loss;
        rec.wall_time = r.wall_time;
    } else if (m == "fd") {
        const auto start = std::chrono::steady_clock::now();
        const FdSolution sol = fd_solve(cfg, settings.fd_grid_size);
        for (double x : xs) rec.samples.push_back({x, sol.eval(x)});
        rec.final_loss = 0.0;  // not a residual-minimizing method
        rec.wall_time = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
    } else if (m == "analytic") {
        if (cfg.alpha != 1.0 || cfg.n_holes != 0 || cfg.phi != 0.0 ||
            cfg.psi != 0.0 || cfg.gamma != 0.0 || cfg.bc != BcKind::SS) {
            throw std::invalid_argument(
                "analytic closed form covers only the solid uniform beam "
                "with hinged ends under uniform load (alpha=1, n=0, "
                "phi=psi=0, gamma=0, bc=ss)");
        }
        const auto start = std::chrono::steady_clock::now();
        for (double x : xs) {
            rec.samples.push_back({x, analytic_solid_ss(x, cfg.q0, cfg.kp)});
        }
        rec.final_loss = 0.0;
        rec.wall_time = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
    } else {
        throw std::invalid_argument(
            "unknown method: " + m +
            " (expected dfl-tfc, dfl-tfc-lbfgs, galerkin, pinn, fd or "
            "analytic)");
    }
    return rec;
}

BeamConfig with_param(const BeamConfig& base, const std::string& name,
                      double value) {
    double alpha = base.alpha, phi = base.phi, psi = base.psi;
    double gamma = base.gamma, q0 = base.q0, kp = base.kp;
    int n_holes = base.n_holes;
    if (name == "alpha") {
        alpha = value;
    } else if (name == "n" || name == "n_holes") {
        const double r = std::llround(value);
        if (std::abs(value - r) > 1e-9) {
            throw std::invalid_argument("n must be an integer");
        }
        n_holes = static_cast<int>(r);
    } else if (name == "phi") {
        phi = value;
    } else if (name == "psi") {
        psi = value;
    } else if (name == "gamma") {
        gamma = value;
    } else if (name == "q0") {
        q0 = value;
    } else if (name == "kp") {
        kp = value;
    } else {
        throw std::invalid_argument(
            "unknown parameter: " + name +
            " (expected alpha, n, phi, psi, gamma, q0 or kp)");
    }
    return BeamConfig(alpha, n_holes, phi, psi, gamma, q0, kp, base.bc);
}

const json& reference_tables() {
    static const json tables = json::parse(detail::kReferenceTablesJson);
    return tables;
}

std::vector<std::string> reference_table_ids() {
    // deflection tables first, in their published order, then the loss studies
    static const char* preferred[] = {"T1", "T2", "T3",   "T4",
                                      "T5", "T6", "L-SS", "L-CS"};
    const json& tables = reference_tables().at("tables");
    std::vector<std::string> ids;
    for (const char* id : preferred) {
        if (tables.contains(id)) ids.push_back(id);
    }
    for (const auto& [key, value] : tables.items()) {
        (void)value;
        if (std::find(ids.begin(), ids.end(), key) == ids.end()) {
            ids.push_back(key);
        }
    }
    return ids;
}

bool ReproduceReport::all_passed() const {
    for (const CellCheck& c : cells) {
        if (!c.suspect && !c.pass) return false;
    }
    return true;
}

namespace {

std::vector<double> computed_samples(const BeamConfig& cfg,
                                     const std::string& method,
                                     const std::vector<double>& xs,
                                     unsigned seed) {
    SolverSettings settings;
    settings.method = method;
    settings.seed = seed;
    const RunRecord rec = run_solver(cfg, settings, xs);
    std::vector<double> out;
    out.reserve(rec.samples.size());
    for (const DeflectionSample& s : rec.samples) out.push_back(s.w_tilde);
    return out;
}

bool is_suspect(const json& row, const std::string& bc, size_t station) {
    if (!row.contains("suspect")) return false;
    const json& s = row.at("suspect");
    if (!s.contains(bc)) return false;
    for (const json& idx : s.at(bc)) {
        if (idx.get<size_t>() == station) return true;
    }
    return false;
}

std::string render_cells(const std::string& table_id, const std::string& title,
                         const std::vector<CellCheck>& cells,
                         const std::vector<std::string>& notes) {
    std::string out = table_id + "  " + title + "\n\n";
    out += pad("cell", 26) + pad("method", 20) + "   computed  reference" +
           "      |diff|      tol  status\n";
    size_t gated = 0, failed = 0;
    for (const CellCheck& c : cells) {
        const double diff = std::abs(c.computed - c.reference);
        std::string status;
        if (c.suspect) {
            status = "excluded*";
        } else {
            ++gated;
            if (!c.pass) ++failed;
            status = c.pass ? "ok" : "FAIL";
        }
        out += pad(c.label, 26) + pad(c.method, 20) +
               strf("%11.4f%11.4f  %10.2e  %7.0e  ", c.computed, c.reference,
                    diff, c.tolerance) +
               status + "\n";
    }
    out += "\n";
    for (const std::string& n : notes) out += n + "\n";
    if (failed == 0) {
        out += strf("result: PASS (%zu/%zu gated cells)\n", gated, gated);
    } else {
        out += strf("result: FAIL (%zu of %zu gated cells)\n", failed, gated);
    }
    return out;
}

ReproduceReport reproduce_deflection_table(const std::string& table_id,
                                           const json& t, unsigned seed) {
    ReproduceReport rep;
    rep.table_id = table_id;
    const BeamConfig base = config_from_json(t.at("base"));
    const std::vector<double> xs = t.at("x").get<std::vector<double>>();
    const std::vector<std::string> bcs =
        t.at("bcs").get<std::vector<std::string>>();
    const std::vector<std::string> methods =
        t.at("methods").get<std::vector<std::string>>();
    const json& tol = t.at("tolerances");
    std::vector<std::string> notes;
    if (t.contains("note")) notes.push_back("note: " + t.at("note").get<std::string>());

    for (const json& row : t.at("rows")) {
        const json set = row.value("set", json::object());
        const BeamConfig row_cfg = apply_overrides(base, set);
        const std::string row_label = overrides_label(set);
        for (const std::string& bc_name : bcs) {
            const BeamConfig cfg = with_bc(row_cfg, bc_from_string(bc_name));
            std::map<std::string, std::vector<double>> got;
            for (const std::string& m : methods) {
                if (m == "pinn" && !row.contains(bc_name + "_pinn")) continue;
                try {
                    got[m] = computed_samples(cfg, m, xs, seed);
                } catch (const std::exception& e) {
                    notes.push_back("error: " + row_label + " " + bc_name +
                                    " " + m + ": " + e.what());
                }
            }
            for (size_t ix = 0; ix < xs.size(); ++ix) {
                const std::string label =
                    row_label + " " + bc_name + strf(" X=%g", xs[ix]);
                for (const std::string& m : methods) {
                    const std::string ref_key =
                        (m == "pinn") ? bc_name + "_pinn" : bc_name;
                    if (!row.contains(ref_key)) continue;
                    CellCheck c;
                    c.label = label;
                    c.method = m;
                    c.reference = row.at(ref_key).at(ix).get<double>();
                    c.tolerance = tol.at(m).get<double>();
                    c.suspect = (m != "pinn") && is_suspect(row, bc_name, ix);
                    const auto it = got.find(m);
                    if (it == got.end()) {
                        c.computed = std::numeric_limits<double>::quiet_NaN();
                        c.pass = false;
                    } else {
                        c.computed = it->second[ix];
                        c.pass =
                            std::abs(c.computed - c.reference) <= c.tolerance;
                    }
                    rep.cells.push_back(c);
                }
                // cross-check between the two deterministic solvers
                if (tol.contains("mutual") && got.count("dfl-tfc") &&
                    got.count("galerkin")) {
                    CellCheck c;
                    c.label = label;
                    c.method = "dfl-tfc|galerkin";
                    c.computed = got.at("dfl-tfc")[ix];
                    c.reference = got.at("galerkin")[ix];
                    c.tolerance = tol.at("mutual").get<double>();
                    c.pass = std::abs(c.computed - c.reference) <= c.tolerance;
                    rep.cells.push_back(c);
                }
            }
        }
    }
    if (std::any_of(rep.cells.begin(), rep.cells.end(),
                    [](const CellCheck& c) { return c.suspect; })) {
        notes.push_back(
            "* suspect reference value, displayed but excluded from the gate");
    }
    rep.rendered = render_cells(table_id, t.at("title").get<std::string>(),
                                rep.cells, notes);
    return rep;
}

ReproduceReport reproduce_loss_table(const std::string& table_id,
                                     const json& t, unsigned seed) {
    const LossStudyReport study =
        run_loss_study(bc_from_string(t.at("bc").get<std::string>()), seed);
    ReproduceReport rep;
    rep.table_id = table_id;
    rep.rendered = study.rendered;
    const double gate = t.at("gates").at("dfl_loss_max").get<double>();

    std::map<std::string, std::pair<double, double>> times;  // id -> {min pinn, max dfl}
    for (const LossStudyEntry& e : study.entries) {
        CellCheck c;
        c.label = e.config_id + " " + e.variant;
        c.method = e.method;
        c.computed = e.loss;
        c.reference = e.ref_loss;
        if (e.method == "dfl-tfc") {
            c.tolerance = gate;
            c.pass = e.loss <= gate;
        } else {
            // training losses are seed- and machine-dependent, context only
            c.suspect = true;
            c.pass = true;
        }
        rep.cells.push_back(c);
        auto& [pinn_min, dfl_max] = times.try_emplace(
            e.config_id, std::numeric_limits<double>::infinity(), 0.0)
            .first->second;
        if (e.method == "pinn") {
            pinn_min = std::min(pinn_min, e.wall_time);
        } else {
            dfl_max = std::max(dfl_max, e.wall_time);
        }
    }
    for (const auto& [id, minmax] : times) {
        CellCheck c;
        c.label = id + " timing";
        c.method = "dfl-tfc vs pinn";
        c.computed = minmax.second;
        c.reference = minmax.first;
        c.tolerance = 0.0;
        c.pass = minmax.second < minmax.first;
        rep.cells.push_back(c);
    }
    return rep;
}

}  // namespace

ReproduceReport reproduce_table(const std::string& table_id, unsigned seed) {
    const json& tables = reference_tables().at("tables");
    if (!tables.contains(table_id)) {
        std::string known;
        for (const std::string& id : reference_table_ids()) {
            if (!known.empty()) known += ", ";
            known += id;
        }
        throw std::invalid_argument("unknown table id: " + table_id +
                                    " (known: " + known + ")");
    }
    const json& t = tables.at(table_id);
    const std::string kind = t.at("kind").get<std::string>();
    if (kind == "deflection") {
        return reproduce_deflection_table(table_id, t, seed);
    }
    return reproduce_loss_table(table_id, t, seed);
}

LossStudyReport run_loss_study(BcKind bc, unsigned seed) {
    const std::string table_id = (bc == BcKind::SS) ? "L-SS" : "L-CS";
    const json& t = reference_tables().at("tables").at(table_id);
    const std::vector<int> layers = t.at("pinn_layers").get<std::vector<int>>();
    const std::vector<int> orders = t.at("dfl_orders").get<std::vector<int>>();
    const double gate = t.at("gates").at("dfl_loss_max").get<double>();

    LossStudyReport rep;
    rep.bc = bc;
    rep.all_passed = true;
    std::string out =
        table_id + "  " + t.at("title").get<std::string>() + "\n\n";
    out += pad("config", 8) + pad("method", 9) + pad("variant", 10) +
           "       loss   time_s    published loss/time\n";
    std::vector<std::string> gate_lines;

    for (const json& cj : t.at("configs")) {
        const std::string cid = cj.at("id").get<std::string>();
        const BeamConfig cfg = apply_overrides(
            with_bc(BeamConfig(1.0, 0, 0.0, 0.0, 0.0, 1.0, 0.0, BcKind::SS),
                    bc),
            cj.at("set"));
        double pinn_min_time = std::numeric_limits<double>::infinity();
        double dfl_max_time = 0.0;
        bool losses_ok = true;

        for (size_t i = 0; i < layers.size(); ++i) {
            const SolveResult r = train_pinn(cfg, pinn_training_settings(),
                                             seed, CollocationGrid::uniform(),
                                             layers[i]);
            LossStudyEntry e;
            e.config_id = cid;
            e.method = "pinn";
            e.variant =
                strf("%d layer%s", layers[i], layers[i] == 1 ? "" : "s");
            e.loss = r.final_loss;
            e.wall_time = r.wall_time;
            e.ref_loss = cj.at("pinn_loss").at(i).get<double>();
            e.ref_time = cj.at("pinn_time").at(i).get<double>();
            e.trace = r.trace;
            pinn_min_time = std::min(pinn_min_time, e.wall_time);
            out += pad(e.config_id, 8) + pad(e.method, 9) + pad(e.variant, 10) +
                   strf("%11.4e %8.3f    %.4e / %.2fs\n", e.loss, e.wall_time,
                        e.ref_loss, e.ref_time);
            rep.entries.push_back(std::move(e));
        }
        for (size_t i = 0; i < orders.size(); ++i) {
            const SolveResult r = dfl_tfc_solve(cfg, orders[i]);
            LossStudyEntry e;
            e.config_id = cid;
            e.method = "dfl-tfc";
            e.variant = strf("order %d", orders[i]);
            e.loss = r.final_loss;
            e.wall_time = r.wall_time;
            e.ref_loss = cj.at("dfl_loss").at(i).get<double>();
            e.ref_time = cj.at("dfl_time").at(i).get<double>();
            dfl_max_time = std::max(dfl_max_time, e.wall_time);
            losses_ok = losses_ok && e.loss <= gate;
            out += pad(e.config_id, 8) + pad(e.method, 9) + pad(e.variant, 10) +
                   strf("%11.4e %8.3f    %.4e / %.2fs\n", e.loss, e.wall_time,
                        e.ref_loss, e.ref_time);
            rep.entries.push_back(std::move(e));
        }
        const bool faster = dfl_max_time < pinn_min_time;
        gate_lines.push_back(
            strf("%s: collocation losses <= %.0e: %s | slowest collocation "
                 "%.3fs < fastest training %.3fs: %s",
                 cid.c_str(), gate, losses_ok ? "yes" : "NO", dfl_max_time,
                 pinn_min_time, faster ? "yes" : "NO"));
        rep.all_passed = rep.all_passed && losses_ok && faster;
    }

    out += "\npublished losses and times are shown for context only; the "
           "gated properties are below.\n";
    for (const std::string& line : gate_lines) out += line + "\n";
    out += rep.all_passed ? "result: PASS\n" : "result: FAIL\n";
    rep.rendered = out;
    return rep;
}

std::vector<SweepRow> run_sweep(const SweepRequest& req) {
    if (req.param.empty()) {
        throw std::invalid_argument("sweep parameter name required");
    }
    if (req.values.empty()) {
        throw std::invalid_argument("empty sweep range");
    }
    if (req.param2.empty() != req.values2.empty()) {
        throw std::invalid_argument(
            "second sweep parameter needs both a name and values");
    }
    if (req.xs.empty()) {
        throw std::invalid_argument("at least one sample station required");
    }

    struct Task {
        std::string label;
        BeamConfig cfg;
        double value;
    };
    std::vector<Task> tasks;
    if (req.param2.empty()) {
        for (double v : req.values) {
            tasks.push_back({req.param, with_param(req.base, req.param, v), v});
        }
    } else {
        // one slice per secondary value; the label names the slice so each
        // slice renders as its own curve
        for (double u : req.values2) {
            const BeamConfig sliced = with_param(req.base, req.param2, u);
            const std::string label =
                strf("%s@%s=%g", req.param.c_str(), req.param2.c_str(), u);
            for (double v : req.values) {
                tasks.push_back({label, with_param(sliced, req.param, v), v});
            }
        }
    }

    std::vector<std::vector<SweepRow>> results(tasks.size());
    std::vector<std::exception_ptr> errors(tasks.size());
    unsigned workers = req.workers > 0
                           ? static_cast<unsigned>(req.workers)
                           : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(tasks.size()));

    std::atomic<size_t> next{0};
    auto drain = [&]() {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            try {
                const RunRecord rec =
                    run_solver(tasks[i].cfg, req.settings, req.xs);
                for (const DeflectionSample& s : rec.samples) {
                    results[i].push_back({tasks[i].label, tasks[i].value, s.x,
                                          s.w_tilde, req.settings.method,
                                          rec.final_loss, rec.wall_time});
                }
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        drain();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned i = 0; i < workers; ++i) pool.emplace_back(drain);
        for (std::thread& th : pool) th.join();
    }
    for (const std::exception_ptr& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    std::vector<SweepRow> rows;
    for (const auto& part : results) {
        rows.insert(rows.end(), part.begin(), part.end());
    }
    return rows;
}

namespace {

std::string csv_row(const std::string& param_name, const std::string& param_value,
                    double x, double w_tilde, const std::string& method,
                    double loss, double wall_time, bool timings) {
    std::string row = param_name + "," + param_value + ",";
    row += strf("%.10g,%.10g,", x, w_tilde);
    row += method + ",";
    row += strf("%.6e,", loss);
    if (timings) row += strf("%.3f", wall_time);
    row += "\n";
    return row;
}

}  // namespace

std::string sweep_csv(const std::vector<SweepRow>& rows, bool timings) {
    std::string out = "param_name,param_value,X,W_tilde,method,loss,wall_time_s\n";
    for (const SweepRow& r : rows) {
        out += csv_row(r.param_name, strf("%.10g", r.param_value), r.x,
                       r.w_tilde, r.method, r.loss, r.wall_time, timings);
    }
    return out;
}

std::string samples_csv(const RunRecord& record, bool timings) {
    std::string out = "param_name,param_value,X,W_tilde,method,loss,wall_time_s\n";
    for (const DeflectionSample& s : record.samples) {
        out += csv_row("", "", s.x, s.w_tilde, record.settings.method,
                       record.final_loss, record.wall_time, timings);
    }
    return out;
}

std::string render_line_chart(const std::string& title,
                              const std::string& x_label,
                              const std::string& y_label,
                              const std::vector<ChartSeries>& series,
                              bool log_y) {
    constexpr double kWidth = 780.0, kHeight = 480.0;
    constexpr double kLeft = 80.0, kTop = 44.0, kPlotW = 520.0, kPlotH = 370.0;
    static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                     "#9467bd", "#ff7f0e", "#8c564b"};
    constexpr size_t kPaletteSize = sizeof kPalette / sizeof kPalette[0];

    std::vector<std::vector<std::pair<double, double>>> pts(series.size());
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (size_t i = 0; i < series.size(); ++i) {
        for (const auto& [x, y] : series[i].points) {
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            if (log_y && y <= 0.0) continue;
            const double yy = log_y ? std::log10(y) : y;
            pts[i].push_back({x, yy});
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, yy);
            ymax = std::max(ymax, yy);
        }
    }

    std::string svg = strf(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%g\" height=\"%g\" "
        "viewBox=\"0 0 %g %g\" font-family=\"sans-serif\">\n",
        kWidth, kHeight, kWidth, kHeight);
    svg += strf("<rect width=\"%g\" height=\"%g\" fill=\"white\"/>\n", kWidth,
                kHeight);
    svg += strf("<text x=\"%g\" y=\"24\" font-size=\"15\" "
                "text-anchor=\"middle\">%s</text>\n",
                kLeft + kPlotW / 2, xml_escape(title).c_str());

    const bool empty =
        std::all_of(pts.begin(), pts.end(),
                    [](const auto& p) { return p.empty(); });
    if (empty) {
        svg += strf("<text x=\"%g\" y=\"%g\" font-size=\"13\" "
                    "text-anchor=\"middle\">no data</text>\n</svg>\n",
                    kLeft + kPlotW / 2, kTop + kPlotH / 2);
        return svg;
    }

    if (xmax == xmin) {
        xmax += 0.5;
        xmin -= 0.5;
    } else {
        const double padx = 0.02 * (xmax - xmin);
        xmin -= padx;
        xmax += padx;
    }
    if (ymax == ymin) {
        const double pady = std::max(0.5, 0.1 * std::abs(ymax));
        ymax += pady;
        ymin -= pady;
    } else {
        const double pady = 0.05 * (ymax - ymin);
        ymin -= pady;
        ymax += pady;
    }
    auto px = [&](double x) {
        return kLeft + (x - xmin) / (xmax - xmin) * kPlotW;
    };
    auto py = [&](double y) {
        return kTop + kPlotH - (y - ymin) / (ymax - ymin) * kPlotH;
    };

    for (int i = 0; i <= 4; ++i) {
        const double xv = xmin + (xmax - xmin) * i / 4.0;
        const double yv = ymin + (ymax - ymin) * i / 4.0;
        svg += strf("<line x1=\"%.1f\" y1=\"%g\" x2=\"%.1f\" y2=\"%g\" "
                    "stroke=\"#ddd\"/>\n",
                    px(xv), kTop, px(xv), kTop + kPlotH);
        svg += strf("<line x1=\"%g\" y1=\"%.1f\" x2=\"%g\" y2=\"%.1f\" "
                    "stroke=\"#ddd\"/>\n",
                    kLeft, py(yv), kLeft + kPlotW, py(yv));
        svg += strf("<text x=\"%.1f\" y=\"%g\" font-size=\"11\" "
                    "text-anchor=\"middle\">%s</text>\n",
                    px(xv), kTop + kPlotH + 16.0, strf("%.4g", xv).c_str());
        const std::string ylab =
            log_y ? strf("%.0e", std::pow(10.0, yv)) : strf("%.4g", yv);
        svg += strf("<text x=\"%g\" y=\"%.1f\" font-size=\"11\" "
                    "text-anchor=\"end\">%s</text>\n",
                    kLeft - 6.0, py(yv) + 4.0, ylab.c_str());
    }
    svg += strf("<rect x=\"%g\" y=\"%g\" width=\"%g\" height=\"%g\" "
                "fill=\"none\" stroke=\"#333\"/>\n",
                kLeft, kTop, kPlotW, kPlotH);
    svg += strf("<text x=\"%g\" y=\"%g\" font-size=\"12\" "
                "text-anchor=\"middle\">%s</text>\n",
                kLeft + kPlotW / 2, kTop + kPlotH + 38.0,
                xml_escape(x_label).c_str());
    svg += strf("<text x=\"18\" y=\"%g\" font-size=\"12\" "
                "text-anchor=\"middle\" transform=\"rotate(-90 18 %g)\">%s"
                "</text>\n",
                kTop + kPlotH / 2, kTop + kPlotH / 2,
                xml_escape(y_label).c_str());

    for (size_t i = 0; i < series.size(); ++i) {
        if (pts[i].empty()) continue;
        const char* color = kPalette[i % kPaletteSize];
        std::string points;
        for (const auto& [x, y] : pts[i]) {
            points += strf("%.1f,%.1f ", px(x), py(y));
        }
        svg += strf("<polyline points=\"%s\" fill=\"none\" stroke=\"%s\" "
                    "stroke-width=\"1.8\"/>\n",
                    points.c_str(), color);
        if (pts[i].size() <= 40) {
            for (const auto& [x, y] : pts[i]) {
                svg += strf("<circle cx=\"%.1f\" cy=\"%.1f\" r=\"2.5\" "
                            "fill=\"%s\"/>\n",
                            px(x), py(y), color);
            }
        }
        const double ly = kTop + 10.0 + 18.0 * static_cast<double>(i);
        svg += strf("<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" "
                    "stroke=\"%s\" stroke-width=\"2\"/>\n",
                    kLeft + kPlotW + 14.0, ly, kLeft + kPlotW + 38.0, ly,
                    color);
        svg += strf("<text x=\"%g\" y=\"%g\" font-size=\"11\">%s</text>\n",
                    kLeft + kPlotW + 44.0, ly + 4.0,
                    xml_escape(series[i].label).c_str());
    }
    svg += "</svg>\n";
    return svg;
}

std::string sweep_svg(const SweepRequest& req,
                      const std::vector<SweepRow>& rows) {
    std::vector<ChartSeries> series;
    const bool multi_x = req.xs.size() > 1;
    for (const SweepRow& r : rows) {
        std::string label =
            req.param2.empty() ? req.settings.method : r.param_name;
        if (multi_x) label += strf(" X=%g", r.x);
        auto it = std::find_if(series.begin(), series.end(),
                               [&](const ChartSeries& s) {
                                   return s.label == label;
                               });
        if (it == series.end()) {
            series.push_back({label, {}});
            it = series.end() - 1;
        }
        it->points.push_back({r.param_value, r.w_tilde});
    }
    const std::string title =
        req.param + " sweep (" + to_string(req.base.bc) + ")";
    return render_line_chart(title, req.param, "W_tilde", series, false);
}

CompareReport compare_methods(const BeamConfig& cfg,
                              const std::vector<double>& xs,
                              const std::vector<std::string>& methods,
                              unsigned seed) {
    CompareReport rep;
    for (const std::string& m : methods) {
        SolverSettings settings;
        settings.method = m;
        settings.seed = seed;
        rep.runs.push_back(run_solver(cfg, settings, xs));
    }

    std::string out = pad("X", 8);
    for (const RunRecord& r : rep.runs) out += pad(r.settings.method, 15);
    out += "spread\n";
    for (size_t ix = 0; ix < xs.size(); ++ix) {
        out += pad(strf("%g", xs[ix]), 8);
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (const RunRecord& r : rep.runs) {
            const double v = r.samples[ix].w_tilde;
            out += pad(strf("%.6f", v), 15);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        out += strf("%.2e\n", hi - lo);
    }
    out += pad("loss", 8);
    for (const RunRecord& r : rep.runs) {
        out += pad(strf("%.3e", r.final_loss), 15);
    }
    out += "\n" + pad("time_s", 8);
    for (const RunRecord& r : rep.runs) {
        out += pad(strf("%.3f", r.wall_time), 15);
    }
    out += "\n";
    rep.rendered = out;
    return rep;
}

}  // namespace taperbeam
