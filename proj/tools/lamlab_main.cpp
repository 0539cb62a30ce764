#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lamlab/exactz.hpp"
#include "lamlab/json_io.hpp"
#include "lamlab/mc.hpp"
#include "lamlab/util.hpp"

namespace fs = std::filesystem;
using namespace lamlab;

namespace {

constexpr const char* kToolVersion = "lamlab 1.0.0";

struct Options {
    std::string config_path;
    std::string out_dir = "out";
    std::optional<unsigned long long> seed;
    int threads = 0;  // 0: take the config value
    double tolerance = 1e-9;
};

std::string iso_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_json(const fs::path& p, const json& j) { atomic_write_file(p, j.dump(2) + "\n"); }

json load_config(const Options& opt) {
    if (!fs::exists(opt.config_path))
        throw std::invalid_argument("config file not found: " + opt.config_path);
    const json cfg = parse_config(read_file(opt.config_path));
    if (!cfg.is_object() || !cfg.contains("schema") || cfg.at("schema") != kConfigSchema)
        throw std::invalid_argument("config must declare \"schema\": \"" +
                                    std::string(kConfigSchema) + "\"");
    return cfg;
}

struct RunContext {
    Options opt;
    json cfg;
    std::string command;
    std::string started;
    std::vector<std::string> outputs;
    std::vector<unsigned long long> seeds;

    fs::path out(const std::string& name) {
        outputs.push_back(name);
        return fs::path(opt.out_dir) / name;
    }

    void finish() {
        json m;
        m["schema"] = "lamlab/manifest/v1";
        m["command"] = command;
        m["config_digest"] = config_digest(cfg);
        m["tool_version"] = kToolVersion;
        m["rng"] = "splitmix64";
        m["seeds"] = seeds;
        m["started"] = started;
        m["finished"] = iso_now();
        m["outputs"] = outputs;
        write_json(fs::path(opt.out_dir) / "manifest.json", m);
    }
};

LaminatedModel model_from_config(const RunContext& ctx, double lambda_override = -1.0,
                                 double beta_override = -1.0) {
    const json& lam = ctx.cfg.at("laminate");
    check_keys(lam, {"lambda", "l", "rbar", "beta"}, "laminate");
    const HamiltonianFamily fam = family_from_json(ctx.cfg.at("family"), "family");
    const double lambda =
        lambda_override >= 0.0 ? lambda_override : lam.at("lambda").get<double>();
    const double beta = beta_override >= 0.0 ? beta_override : lam.at("beta").get<double>();
    return build_laminated(fam, lambda, lam.at("l").get<int>(), lam.at("rbar").get<int>(), beta,
                           ctx.opt.tolerance);
}

std::string box_str(const ColumnBox& b) {
    return std::to_string(b.i_lo) + ":" + std::to_string(b.i_hi) + ":" + std::to_string(b.k_lo) +
           ":" + std::to_string(b.k_hi);
}

// ---- subcommands ----

void cmd_ground_states(RunContext& ctx) {
    check_keys(ctx.cfg, {"schema", "model", "block_size"}, "config");
    const Hamiltonian h = hamiltonian_from_json(ctx.cfg.at("model"), "model");
    const int bs = ctx.cfg.contains("block_size") ? ctx.cfg.at("block_size").get<int>() : 0;
    const GroundReport rep = ground_states(h, bs, ctx.opt.tolerance);
    write_json(ctx.out("ground_states.json"), ground_report_to_json(rep));
}

void cmd_coarse_grain(RunContext& ctx) {
    check_keys(ctx.cfg, {"schema", "model", "block_size"}, "config");
    const Hamiltonian h = hamiltonian_from_json(ctx.cfg.at("model"), "model");
    const int bs = ctx.cfg.at("block_size").get<int>();

    json key;
    key["model"] = ctx.cfg.at("model");
    key["block_size"] = bs;
    const std::string digest = config_digest(key);

    json out_doc;
    const char* cache_env = std::getenv("LAMLAB_CACHE");
    fs::path cache_file;
    bool hit = false;
    if (cache_env && *cache_env) {
        cache_file = fs::path(cache_env) / (digest + ".block.json");
        if (fs::exists(cache_file)) {
            out_doc = parse_config(read_file(cache_file));
            block_model_from_json(out_doc);  // reject stale or foreign cache entries
            hit = true;
        }
    }
    if (!hit) {
        const BlockModel m = coarse_grain(h, bs);
        out_doc = block_model_to_json(m);
        if (!cache_file.empty()) {
            fs::create_directories(cache_file.parent_path());
            write_json(cache_file, out_doc);
        }
    }
    write_json(ctx.out("block_model.json"), out_doc);
}

void cmd_peierls(RunContext& ctx) {
    check_keys(ctx.cfg, {"schema", "model", "block_size"}, "config");
    const Hamiltonian h = hamiltonian_from_json(ctx.cfg.at("model"), "model");
    const int bs = ctx.cfg.contains("block_size") ? ctx.cfg.at("block_size").get<int>() : 0;
    const GroundReport rep = ground_states(h, bs, ctx.opt.tolerance);
    json j;
    j["schema"] = "lamlab/peierls/v1";
    j["block_size"] = rep.model.block_size;
    j["ground_words"] = rep.ground_words;
    j["min_mean"] = rep.min_mean;
    j["shift"] = rep.shift;
    j["peierls_finite"] = rep.peierls_finite;
    j["peierls_c"] = rep.peierls_finite ? json(rep.peierls_c) : json(nullptr);
    write_json(ctx.out("peierls.json"), j);
}

void cmd_contours(RunContext& ctx) {
    check_keys(ctx.cfg, {"schema", "family", "laminate", "configuration"}, "config");
    const LaminatedModel m = model_from_config(ctx);
    const Configuration c =
        configuration_from_json(ctx.cfg.at("configuration"), m, "configuration");

    const auto labels = classify_columns(c, m);
    long long frustrated = 0, defective = 0, faced = 0;
    std::vector<long long> regular(m.ground_count(), 0);
    for (const auto& [col, lab] : labels) {
        switch (lab.kind) {
            case ColumnKind::regular: ++regular[lab.q]; break;
            case ColumnKind::frustrated: ++frustrated; break;
            case ColumnKind::defective: ++defective; break;
            case ColumnKind::faced: ++faced; break;
        }
    }
    const auto contours = extract_contours(c, m);

    json j;
    j["schema"] = "lamlab/contours/v1";
    j["columns"] = labels.size();
    j["regular"] = regular;
    j["frustrated"] = frustrated;
    j["defective"] = defective;
    j["faced"] = faced;
    j["contours"] = json::array();
    for (const auto& g : contours) j["contours"].push_back(contour_to_json(g));
    write_json(ctx.out("contours.json"), j);

    csv_writer csv({"index", "norm", "n_b", "n_c", "n_d", "volume", "diameter", "exterior_q",
                    "external"});
    for (size_t i = 0; i < contours.size(); ++i) {
        const Contour& g = contours[i];
        csv.row({std::to_string(i), std::to_string(g.norm()), std::to_string(g.n_b),
                 std::to_string(g.n_c), std::to_string(g.n_d), std::to_string(g.volume_total()),
                 std::to_string(g.diameter), std::to_string(g.exterior_q),
                 g.external ? "1" : "0"});
    }
    atomic_write_file(ctx.out("contours.csv"), csv.body);
}

void cmd_audit_bounds(RunContext& ctx) {
    check_keys(ctx.cfg, {"schema", "family", "laminate", "configuration", "audit"}, "config");
    const LaminatedModel m = model_from_config(ctx);
    const Configuration c =
        configuration_from_json(ctx.cfg.at("configuration"), m, "configuration");
    const json& aj = ctx.cfg.at("audit");
    check_keys(aj, {"rho", "tau", "u", "v"}, "audit");

    ParameterReport params;
    if (aj.contains("u") && aj.contains("v")) {
        const double rho = aj.contains("rho") ? aj.at("rho").get<double>()
                                              : default_margin(m, 1.0).rho;
        params = choose_parameters_uv(m.beta, rho, aj.at("u").get<double>(),
                                      aj.at("v").get<double>());
    } else if (aj.contains("tau")) {
        if (aj.contains("rho"))
            params = choose_parameters(m.beta, aj.at("rho").get<double>(),
                                       aj.at("tau").get<double>(), m.spin_count());
        else
            params = default_margin(m, aj.at("tau").get<double>());
    } else {
        throw std::invalid_argument("audit needs either tau or both u and v");
    }

    const auto contours = extract_contours(c, m);
    json j;
    j["schema"] = "lamlab/audit/v1";
    j["parameters"] = parameter_report_to_json(params);
    j["audits"] = json::array();
    csv_writer csv({"index", "psi", "psi_vertical", "psi_horizontal", "norm", "n_b", "n_c",
                    "n_d", "layer_pass", "horizontal_pass", "vertical_pass",
                    "vertical_sound_pass", "combined_pass", "decay_pass"});
    for (size_t i = 0; i < contours.size(); ++i) {
        const BoundAudit a = audit_bounds(contours[i], m, params.rho, params.u, params.v);
        j["audits"].push_back(bound_audit_to_json(a));
        csv.row({std::to_string(i), format_double(a.psi.psi), format_double(a.psi.psi_v),
                 format_double(a.psi.psi_g), std::to_string(a.norm), std::to_string(a.n_b),
                 std::to_string(a.n_c), std::to_string(a.n_d), a.layer_pass ? "1" : "0",
                 a.horizontal_pass ? "1" : "0", a.vertical_pass ? "1" : "0",
                 a.vertical_sound_pass ? "1" : "0", a.combined_pass ? "1" : "0",
                 a.decay_pass ? "1" : "0"});
    }
    write_json(ctx.out("audit.json"), j);
    atomic_write_file(ctx.out("audit.csv"), csv.body);
}

void cmd_exact_z(RunContext& ctx) {
    check_keys(ctx.cfg, {"schema", "family", "laminate", "grid"}, "config");
    const json& lam = ctx.cfg.at("laminate");
    check_keys(lam, {"l", "rbar"}, "laminate");
    const HamiltonianFamily fam = family_from_json(ctx.cfg.at("family"), "family");
    const json& grid = ctx.cfg.at("grid");
    check_keys(grid, {"boxes", "labels", "betas", "lambdas"}, "grid");

    std::vector<ColumnBox> boxes;
    for (const auto& bj : grid.at("boxes")) {
        if (!bj.is_array() || bj.size() != 4)
            throw std::invalid_argument("grid.boxes entries must be [i_lo,i_hi,k_lo,k_hi]");
        boxes.push_back(ColumnBox{bj[0].get<int>(), bj[1].get<int>(), bj[2].get<int>(),
                                  bj[3].get<int>()});
    }
    const auto labels = grid.at("labels").get<std::vector<int>>();
    const auto betas = grid.at("betas").get<std::vector<double>>();
    const auto lambdas = grid.at("lambdas").get<std::vector<double>>();

    csv_writer csv({"box", "q", "beta", "lambda", "xi", "log_xi", "terms", "pool",
                    "collections", "residual"});
    double worst = 0.0;
    long long rows = 0;
    for (double beta : betas)
        for (double lambda : lambdas) {
            const LaminatedModel m =
                build_laminated(fam, lambda, lam.at("l").get<int>(), lam.at("rbar").get<int>(),
                                beta, ctx.opt.tolerance);
            for (const auto& box : boxes)
                for (int q : labels) {
                    const FactorizationReport rep = verify_factorization(box, q, m);
                    worst = std::max(worst, rep.max_residual);
                    ++rows;
                    csv.row({box_str(box), std::to_string(q), format_double(beta),
                             format_double(lambda), format_double(rep.direct.value),
                             format_double(rep.direct.log_value),
                             std::to_string(rep.direct.terms), std::to_string(rep.pool_size),
                             std::to_string(rep.collections),
                             format_double(rep.max_residual)});
                }
        }
    atomic_write_file(ctx.out("exactz.csv"), csv.body);
    json j;
    j["schema"] = "lamlab/exactz/v1";
    j["rows"] = rows;
    j["max_residual"] = worst;
    write_json(ctx.out("exactz.json"), j);
}

void cmd_transfer(RunContext& ctx) {
    check_keys(ctx.cfg, {"schema", "family", "laminate", "transfer"}, "config");
    const json& tj = ctx.cfg.at("transfer");
    check_keys(tj, {"width", "beta"}, "transfer");
    const double beta = tj.at("beta").get<double>();
    const LaminatedModel m = model_from_config(ctx, -1.0, beta);
    const int width = tj.at("width").get<int>();
    const double f = transfer_free_energy(m, width, beta);
    json j;
    j["schema"] = "lamlab/transfer/v1";
    j["width"] = width;
    j["beta"] = beta;
    j["lambda"] = m.vertical.lambda;
    j["free_energy"] = f;
    write_json(ctx.out("transfer.json"), j);
}

std::vector<std::string> measurement_row(const Measurement& meas) {
    std::vector<std::string> cells{std::to_string(meas.sweep)};
    for (double f : meas.fractions) cells.push_back(format_double(f));
    cells.push_back(format_double(meas.energy_per_site));
    cells.push_back(format_double(meas.acceptance));
    cells.push_back(format_double(meas.autocorrelation));
    return cells;
}

std::vector<std::string> measurement_header(int r) {
    std::vector<std::string> head{"sweep"};
    for (int q = 0; q < r; ++q) head.push_back("fraction_" + std::to_string(q));
    head.push_back("energy_per_site");
    head.push_back("acceptance");
    head.push_back("autocorrelation");
    return head;
}

void cmd_sample(RunContext& ctx) {
    check_keys(ctx.cfg, {"schema", "family", "laminate", "chain"}, "config");
    const LaminatedModel m = model_from_config(ctx);
    const json& cj = ctx.cfg.at("chain");
    check_keys(cj, {"window", "boundary_q", "sweeps", "thermalization", "stride", "seed"},
               "chain");
    ChainSpec spec;
    spec.window = window_from_json(cj.at("window"), "chain.window");
    spec.boundary_q = cj.at("boundary_q").get<int>();
    spec.beta = m.beta;
    spec.sweeps = cj.at("sweeps").get<long long>();
    spec.thermalization = cj.at("thermalization").get<long long>();
    spec.stride = cj.contains("stride") ? cj.at("stride").get<long long>() : 1;
    spec.seed = cj.contains("seed") ? cj.at("seed").get<unsigned long long>() : 0;
    if (ctx.opt.seed) spec.seed = *ctx.opt.seed;
    ctx.seeds.push_back(spec.seed);

    Configuration final_state;
    const auto series = run_chain(spec, m, &final_state);

    csv_writer csv(measurement_header(m.ground_count()));
    for (const auto& meas : series) csv.row(measurement_row(meas));
    atomic_write_file(ctx.out("sample.csv"), csv.body);

    json j;
    j["schema"] = "lamlab/sample/v1";
    j["measurements"] = series.size();
    j["final_configuration"] = configuration_to_json(final_state, spec.boundary_q);
    write_json(ctx.out("sample.json"), j);
}

void cmd_scan(RunContext& ctx) {
    check_keys(ctx.cfg, {"schema", "family", "laminate", "scan"}, "config");
    const json& lam = ctx.cfg.at("laminate");
    check_keys(lam, {"l", "rbar"}, "laminate");
    const HamiltonianFamily fam = family_from_json(ctx.cfg.at("family"), "family");
    const json& sj = ctx.cfg.at("scan");
    check_keys(sj,
               {"lambdas", "window", "beta", "reps", "sweeps", "thermalization", "stride",
                "seed", "threads"},
               "scan");
    ScanSpec spec;
    spec.lambdas = sj.at("lambdas").get<std::vector<double>>();
    spec.window = window_from_json(sj.at("window"), "scan.window");
    spec.beta = sj.at("beta").get<double>();
    spec.l = lam.at("l").get<int>();
    spec.rbar = lam.at("rbar").get<int>();
    spec.reps = sj.contains("reps") ? sj.at("reps").get<int>() : 2;
    spec.sweeps = sj.at("sweeps").get<long long>();
    spec.thermalization = sj.at("thermalization").get<long long>();
    spec.stride = sj.contains("stride") ? sj.at("stride").get<long long>() : 1;
    spec.seed = sj.contains("seed") ? sj.at("seed").get<unsigned long long>() : 1;
    spec.threads = sj.contains("threads") ? sj.at("threads").get<int>() : 1;
    if (ctx.opt.seed) spec.seed = *ctx.opt.seed;
    if (ctx.opt.threads > 0) spec.threads = std::min(std::max(spec.threads, 1), ctx.opt.threads);
    ctx.seeds.push_back(spec.seed);

    const ScanResult res = coexistence_scan(fam, spec);
    const int r = static_cast<int>(res.rows.front().own.size());

    auto head = measurement_header(r);
    std::vector<std::string> full{"lambda", "boundary_q", "rep", "seed"};
    full.insert(full.end(), head.begin(), head.end());
    csv_writer cells_csv(full);
    for (const auto& cell : res.cells) {
        ctx.seeds.push_back(cell.seed);
        for (const auto& meas : cell.series) {
            std::vector<std::string> row{format_double(cell.lambda),
                                         std::to_string(cell.boundary_q),
                                         std::to_string(cell.rep), std::to_string(cell.seed)};
            const auto mr = measurement_row(meas);
            row.insert(row.end(), mr.begin(), mr.end());
            cells_csv.row(row);
        }
    }
    atomic_write_file(ctx.out("scan.csv"), cells_csv.body);

    std::vector<std::string> shead{"lambda", "dependence", "dependence_err"};
    for (int q = 0; q < r; ++q) {
        shead.push_back("own_" + std::to_string(q));
        shead.push_back("own_err_" + std::to_string(q));
        shead.push_back("other_" + std::to_string(q));
        shead.push_back("other_err_" + std::to_string(q));
    }
    csv_writer sum_csv(shead);
    for (const auto& row : res.rows) {
        std::vector<std::string> cells{format_double(row.lambda), format_double(row.dependence),
                                       format_double(row.dependence_err)};
        for (int q = 0; q < r; ++q) {
            cells.push_back(format_double(row.own[q]));
            cells.push_back(format_double(row.own_err[q]));
            cells.push_back(format_double(row.other[q]));
            cells.push_back(format_double(row.other_err[q]));
        }
        sum_csv.row(cells);
    }
    atomic_write_file(ctx.out("scan_summary.csv"), sum_csv.body);

    json j;
    j["schema"] = "lamlab/scan/v1";
    j["rng"] = "splitmix64";
    j["update_order"] = "lexicographic sweep";
    j["threshold_lambda"] = res.threshold_lambda;
    write_json(ctx.out("scan.json"), j);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"laminated-model toolkit"};
    app.require_subcommand(1);

    Options opt;
    const std::vector<std::pair<std::string, void (*)(RunContext&)>> commands = {
        {"ground-states", cmd_ground_states}, {"coarse-grain", cmd_coarse_grain},
        {"peierls", cmd_peierls},             {"contours", cmd_contours},
        {"audit-bounds", cmd_audit_bounds},   {"exact-z", cmd_exact_z},
        {"transfer", cmd_transfer},           {"sample", cmd_sample},
        {"scan", cmd_scan},
    };
    for (const auto& [name, fn] : commands) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", opt.config_path, "JSON config path")->required();
        sub->add_option("--out", opt.out_dir, "output directory");
        sub->add_option("--seed", opt.seed, "override the config seed");
        sub->add_option("--threads", opt.threads, "cap worker threads");
        sub->add_option("--tolerance", opt.tolerance, "relative tolerance");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    }

    RunContext ctx;
    ctx.opt = opt;
    ctx.started = iso_now();
    try {
        ctx.cfg = load_config(opt);
        fs::create_directories(opt.out_dir);
        for (const auto& [name, fn] : commands)
            if (app.get_subcommand(name)->parsed()) {
                ctx.command = name;
                fn(ctx);
            }
        ctx.finish();
    } catch (const capacity_error& e) {
        std::cerr << "capacity error: " << e.what() << "\n";
        return 3;
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
