#include "posmap/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "posmap/json_io.hpp"

namespace posmap {

namespace {

struct MapSource {
    std::string in_path;
    std::string gallery;
    int d = 2;
    double a = 0.0;
    double lambda = 0.0;
    std::string inner = "identity";
    std::string unitary_path;
};

void add_map_source(CLI::App* cmd, MapSource& src) {
    cmd->add_option("--in", src.in_path, "map JSON file");
    cmd->add_option("--gallery", src.gallery,
                    "identity|transposition|pinching|depolarizing_contraction|phi_a|phi_aT|"
                    "unitary_conjugation|spa_mix");
    cmd->add_option("--d", src.d, "dimension for gallery maps");
    cmd->add_option("--a", src.a, "family parameter");
    cmd->add_option("--lambda", src.lambda, "mixing weight for spa_mix");
    cmd->add_option("--inner", src.inner, "inner gallery map for spa_mix");
    cmd->add_option("--unitary", src.unitary_path, "matrix JSON file with a unitary");
}

MapRep gallery_by_name(const std::string& name, const MapSource& src) {
    if (name == "identity") return identity_map(src.d);
    if (name == "transposition") return transposition_map(src.d);
    if (name == "pinching") {
        if (!src.unitary_path.empty())
            return pinching_map(matrix_from_json(load_json_file(src.unitary_path)));
        return pinching_map(src.d);
    }
    if (name == "depolarizing_contraction") return depolarizing_contraction(src.d);
    if (name == "phi_a") return phi_family(src.d, src.a);
    if (name == "phi_aT") return phi_family_transposed(src.d, src.a);
    if (name == "unitary_conjugation") {
        if (src.unitary_path.empty()) throw ParseError("unitary_conjugation requires --unitary");
        return unitary_conjugation(matrix_from_json(load_json_file(src.unitary_path)));
    }
    if (name == "spa_mix") {
        MapSource inner_src = src;
        inner_src.gallery.clear();
        return spa_mix(gallery_by_name(src.inner, inner_src), src.lambda);
    }
    throw BadParameter("unknown gallery map: " + name);
}

MapRep resolve_map(const MapSource& src) {
    if (!src.in_path.empty()) return map_from_json(load_json_file(src.in_path));
    if (!src.gallery.empty()) return gallery_by_name(src.gallery, src);
    throw ParseError("no input map: pass --in or --gallery");
}

void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
    if (out_path.empty()) {
        out << text << "\n";
        return;
    }
    std::ofstream file(out_path);
    if (!file) throw ParseError("cannot open output file: " + out_path);
    file << text << "\n";
}

// ------------------------------- analyze -----------------------------------

struct AnalyzeConfig {
    MapSource src;
    std::uint64_t seed = 0;
    double tol = kDefaultViolationTol;
    int restarts = 0;  // 0 keeps per-falsifier defaults
    bool skip_decomposable = false;
    std::string out_path;
};

int cmd_analyze(const AnalyzeConfig& cfg, std::ostream& out) {
    const MapRep map = resolve_map(cfg.src);
    if (map.dim() > 8)
        throw ResourceLimit("hierarchy classification is limited to d <= 8");
    const StructuralFlags flags = structural_flags(map);

    Json report;
    report["d"] = map.dim();
    report["flags"] = flags_to_json(flags);
    if (flags.hermiticity_preserving != TriState::Yes) {
        report["hierarchy"] = nullptr;
        report["status"] = "hierarchy skipped: map is not Hermiticity-preserving";
    } else {
        ClassifyOptions opts;
        opts.positivity.seed = cfg.seed;
        opts.positivity.tol = cfg.tol;
        opts.schwarz.seed = cfg.seed;
        opts.schwarz.tol = cfg.tol;
        if (cfg.restarts > 0) {
            opts.positivity.restarts = cfg.restarts;
            opts.schwarz.restarts = cfg.restarts;
        }
        opts.run_decomposable = !cfg.skip_decomposable;
        report["hierarchy"] = hierarchy_to_json(classify(map, opts));
        report["status"] = "ok";
    }
    emit(report.dump(2), cfg.out_path, out);
    return 0;
}

// -------------------------------- sweep -------------------------------------

struct SweepConfig {
    std::string family = "plain";
    int d = 2;
    double a_min = 0.0;
    double a_max = 1.0;
    int steps = 11;
    std::string property = "P";
    int n = 1;
    std::uint64_t seed = 0;
    int restarts = 0;
    std::string out_path;
    bool csv = false;
};

struct SweepRow {
    double a = 0.0;
    std::string status;
    double value = 0.0;
    bool oracle = false;
};

bool sweep_point_refuted(const MapRep& map, const std::string& property, int n, int d,
                         std::uint64_t seed, int restarts, double* value,
                         std::string* status) {
    PositivityVerdict v;
    if (property == "CP" || (property == "P" && n >= d) || (property == "S" && n >= d)) {
        v = check_cp(map);
    } else if (property == "P") {
        FalsifierOptions opts;
        opts.seed = seed;
        if (restarts > 0) opts.restarts = restarts;
        v = falsify_n_positivity(map, n, opts);
    } else if (property == "S") {
        SchwarzOptions opts;
        opts.seed = seed;
        if (restarts > 0) opts.restarts = restarts;
        v = falsify_generalized_schwarz(map, n, opts);
    } else {
        throw BadParameter("property must be P, S or CP");
    }
    *value = v.witness.has_value() ? v.witness->value
                                   : (v.spectral.has_value() ? v.spectral->min_eigenvalue : 0.0);
    *status = v.status == VerdictStatus::Refuted
                  ? "refuted"
                  : (v.status == VerdictStatus::Certified ? "certified" : "undetermined");
    return v.status == VerdictStatus::Refuted;
}

int cmd_sweep(const SweepConfig& cfg, std::ostream& out) {
    if (cfg.steps < 2) throw BadParameter("sweep needs at least 2 steps");
    const PhiFamilyKind kind =
        cfg.family == "plain"
            ? PhiFamilyKind::Plain
            : (cfg.family == "transposed" ? PhiFamilyKind::Transposed
                                          : throw BadParameter("family must be plain|transposed"));
    const OracleProperty oracle_prop =
        cfg.property == "P" ? OracleProperty::NPositive
                            : (cfg.property == "S" ? OracleProperty::Schwarz
                                                   : OracleProperty::CompletelyPositive);

    std::vector<SweepRow> rows;
    for (int i = 0; i < cfg.steps; ++i) {
        SweepRow row;
        row.a = cfg.a_min + (cfg.a_max - cfg.a_min) * i / (cfg.steps - 1);
        const MapRep map = kind == PhiFamilyKind::Plain ? phi_family(cfg.d, row.a)
                                                        : phi_family_transposed(cfg.d, row.a);
        sweep_point_refuted(map, cfg.property, cfg.n, cfg.d, cfg.seed, cfg.restarts, &row.value,
                            &row.status);
        row.oracle = oracle_phi_family(kind, cfg.d, row.a, oracle_prop, cfg.n);
        rows.push_back(row);
    }

    // Empirical thresholds: the non-refuted grid points adjacent to refuted
    // regions above (upper) and below (lower).
    std::optional<double> upper;
    std::optional<double> lower;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].status == "refuted") continue;
        const bool refuted_above = std::any_of(rows.begin() + i + 1, rows.end(),
                                               [](const SweepRow& r) { return r.status == "refuted"; });
        const bool refuted_below = std::any_of(rows.begin(), rows.begin() + i,
                                               [](const SweepRow& r) { return r.status == "refuted"; });
        if (refuted_above) upper = rows[i].a;
        if (refuted_below && !lower.has_value()) lower = rows[i].a;
    }
    const OracleInterval oracle_iv = oracle_phi_interval(kind, cfg.d, oracle_prop, cfg.n);

    if (cfg.csv) {
        std::ostringstream csv;
        csv << "a,status,value,oracle\n";
        for (const SweepRow& r : rows)
            csv << r.a << "," << r.status << "," << r.value << "," << (r.oracle ? 1 : 0) << "\n";
        emit(csv.str(), cfg.out_path, out);
        return 0;
    }

    Json table;
    table["family"] = cfg.family;
    table["d"] = cfg.d;
    table["property"] = cfg.property;
    table["n"] = cfg.n;
    table["seed"] = cfg.seed;
    Json jrows = Json::array();
    for (const SweepRow& r : rows)
        jrows.push_back(Json{{"a", r.a}, {"status", r.status}, {"value", r.value}, {"oracle", r.oracle}});
    table["rows"] = std::move(jrows);
    table["threshold_empirical"] = upper.has_value() ? Json(*upper) : Json(nullptr);
    table["threshold_empirical_lower"] = lower.has_value() ? Json(*lower) : Json(nullptr);
    table["threshold_oracle"] = oracle_iv.upper;
    table["threshold_oracle_lower"] =
        std::isinf(oracle_iv.lower) ? Json(nullptr) : Json(oracle_iv.lower);
    emit(table.dump(2), cfg.out_path, out);
    return 0;
}

// ------------------------------ embed / reduce ------------------------------

struct EmbedConfig {
    std::string mode;  // gamma | pi | channel | gkls
    std::string p_path;
    bool uniform = false;
    int d = 2;
    std::string phases_path;
    std::string input_path;
    std::string out_path;
};

int cmd_embed(const EmbedConfig& cfg, std::ostream& out) {
    Json result;
    if (cfg.mode == "gamma" || cfg.mode == "pi") {
        const ProbabilityVector p =
            cfg.uniform ? ProbabilityVector::uniform(cfg.d)
                        : probability_from_json(load_json_file(cfg.p_path));
        if (cfg.mode == "gamma") {
            result = matrix_to_json(gamma_embed(p));
        } else {
            RealVector phases = RealVector::Zero(p.dim());
            if (!cfg.phases_path.empty()) {
                const Json j = load_json_file(cfg.phases_path);
                if (!j.is_array() || static_cast<int>(j.size()) != p.dim())
                    throw ParseError("phases must be an array matching the distribution");
                for (int i = 0; i < p.dim(); ++i) phases(i) = j.at(i).get<double>();
            }
            result = matrix_to_json(pi_embed(p, phases));
        }
    } else if (cfg.mode == "channel") {
        const StochasticMatrix s = stochastic_from_json(load_json_file(cfg.input_path));
        result = map_to_json(channel_from_stochastic(s));
    } else if (cfg.mode == "gkls") {
        const KolmogorovGenerator l = kolmogorov_from_json(load_json_file(cfg.input_path));
        result = gkls_to_json(gkls_from_kolmogorov(l));
    } else {
        throw BadParameter("embed mode must be gamma|pi|channel|gkls");
    }
    emit(result.dump(2), cfg.out_path, out);
    return 0;
}

struct ReduceConfig {
    std::string mode;  // omega | stochastic | kolmogorov
    std::string state_path;
    MapSource src;
    std::string basis_path;
    std::string generator_path;
    std::string out_path;
};

int cmd_reduce(const ReduceConfig& cfg, std::ostream& out) {
    Json result;
    if (cfg.mode == "omega") {
        const Matrix rho = matrix_from_json(load_json_file(cfg.state_path));
        const BasisChoice basis =
            cfg.basis_path.empty()
                ? BasisChoice::canonical(static_cast<int>(rho.rows()))
                : BasisChoice::from_unitary(matrix_from_json(load_json_file(cfg.basis_path)));
        result = probability_to_json(omega_reduce(rho, basis));
    } else if (cfg.mode == "stochastic") {
        const MapRep map = resolve_map(cfg.src);
        const BasisChoice basis =
            cfg.basis_path.empty()
                ? BasisChoice::canonical(map.dim())
                : BasisChoice::from_unitary(matrix_from_json(load_json_file(cfg.basis_path)));
        result = stochastic_to_json(stochastic_from_map(map, basis));
    } else if (cfg.mode == "kolmogorov") {
        const Json j = load_json_file(cfg.generator_path);
        const MapRep generator =
            j.contains("H") ? gkls_superop(gkls_from_json(j)) : map_from_json(j);
        const BasisChoice basis =
            cfg.basis_path.empty()
                ? BasisChoice::canonical(generator.dim())
                : BasisChoice::from_unitary(matrix_from_json(load_json_file(cfg.basis_path)));
        result = Json{{"L", real_matrix_rows(kolmogorov_from_gkls(generator, basis))}};
    } else {
        throw BadParameter("reduce mode must be omega|stochastic|kolmogorov");
    }
    emit(result.dump(2), cfg.out_path, out);
    return 0;
}

// -------------------------------- evolve ------------------------------------

struct EvolveConfig {
    std::string generator_path;
    std::string step_path;
    std::string state_path;
    std::string times;
    int steps = 0;
    bool no_validate = false;
    std::string out_path;
};

std::vector<double> parse_times(const std::string& spec) {
    std::vector<double> times;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        times.push_back(std::stod(item));
    }
    if (times.empty()) throw ParseError("no times given");
    return times;
}

int cmd_evolve(const EvolveConfig& cfg, std::ostream& out) {
    const Json state_json = load_json_file(cfg.state_path);
    const bool classical_state = state_json.is_array();

    Trajectory traj;
    if (!cfg.generator_path.empty()) {
        const Json gen_json = load_json_file(cfg.generator_path);
        const std::vector<double> times = parse_times(cfg.times);
        if (gen_json.contains("H")) {
            if (classical_state)
                throw KindMismatch("quantum generator applied to a classical state");
            traj = evolve_continuous(gkls_superop(gkls_from_json(gen_json)),
                                     matrix_from_json(state_json), times);
        } else if (gen_json.contains("W")) {
            if (!classical_state)
                throw KindMismatch("classical generator applied to a quantum state");
            RealVector p(state_json.size());
            for (std::size_t i = 0; i < state_json.size(); ++i)
                p(static_cast<Eigen::Index>(i)) = state_json.at(i).get<double>();
            traj = evolve_continuous(kolmogorov_from_json(gen_json), p, times);
        } else {
            throw ParseError("generator must contain \"H\" or \"W\"");
        }
    } else if (!cfg.step_path.empty()) {
        if (cfg.steps < 1) throw BadParameter("--steps must be >= 1");
        const Json step_json = load_json_file(cfg.step_path);
        if (step_json.contains("rows")) {
            if (!classical_state) throw KindMismatch("stochastic step applied to a quantum state");
            RealVector p(state_json.size());
            for (std::size_t i = 0; i < state_json.size(); ++i)
                p(static_cast<Eigen::Index>(i)) = state_json.at(i).get<double>();
            traj = evolve_discrete(stochastic_from_json(step_json).m, p, cfg.steps,
                                   !cfg.no_validate);
        } else {
            if (classical_state) throw KindMismatch("channel step applied to a classical state");
            traj = evolve_discrete(map_from_json(step_json), matrix_from_json(state_json),
                                   cfg.steps, !cfg.no_validate);
        }
    } else {
        throw ParseError("evolve needs --generator or --step");
    }

    std::ostringstream lines;
    for (const std::string& line : trajectory_to_json_lines(traj)) lines << line << "\n";
    if (cfg.out_path.empty()) {
        out << lines.str();
    } else {
        std::ofstream file(cfg.out_path);
        if (!file) throw ParseError("cannot open output file: " + cfg.out_path);
        file << lines.str();
    }
    return 0;
}

// -------------------------------- convert -----------------------------------

struct ConvertConfig {
    MapSource src;
    std::string to = "choi";
    double tol = kDefaultViolationTol;
    std::string out_path;
};

int cmd_convert(const ConvertConfig& cfg, std::ostream& out) {
    const MapRep map = resolve_map(cfg.src);
    MapForm form = MapForm::Choi;
    if (cfg.to == "superop")
        form = MapForm::Superop;
    else if (cfg.to == "choi")
        form = MapForm::Choi;
    else if (cfg.to == "kraus")
        form = MapForm::Kraus;
    else
        throw BadParameter("--to must be superop|choi|kraus");
    emit(map_to_json(map, form, cfg.tol).dump(2), cfg.out_path, out);
    return 0;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"posmap — positivity hierarchy analysis and classical-quantum bridges"};
    app.require_subcommand(1);

    AnalyzeConfig analyze_cfg;
    CLI::App* analyze = app.add_subcommand("analyze", "full hierarchy report for a map");
    add_map_source(analyze, analyze_cfg.src);
    analyze->add_option("--seed", analyze_cfg.seed, "PRNG seed");
    analyze->add_option("--tol", analyze_cfg.tol, "violation tolerance");
    analyze->add_option("--restarts", analyze_cfg.restarts, "falsifier restarts");
    analyze->add_flag("--skip-decomposable", analyze_cfg.skip_decomposable,
                      "skip the decomposability search");
    analyze->add_option("--out", analyze_cfg.out_path, "output path");

    SweepConfig sweep_cfg;
    CLI::App* sweep = app.add_subcommand("sweep", "family parameter sweep with oracle column");
    sweep->add_option("--family", sweep_cfg.family, "plain|transposed")->required();
    sweep->add_option("--d", sweep_cfg.d, "dimension")->required();
    sweep->add_option("--a-min", sweep_cfg.a_min)->required();
    sweep->add_option("--a-max", sweep_cfg.a_max)->required();
    sweep->add_option("--steps", sweep_cfg.steps)->required();
    sweep->add_option("--property", sweep_cfg.property, "P|S|CP")->required();
    sweep->add_option("--n", sweep_cfg.n, "level for P/S");
    sweep->add_option("--seed", sweep_cfg.seed, "PRNG seed");
    sweep->add_option("--restarts", sweep_cfg.restarts, "falsifier restarts");
    sweep->add_option("--out", sweep_cfg.out_path, "output path");
    sweep->add_flag("--csv", sweep_cfg.csv, "emit CSV instead of JSON");

    EmbedConfig embed_cfg;
    CLI::App* embed = app.add_subcommand("embed", "classical -> quantum embeddings");
    embed->add_option("--mode", embed_cfg.mode, "gamma|pi|channel|gkls")->required();
    embed->add_option("--p", embed_cfg.p_path, "probability vector JSON file");
    embed->add_flag("--uniform", embed_cfg.uniform, "use the uniform distribution");
    embed->add_option("--d", embed_cfg.d, "dimension for --uniform");
    embed->add_option("--phases", embed_cfg.phases_path, "phase vector JSON file");
    embed->add_option("--input", embed_cfg.input_path, "stochastic matrix / generator file");
    embed->add_option("--out", embed_cfg.out_path, "output path");

    ReduceConfig reduce_cfg;
    CLI::App* reduce = app.add_subcommand("reduce", "quantum -> classical reductions");
    reduce->add_option("--mode", reduce_cfg.mode, "omega|stochastic|kolmogorov")->required();
    reduce->add_option("--state", reduce_cfg.state_path, "density matrix JSON file");
    add_map_source(reduce, reduce_cfg.src);
    reduce->add_option("--basis", reduce_cfg.basis_path, "basis unitary JSON file");
    reduce->add_option("--generator", reduce_cfg.generator_path, "generator JSON file");
    reduce->add_option("--out", reduce_cfg.out_path, "output path");

    EvolveConfig evolve_cfg;
    CLI::App* evolve = app.add_subcommand("evolve", "semigroup evolution to JSON lines");
    evolve->add_option("--generator", evolve_cfg.generator_path, "generator JSON file");
    evolve->add_option("--step", evolve_cfg.step_path, "step map / stochastic matrix file");
    evolve->add_option("--state", evolve_cfg.state_path, "initial state file")->required();
    evolve->add_option("--times", evolve_cfg.times, "comma-separated times");
    evolve->add_option("--steps", evolve_cfg.steps, "number of discrete steps");
    evolve->add_flag("--no-validate", evolve_cfg.no_validate, "skip step validation");
    evolve->add_option("--out", evolve_cfg.out_path, "output path");

    ConvertConfig convert_cfg;
    CLI::App* convert = app.add_subcommand("convert", "rewrite among superop/choi/kraus");
    add_map_source(convert, convert_cfg.src);
    convert->add_option("--to", convert_cfg.to, "superop|choi|kraus")->required();
    convert->add_option("--tol", convert_cfg.tol, "Kraus extraction tolerance");
    convert->add_option("--out", convert_cfg.out_path, "output path");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "argument error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (analyze->parsed()) return cmd_analyze(analyze_cfg, out);
        if (sweep->parsed()) return cmd_sweep(sweep_cfg, out);
        if (embed->parsed()) return cmd_embed(embed_cfg, out);
        if (reduce->parsed()) return cmd_reduce(reduce_cfg, out);
        if (evolve->parsed()) return cmd_evolve(evolve_cfg, out);
        if (convert->parsed()) return cmd_convert(convert_cfg, out);
    } catch (const ParseError& e) {
        err << "input error: " << e.what() << "\n";
        return 2;
    } catch (const DimensionMismatch& e) {
        err << "input error: " << e.what() << "\n";
        return 2;
    } catch (const ResourceLimit& e) {
        err << "resource limit: " << e.what() << "\n";
        return 4;
    } catch (const Error& e) {
        err << "domain error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}

}  // namespace posmap
