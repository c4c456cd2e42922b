#include "ifs/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <iostream>

#include "ifs/analysis.hpp"
#include "ifs/config.hpp"
#include "ifs/hutchinson.hpp"
#include "ifs/io.hpp"
#include "ifs/orbit.hpp"

namespace ifs::cli {

namespace {

using json = nlohmann::ordered_json;

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    bool to_stdout = false;
    int threads = 1;
    std::uint64_t seed = 1;
    double epsilon = 0.0;  // 0 = take from config
    double tol = 0.0;
    int n_max = 0;
    int horizon = 0;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool pair_config = false) {
    cmd->add_option("--config", o.config_path,
                    pair_config ? "factor pair config (JSON)" : "system config (JSON)")
        ->required();
    cmd->add_option("--out", o.out_dir, "output directory");
    cmd->add_flag("--stdout", o.to_stdout, "write the primary artifact to stdout");
    cmd->add_option("--threads", o.threads, "worker threads for level steps");
    cmd->add_option("--seed", o.seed, "seed for sampling probes");
    cmd->add_option("--epsilon", o.epsilon, "override grid size");
    cmd->add_option("--tol", o.tol, "override tolerance");
    cmd->add_option("--n-max", o.n_max, "override level cap");
    cmd->add_option("--horizon", o.horizon, "override probe horizon");
}

NumericParams effective_numeric(const SystemConfig& cfg, const CommonOpts& o) {
    NumericParams n = cfg.numeric;
    if (o.epsilon > 0.0) n.epsilon = o.epsilon;
    if (o.tol > 0.0) n.tol = o.tol;
    if (o.n_max > 0) n.n_max = o.n_max;
    if (o.horizon > 0) n.horizon = o.horizon;
    return n;
}

struct OutputSink {
    const CommonOpts* opts;
    json manifest_outputs = json::array();

    void emit(const std::string& name, const std::string& content, bool primary) {
        if (opts->to_stdout && primary) {
            std::cout << content;
        }
        if (!opts->out_dir.empty()) {
            const std::string path = opts->out_dir + "/" + name;
            atomic_write(path, content);
            json e;
            e["file"] = name;
            e["bytes"] = content.size();
            manifest_outputs.push_back(e);
        }
    }

    void finish(const std::string& command, const json& config_json, double wall_ms) {
        if (opts->out_dir.empty()) return;
        json m;
        m["schema_version"] = 1;
        m["tool_version"] = kToolVersion;
        m["command"] = command;
        m["config_hash"] = config_hash(config_json);
        m["outputs"] = manifest_outputs;
        m["wall_ms"] = wall_ms;
        atomic_write(opts->out_dir + "/" + command + "_manifest.json", json_dump(m));
    }
};

Eigen::VectorXd parse_point(const std::string& s) {
    std::vector<double> vals;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        std::size_t next = s.find(',', pos);
        if (next == std::string::npos) next = s.size();
        vals.push_back(std::stod(s.substr(pos, next - pos)));
        pos = next + 1;
    }
    Eigen::VectorXd x(static_cast<int>(vals.size()));
    for (std::size_t i = 0; i < vals.size(); ++i) x[static_cast<int>(i)] = vals[i];
    return x;
}

json scan_json(const ScanResult& scan) {
    json rows = json::array();
    for (const auto& r : scan.rows) {
        json e;
        e["n"] = r.n;
        e["defect"] = r.defect;
        e["pass"] = r.pass;
        rows.push_back(e);
    }
    json j;
    j["rows"] = rows;
    j["first_terminal_pass"] = scan.first_terminal_pass;
    return j;
}

json attractor_report_json(const AttractorReport& rep) {
    json j;
    j["schema_version"] = 1;
    j["converged"] = rep.converged;
    j["levels"] = rep.levels;
    j["points"] = rep.attractor.size();
    j["eps"] = rep.eps;
    j["tol"] = rep.tol;
    j["seed_pitch"] = rep.seed_pitch;
    j["gaps"] = rep.gaps;
    j["nesting_violations"] = rep.nesting_violations;
    j["warnings"] = rep.warnings;
    j["level_ms"] = rep.level_ms;
    return j;
}

int cmd_lang(const CommonOpts& opts, int n) {
    const SystemConfig cfg = load_system_config(opts.config_path);
    const auto t0 = std::chrono::steady_clock::now();
    Subshift shift{cfg.subshift};
    const auto words = shift.language(n);
    std::string listing;
    for (const auto& w : words) listing += word_to_string(w) + "\n";
    if (!opts.to_stdout) {
        std::cout << "L_" << n << ": " << words.size() << " words\n" << listing;
    }
    OutputSink sink{&opts};
    sink.emit("lang.csv", listing, true);
    sink.finish("lang", system_config_to_json(cfg),
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                    .count());
    return 0;
}

int cmd_attractor(const CommonOpts& opts, const std::string& format) {
    const SystemConfig cfg = load_system_config(opts.config_path);
    const NumericParams num = effective_numeric(cfg, opts);
    const auto t0 = std::chrono::steady_clock::now();
    SystemConfig effective = cfg;
    effective.numeric = num;
    const IfsSystem sys = effective.build();
    const AttractorReport rep =
        compute_attractor(sys, num.epsilon, num.tol, num.n_max, opts.threads, num.seed_cap);

    OutputSink sink{&opts};
    sink.emit("attractor.csv", cloud_csv(rep.attractor), format == "csv");
    sink.emit("attractor_report.json", json_dump(attractor_report_json(rep)), format == "json");
    if (sys.family.dim() == 2) {
        if (format == "ppm" || !opts.out_dir.empty())
            sink.emit("attractor.ppm", cloud_ppm(rep.attractor, sys.family.box), format == "ppm");
        if (format == "svg" || !opts.out_dir.empty())
            sink.emit("attractor.svg", cloud_svg(rep.attractor, sys.family.box), format == "svg");
    }
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    if (!opts.to_stdout)
        std::cout << (rep.converged ? "converged" : "unconverged") << " after " << rep.levels
                  << " levels, " << rep.attractor.size() << " points\n";
    sink.finish("attractor", system_config_to_json(effective), ms);
    return rep.converged ? 0 : 4;
}

int cmd_selfsim(const CommonOpts& opts, int n_scan) {
    const SystemConfig cfg = load_system_config(opts.config_path);
    const NumericParams num = effective_numeric(cfg, opts);
    const auto t0 = std::chrono::steady_clock::now();
    SystemConfig effective = cfg;
    effective.numeric = num;
    const IfsSystem sys = effective.build();
    const AttractorReport rep =
        compute_attractor(sys, num.epsilon, num.tol, num.n_max, opts.threads, num.seed_cap);
    const ScanResult scan =
        self_similarity_scan(sys, rep.attractor, n_scan, num.tol, opts.threads);

    json j;
    j["schema_version"] = 1;
    j["tol"] = num.tol;
    j["attractor"] = attractor_report_json(rep);
    j["scan"] = scan_json(scan);
    OutputSink sink{&opts};
    sink.emit("selfsim.json", json_dump(j), true);
    if (!opts.to_stdout) {
        for (const auto& r : scan.rows)
            std::cout << "n=" << r.n << " defect=" << format_double(r.defect) << " "
                      << (r.pass ? "pass" : "FAIL") << "\n";
    }
    sink.finish("selfsim", system_config_to_json(effective),
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                    .count());
    return 0;
}

int cmd_cycle(const CommonOpts& opts, const std::string& v_str, const std::string& u_str) {
    const SystemConfig cfg = load_system_config(opts.config_path);
    const auto t0 = std::chrono::steady_clock::now();
    const IfsSystem sys = cfg.build();
    const Word v = v_str.empty() ? Word{} : parse_word(v_str);
    const Word u = parse_word(u_str);
    const EventuallyPeriodicPoint p(sys.shift, v, u);
    const Cycle c = periodic_cycle(sys, p, cfg.numeric.epsilon);

    std::string csv;
    csv += "# transient: " + (v.empty() ? std::string("(empty)") : word_to_string(v)) + "\n";
    csv += "# period: " + word_to_string(u) + "\n";
    for (const auto& x : c.points) {
        for (int a = 0; a < x.size(); ++a) {
            if (a) csv += ',';
            csv += format_double(x[a]);
        }
        csv += '\n';
    }
    OutputSink sink{&opts};
    sink.emit("cycle.csv", csv, true);
    if (!opts.to_stdout) std::cout << csv;
    sink.finish("cycle", system_config_to_json(cfg),
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                    .count());
    return 0;
}

int cmd_probe(const CommonOpts& opts, const std::string& u_center, double u_radius,
              const std::string& v_center, double v_radius, int power) {
    const SystemConfig cfg = load_system_config(opts.config_path);
    const NumericParams num = effective_numeric(cfg, opts);
    const auto t0 = std::chrono::steady_clock::now();
    SystemConfig effective = cfg;
    effective.numeric = num;
    IfsSystem sys = effective.build();
    const AttractorReport rep =
        compute_attractor(sys, num.epsilon, num.tol, num.n_max, opts.threads, num.seed_cap);
    if (power > 1) sys = power_system(sys, power);

    ReturnBall U{parse_point(u_center), u_radius};
    ReturnBall V{parse_point(v_center), v_radius};
    const ReturnTimeReport pr =
        return_time_probe(sys, rep.attractor, U, V, num.horizon, opts.threads);

    json j;
    j["schema_version"] = 1;
    j["kind"] = "evidence";  // finite-horizon observation, not a proof
    j["horizon"] = pr.horizon;
    j["power"] = power;
    j["hits"] = pr.hits;
    j["longest_run"] = pr.longest_run;
    j["cofinite_from"] = pr.cofinite_from;
    switch (pr.classification) {
        case ReturnClassification::Empty: j["classification"] = "empty"; break;
        case ReturnClassification::Nonempty: j["classification"] = "nonempty"; break;
        case ReturnClassification::ThickUpToHorizon:
            j["classification"] = "thick-up-to-horizon";
            break;
        case ReturnClassification::CofiniteUpToHorizon:
            j["classification"] = "cofinite-up-to-horizon";
            break;
    }
    OutputSink sink{&opts};
    sink.emit("probe.json", json_dump(j), true);
    if (!opts.to_stdout) std::cout << j["classification"].get<std::string>() << "\n";
    sink.finish("probe", system_config_to_json(effective),
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                    .count());
    return 0;
}

int cmd_separation(const CommonOpts& opts, int n_from, int n_to) {
    const SystemConfig cfg = load_system_config(opts.config_path);
    const auto t0 = std::chrono::steady_clock::now();
    const IfsSystem sys = cfg.build();
    const SeparationReport rep = run_separation(sys, n_from, n_to, cfg.numeric.language_cap);

    json j;
    j["schema_version"] = 1;
    j["ratio_sum"] = rep.ratio_sum;
    j["ratio_sum_pass"] = rep.ratio_sum_pass;
    j["first_passing_n"] = rep.first_passing_n;
    j["levels"] = json::array();
    for (const auto& lv : rep.levels) {
        json e;
        e["n"] = lv.n;
        e["outcome"] = lv.outcome == SeparationOutcome::Pass         ? "pass"
                       : lv.outcome == SeparationOutcome::Fail       ? "fail"
                                                                     : "inconclusive";
        e["min_gap"] = lv.min_gap;
        j["levels"].push_back(e);
    }
    OutputSink sink{&opts};
    sink.emit("separation.json", json_dump(j), true);
    if (!opts.to_stdout)
        std::cout << "ratio_sum=" << format_double(rep.ratio_sum)
                  << (rep.ratio_sum_pass ? " (pass)" : " (fail)") << "\n";
    sink.finish("separation", system_config_to_json(cfg),
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                    .count());
    return 0;
}

int cmd_factor(const CommonOpts& opts, std::size_t samples) {
    const FactorPairConfig pair = load_factor_pair_config(opts.config_path);
    const auto t0 = std::chrono::steady_clock::now();
    const IfsSystem src = pair.source.build();
    const IfsSystem dst = pair.target.build();
    const auto s_src = compute_attractor(src, pair.source.numeric.epsilon, pair.source.numeric.tol,
                                         pair.source.numeric.n_max, opts.threads,
                                         pair.source.numeric.seed_cap);
    const auto s_dst = compute_attractor(dst, pair.target.numeric.epsilon, pair.target.numeric.tol,
                                         pair.target.numeric.n_max, opts.threads,
                                         pair.target.numeric.seed_cap);
    const FactorCheckReport rep =
        verify_factoring(src, dst, pair.code, pair.phi2, samples, opts.seed, s_src.attractor,
                         s_dst.attractor, pair.target.numeric.tol);

    json j;
    j["schema_version"] = 1;
    j["max_residual"] = rep.max_residual;
    j["windows"] = rep.windows;
    j["samples_per_window"] = rep.samples_per_window;
    j["attractor_image_dh"] = rep.attractor_image_dh;
    j["budget"] = rep.budget;
    j["residual_pass"] = rep.residual_pass;
    j["attractor_pass"] = rep.attractor_pass;
    OutputSink sink{&opts};
    sink.emit("factor.json", json_dump(j), true);
    if (!opts.to_stdout)
        std::cout << "max_residual=" << format_double(rep.max_residual)
                  << " attractor_dh=" << format_double(rep.attractor_image_dh) << "\n";
    json cfgj;
    cfgj["source"] = system_config_to_json(pair.source);
    cfgj["target"] = system_config_to_json(pair.target);
    sink.finish("factor", cfgj,
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                    .count());
    return 0;
}

int dispatch(const std::vector<std::string>& args) {
    CLI::App app{"attractors of iterated function systems over sub-shifts"};
    app.require_subcommand(1);

    CommonOpts opts;
    int lang_n = 1;
    int selfsim_n = 6;
    std::string format = "csv";
    std::string cycle_v, cycle_u;
    std::string u_center = "0", v_center = "0";
    double u_radius = 0.1, v_radius = 0.1;
    int power = 1;
    int n_from = 1, n_to = 1;
    std::size_t samples = 64;

    auto* lang = app.add_subcommand("lang", "enumerate the admissible words of length n");
    add_common(lang, opts);
    lang->add_option("--n", lang_n, "word length")->required();

    auto* attractor = app.add_subcommand("attractor", "compute the attractor cloud");
    add_common(attractor, opts);
    attractor->add_option("--format", format, "primary artifact: csv|json|ppm|svg");

    auto* selfsim = app.add_subcommand("selfsim", "self-similarity defect scan");
    add_common(selfsim, opts);
    selfsim->add_option("--n-scan", selfsim_n, "scan orders 1..n");

    auto* cycle = app.add_subcommand("cycle", "cycle of an eventually periodic sequence");
    add_common(cycle, opts);
    cycle->add_option("--v", cycle_v, "transient word (may be empty)");
    cycle->add_option("--u", cycle_u, "period word")->required();

    auto* probe = app.add_subcommand("probe", "return-time probe on the attractor");
    add_common(probe, opts);
    probe->add_option("--u-center", u_center, "center of U (comma separated)")->required();
    probe->add_option("--u-radius", u_radius, "radius of U")->required();
    probe->add_option("--v-center", v_center, "center of V")->required();
    probe->add_option("--v-radius", v_radius, "radius of V")->required();
    probe->add_option("--power", power, "probe the N-th higher power system");

    auto* separation = app.add_subcommand("separation", "disjointness of word images of the box");
    add_common(separation, opts);
    separation->add_option("--n-from", n_from, "first order")->required();
    separation->add_option("--n-to", n_to, "last order")->required();

    auto* factor = app.add_subcommand("factor", "verify a declared factoring numerically");
    add_common(factor, opts, true);
    factor->add_option("--samples", samples, "sample points per window");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            std::cout << app.help();
            return 0;
        }
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    auto guarded = [&](auto&& fn, int op_exit) -> int {
        try {
            return fn();
        } catch (const Error& e) {
            std::cerr << "error: " << e.what() << "\n";
            switch (e.kind()) {
                case ErrorKind::Config: return 2;
                case ErrorKind::EmptyShift: return 3;
                case ErrorKind::Contraction: return 2;
                default: return op_exit;
            }
        } catch (const std::exception& e) {
            std::cerr << "internal error: " << e.what() << "\n";
            return 1;
        }
    };

    if (lang->parsed()) return guarded([&] { return cmd_lang(opts, lang_n); }, 2);
    if (attractor->parsed()) return guarded([&] { return cmd_attractor(opts, format); }, 4);
    if (selfsim->parsed()) return guarded([&] { return cmd_selfsim(opts, selfsim_n); }, 4);
    if (cycle->parsed()) return guarded([&] { return cmd_cycle(opts, cycle_v, cycle_u); }, 5);
    if (probe->parsed())
        return guarded(
            [&] { return cmd_probe(opts, u_center, u_radius, v_center, v_radius, power); }, 6);
    if (separation->parsed())
        return guarded([&] { return cmd_separation(opts, n_from, n_to); }, 7);
    if (factor->parsed()) return guarded([&] { return cmd_factor(opts, samples); }, 8);
    return 2;
}

}  // namespace

int run(const std::vector<std::string>& args) { return dispatch(args); }

int run(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return dispatch(args);
}

}  // namespace ifs::cli
