// widthlab: scaling exponents of wide-network correlation functions, their
// Monte Carlo verification, and 1/n training dynamics.

#include <malloc.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "widthlab/corr/cluster.hpp"
#include "widthlab/corr/parse.hpp"
#include "widthlab/dynamics/experiments.hpp"
#include "widthlab/ensemble/experiment.hpp"
#include "widthlab/feynman/dot.hpp"
#include "widthlab/feynman/exact.hpp"
#include "widthlab/feynman/report.hpp"
#include "widthlab/io/idx.hpp"
#include "widthlab/parallel.hpp"
#include "widthlab/presets.hpp"
#include "widthlab/spectrum/scaling.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitParse = 2;
constexpr int kExitBudget = 3;

std::string default_out_dir() {
    if (const char* env = std::getenv("WIDTHLAB_OUT")) return env;
    return "out";
}

void write_file(const std::string& dir, const std::string& name, const std::string& content) {
    fs::create_directories(dir);
    std::ofstream os(dir + "/" + name);
    if (!os) throw widthlab::IoError("cannot write '" + dir + "/" + name + "'");
    os << content;
}

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream is(path);
    if (!is) throw widthlab::IoError("cannot open config '" + path + "'");
    return json::parse(is);
}

template <class T>
T cfg_get(const json& cfg, const std::string& key, T fallback) {
    if (cfg.contains(key)) return cfg.at(key).get<T>();
    return fallback;
}

int cmd_analyze(const std::string& text, int depth, bool as_json, const std::string& dot_dir) {
    const widthlab::corr::CorrelationSpec spec = widthlab::corr::parse(text);
    const auto report = widthlab::corr::cluster_graph(spec);

    json j;
    j["expression"] = text;
    j["canonical"] = json::parse(widthlab::corr::to_json(spec));
    j["n_even"] = report.n_even;
    j["n_odd"] = report.n_odd;
    j["m"] = report.m;
    j["s_C"] = report.s_C.str();
    j["s_C_value"] = report.s_C.value();
    j["variance_exponent"] = widthlab::corr::variance_exponent(spec).str();

    bool enumerable = true;
    try {
        const auto diag = widthlab::feynman::exponent(spec, depth);
        j["depth"] = depth;
        j["diagram_count"] = diag.diagram_count;
        j["tight_exponent"] = diag.tight_exponent.str();
        j["tight_exponent_value"] = diag.tight_exponent.value();
        j["bound_consistent"] = diag.bound_consistent;
    } catch (const widthlab::NotEnumerable& e) {
        enumerable = false;
        j["not_enumerable"] = e.what();
    }

    if (!dot_dir.empty() && enumerable) {
        int index = 0;
        widthlab::feynman::enumerate(spec, depth, [&](const widthlab::feynman::FeynmanDiagram& g) {
            write_file(dot_dir, "feynman_" + std::to_string(index) + ".dot",
                       widthlab::feynman::to_dot(g));
            write_file(dot_dir, "double_line_" + std::to_string(index) + ".dot",
                       widthlab::feynman::to_dot(widthlab::feynman::double_line(g)));
            return ++index < 64;
        });
    }

    if (as_json) {
        std::cout << j.dump(2) << '\n';
    } else {
        std::cout << "clusters: n_even=" << report.n_even << " n_odd=" << report.n_odd
                  << "  m=" << report.m << "\n";
        std::cout << "exponent s_C = " << report.s_C.str() << "\n";
        if (enumerable)
            std::cout << "diagrams (depth " << depth << "): " << j["diagram_count"]
                      << ", tight exponent " << j["tight_exponent"].get<std::string>() << "\n";
        else
            std::cout << "diagrams: " << j["not_enumerable"].get<std::string>() << "\n";
    }
    return 0;
}

widthlab::ensemble::ExperimentConfig scaling_config_from(const json& cfg, std::uint64_t seed,
                                                         int workers) {
    widthlab::ensemble::ExperimentConfig shared;
    shared.net.hidden_layers = cfg_get(cfg, "depth", 3);
    shared.net.input_dim = cfg_get(cfg, "input_dim", 4);
    shared.net.normalize_input = cfg_get(cfg, "normalize_input", false);
    shared.widths = cfg_get(cfg, "widths", std::vector<int>{32, 64, 128, 256, 512});
    shared.seeds_per_width = cfg_get(cfg, "seeds", 200);
    shared.master_seed = seed;
    shared.workers = workers;
    return shared;
}

int run_scaling_suite(const json& cfg, const std::string& preset, const std::string& spec_text,
                      const std::string& out_dir, std::uint64_t seed, int workers,
                      bool variance_headline) {
    auto shared = scaling_config_from(cfg, seed, workers);
    std::vector<std::pair<std::string, widthlab::corr::CorrelationSpec>> rows;

    std::vector<std::string> activations = cfg_get(cfg, "activations",
                                                   std::vector<std::string>{"linear", "relu", "tanh"});
    if (preset == "table2") shared.net.init = widthlab::net::InitKind::rademacher;
    if (!spec_text.empty()) {
        rows.emplace_back("spec", widthlab::corr::parse(spec_text));
        activations = {cfg_get(cfg, "activation", std::string("linear"))};
    } else {
        rows = widthlab::builtin_rows();
    }

    json config_echo = cfg;
    config_echo["preset"] = preset;
    config_echo["seed"] = seed;
    config_echo["workers"] = workers;
    config_echo["widths"] = shared.widths;
    config_echo["seeds"] = shared.seeds_per_width;
    config_echo["activations"] = activations;
    config_echo["init"] = widthlab::net::to_string(shared.net.init);
    config_echo["variance_headline"] = variance_headline;

    bool all_ok = true;
    std::vector<widthlab::ensemble::ScalingResult> all;
    for (const auto& act : activations) {
        auto per_act = shared;
        per_act.net.activation = widthlab::net::activation_from_string(act);
        auto results = widthlab::ensemble::run_suite(rows, per_act);
        for (auto& r : results) {
            r.name = act + "_" + r.name;
            const bool violated = variance_headline ? r.variance_bound_violated : r.mean_bound_violated;
            const auto& fit = variance_headline ? r.variance_fit : r.mean_fit;
            const auto bound = variance_headline ? r.variance_bound : r.bound;
            std::cout << r.name << ": slope " << fit.slope << " +- " << fit.stderror
                      << "  (bound " << bound.str() << (violated ? ", VIOLATED)" : ", ok)")
                      << "\n";
            all_ok = all_ok && !violated;
            all.push_back(std::move(r));
        }
    }
    widthlab::ensemble::emit_report(all, out_dir, config_echo.dump(2));
    std::cout << (all_ok ? "bound check: PASS" : "bound check: FAIL") << "\n";
    return all_ok ? 0 : 4;
}

int run_dynamics(const json& cfg, const std::string& preset, const std::string& out_dir,
                 std::uint64_t seed, int workers) {
    namespace dyn = widthlab::dynamics;
    json config_echo = cfg;
    config_echo["preset"] = preset;
    config_echo["seed"] = seed;

    // dataset source: synthetic unless an IDX pair is configured
    std::optional<dyn::TrainSet> dataset;
    if (cfg.contains("mnist_images")) {
        dataset = widthlab::io::load_mnist(
            cfg.at("mnist_images").get<std::string>(), cfg.at("mnist_labels").get<std::string>(),
            cfg_get(cfg, "class_a", 0), cfg_get(cfg, "class_b", 1), cfg_get(cfg, "per_class", 10));
    }

    if (preset == "fig1a" || preset == "fig1a_sgd") {
        dyn::DeviationScanConfig scan_cfg;
        scan_cfg.widths = cfg_get(cfg, "widths", std::vector<int>{64, 128, 256, 512});
        scan_cfg.seeds_per_width = cfg_get(cfg, "seeds", 8);
        scan_cfg.trainset_size = cfg_get(cfg, "trainset", 20);
        scan_cfg.eta = cfg_get(cfg, "eta", 0.1);
        scan_cfg.steps = cfg_get(cfg, "steps", 200);
        scan_cfg.batch = preset == "fig1a_sgd" ? cfg_get(cfg, "batch", scan_cfg.trainset_size / 2)
                                               : cfg_get(cfg, "batch", 0);
        scan_cfg.master_seed = seed;
        scan_cfg.workers = workers;
        const auto scan = dyn::ntk_deviation_scan(scan_cfg);
        std::string csv = "n,mean_abs_theta_deviation\n";
        char buf[64];
        for (std::size_t i = 0; i < scan.widths.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%g,%.17g\n", scan.widths[i], scan.mean_deviation[i]);
            csv += buf;
        }
        write_file(out_dir, "deviation.csv", csv);
        json j{{"slope", scan.fit.slope}, {"slope_stderr", scan.fit.stderror}};
        write_file(out_dir, "metrics.json", j.dump(2) + "\n");
        write_file(out_dir, "config.json", config_echo.dump(2) + "\n");
        std::cout << "kernel deviation slope: " << scan.fit.slope << " +- " << scan.fit.stderror
                  << "\n";
        return 0;
    }
    if (preset == "fig4" || preset.empty()) {
        dyn::ComparisonConfig comp;
        comp.width = cfg_get(cfg, "width", 256);
        comp.trainset_size = cfg_get(cfg, "trainset", 10);
        comp.eta = cfg_get(cfg, "eta", 0.05);
        comp.steps = cfg_get(cfg, "steps", 400);
        comp.record_every = cfg_get(cfg, "record_every", 10);
        comp.net.activation = widthlab::net::activation_from_string(
            cfg_get(cfg, "activation", std::string("tanh")));
        comp.seed = seed;
        const auto result = dyn::trajectory_comparison(comp);
        write_file(out_dir, "trajectories.csv", dyn::trajectories_to_csv(result));
        write_file(out_dir, "metrics.json", dyn::metrics_to_json(result) + "\n");
        write_file(out_dir, "config.json", config_echo.dump(2) + "\n");
        std::cout << "correction improvement: f " << result.f_improvement << "x, kernel "
                  << result.theta_improvement << "x\n";
        return 0;
    }
    std::cerr << "unknown dynamics preset '" << preset << "'\n";
    return kExitUsage;
}

int run_spectrum(const json& cfg, const std::string& preset, const std::string& out_dir,
                 std::uint64_t seed, int workers) {
    namespace spec = widthlab::spectrum;
    spec::SpectrumConfig sc;
    sc.widths = cfg_get(cfg, "widths", std::vector<int>{32, 64, 128, 256});
    sc.seeds_per_width = cfg_get(cfg, "seeds", 16);
    sc.input_dim = cfg_get(cfg, "input_dim", 16);
    sc.trainset_size = cfg_get(cfg, "trainset", 20);
    sc.hutchinson_probes = cfg_get(cfg, "probes", 64);
    sc.master_seed = seed;
    sc.workers = workers;
    if (preset == "fig6a" || preset.empty()) {
        sc.hidden_layers = 2;
        sc.activation = widthlab::net::Activation::relu;
    } else if (preset == "fig7b") {
        sc.hidden_layers = 1;
        sc.activation = widthlab::net::Activation::relu;
    } else {
        std::cerr << "unknown spectrum preset '" << preset << "'\n";
        return kExitUsage;
    }
    const auto report = spec::eig_scaling(sc);
    write_file(out_dir, "spectrum.csv", spec::to_csv(report));
    write_file(out_dir, "spectrum.json", spec::to_json(report) + "\n");
    json config_echo = cfg;
    config_echo["preset"] = preset;
    config_echo["seed"] = seed;
    write_file(out_dir, "config.json", config_echo.dump(2) + "\n");
    std::cout << "top-gap slope: " << report.top_gap_fit.slope << " +- "
              << report.top_gap_fit.stderror << "\n";
    std::cout << "B rms-eigenvalue slope: " << report.b_rms_fit.slope << " +- "
              << report.b_rms_fit.stderror << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    // large derivative-engine temporaries: avoid mmap round trips
    mallopt(M_MMAP_MAX, 0);
    mallopt(M_TRIM_THRESHOLD, 1 << 30);

    CLI::App app{"widthlab: width scaling of network correlation functions"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    std::string config_path, preset, out_dir = default_out_dir();
    std::uint64_t seed = 1;
    int workers = widthlab::default_workers();
    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--preset", preset, "named preset (table1/2/3, fig1a, fig4, fig6a, fig7b)");
    app.add_option("--out", out_dir, "output directory (default $WIDTHLAB_OUT or ./out)");
    app.add_option("--seed", seed, "master seed");
    app.add_option("--workers", workers, "worker threads");

    auto* analyze = app.add_subcommand("analyze", "symbolic exponent of an expression");
    std::string expr, dot_dir;
    int depth = 3;
    bool as_json = false;
    analyze->add_option("expression", expr, "e.g. 'E[ d(m) f(x1) d(m) f(x2) ]'")->required();
    analyze->add_option("--depth", depth, "hidden layers for the diagram count");
    analyze->add_flag("--json", as_json, "JSON output");
    analyze->add_option("--dot", dot_dir, "directory for DOT exports of the diagrams");

    auto* scaling = app.add_subcommand("scaling", "Monte Carlo width scan of the mean");
    std::string spec_text;
    scaling->add_option("--spec", spec_text, "expression to scan (default: built-in rows)");

    auto* variance = app.add_subcommand("variance", "Monte Carlo width scan of the variance");
    variance->add_option("--spec", spec_text, "expression to scan (default: built-in rows)");

    auto* dynamics = app.add_subcommand("dynamics", "training dynamics experiments");
    auto* spectrum = app.add_subcommand("spectrum", "Hessian/kernel spectrum experiments");

    auto* mnist = app.add_subcommand("mnist-info", "validate an IDX pair and report a subset");
    std::string images_path, labels_path;
    int class_a = 0, class_b = 1, per_class = 10;
    mnist->add_option("--images", images_path)->required();
    mnist->add_option("--labels", labels_path)->required();
    mnist->add_option("--class-a", class_a);
    mnist->add_option("--class-b", class_b);
    mnist->add_option("--per-class", per_class);

    CLI11_PARSE(app, argc, argv);

    try {
        const json cfg = load_config(config_path);
        if (analyze->parsed()) return cmd_analyze(expr, depth, as_json, dot_dir);
        if (scaling->parsed())
            return run_scaling_suite(cfg, preset.empty() ? "table1" : preset, spec_text, out_dir,
                                     seed, workers, false);
        if (variance->parsed())
            return run_scaling_suite(cfg, preset.empty() ? "table3" : preset, spec_text, out_dir,
                                     seed, workers, true);
        if (dynamics->parsed()) return run_dynamics(cfg, preset, out_dir, seed, workers);
        if (spectrum->parsed()) return run_spectrum(cfg, preset, out_dir, seed, workers);
        if (mnist->parsed()) {
            const auto set = widthlab::io::load_mnist(images_path, labels_path, class_a, class_b,
                                                      per_class);
            std::cout << "loaded " << set.size() << " samples, input dim " << set.input_dim()
                      << "\n";
            return 0;
        }
    } catch (const widthlab::SyntaxError& e) {
        std::cerr << widthlab::corr::caret_diagnostic(expr, e) << "\n";
        return kExitParse;
    } catch (const widthlab::PairingError& e) {
        std::cerr << "pairing error: " << e.what() << "\n";
        return kExitParse;
    } catch (const widthlab::ParityError& e) {
        std::cerr << "parity error: " << e.what() << "\n";
        return kExitParse;
    } catch (const widthlab::SizeError& e) {
        std::cerr << "size budget: " << e.what() << "\n";
        return kExitBudget;
    } catch (const widthlab::BudgetError& e) {
        std::cerr << "budget: " << e.what() << "\n";
        return kExitBudget;
    } catch (const widthlab::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return 0;
}
