#include "widthlab/ensemble/experiment.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "widthlab/net/plan.hpp"
#include "widthlab/parallel.hpp"

namespace widthlab::ensemble {

void ExperimentConfig::validate() const {
    if (widths.size() < 3) throw Error("need at least 3 widths");
    for (std::size_t i = 1; i < widths.size(); ++i)
        if (widths[i] <= widths[i - 1]) throw Error("widths must be strictly increasing");
    if (seeds_per_width < 2) throw Error("need at least 2 seeds per width");
    spec.validate();
}

namespace {

// inputs fixed per experiment: one vector per label, standard normal entries
net::InputMap draw_inputs(const std::vector<std::string>& labels, int dim, std::uint64_t master) {
    net::InputMap inputs;
    SplitMix64 rng(substream_seed(master, 0x1A9F));
    for (const auto& label : labels) {
        Eigen::VectorXd x(dim);
        for (int i = 0; i < dim; ++i) x(i) = rng.next_gaussian();
        inputs[label] = std::move(x);
    }
    return inputs;
}

ScalingResult summarize(const std::string& name, const corr::CorrelationSpec& spec,
                        const std::vector<int>& widths,
                        const std::vector<std::vector<double>>& values_per_width) {
    ScalingResult result;
    result.name = name;
    const Rational s_C = corr::cluster_graph(spec).s_C;
    result.bound = s_C;
    result.variance_bound = Rational(2) * s_C;

    std::vector<std::pair<double, double>> mean_points, var_points;
    for (std::size_t w = 0; w < widths.size(); ++w) {
        WidthStats ws;
        ws.width = widths[w];
        ws.stats = sample_stats(values_per_width[w]);
        ws.admissible = std::abs(ws.stats.mean) > 2.0 * ws.stats.stderror;
        if (ws.admissible) {
            mean_points.emplace_back(ws.width, ws.stats.mean);
            result.mean_sign = ws.stats.mean > 0 ? 1 : -1;
        }
        if (ws.stats.variance > 0) var_points.emplace_back(ws.width, ws.stats.variance);
        result.per_width.push_back(ws);
    }
    try {
        result.mean_fit = fit_slope(mean_points);
    } catch (const LowSignal&) {
        result.mean_low_signal = true;
    }
    result.variance_fit = fit_slope(var_points);

    if (!result.mean_low_signal)
        result.mean_bound_violated =
            result.mean_fit.slope > s_C.value() + 3.0 * result.mean_fit.stderror;
    result.variance_bound_violated =
        result.variance_fit.slope > result.variance_bound.value() + 3.0 * result.variance_fit.stderror;
    return result;
}

}  // namespace

std::vector<ScalingResult> run_suite(
    const std::vector<std::pair<std::string, corr::CorrelationSpec>>& rows,
    const ExperimentConfig& shared) {
    ExperimentConfig check = shared;
    if (!rows.empty()) check.spec = rows.front().second;
    check.validate();

    // one input vector per label across all rows
    std::vector<std::string> labels;
    for (const auto& [name, spec] : rows)
        for (const auto& label : spec.inputs())
            if (std::find(labels.begin(), labels.end(), label) == labels.end())
                labels.push_back(label);
    const net::InputMap inputs = draw_inputs(labels, shared.net.input_dim, shared.master_seed);

    std::vector<net::EvalPlan> plans;
    plans.reserve(rows.size());
    for (const auto& [name, spec] : rows) plans.push_back(net::compile(spec));

    const std::size_t n_widths = shared.widths.size();
    const std::size_t seeds = static_cast<std::size_t>(shared.seeds_per_width);
    // values[row][width][seed]
    std::vector<std::vector<std::vector<double>>> values(
        rows.size(), std::vector<std::vector<double>>(n_widths, std::vector<double>(seeds)));

    parallel_for(n_widths * seeds, shared.workers, [&](std::size_t task) {
        const std::size_t w = task / seeds;
        const std::size_t s = task % seeds;
        net::MLPConfig cfg;
        cfg.input_dim = shared.net.input_dim;
        cfg.width = shared.widths[w];
        cfg.hidden_layers = shared.net.hidden_layers;
        cfg.activation = shared.net.activation;
        cfg.normalize_input = shared.net.normalize_input;
        cfg.init = shared.net.init;
        cfg.seed = substream_seed(shared.master_seed, w * 1'000'000 + s);
        const net::ParamSet params = net::init(cfg);
        for (std::size_t r = 0; r < rows.size(); ++r)
            values[r][w][s] = net::evaluate_with_plan(plans[r], rows[r].second, params, inputs);
    });

    std::vector<ScalingResult> results;
    results.reserve(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        results.push_back(summarize(rows[r].first, rows[r].second, shared.widths, values[r]));
    return results;
}

ScalingResult run(const ExperimentConfig& config) {
    return run_suite({{config.name, config.spec}}, config).front();
}

ScalingResult run_variance(const ExperimentConfig& config) { return run(config); }

std::vector<std::string> emit_report(const std::vector<ScalingResult>& results,
                                     const std::string& out_dir, const std::string& config_echo) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory '" + out_dir + "': " + ec.message());

    std::vector<std::string> written;
    auto open = [&](const std::string& name) {
        std::ofstream os(out_dir + "/" + name);
        if (!os) throw IoError("cannot write '" + out_dir + "/" + name + "'");
        written.push_back(out_dir + "/" + name);
        return os;
    };

    char buf[192];
    for (const auto& result : results) {
        auto csv = open(result.name + ".csv");
        csv << "n,mean,variance,stderr,count\n";
        for (const auto& ws : result.per_width) {
            std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%lld\n", ws.width, ws.stats.mean,
                          ws.stats.variance, ws.stats.stderror,
                          static_cast<long long>(ws.stats.count));
            csv << buf;
        }
    }

    nlohmann::json summary;
    summary["results"] = nlohmann::json::array();
    for (const auto& result : results) {
        nlohmann::json j;
        j["name"] = result.name;
        j["bound_s_C"] = result.bound.str();
        j["bound_s_C_value"] = result.bound.value();
        j["variance_bound"] = result.variance_bound.str();
        j["mean_slope"] = result.mean_fit.slope;
        j["mean_slope_stderr"] = result.mean_fit.stderror;
        j["mean_low_signal"] = result.mean_low_signal;
        j["mean_sign"] = result.mean_sign;
        j["variance_slope"] = result.variance_fit.slope;
        j["variance_slope_stderr"] = result.variance_fit.stderror;
        j["mean_bound_violated"] = result.mean_bound_violated;
        j["variance_bound_violated"] = result.variance_bound_violated;
        summary["results"].push_back(j);
    }
    {
        auto js = open("summary.json");
        js << summary.dump(2) << '\n';
    }
    if (!config_echo.empty()) {
        auto cfg = open("config.json");
        cfg << config_echo << '\n';
    }
    {
        auto gp = open("plot.gp");
        gp << "set logscale xy\nset xlabel 'width n'\nset ylabel '|mean|'\nplot \\\n";
        for (std::size_t i = 0; i < results.size(); ++i) {
            gp << "  '" << results[i].name << ".csv' using 1:(abs($2)) with linespoints title '"
               << results[i].name << "'";
            gp << (i + 1 < results.size() ? ", \\\n" : "\n");
        }
    }
    return written;
}

}  // namespace widthlab::ensemble
