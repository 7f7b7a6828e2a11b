#include "widthlab/dynamics/experiments.hpp"

#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "widthlab/parallel.hpp"
#include "widthlab/rng.hpp"

namespace widthlab::dynamics {

namespace {

net::MLPConfig make_net_config(const DynamicsNet& dn, int width, std::uint64_t seed) {
    net::MLPConfig cfg;
    cfg.input_dim = dn.input_dim;
    cfg.width = width;
    cfg.hidden_layers = dn.hidden_layers;
    cfg.activation = dn.activation;
    cfg.normalize_input = dn.normalize_input;
    cfg.seed = seed;
    return cfg;
}

}  // namespace

DeviationScan ntk_deviation_scan(const DeviationScanConfig& config) {
    const TrainSet trainset =
        config.dataset ? *config.dataset
                       : synthetic_two_class(config.trainset_size, config.net.input_dim,
                                             substream_seed(config.master_seed, 0x5E7));
    // every kernel entry on the upper triangle is tracked
    std::vector<std::pair<int, int>> tracked;
    for (int a = 0; a < trainset.size(); ++a)
        for (int b = a; b < trainset.size(); ++b) tracked.emplace_back(a, b);

    DeviationScan scan;
    for (std::size_t w = 0; w < config.widths.size(); ++w) {
        std::vector<double> devs(config.seeds_per_width);
        parallel_for(config.seeds_per_width, config.workers, [&](std::size_t s) {
            auto net_cfg = make_net_config(config.net, config.widths[w],
                                           substream_seed(config.master_seed, w * 1'000'000 + s));
            net_cfg.input_dim = trainset.input_dim();
            net::ParamSet params = net::init(net_cfg);
            TrainOptions opts;
            opts.eta = config.eta;
            opts.steps = config.steps;
            opts.record_every = config.steps;  // initial and final states only
            opts.batch = config.batch;
            opts.batch_seed = substream_seed(config.master_seed, 0xBA7C + s);
            opts.tracked = tracked;
            const Trajectory traj = train(params, trainset, opts);
            const Eigen::VectorXd diff = traj.theta.row(traj.theta.rows() - 1) - traj.theta.row(0);
            devs[s] = diff.cwiseAbs().mean();
        });
        scan.widths.push_back(config.widths[w]);
        scan.mean_deviation.push_back(ensemble::sample_stats(devs).mean);
    }
    std::vector<std::pair<double, double>> points;
    for (std::size_t w = 0; w < scan.widths.size(); ++w)
        points.emplace_back(scan.widths[w], scan.mean_deviation[w]);
    scan.fit = ensemble::fit_slope(points);
    return scan;
}

ComparisonResult trajectory_comparison(const ComparisonConfig& config) {
    const TrainSet trainset =
        config.dataset ? *config.dataset
                       : synthetic_two_class(config.trainset_size, config.net.input_dim,
                                             substream_seed(config.seed, 0x5E7));
    auto net_cfg = make_net_config(config.net, config.width, substream_seed(config.seed, 1));
    net_cfg.input_dim = trainset.input_dim();
    net::ParamSet params = net::init(net_cfg);

    const KernelState state = kernel_state(params, trainset);
    const NLOTables tables = nlo_tables(params, trainset);

    ComparisonResult result;
    result.lo = lo_solution_discrete(state, config.eta, config.steps, config.record_every,
                                     config.tracked);
    result.nlo =
        nlo_discrete(state, tables, config.eta, config.steps, config.record_every, config.tracked);

    TrainOptions opts;
    opts.eta = config.eta;
    opts.steps = config.steps;
    opts.record_every = config.record_every;
    opts.tracked = config.tracked;
    result.empirical = train(params, trainset, opts);

    result.lo_metrics = compare(result.empirical, result.lo);
    result.nlo_metrics = compare(result.empirical, result.nlo);
    result.f_improvement =
        result.nlo_metrics.f_rms > 0 ? result.lo_metrics.f_rms / result.nlo_metrics.f_rms : 0.0;
    result.theta_improvement = result.nlo_metrics.theta_rms > 0
                                   ? result.lo_metrics.theta_rms / result.nlo_metrics.theta_rms
                                   : 0.0;
    return result;
}

LinearityScan sgd_linearity_scan(const LinearityScanConfig& config) {
    const TrainSet trainset = synthetic_two_class(config.trainset_size, config.net.input_dim,
                                                  substream_seed(config.master_seed, 0x5E7));
    LinearityScan scan;
    for (std::size_t w = 0; w < config.widths.size(); ++w) {
        std::vector<double> norms(config.seeds_per_width);
        parallel_for(config.seeds_per_width, config.workers, [&](std::size_t s) {
            net::ParamSet params = net::init(make_net_config(
                config.net, config.widths[w],
                substream_seed(config.master_seed, w * 1'000'000 + s)));
            const KernelState state = kernel_state(params, trainset);

            TrainOptions opts;
            opts.eta = config.eta;
            opts.steps = 1;
            opts.record_every = 1;
            opts.batch = config.batch;
            opts.batch_seed = substream_seed(config.master_seed, 0xBA7C + s);
            const Trajectory traj = train(params, trainset, opts);
            const Eigen::VectorXd df = (traj.f.row(1) - traj.f.row(0)).transpose();
            const Eigen::VectorXd linear = -config.eta * (state.theta0 * state.residual0);
            norms[s] = (df - linear).norm();
        });
        scan.widths.push_back(config.widths[w]);
        scan.mean_residual.push_back(ensemble::sample_stats(norms).mean);
    }
    std::vector<std::pair<double, double>> points;
    for (std::size_t w = 0; w < scan.widths.size(); ++w)
        points.emplace_back(scan.widths[w], scan.mean_residual[w]);
    scan.fit = ensemble::fit_slope(points);
    return scan;
}

std::string trajectories_to_csv(const ComparisonResult& result) {
    std::ostringstream os;
    os << "t,kind,index,value\n";
    char buf[128];
    auto dump = [&](const Trajectory& traj, const char* suffix) {
        for (std::size_t ti = 0; ti < traj.times.size(); ++ti) {
            for (Eigen::Index i = 0; i < traj.f.cols(); ++i) {
                std::snprintf(buf, sizeof buf, "%.17g,f_%s,%ld,%.17g\n", traj.times[ti], suffix,
                              static_cast<long>(i), traj.f(ti, i));
                os << buf;
            }
            for (std::size_t p = 0; p < traj.tracked.size(); ++p) {
                std::snprintf(buf, sizeof buf, "%.17g,theta_%s,%ld,%.17g\n", traj.times[ti],
                              suffix, static_cast<long>(p), traj.theta(ti, p));
                os << buf;
            }
        }
    };
    dump(result.empirical, "emp");
    dump(result.lo, "lo");
    dump(result.nlo, "nlo");
    return os.str();
}

std::string metrics_to_json(const ComparisonResult& result) {
    nlohmann::json j;
    auto fill = [](const CompareMetrics& m) {
        return nlohmann::json{{"f_max_abs", m.f_max_abs},
                              {"f_rms", m.f_rms},
                              {"f_rms_rel", m.f_rms_rel},
                              {"theta_max_abs", m.theta_max_abs},
                              {"theta_rms", m.theta_rms},
                              {"theta_rms_rel", m.theta_rms_rel}};
    };
    j["lo"] = fill(result.lo_metrics);
    j["nlo"] = fill(result.nlo_metrics);
    j["f_improvement"] = result.f_improvement;
    j["theta_improvement"] = result.theta_improvement;
    return j.dump(2);
}

}  // namespace widthlab::dynamics
