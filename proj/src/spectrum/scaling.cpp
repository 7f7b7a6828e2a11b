#include "widthlab/spectrum/scaling.hpp"

#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "widthlab/parallel.hpp"
#include "widthlab/rng.hpp"

namespace widthlab::spectrum {

SpectrumReport eig_scaling(const SpectrumConfig& config) {
    SpectrumReport report;
    report.config = config;
    const std::size_t seeds = static_cast<std::size_t>(config.seeds_per_width);

    for (std::size_t w = 0; w < config.widths.size(); ++w) {
        std::vector<double> gaps(seeds), brms(seeds);
        std::vector<std::array<double, 4>> hmom(seeds), tmom(seeds);
        parallel_for(seeds, config.workers, [&](std::size_t s) {
            net::MLPConfig cfg;
            cfg.input_dim = config.input_dim;
            cfg.width = config.widths[w];
            cfg.hidden_layers = config.hidden_layers;
            cfg.activation = config.activation;
            cfg.normalize_input = true;
            cfg.seed = substream_seed(config.master_seed, w * 1'000'000 + s);
            const net::ParamSet params = net::init(cfg);
            const dynamics::TrainSet train = dynamics::synthetic_two_class(
                config.trainset_size, config.input_dim, substream_seed(config.master_seed, 0x77));
            HessianOps ops(params, train);

            const Eigen::MatrixXd theta = ops.theta();
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(theta);
            const double theta_top = es.eigenvalues().maxCoeff();
            const double h_top =
                top_eigenvalues([&](const Eigen::VectorXd& v) { return ops.H_mv(v); }, ops.dim(),
                                1, substream_seed(config.master_seed, 0x99 + s), 150, 1e-9)[0];
            gaps[s] = std::abs(h_top - theta_top);

            const double trb2 = trace_B2_hutchinson(ops, config.hutchinson_probes,
                                                    substream_seed(config.master_seed, 0xB0 + s));
            brms[s] = std::sqrt(std::max(0.0, trb2) / ops.dim());

            Eigen::MatrixXd pw = theta;
            for (int m = 1; m <= 4; ++m) {
                tmom[s][m - 1] = pw.trace();
                if (m < 4) pw = pw * theta;
            }
            for (int m = 1; m <= 4; ++m)
                hmom[s][m - 1] = trace_hutchinson(
                    [&](const Eigen::VectorXd& v) { return ops.H_mv(v); }, ops.dim(), m,
                    config.hutchinson_probes, substream_seed(config.master_seed, 0xC0 + s));
        });
        auto mean_of = [](const std::vector<double>& v) {
            return ensemble::sample_stats(v).mean;
        };
        report.widths.push_back(config.widths[w]);
        report.top_gap_mean.push_back(mean_of(gaps));
        report.b_rms_mean.push_back(mean_of(brms));
        std::array<double, 4> hm{}, tm{};
        for (int m = 0; m < 4; ++m) {
            std::vector<double> hv(seeds), tv(seeds);
            for (std::size_t s = 0; s < seeds; ++s) {
                hv[s] = hmom[s][m];
                tv[s] = tmom[s][m];
            }
            hm[m] = mean_of(hv);
            tm[m] = mean_of(tv);
        }
        report.h_moments_mean.push_back(hm);
        report.theta_moments_mean.push_back(tm);
    }

    std::vector<std::pair<double, double>> gap_points, brms_points;
    for (std::size_t w = 0; w < report.widths.size(); ++w) {
        gap_points.emplace_back(report.widths[w], report.top_gap_mean[w]);
        brms_points.emplace_back(report.widths[w], report.b_rms_mean[w]);
    }
    report.top_gap_fit = ensemble::fit_slope(gap_points);
    report.b_rms_fit = ensemble::fit_slope(brms_points);
    return report;
}

std::string to_json(const SpectrumReport& report) {
    nlohmann::json j;
    j["widths"] = report.widths;
    j["top_gap_mean"] = report.top_gap_mean;
    j["b_rms_mean"] = report.b_rms_mean;
    j["top_gap_slope"] = report.top_gap_fit.slope;
    j["top_gap_slope_stderr"] = report.top_gap_fit.stderror;
    j["b_rms_slope"] = report.b_rms_fit.slope;
    j["b_rms_slope_stderr"] = report.b_rms_fit.stderror;
    j["h_moments_mean"] = report.h_moments_mean;
    j["theta_moments_mean"] = report.theta_moments_mean;
    return j.dump(2);
}

std::string to_csv(const SpectrumReport& report) {
    std::ostringstream os;
    os << "n,top_gap,b_rms,h_m1,h_m2,h_m3,h_m4,theta_m1,theta_m2,theta_m3,theta_m4\n";
    char buf[512];
    for (std::size_t w = 0; w < report.widths.size(); ++w) {
        std::snprintf(buf, sizeof buf,
                      "%g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      report.widths[w], report.top_gap_mean[w], report.b_rms_mean[w],
                      report.h_moments_mean[w][0], report.h_moments_mean[w][1],
                      report.h_moments_mean[w][2], report.h_moments_mean[w][3],
                      report.theta_moments_mean[w][0], report.theta_moments_mean[w][1],
                      report.theta_moments_mean[w][2], report.theta_moments_mean[w][3]);
        os << buf;
    }
    return os.str();
}

}  // namespace widthlab::spectrum
