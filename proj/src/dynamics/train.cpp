#include "widthlab/dynamics/train.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "widthlab/net/engine.hpp"
#include "widthlab/rng.hpp"

namespace widthlab::dynamics {

double mse_loss(const net::ParamSet& params, const TrainSet& trainset) {
    double loss = 0.0;
    for (int a = 0; a < trainset.size(); ++a) {
        const double r = net::forward_value(params, trainset.point(a)) - trainset.labels(a);
        loss += 0.5 * r * r;
    }
    return loss;
}

Trajectory train(net::ParamSet& params, const TrainSet& trainset, const TrainOptions& opts) {
    trainset.validate();
    const int M = trainset.size();
    if (opts.batch < 0 || opts.batch > M) throw Error("invalid batch size");

    Trajectory traj;
    traj.kind = "emp";
    traj.tracked = opts.tracked;
    std::vector<Eigen::VectorXd> f_rows, th_rows;

    SplitMix64 batch_rng(opts.batch_seed);
    std::vector<int> order(M);
    std::iota(order.begin(), order.end(), 0);

    auto record = [&](int step) {
        traj.times.push_back(opts.eta * step);
        Eigen::VectorXd f(M);
        for (int a = 0; a < M; ++a) f(a) = net::forward_value(params, trainset.point(a));
        f_rows.push_back(f);
        if (!opts.tracked.empty()) {
            // gradients only at the tracked points
            std::map<int, Eigen::VectorXd> grads;
            for (const auto& [a, b] : opts.tracked) {
                if (!grads.count(a)) grads.emplace(a, net::gradient(params, trainset.point(a)));
                if (!grads.count(b)) grads.emplace(b, net::gradient(params, trainset.point(b)));
            }
            Eigen::VectorXd th(opts.tracked.size());
            for (std::size_t p = 0; p < opts.tracked.size(); ++p)
                th(p) = grads.at(opts.tracked[p].first).dot(grads.at(opts.tracked[p].second));
            th_rows.push_back(th);
        }
    };

    for (int step = 0; step <= opts.steps; ++step) {
        if (step % opts.record_every == 0 || step == opts.steps) record(step);
        if (step == opts.steps) break;

        int count = M;
        if (opts.batch > 0 && opts.batch < M) {
            // partial Fisher-Yates: first `batch` entries of a fresh shuffle
            for (int i = 0; i < opts.batch; ++i) {
                const int j = i + static_cast<int>(batch_rng.next_below(M - i));
                std::swap(order[i], order[j]);
            }
            count = opts.batch;
        }
        Eigen::VectorXd update = Eigen::VectorXd::Zero(params.param_count());
        for (int k = 0; k < count; ++k) {
            const int a = (opts.batch > 0 && opts.batch < M) ? order[k] : k;
            const double resid =
                net::forward_value(params, trainset.point(a)) - trainset.labels(a);
            update += resid * net::gradient(params, trainset.point(a));
        }
        params.add_scaled(update, -opts.eta);

        const double loss = mse_loss(params, trainset);
        if (!std::isfinite(loss) || loss > opts.divergence_loss)
            throw StabilityError("training diverged at step " + std::to_string(step + 1) +
                                 ", loss " + std::to_string(loss));
    }

    traj.f.resize(f_rows.size(), M);
    for (std::size_t r = 0; r < f_rows.size(); ++r) traj.f.row(r) = f_rows[r].transpose();
    traj.theta.resize(th_rows.size(), opts.tracked.size());
    for (std::size_t r = 0; r < th_rows.size(); ++r) traj.theta.row(r) = th_rows[r].transpose();
    return traj;
}

CompareMetrics compare(const Trajectory& reference, const Trajectory& predicted) {
    if (reference.times.size() != predicted.times.size())
        throw GridMismatch("trajectory grids differ in length");
    for (std::size_t i = 0; i < reference.times.size(); ++i)
        if (std::abs(reference.times[i] - predicted.times[i]) >
            1e-9 * (1.0 + std::abs(reference.times[i])))
            throw GridMismatch("trajectory time grids differ at index " + std::to_string(i));
    if (reference.tracked != predicted.tracked)
        throw GridMismatch("tracked kernel entries differ");

    CompareMetrics metrics;
    auto fill = [](const Eigen::MatrixXd& ref, const Eigen::MatrixXd& pred, double& max_abs,
                   double& rms, double& rms_rel) {
        if (ref.size() == 0) return;
        const Eigen::MatrixXd diff = pred - ref;
        max_abs = diff.cwiseAbs().maxCoeff();
        rms = std::sqrt(diff.squaredNorm() / diff.size());
        // scale: reference's deviation from its initial row
        Eigen::MatrixXd dev = ref;
        for (Eigen::Index r = 0; r < ref.rows(); ++r) dev.row(r) = ref.row(r) - ref.row(0);
        const double scale = std::sqrt(dev.squaredNorm() / dev.size());
        rms_rel = scale > 0 ? rms / scale : rms;
    };
    fill(reference.f, predicted.f, metrics.f_max_abs, metrics.f_rms, metrics.f_rms_rel);
    fill(reference.theta, predicted.theta, metrics.theta_max_abs, metrics.theta_rms,
         metrics.theta_rms_rel);
    return metrics;
}

}  // namespace widthlab::dynamics
