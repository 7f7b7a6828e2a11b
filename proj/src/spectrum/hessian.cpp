#include "widthlab/spectrum/hessian.hpp"

#include "widthlab/net/engine.hpp"
#include "widthlab/rng.hpp"

namespace widthlab::spectrum {

HessianOps::HessianOps(const net::ParamSet& params, const dynamics::TrainSet& train)
    : params_(params), train_(train) {
    const int M = train.size();
    grads_.resize(M);
    residual_.resize(M);
    for (int a = 0; a < M; ++a) {
        grads_[a] = net::gradient(params, train.point(a));
        residual_(a) = net::forward_value(params, train.point(a)) - train.labels(a);
    }
}

Eigen::VectorXd HessianOps::A_mv(const Eigen::VectorXd& v) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(v.size());
    for (const auto& g : grads_) out += g.dot(v) * g;
    return out;
}

Eigen::VectorXd HessianOps::B_mv(const Eigen::VectorXd& v) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(v.size());
    for (int a = 0; a < train_size(); ++a)
        out += residual_(a) * net::hvp(params_, train_.point(a), v);
    return out;
}

Eigen::VectorXd HessianOps::H_mv(const Eigen::VectorXd& v) const { return A_mv(v) + B_mv(v); }

Eigen::MatrixXd HessianOps::theta() const {
    const int M = train_size();
    Eigen::MatrixXd th(M, M);
    for (int a = 0; a < M; ++a)
        for (int b = a; b < M; ++b) th(a, b) = th(b, a) = grads_[a].dot(grads_[b]);
    return th;
}

std::vector<double> top_eigenvalues(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& mv, int dim, int k,
    std::uint64_t seed, int iterations, double tol) {
    SplitMix64 rng(seed);
    auto random_unit = [&] {
        Eigen::VectorXd v(dim);
        for (int i = 0; i < dim; ++i) v(i) = rng.next_gaussian();
        v.normalize();
        return v;
    };

    // magnitude estimate, then a positive shift so power iteration converges
    // to the algebraically largest eigenvalues
    double magnitude = 0.0;
    {
        Eigen::VectorXd v = random_unit();
        for (int it = 0; it < 60; ++it) {
            Eigen::VectorXd u = mv(v);
            const double norm = u.norm();
            if (norm == 0.0) break;
            magnitude = norm;
            v = u / norm;
        }
    }
    const double shift = 1.25 * magnitude + 1e-12;
    auto shifted = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd { return mv(v) + shift * v; };

    std::vector<double> values;
    std::vector<Eigen::VectorXd> vectors;
    for (int e = 0; e < k; ++e) {
        Eigen::VectorXd v = random_unit();
        auto deflate = [&](Eigen::VectorXd& u) {
            for (const auto& w : vectors) u -= w.dot(u) * w;
        };
        deflate(v);
        v.normalize();
        double lambda = 0.0;
        for (int it = 0; it < iterations; ++it) {
            Eigen::VectorXd u = shifted(v);
            deflate(u);
            const double norm = u.norm();
            if (norm == 0.0) break;
            u /= norm;
            const double next = u.dot(shifted(u));
            const bool converged = std::abs(next - lambda) <= tol * std::max(1.0, std::abs(next));
            lambda = next;
            v = std::move(u);
            if (converged && it > 2) break;
        }
        values.push_back(lambda - shift);
        vectors.push_back(v);
    }
    return values;
}

}  // namespace widthlab::spectrum
