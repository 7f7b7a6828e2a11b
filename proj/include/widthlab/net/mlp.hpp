#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "widthlab/errors.hpp"
#include "widthlab/net/dual.hpp"
#include "widthlab/rng.hpp"

namespace widthlab::net {

enum class Activation { linear, relu, tanh_ };
enum class InitKind { gaussian_unit, rademacher };

Activation activation_from_string(const std::string& s);
std::string to_string(Activation a);
InitKind init_from_string(const std::string& s);
std::string to_string(InitKind k);

// Fully connected, bias-free, single scalar output:
//   f(x) = n^{-1/2} V^T s(n^{-1/2} W^{d-1} ... s(n^{-1/2} W^1 s(c U x)))
// with c = input_dim^{-1/2} when input normalization is on, 1 otherwise.
struct MLPConfig {
    int input_dim = 4;
    int width = 32;
    int hidden_layers = 1;  // d >= 1; weights are U, W^1..W^{d-1}, V
    Activation activation = Activation::linear;
    bool normalize_input = false;
    InitKind init = InitKind::gaussian_unit;
    std::uint64_t seed = 0;

    int param_count() const {
        return width * input_dim + (hidden_layers - 1) * width * width + width;
    }
    double input_scale() const { return normalize_input ? 1.0 / std::sqrt(double(input_dim)) : 1.0; }
};

// Parameter blocks plus the flattened-index convention: the parameter vector
// is [U column-major | W^1 column-major | ... | V].
struct ParamSet {
    MLPConfig cfg;
    Eigen::MatrixXd U;               // width x input_dim
    std::vector<Eigen::MatrixXd> W;  // hidden_layers-1 of width x width
    Eigen::VectorXd V;               // width

    int param_count() const { return cfg.param_count(); }

    Eigen::VectorXd flatten() const;
    void unflatten(const Eigen::VectorXd& theta);

    // axpy in parameter space: this += alpha * direction
    void add_scaled(const Eigen::VectorXd& direction, double alpha);
};

// Deterministic function of (config, seed): SplitMix64 + Box-Muller for
// gaussian_unit, +-1 draws for rademacher; fill order U, W^1.., V.
ParamSet init(const MLPConfig& cfg);

// binary dump (magic "WLP1", dims, little-endian f64) for debugging
void save_params(const ParamSet& p, const std::string& path);
ParamSet load_params(const std::string& path);

namespace detail {

template <class S>
inline S apply_act(Activation act, const S& z) {
    switch (act) {
        case Activation::linear: return z;
        case Activation::relu: return leaf_value(z) > 0.0 ? z : S(0.0);
        case Activation::tanh_: return tanh(z);
    }
    return z;
}

// derivative of the activation at z; relu uses the a.e. rule with value 0 at
// the kink
template <class S>
inline S apply_act_prime(Activation act, const S& z) {
    switch (act) {
        case Activation::linear: return S(1.0);
        case Activation::relu: return S(leaf_value(z) > 0.0 ? 1.0 : 0.0);
        case Activation::tanh_: {
            const S t = tanh(z);
            return S(1.0) - t * t;
        }
    }
    return S(1.0);
}

}  // namespace detail

// Parameters cast to scalar S with up to two independent perturbation
// directions folded in (theta + eps1*a + eps2*b for S = Dual<Dual<double>>).
template <class S>
struct ParamView {
    Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> U;
    std::vector<Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>> W;
    Eigen::Matrix<S, Eigen::Dynamic, 1> V;
    const MLPConfig* cfg = nullptr;
};

template <class S>
ParamView<S> plain_view(const ParamSet& p) {
    ParamView<S> view;
    view.cfg = &p.cfg;
    view.U = p.U.cast<S>();
    view.W.reserve(p.W.size());
    for (const auto& w : p.W) view.W.push_back(w.template cast<S>());
    view.V = p.V.cast<S>();
    return view;
}

// theta + eps * dir, with dir given as a flat parameter vector
inline ParamView<D1> perturbed_view(const ParamSet& p, const Eigen::VectorXd& dir) {
    ParamView<D1> view;
    view.cfg = &p.cfg;
    const int n = p.cfg.width, din = p.cfg.input_dim;
    auto fill = [](auto& dst, const Eigen::MatrixXd& val, const double* dptr, int rows, int cols) {
        dst.resize(rows, cols);
        for (int c = 0; c < cols; ++c)
            for (int r = 0; r < rows; ++r) dst(r, c) = D1(val(r, c), dptr[c * rows + r]);
    };
    const double* ptr = dir.data();
    fill(view.U, p.U, ptr, n, din);
    ptr += n * din;
    view.W.resize(p.W.size());
    for (std::size_t l = 0; l < p.W.size(); ++l) {
        fill(view.W[l], p.W[l], ptr, n, n);
        ptr += n * n;
    }
    view.V.resize(n);
    for (int i = 0; i < n; ++i) view.V(i) = D1(p.V(i), ptr[i]);
    return view;
}

// theta + eps1 * a + eps2 * b
inline ParamView<D2> perturbed_view2(const ParamSet& p, const Eigen::VectorXd& a,
                                     const Eigen::VectorXd& b) {
    ParamView<D2> view;
    view.cfg = &p.cfg;
    const int n = p.cfg.width, din = p.cfg.input_dim;
    auto fill = [](auto& dst, const Eigen::MatrixXd& val, const double* ap, const double* bp,
                   int rows, int cols) {
        dst.resize(rows, cols);
        for (int c = 0; c < cols; ++c)
            for (int r = 0; r < rows; ++r) {
                const int k = c * rows + r;
                dst(r, c) = D2(D1(val(r, c), ap[k]), D1(bp[k], 0.0));
            }
    };
    const double* ap = a.data();
    const double* bp = b.data();
    fill(view.U, p.U, ap, bp, n, din);
    ap += n * din;
    bp += n * din;
    view.W.resize(p.W.size());
    for (std::size_t l = 0; l < p.W.size(); ++l) {
        fill(view.W[l], p.W[l], ap, bp, n, n);
        ap += n * n;
        bp += n * n;
    }
    view.V.resize(n);
    for (int i = 0; i < n; ++i) view.V(i) = D2(D1(p.V(i), ap[i]), D1(bp[i], 0.0));
    return view;
}

// network value
template <class S>
S forward(const ParamView<S>& p, const Eigen::VectorXd& x) {
    const MLPConfig& cfg = *p.cfg;
    const S inv_sqrt_n = S(1.0 / std::sqrt(double(cfg.width)));
    using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;
    Vec h = p.U * x.cast<S>() * S(cfg.input_scale());
    for (int i = 0; i < cfg.width; ++i) h(i) = detail::apply_act(cfg.activation, h(i));
    for (const auto& w : p.W) {
        Vec z = w * h * inv_sqrt_n;
        for (int i = 0; i < cfg.width; ++i) z(i) = detail::apply_act(cfg.activation, z(i));
        h = std::move(z);
    }
    S f(0.0);
    for (int i = 0; i < cfg.width; ++i) f += p.V(i) * h(i);
    return f * inv_sqrt_n;
}

// Exact reverse accumulation of df/dtheta as a flat vector in block order.
// Running it over dual-valued parameters yields Hessian-vector products
// (S = D1) and once-open third derivatives (S = D2) from the eps parts.
template <class S>
Eigen::Matrix<S, Eigen::Dynamic, 1> gradient(const ParamView<S>& p, const Eigen::VectorXd& x) {
    const MLPConfig& cfg = *p.cfg;
    using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;
    const int n = cfg.width, din = cfg.input_dim, d = cfg.hidden_layers;
    const S inv_sqrt_n = S(1.0 / std::sqrt(double(n)));
    const S input_scale = S(cfg.input_scale());

    std::vector<Vec> pre(d);  // pre-activations z_0..z_{d-1}
    std::vector<Vec> act(d);  // activations a_0..a_{d-1}
    pre[0] = p.U * x.cast<S>() * input_scale;
    act[0] = pre[0];
    for (int i = 0; i < n; ++i) act[0](i) = detail::apply_act(cfg.activation, pre[0](i));
    for (int l = 1; l < d; ++l) {
        pre[l] = p.W[l - 1] * act[l - 1] * inv_sqrt_n;
        act[l] = pre[l];
        for (int i = 0; i < n; ++i) act[l](i) = detail::apply_act(cfg.activation, pre[l](i));
    }

    Eigen::Matrix<S, Eigen::Dynamic, 1> grad(cfg.param_count());

    // df/dV
    const int v_offset = n * din + (d - 1) * n * n;
    for (int i = 0; i < n; ++i) grad(v_offset + i) = inv_sqrt_n * act[d - 1](i);

    // delta_l = df/d(pre[l])
    Vec delta(n);
    for (int i = 0; i < n; ++i)
        delta(i) = inv_sqrt_n * p.V(i) * detail::apply_act_prime(cfg.activation, pre[d - 1](i));
    for (int l = d - 1; l >= 1; --l) {
        // df/dW^l = inv_sqrt_n * delta act[l-1]^T, column-major block
        S* block = grad.data() + n * din + (l - 1) * n * n;
        for (int c = 0; c < n; ++c) {
            const S ac = inv_sqrt_n * act[l - 1](c);
            for (int r = 0; r < n; ++r) block[c * n + r] = delta(r) * ac;
        }
        Vec back = p.W[l - 1].transpose() * delta * inv_sqrt_n;
        for (int i = 0; i < n; ++i)
            back(i) = back(i) * detail::apply_act_prime(cfg.activation, pre[l - 1](i));
        delta = std::move(back);
    }
    // df/dU = input_scale * delta x^T
    for (int c = 0; c < din; ++c) {
        const S xc = input_scale * S(x(c));
        for (int r = 0; r < n; ++r) grad(c * n + r) = delta(r) * xc;
    }
    return grad;
}

inline double forward_value(const ParamSet& p, const Eigen::VectorXd& x) {
    return forward(plain_view<double>(p), x);
}

inline Eigen::VectorXd gradient(const ParamSet& p, const Eigen::VectorXd& x) {
    return gradient(plain_view<double>(p), x);
}

}  // namespace widthlab::net
