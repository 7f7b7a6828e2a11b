#include "widthlab/net/plan.hpp"

#include <algorithm>
#include <numeric>

namespace widthlab::net {

namespace {

struct PairInfo {
    corr::SlotRef a, b;
    std::vector<std::pair<int, int>> offers;  // (tensor, vec slot id)
    int offer_from(int tensor_excluded) const {
        for (const auto& [t, id] : offers)
            if (t != tensor_excluded) return id;
        return -1;
    }
};

}  // namespace

EvalPlan compile(const corr::CorrelationSpec& spec) {
    spec.validate();
    EvalPlan plan;
    const int m = spec.tensor_count();

    std::vector<PairInfo> pairs;
    pairs.reserve(spec.pairs.size());
    for (const auto& [a, b] : spec.pairs) pairs.push_back({a, b, {}, });
    // pair index per slot
    std::vector<std::vector<int>> pair_of_slot(m);
    for (int t = 0; t < m; ++t) pair_of_slot[t].assign(spec.tensors[t].rank, -1);
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        pair_of_slot[pairs[p].a.tensor][pairs[p].a.slot] = static_cast<int>(p);
        pair_of_slot[pairs[p].b.tensor][pairs[p].b.slot] = static_cast<int>(p);
    }

    enum class Status { pending, done };
    std::vector<Status> status(m, Status::pending);

    for (int t = 0; t < m; ++t) {
        if (spec.tensors[t].rank == 0) {
            plan.steps.push_back({EvalPlan::Kind::value, t, {}, -1});
            status[t] = Status::done;
        }
    }
    for (int t = 0; t < m; ++t) {
        if (spec.tensors[t].rank == 1) {
            const int id = plan.vector_slots++;
            plan.steps.push_back({EvalPlan::Kind::grad, t, {}, id});
            pairs[pair_of_slot[t][0]].offers.push_back({t, id});
            status[t] = Status::done;
        }
    }

    bool progressed = true;
    while (progressed) {
        progressed = false;
        for (int t = 0; t < m; ++t) {
            if (status[t] != Status::pending) continue;
            const int rank = spec.tensors[t].rank;
            int open_slot = -1;
            int unfed = 0;
            for (int s = 0; s < rank; ++s) {
                if (pairs[pair_of_slot[t][s]].offer_from(t) < 0) {
                    ++unfed;
                    open_slot = s;
                }
            }
            if (unfed > 1) continue;
            EvalPlan::Step step;
            step.tensor = t;
            for (int s = 0; s < rank; ++s) {
                if (s == open_slot && unfed == 1) continue;
                step.deps.push_back(pairs[pair_of_slot[t][s]].offer_from(t));
            }
            if (unfed == 0) {
                step.kind = EvalPlan::Kind::contract;
            } else {
                step.kind = EvalPlan::Kind::once_open;
                step.out = plan.vector_slots++;
                pairs[pair_of_slot[t][open_slot]].offers.push_back({t, step.out});
            }
            plan.steps.push_back(std::move(step));
            status[t] = Status::done;
            progressed = true;
        }
    }
    for (int t = 0; t < m; ++t)
        if (status[t] == Status::pending)
            throw CyclicContraction("tensor " + std::to_string(t) +
                                    " cannot be resolved into directional steps");

    // remaining gradient-gradient pairs contract as dot products
    for (auto& p : pairs) {
        if (p.offers.size() == 2) {
            plan.steps.push_back(
                {EvalPlan::Kind::dot, -1, {p.offers[0].second, p.offers[1].second}, -1});
        }
    }
    return plan;
}

double evaluate_with_plan(const EvalPlan& plan, const corr::CorrelationSpec& spec,
                          const ParamSet& params, const InputMap& inputs) {
    auto input_of = [&](int tensor) -> const Eigen::VectorXd& {
        const auto& label = spec.tensors[tensor].input;
        auto it = inputs.find(label);
        if (it == inputs.end()) throw Error("no input bound to label '" + label + "'");
        return it->second;
    };

    std::vector<Eigen::VectorXd> vecs(plan.vector_slots);
    std::map<std::string, Eigen::VectorXd> grad_cache;
    double product = 1.0;

    for (const auto& step : plan.steps) {
        switch (step.kind) {
            case EvalPlan::Kind::value:
                product *= forward_value(params, input_of(step.tensor));
                break;
            case EvalPlan::Kind::grad: {
                const auto& label = spec.tensors[step.tensor].input;
                auto it = grad_cache.find(label);
                if (it == grad_cache.end())
                    it = grad_cache.emplace(label, gradient(params, input_of(step.tensor))).first;
                vecs[step.out] = it->second;
                break;
            }
            case EvalPlan::Kind::once_open: {
                const auto& x = input_of(step.tensor);
                if (step.deps.size() == 1)
                    vecs[step.out] = hvp(params, x, vecs[step.deps[0]]);
                else
                    vecs[step.out] = third_once_open(params, x, vecs[step.deps[0]], vecs[step.deps[1]]);
                break;
            }
            case EvalPlan::Kind::contract: {
                const auto& x = input_of(step.tensor);
                std::vector<Eigen::VectorXd> dirs;
                dirs.reserve(step.deps.size());
                for (int id : step.deps) dirs.push_back(vecs[id]);
                product *= directional_scalar(params, x, dirs);
                break;
            }
            case EvalPlan::Kind::dot:
                product *= vecs[step.deps[0]].dot(vecs[step.deps[1]]);
                break;
        }
    }
    return product;
}

namespace {

// minimal strided dense tensor for the brute-force contraction oracle
struct Node {
    std::vector<int> dims;
    std::vector<corr::SlotRef> slots;  // axis -> originating slot
    std::vector<double> data;
    double scalar = 1.0;  // collects fully contracted factors

    std::int64_t size() const {
        std::int64_t s = 1;
        for (int d : dims) s *= d;
        return s;
    }
};

std::vector<std::int64_t> strides_of(const std::vector<int>& dims) {
    std::vector<std::int64_t> st(dims.size(), 1);
    for (int i = static_cast<int>(dims.size()) - 2; i >= 0; --i) st[i] = st[i + 1] * dims[i + 1];
    return st;
}

// copies `node` with one axis moved to the back
std::vector<double> axis_to_back(const Node& node, int axis) {
    const auto st = strides_of(node.dims);
    const int rank = static_cast<int>(node.dims.size());
    std::vector<int> order;
    for (int a = 0; a < rank; ++a)
        if (a != axis) order.push_back(a);
    order.push_back(axis);

    std::vector<double> out(node.data.size());
    std::vector<int> idx(rank, 0);
    for (std::int64_t flat = 0; flat < static_cast<std::int64_t>(out.size()); ++flat) {
        std::int64_t src = 0;
        for (int a = 0; a < rank; ++a) src += st[order[a]] * idx[a];
        out[flat] = node.data[src];
        for (int a = rank - 1; a >= 0; --a) {
            if (++idx[a] < node.dims[order[a]]) break;
            idx[a] = 0;
        }
    }
    return out;
}

Node tensordot(const Node& A, int axA, const Node& B, int axB, std::int64_t element_budget) {
    const int P = A.dims[axA];
    Node out;
    out.scalar = A.scalar * B.scalar;
    for (int a = 0; a < static_cast<int>(A.dims.size()); ++a)
        if (a != axA) {
            out.dims.push_back(A.dims[a]);
            out.slots.push_back(A.slots[a]);
        }
    for (int b = 0; b < static_cast<int>(B.dims.size()); ++b)
        if (b != axB) {
            out.dims.push_back(B.dims[b]);
            out.slots.push_back(B.slots[b]);
        }
    if (out.size() > element_budget)
        throw BudgetError("intermediate contraction tensor exceeds element budget");

    const std::vector<double> a_mat = axis_to_back(A, axA);         // (restA, P)
    const std::vector<double> b_mat = axis_to_back(B, axB);         // (restB, P)
    const std::int64_t rest_a = A.size() / P, rest_b = B.size() / P;
    out.data.assign(static_cast<std::size_t>(rest_a * rest_b), 0.0);
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> ma(
        a_mat.data(), rest_a, P);
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> mb(
        b_mat.data(), rest_b, P);
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> mo(
        out.data.data(), rest_a, rest_b);
    mo = ma * mb.transpose();
    return out;
}

Node trace_axes(const Node& A, int ax1, int ax2) {
    Node out;
    out.scalar = A.scalar;
    for (int a = 0; a < static_cast<int>(A.dims.size()); ++a)
        if (a != ax1 && a != ax2) {
            out.dims.push_back(A.dims[a]);
            out.slots.push_back(A.slots[a]);
        }
    out.data.assign(static_cast<std::size_t>(out.size()), 0.0);
    const auto st = strides_of(A.dims);
    const int P = A.dims[ax1];
    const auto out_st = strides_of(out.dims);
    std::vector<int> idx(out.dims.size(), 0);
    for (std::int64_t flat = 0; flat < static_cast<std::int64_t>(out.data.size()); ++flat) {
        std::int64_t base = 0;
        int k = 0;
        for (int a = 0; a < static_cast<int>(A.dims.size()); ++a) {
            if (a == ax1 || a == ax2) continue;
            base += st[a] * idx[k++];
        }
        double sum = 0.0;
        for (int i = 0; i < P; ++i) sum += A.data[base + st[ax1] * i + st[ax2] * i];
        out.data[flat] = sum;
        for (int a = static_cast<int>(out.dims.size()) - 1; a >= 0; --a) {
            if (++idx[a] < out.dims[a]) break;
            idx[a] = 0;
        }
        (void)out_st;
    }
    if (out.dims.empty() && !A.dims.empty()) {
        // fully contracted: fold into the scalar
        out.scalar *= out.data.empty() ? 0.0 : out.data[0];
        out.data.clear();
    }
    return out;
}

}  // namespace

double materialize_value(const corr::CorrelationSpec& spec, const ParamSet& params,
                         const InputMap& inputs, const MaterializeLimits& limits) {
    spec.validate();
    const int P = params.param_count();
    if (P > limits.max_params)
        throw BudgetError("parameter count " + std::to_string(P) + " exceeds materialization cap " +
                          std::to_string(limits.max_params));
    std::int64_t elements = 0;
    for (const auto& t : spec.tensors) {
        std::int64_t sz = 1;
        for (int r = 0; r < t.rank; ++r) sz *= P;
        elements += sz;
    }
    if (elements > limits.max_elements)
        throw BudgetError("materialized tensors need " + std::to_string(elements) +
                          " elements, cap is " + std::to_string(limits.max_elements));

    auto input_of = [&](int tensor) -> const Eigen::VectorXd& {
        return inputs.at(spec.tensors[tensor].input);
    };

    // materialize every tensor as a dense array over parameter indices
    std::vector<Node> nodes(spec.tensor_count());
    std::vector<int> node_of_tensor(spec.tensor_count());
    std::iota(node_of_tensor.begin(), node_of_tensor.end(), 0);
    for (int t = 0; t < spec.tensor_count(); ++t) {
        Node& node = nodes[t];
        const int rank = spec.tensors[t].rank;
        const auto& x = input_of(t);
        if (rank == 0) {
            node.scalar = forward_value(params, x);
        } else if (rank == 1) {
            const Eigen::VectorXd g = gradient(params, x);
            node.dims = {P};
            node.slots = {{t, 0}};
            node.data.assign(g.data(), g.data() + P);
        } else if (rank == 2) {
            node.dims = {P, P};
            node.slots = {{t, 0}, {t, 1}};
            node.data.assign(static_cast<std::size_t>(P) * P, 0.0);
            Eigen::VectorXd e = Eigen::VectorXd::Zero(P);
            for (int j = 0; j < P; ++j) {
                e(j) = 1.0;
                const Eigen::VectorXd col = hvp(params, x, e);
                for (int i = 0; i < P; ++i) node.data[static_cast<std::size_t>(i) * P + j] = col(i);
                e(j) = 0.0;
            }
        } else if (rank == 3) {
            node.dims = {P, P, P};
            node.slots = {{t, 0}, {t, 1}, {t, 2}};
            node.data.assign(static_cast<std::size_t>(P) * P * P, 0.0);
            Eigen::VectorXd ej = Eigen::VectorXd::Zero(P), ek = Eigen::VectorXd::Zero(P);
            for (int j = 0; j < P; ++j) {
                ej(j) = 1.0;
                for (int k = j; k < P; ++k) {
                    ek(k) = 1.0;
                    const Eigen::VectorXd col = third_once_open(params, x, ej, ek);
                    for (int i = 0; i < P; ++i) {
                        const double v = col(i);
                        node.data[(static_cast<std::size_t>(i) * P + j) * P + k] = v;
                        node.data[(static_cast<std::size_t>(i) * P + k) * P + j] = v;
                    }
                    ek(k) = 0.0;
                }
                ej(j) = 0.0;
            }
        } else {
            throw BudgetError("materialization supports rank <= 3");
        }
    }

    // contract the pairing literally, pair by pair
    for (const auto& [sa, sb] : spec.pairs) {
        const int na = node_of_tensor[sa.tensor];
        const int nb = node_of_tensor[sb.tensor];
        auto axis_of = [](const Node& n, const corr::SlotRef& s) {
            for (int a = 0; a < static_cast<int>(n.slots.size()); ++a)
                if (n.slots[a] == s) return a;
            throw Error("internal: contracted slot missing from node");
        };
        Node merged;
        if (na == nb) {
            merged = trace_axes(nodes[na], axis_of(nodes[na], sa), axis_of(nodes[na], sb));
        } else {
            merged = tensordot(nodes[na], axis_of(nodes[na], sa), nodes[nb], axis_of(nodes[nb], sb),
                               limits.max_elements);
            if (merged.dims.empty()) {
                merged.scalar *= merged.data.empty() ? 0.0 : merged.data[0];
                merged.data.clear();
            }
        }
        // point every tensor of both old nodes at the merged node
        nodes[na] = std::move(merged);
        Node empty;
        empty.scalar = 1.0;
        if (nb != na) nodes[nb] = empty;
        for (auto& ref : node_of_tensor)
            if (ref == nb) ref = na;
    }

    double product = 1.0;
    std::vector<bool> seen(nodes.size(), false);
    for (int t = 0; t < spec.tensor_count(); ++t) {
        const int nd = node_of_tensor[t];
        if (seen[nd]) continue;
        seen[nd] = true;
        if (!nodes[nd].dims.empty()) throw Error("internal: uncontracted axes left over");
        product *= nodes[nd].scalar;
    }
    // nodes never touched by any pair (pure rank-0 factors) fold in above via
    // their own node ids; nothing else to do
    return product;
}

double evaluate(const corr::CorrelationSpec& spec, const ParamSet& params, const InputMap& inputs,
                const MaterializeLimits& limits) {
    try {
        const EvalPlan plan = compile(spec);
        return evaluate_with_plan(plan, spec, params, inputs);
    } catch (const CyclicContraction&) {
        return materialize_value(spec, params, inputs, limits);
    }
}

}  // namespace widthlab::net
