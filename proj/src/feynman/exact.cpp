#include "widthlab/feynman/exact.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

namespace widthlab::feynman {

int ExactLinearValue::leading_power() const {
    int best = 0;
    bool found = false;
    for (const auto& [power, monomials] : terms) {
        for (const auto& [mono, coeff] : monomials) {
            if (coeff != 0 && (!found || power > best)) {
                best = power;
                found = true;
            }
        }
    }
    return found ? best : 0;
}

double ExactLinearValue::coefficient(int power, const Eigen::MatrixXd& gram) const {
    auto it = terms.find(power);
    if (it == terms.end()) return 0.0;
    double total = 0.0;
    for (const auto& [mono, coeff] : it->second) {
        double prod = static_cast<double>(coeff);
        for (const auto& [a, b] : mono) prod *= gram(a, b);
        total += prod;
    }
    return total;
}

double ExactLinearValue::eval(double n, const Eigen::MatrixXd& gram) const {
    double total = 0.0;
    for (const auto& [power, monomials] : terms) {
        (void)monomials;
        total += std::pow(n, power) * coefficient(power, gram);
    }
    return total;
}

std::string ExactLinearValue::str() const {
    std::ostringstream os;
    bool first = true;
    for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
        for (const auto& [mono, coeff] : it->second) {
            if (coeff == 0) continue;
            if (!first) os << " + ";
            first = false;
            os << coeff;
            for (const auto& [a, b] : mono) os << "*g(" << a << ',' << b << ')';
            if (it->first != 0) os << "*n^" << it->first;
        }
    }
    if (first) os << '0';
    return os.str();
}

namespace {

// perfect matchings of an arbitrary vertex list
void matchings_of(std::vector<int> vertices, std::vector<std::vector<std::pair<int, int>>>& out,
                  std::vector<std::pair<int, int>>& current) {
    if (vertices.empty()) {
        out.push_back(current);
        return;
    }
    const int first = vertices[0];
    for (std::size_t i = 1; i < vertices.size(); ++i) {
        std::vector<int> rest;
        rest.reserve(vertices.size() - 2);
        for (std::size_t j = 1; j < vertices.size(); ++j)
            if (j != i) rest.push_back(vertices[j]);
        current.emplace_back(first, vertices[i]);
        matchings_of(std::move(rest), out, current);
        current.pop_back();
    }
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
    int components() {
        int c = 0;
        for (std::size_t v = 0; v < parent.size(); ++v)
            if (find(static_cast<int>(v)) == static_cast<int>(v)) ++c;
        return c;
    }
};

}  // namespace

ExactLinearValue exact_eval(const corr::CorrelationSpec& spec, int depth,
                            const ExactLimits& limits) {
    spec.validate();
    if (spec.has_self_pair()) throw NotEnumerable("self-contractions not supported");
    const int m = spec.tensor_count();
    if (m > limits.max_tensors)
        throw SizeError("tensor count " + std::to_string(m) + " exceeds exact-eval limit " +
                        std::to_string(limits.max_tensors));
    if (depth < 1 || depth > limits.max_depth)
        throw SizeError("depth " + std::to_string(depth) + " outside exact-eval limit 1.." +
                        std::to_string(limits.max_depth));

    const int d = depth;
    const int types = d + 1;  // 0 = input matrix, 1..d-1 = hidden, d = output
    const int n_pairs = static_cast<int>(spec.pairs.size());

    ExactLinearValue value;

    // Derivative slots paired across tensors pick a common layer: enumerate a
    // layer per contraction, injective per tensor (a linear chain holds one
    // weight factor of each layer, so repeated picks vanish).
    std::vector<int> layer_of_pair(n_pairs, 0);

    auto process_assignment = [&]() {
        // which tensors keep their layer-t factor
        std::vector<std::vector<int>> present(types);
        std::vector<std::vector<int>> removed_pairs(types);  // contraction ids per layer
        std::vector<bool> tensor_lost(m * types, false);
        for (int p = 0; p < n_pairs; ++p) {
            const int t = layer_of_pair[p];
            removed_pairs[t].push_back(p);
            tensor_lost[spec.pairs[p].first.tensor * types + t] = true;
            tensor_lost[spec.pairs[p].second.tensor * types + t] = true;
        }
        for (int t = 0; t < types; ++t)
            for (int a = 0; a < m; ++a)
                if (!tensor_lost[a * types + t]) present[t].push_back(a);

        // odd counts of remaining Gaussian factors integrate to zero
        for (int t = 0; t < types; ++t)
            if (present[t].size() % 2 != 0) return;

        // per-layer pairings of the present factors
        std::vector<std::vector<std::vector<std::pair<int, int>>>> layer_matchings(types);
        for (int t = 0; t < types; ++t) {
            std::vector<std::pair<int, int>> current;
            matchings_of(present[t], layer_matchings[t], current);
        }

        // cross product over layers; each combination is one Wick term
        std::vector<std::size_t> pick(types, 0);
        for (;;) {
            UnionFind uf(m * d);  // hidden-index nodes (tensor, layer 1..d)
            GramMonomial mono;
            auto connect = [&](int t, int a, int b) {
                auto node = [&](int tensor, int layer) { return tensor * d + (layer - 1); };
                if (t == 0) {
                    uf.unite(node(a, 1), node(b, 1));
                    mono.emplace_back(std::min(a, b), std::max(a, b));
                } else if (t == d) {
                    uf.unite(node(a, d), node(b, d));
                } else {
                    uf.unite(node(a, t), node(b, t));
                    uf.unite(node(a, t + 1), node(b, t + 1));
                }
            };
            for (int t = 0; t < types; ++t) {
                for (const auto& [a, b] : layer_matchings[t][pick[t]]) connect(t, a, b);
                for (int p : removed_pairs[t])
                    connect(t, spec.pairs[p].first.tensor, spec.pairs[p].second.tensor);
            }
            std::sort(mono.begin(), mono.end());
            const int loops = uf.components();
            const int power = loops - d * m / 2;
            value.terms[power][mono] += 1;

            int pos = 0;
            while (pos < types && pick[pos] + 1 == layer_matchings[pos].size()) pick[pos++] = 0;
            if (pos == types) break;
            pick[pos] += 1;
        }
    };

    // odometer over the layer of each contraction, with per-tensor injectivity
    std::function<void(int)> recurse = [&](int p) {
        if (p == n_pairs) {
            process_assignment();
            return;
        }
        for (int t = 0; t < types; ++t) {
            bool clash = false;
            for (int q = 0; q < p && !clash; ++q) {
                if (layer_of_pair[q] != t) continue;
                const auto& prev = spec.pairs[q];
                const auto& cur = spec.pairs[p];
                for (int pt : {prev.first.tensor, prev.second.tensor})
                    for (int ct : {cur.first.tensor, cur.second.tensor})
                        if (pt == ct) clash = true;
            }
            if (clash) continue;
            layer_of_pair[p] = t;
            recurse(p + 1);
        }
    };
    recurse(0);

    // m odd or over-constrained specs legitimately produce the zero polynomial
    return value;
}

}  // namespace widthlab::feynman
