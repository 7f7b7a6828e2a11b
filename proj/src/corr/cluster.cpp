#include "widthlab/corr/cluster.hpp"

#include <numeric>

namespace widthlab::corr {

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

ClusterReport cluster_graph(const CorrelationSpec& spec) {
    spec.validate();
    const int m = spec.tensor_count();
    UnionFind uf(m);
    // self pairs are self-loops: unite(i, i) leaves components untouched
    for (const auto& [a, b] : spec.pairs) uf.unite(a.tensor, b.tensor);

    ClusterReport report;
    report.m = m;
    std::vector<int> root_to_component(m, -1);
    for (int v = 0; v < m; ++v) {
        const int r = uf.find(v);
        if (root_to_component[r] < 0) {
            root_to_component[r] = static_cast<int>(report.components.size());
            report.components.emplace_back();
        }
        report.components[root_to_component[r]].push_back(v);
    }
    for (const auto& comp : report.components)
        (comp.size() % 2 == 0 ? report.n_even : report.n_odd) += 1;
    report.s_C = cluster_exponent(report.n_even, report.n_odd, m);
    return report;
}

Rational variance_exponent(const CorrelationSpec& spec) {
    return Rational(2) * cluster_graph(spec).s_C;
}

}  // namespace widthlab::corr
