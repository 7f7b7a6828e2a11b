#include "widthlab/feynman/double_line.hpp"

#include <cassert>
#include <numeric>

namespace widthlab::feynman {

int DoubleLineGraph::loop_count() const {
    std::vector<int> parent(vertex_count());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& [a, b] : edges) parent[find(a)] = find(b);
    int components = 0;
    for (int v = 0; v < vertex_count(); ++v)
        if (find(v) == v) ++components;
    return components;
}

DoubleLineGraph double_line(const FeynmanDiagram& g) {
    DoubleLineGraph dl;
    dl.m = g.m;
    dl.d = g.d;
    auto node = [&](int tensor, int layer) { return tensor * g.d + (layer - 1); };  // layer 1..d

    for (int type = 0; type <= g.d; ++type) {
        const auto& matching = g.matchings[type];
        for (int v = 0; v < g.m; ++v) {
            const int w = matching.partner[v];
            if (w < v) continue;
            if (type == 0) {
                dl.edges.emplace_back(node(v, 1), node(w, 1));
            } else if (type == g.d) {
                dl.edges.emplace_back(node(v, g.d), node(w, g.d));
            } else {
                dl.edges.emplace_back(node(v, type), node(w, type));
                dl.edges.emplace_back(node(v, type + 1), node(w, type + 1));
            }
        }
    }

    std::vector<int> degree(dl.vertex_count(), 0);
    for (const auto& [a, b] : dl.edges) {
        degree[a] += 1;
        degree[b] += 1;
    }
    for (int deg : degree) assert(deg == 2);
    return dl;
}

}  // namespace widthlab::feynman
