#include "widthlab/feynman/report.hpp"

#include <numeric>

#include <nlohmann/json.hpp>

#include "widthlab/corr/cluster.hpp"
#include "widthlab/feynman/double_line.hpp"

namespace widthlab::feynman {

DiagramReport exponent(const corr::CorrelationSpec& spec, int depth,
                       const EnumerationLimits& limits) {
    DiagramReport report;
    report.cluster_exponent = corr::cluster_graph(spec).s_C;

    bool first = true;
    enumerate(
        spec, depth,
        [&](const FeynmanDiagram& g) {
            report.diagram_count += 1;
            DiagramStats stats;
            const DoubleLineGraph dl = double_line(g);
            stats.loops = dl.loop_count();
            stats.s_gamma = Rational(stats.loops) - Rational(g.d * g.m, 2);

            // per-component Euler characteristic: v - e + f, with every vertex
            // of degree d+1 and faces read off the double-line loops
            const auto comps = g.components();
            stats.component_count = static_cast<int>(comps.size());
            std::vector<int> comp_of(g.m, -1);
            for (std::size_t c = 0; c < comps.size(); ++c)
                for (int v : comps[c]) comp_of[v] = static_cast<int>(c);
            // count double-line loops per Feynman component
            std::vector<int> parent(dl.vertex_count());
            std::iota(parent.begin(), parent.end(), 0);
            auto find = [&](int x) {
                while (parent[x] != x) x = parent[x] = parent[parent[x]];
                return x;
            };
            for (const auto& [a, b] : dl.edges) parent[find(a)] = find(b);
            std::vector<int> faces(comps.size(), 0);
            for (int v = 0; v < dl.vertex_count(); ++v)
                if (find(v) == v) faces[comp_of[v / g.d]] += 1;
            for (std::size_t c = 0; c < comps.size(); ++c) {
                const int vertices = static_cast<int>(comps[c].size());
                const int edges = (g.d + 1) * vertices / 2;
                stats.euler.push_back(vertices - edges + faces[c]);
            }

            if (first || stats.s_gamma > report.tight_exponent)
                report.tight_exponent = stats.s_gamma;
            first = false;
            report.diagrams.push_back(std::move(stats));
            return true;
        },
        limits);

    if (report.diagram_count == 0)
        throw NotEnumerable("no diagram satisfies the contraction constraints; "
                            "the function vanishes identically at this depth");
    report.bound_consistent = report.tight_exponent <= report.cluster_exponent;
    return report;
}

std::string to_json(const DiagramReport& report) {
    nlohmann::json j;
    j["diagram_count"] = report.diagram_count;
    j["tight_exponent"] = report.tight_exponent.str();
    j["tight_exponent_value"] = report.tight_exponent.value();
    j["cluster_exponent"] = report.cluster_exponent.str();
    j["bound_consistent"] = report.bound_consistent;
    j["diagrams"] = nlohmann::json::array();
    for (const auto& d : report.diagrams) {
        j["diagrams"].push_back({{"loops", d.loops},
                                 {"components", d.component_count},
                                 {"s_gamma", d.s_gamma.str()},
                                 {"euler", d.euler}});
    }
    return j.dump(2);
}

}  // namespace widthlab::feynman
