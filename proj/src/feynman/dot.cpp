#include "widthlab/feynman/dot.hpp"

#include <set>
#include <sstream>

namespace widthlab::feynman {

namespace {

std::string type_name(int type, int depth) {
    if (type == 0) return "U";
    if (type == depth) return "V";
    return "W" + std::to_string(type);
}

}  // namespace

std::string to_dot(const FeynmanDiagram& g, const std::string& name) {
    std::ostringstream os;
    os << "graph " << name << " {\n  layout=circo;\n";
    for (int v = 0; v < g.m; ++v) os << "  v" << v << " [label=\"x" << v + 1 << "\"];\n";
    std::set<std::tuple<int, int, int>> forced;  // (a, b, type)
    for (const auto& f : g.forced) forced.insert({std::min(f.a, f.b), std::max(f.a, f.b), f.type});
    for (int type = 0; type <= g.d; ++type) {
        for (int v = 0; v < g.m; ++v) {
            const int w = g.matchings[type].partner[v];
            if (w < v) continue;
            os << "  v" << v << " -- v" << w << " [type=" << type_name(type, g.d) << ", label=\""
               << type_name(type, g.d) << "\"";
            if (forced.count({v, w, type})) os << ", style=dashed";
            os << "];\n";
        }
    }
    os << "}\n";
    return os.str();
}

std::string to_dot(const DoubleLineGraph& g, const std::string& name) {
    std::ostringstream os;
    os << "graph " << name << " {\n  layout=circo;\n";
    for (int v = 0; v < g.vertex_count(); ++v)
        os << "  u" << v << " [label=\"x" << v / g.d + 1 << ":h" << v % g.d + 1 << "\"];\n";
    for (const auto& [a, b] : g.edges) os << "  u" << a << " -- u" << b << ";\n";
    os << "}\n";
    return os.str();
}

}  // namespace widthlab::feynman
