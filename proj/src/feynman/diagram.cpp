#include "widthlab/feynman/diagram.hpp"

#include <numeric>

namespace widthlab::feynman {

std::uint64_t double_factorial(int n) {
    std::uint64_t r = 1;
    for (int k = n; k > 1; k -= 2) r *= static_cast<std::uint64_t>(k);
    return r;
}

namespace {

// all perfect matchings of 0..m-1, lexicographic: the smallest unmatched
// vertex pairs with each larger unmatched vertex in increasing order
void gen_matchings(std::vector<int>& partner, std::vector<Matching>& out) {
    const int m = static_cast<int>(partner.size());
    int first = -1;
    for (int v = 0; v < m; ++v)
        if (partner[v] < 0) {
            first = v;
            break;
        }
    if (first < 0) {
        out.push_back({partner});
        return;
    }
    for (int w = first + 1; w < m; ++w) {
        if (partner[w] >= 0) continue;
        partner[first] = w;
        partner[w] = first;
        gen_matchings(partner, out);
        partner[first] = -1;
        partner[w] = -1;
    }
}

std::vector<Matching> all_matchings(int m) {
    std::vector<Matching> out;
    std::vector<int> partner(m, -1);
    gen_matchings(partner, out);
    return out;
}

// contraction pairs grouped per unordered tensor pair, in spec order
struct PairGroup {
    int a, b;
    std::vector<int> contraction_ids;  // indices into spec.pairs
};

}  // namespace

std::vector<std::vector<int>> FeynmanDiagram::components() const {
    std::vector<int> parent(m);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& matching : matchings)
        for (int v = 0; v < m; ++v) parent[find(v)] = find(matching.partner[v]);
    std::vector<std::vector<int>> comps;
    std::vector<int> comp_of(m, -1);
    for (int v = 0; v < m; ++v) {
        const int r = find(v);
        if (comp_of[r] < 0) {
            comp_of[r] = static_cast<int>(comps.size());
            comps.emplace_back();
        }
        comps[comp_of[r]].push_back(v);
    }
    return comps;
}

void enumerate(const corr::CorrelationSpec& spec, int depth,
               const std::function<bool(const FeynmanDiagram&)>& yield,
               const EnumerationLimits& limits) {
    spec.validate();
    if (spec.has_self_pair())
        throw NotEnumerable("self-contractions are not representable as matchings");
    const int m = spec.tensor_count();
    if (m % 2 != 0) throw NotEnumerable("odd tensor count");
    if (m > limits.max_tensors)
        throw SizeError("tensor count " + std::to_string(m) + " exceeds limit " +
                        std::to_string(limits.max_tensors));
    if (depth < 1 || depth > limits.max_depth)
        throw SizeError("depth " + std::to_string(depth) + " outside 1.." +
                        std::to_string(limits.max_depth));
    for (const auto& t : spec.tensors)
        if (t.rank > depth + 1)
            throw NotEnumerable("tensor rank " + std::to_string(t.rank) +
                                " exceeds depth+1; the function vanishes identically");

    const int types = depth + 1;
    std::uint64_t budget = 1;
    const std::uint64_t per_type = double_factorial(m - 1);
    for (int t = 0; t < types; ++t) {
        if (budget > limits.tuple_budget / per_type + 1)
            throw SizeError("matching tuple count exceeds budget");
        budget *= per_type;
    }
    if (budget > limits.tuple_budget) throw SizeError("matching tuple count exceeds budget");

    const std::vector<Matching> matchings = all_matchings(m);

    // group contractions by tensor pair
    std::vector<PairGroup> groups;
    for (std::size_t p = 0; p < spec.pairs.size(); ++p) {
        const int a = spec.pairs[p].first.tensor;
        const int b = spec.pairs[p].second.tensor;
        const int lo = std::min(a, b), hi = std::max(a, b);
        auto it = std::find_if(groups.begin(), groups.end(),
                               [&](const PairGroup& g) { return g.a == lo && g.b == hi; });
        if (it == groups.end()) {
            groups.push_back({lo, hi, {static_cast<int>(p)}});
        } else {
            it->contraction_ids.push_back(static_cast<int>(p));
        }
    }

    FeynmanDiagram diagram;
    diagram.m = m;
    diagram.d = depth;
    diagram.matchings.resize(types);
    diagram.forced.resize(spec.pairs.size());

    // odometer over the matching chosen for each type
    std::vector<std::size_t> choice(types, 0);
    bool stop = false;
    for (;;) {
        for (int t = 0; t < types; ++t) diagram.matchings[t] = matchings[choice[t]];

        // available types per group, then every ordered injective assignment
        std::vector<std::vector<int>> available(groups.size());
        bool feasible = true;
        for (std::size_t g = 0; g < groups.size(); ++g) {
            for (int t = 0; t < types; ++t)
                if (diagram.matchings[t].partner[groups[g].a] == groups[g].b)
                    available[g].push_back(t);
            if (available[g].size() < groups[g].contraction_ids.size()) {
                feasible = false;
                break;
            }
        }
        if (feasible) {
            // recursive cross product of per-group injections
            std::function<bool(std::size_t)> assign = [&](std::size_t g) -> bool {
                if (g == groups.size()) return yield(diagram);
                const auto& ids = groups[g].contraction_ids;
                const auto& pool = available[g];
                std::vector<int> pick(ids.size());
                std::vector<bool> used(pool.size(), false);
                std::function<bool(std::size_t)> inject = [&](std::size_t i) -> bool {
                    if (i == ids.size()) return assign(g + 1);
                    for (std::size_t c = 0; c < pool.size(); ++c) {
                        if (used[c]) continue;
                        used[c] = true;
                        diagram.forced[ids[i]] = {groups[g].a, groups[g].b, pool[c]};
                        if (!inject(i + 1)) return false;
                        used[c] = false;
                    }
                    return true;
                };
                return inject(0);
            };
            if (!assign(0)) {
                stop = true;
            }
        }
        if (stop) break;

        int pos = 0;
        while (pos < types && choice[pos] + 1 == matchings.size()) choice[pos++] = 0;
        if (pos == types) break;
        choice[pos] += 1;
    }
}

std::vector<FeynmanDiagram> enumerate_all(const corr::CorrelationSpec& spec, int depth,
                                          const EnumerationLimits& limits) {
    std::vector<FeynmanDiagram> out;
    enumerate(
        spec, depth,
        [&](const FeynmanDiagram& g) {
            out.push_back(g);
            return true;
        },
        limits);
    return out;
}

}  // namespace widthlab::feynman
