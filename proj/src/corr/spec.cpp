#include "widthlab/corr/spec.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace widthlab::corr {

std::vector<std::string> CorrelationSpec::inputs() const {
    std::vector<std::string> out;
    for (const auto& t : tensors)
        if (std::find(out.begin(), out.end(), t.input) == out.end()) out.push_back(t.input);
    return out;
}

void CorrelationSpec::validate() const {
    const int m = tensor_count();
    std::set<SlotRef> seen;
    for (const auto& [a, b] : pairs) {
        for (const SlotRef& s : {a, b}) {
            if (s.tensor < 0 || s.tensor >= m)
                throw PairingError("slot references tensor " + std::to_string(s.tensor) +
                                   " out of range");
            if (s.slot < 0 || s.slot >= tensors[s.tensor].rank)
                throw PairingError("slot " + std::to_string(s.slot) + " out of range on tensor " +
                                   std::to_string(s.tensor));
            if (!seen.insert(s).second)
                throw PairingError("slot (" + std::to_string(s.tensor) + "," +
                                   std::to_string(s.slot) + ") appears in more than one pair");
        }
        if (a == b) throw PairingError("slot paired with itself");
    }
    if (static_cast<int>(seen.size()) != total_rank())
        throw PairingError("unpaired derivative slot: " + std::to_string(total_rank()) +
                           " slots, " + std::to_string(seen.size()) + " paired");
}

std::vector<std::vector<int>> CorrelationSpec::pair_multiplicity() const {
    const int m = tensor_count();
    std::vector<std::vector<int>> mult(m, std::vector<int>(m, 0));
    for (const auto& [a, b] : pairs) {
        if (a.tensor == b.tensor) continue;
        mult[a.tensor][b.tensor] += 1;
        mult[b.tensor][a.tensor] += 1;
    }
    return mult;
}

std::string print(const CorrelationSpec& spec) {
    // assign one index name per pair, then emit slots in tensor order
    std::map<SlotRef, int> pair_of_slot;
    for (std::size_t p = 0; p < spec.pairs.size(); ++p) {
        pair_of_slot[spec.pairs[p].first] = static_cast<int>(p);
        pair_of_slot[spec.pairs[p].second] = static_cast<int>(p);
    }
    std::ostringstream os;
    os << "E[";
    for (int t = 0; t < spec.tensor_count(); ++t) {
        const auto& tensor = spec.tensors[t];
        os << ' ';
        if (tensor.rank > 0) {
            os << "d(";
            for (int s = 0; s < tensor.rank; ++s) {
                if (s) os << ',';
                os << 'i' << pair_of_slot.at({t, s});
            }
            os << ") ";
        }
        os << "f(" << tensor.input << ')';
    }
    os << " ]";
    return os.str();
}

std::string to_json(const CorrelationSpec& spec) {
    nlohmann::json j;
    j["tensors"] = nlohmann::json::array();
    for (const auto& t : spec.tensors) j["tensors"].push_back({{"input", t.input}, {"rank", t.rank}});
    j["pairs"] = nlohmann::json::array();
    for (const auto& [a, b] : spec.pairs)
        j["pairs"].push_back({{a.tensor, a.slot}, {b.tensor, b.slot}});
    return j.dump();
}

CorrelationSpec from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    CorrelationSpec spec;
    for (const auto& t : j.at("tensors"))
        spec.tensors.push_back({t.at("input").get<std::string>(), t.at("rank").get<int>()});
    for (const auto& p : j.at("pairs")) {
        SlotRef a{p.at(0).at(0).get<int>(), p.at(0).at(1).get<int>()};
        SlotRef b{p.at(1).at(0).get<int>(), p.at(1).at(1).get<int>()};
        spec.pairs.emplace_back(a, b);
    }
    spec.validate();
    return spec;
}

}  // namespace widthlab::corr
