#include "widthlab/corr/parse.hpp"

#include <cctype>
#include <map>
#include <sstream>
#include <vector>

namespace widthlab::corr {

namespace {

struct Cursor {
    const std::string& text;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    bool at_end() {
        skip_ws();
        return pos >= text.size();
    }
    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }
    bool accept(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    void expect(char c, const char* what) {
        if (!accept(c)) throw SyntaxError(std::string("expected ") + what, pos);
    }

    // [A-Za-z][A-Za-z0-9_]*
    std::string identifier(const char* what) {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
            ++pos;
        if (pos == start || std::isdigit(static_cast<unsigned char>(text[start])))
            throw SyntaxError(std::string("expected ") + what, start);
        return text.substr(start, pos - start);
    }
};

bool all_lower(const std::string& s) {
    for (char c : s)
        if (std::isupper(static_cast<unsigned char>(c))) return false;
    return true;
}

}  // namespace

CorrelationSpec parse(const std::string& text, const ParseOptions& opts) {
    Cursor cur{text};
    cur.expect('E', "'E['");
    cur.expect('[', "'['");

    CorrelationSpec spec;
    // index name -> slots it annotates
    std::map<std::string, std::vector<SlotRef>> index_slots;

    while (!cur.accept(']')) {
        if (cur.at_end()) throw SyntaxError("expected term or ']'", cur.pos);
        std::vector<std::string> indices;
        if (cur.peek() == 'd') {
            const std::size_t dpos = cur.pos;
            std::string kw = cur.identifier("'d' or 'f'");
            if (kw != "d") throw SyntaxError("expected 'd' or 'f'", dpos);
            cur.expect('(', "'(' after d");
            do {
                const std::size_t ipos = cur.pos;
                std::string name = cur.identifier("index name");
                if (!all_lower(name)) throw SyntaxError("index names are lowercase", ipos);
                indices.push_back(std::move(name));
            } while (cur.accept(','));
            cur.expect(')', "')' after index list");
            if (static_cast<int>(indices.size()) > opts.max_rank)
                throw SyntaxError("tensor rank exceeds maximum " + std::to_string(opts.max_rank),
                                  dpos);
        }
        const std::size_t fpos = cur.pos;
        std::string kw = cur.identifier("'f'");
        if (kw != "f") throw SyntaxError("expected 'f'", fpos);
        cur.expect('(', "'(' after f");
        std::string label = cur.identifier("input label");
        cur.expect(')', "')' after input label");

        const int t = spec.tensor_count();
        spec.tensors.push_back({label, static_cast<int>(indices.size())});
        for (int s = 0; s < static_cast<int>(indices.size()); ++s)
            index_slots[indices[s]].push_back({t, s});
    }
    if (!cur.at_end()) throw SyntaxError("trailing input after ']'", cur.pos);
    if (spec.tensors.empty()) throw SyntaxError("empty expectation", cur.pos);

    for (const auto& [name, slots] : index_slots) {
        if (slots.size() != 2)
            throw PairingError("index '" + name + "' appears " + std::to_string(slots.size()) +
                               " times, want exactly 2");
        spec.pairs.emplace_back(slots[0], slots[1]);
    }

    if (spec.tensor_count() % 2 != 0)
        throw ParityError("tensor count " + std::to_string(spec.tensor_count()) + " is odd");
    if (spec.total_rank() % 2 != 0)
        throw ParityError("total derivative count " + std::to_string(spec.total_rank()) +
                          " is odd");

    spec.validate();
    return spec;
}

std::string caret_diagnostic(const std::string& text, const SyntaxError& err) {
    std::ostringstream os;
    os << text << '\n';
    for (std::size_t i = 0; i < err.position && i < text.size() + 1; ++i)
        os << (text[i] == '\t' ? '\t' : ' ');
    os << "^ " << err.what();
    return os.str();
}

}  // namespace widthlab::corr
