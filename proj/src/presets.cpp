#include "widthlab/presets.hpp"

#include "widthlab/corr/parse.hpp"

namespace widthlab {

std::vector<std::pair<std::string, std::string>> builtin_row_texts() {
    return {
        {"row1_f2", "E[ f(x1) f(x2) ]"},
        {"row2_f4", "E[ f(x1) f(x2) f(x3) f(x4) ]"},
        {"row3_ntk", "E[ d(m) f(x1) d(m) f(x2) ]"},
        {"row4_hvp", "E[ d(m) f(x1) d(n) f(x2) d(m,n) f(x3) f(x4) ]"},
        {"row5_third", "E[ d(m) f(x1) d(n) f(x2) d(p) f(x3) d(m,n,p) f(x4) ]"},
        {"row6_double_hvp",
         "E[ d(m) f(x1) d(n) f(x2) d(m,n) f(x3) d(p) f(x4) d(q) f(x5) d(p,q) f(x6) ]"},
    };
}

std::vector<std::pair<std::string, corr::CorrelationSpec>> builtin_rows() {
    std::vector<std::pair<std::string, corr::CorrelationSpec>> rows;
    for (const auto& [name, text] : builtin_row_texts()) rows.emplace_back(name, corr::parse(text));
    return rows;
}

}  // namespace widthlab
