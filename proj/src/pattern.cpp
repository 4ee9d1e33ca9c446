#include "nucalab/pattern.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace nucalab {

namespace {
char symbol_char(Symbol s) { return s < 10 ? char('0' + s) : char('a' + (s - 10)); }
}  // namespace

Pattern::Pattern(FiniteSet support, std::vector<Symbol> values)
    : support_(std::move(support)), values_(std::move(values)) {
    if (support_.size() != values_.size())
        throw std::invalid_argument("pattern values must match support size");
}

Pattern Pattern::constant(const FiniteSet& support, Symbol s) {
    return Pattern(support, std::vector<Symbol>(support.size(), s));
}

Symbol Pattern::at(const Cell& c) const {
    std::size_t i = support_.index_of(c);
    if (i == FiniteSet::npos) throw std::out_of_range("cell not in pattern support");
    return values_[i];
}

std::optional<Symbol> Pattern::try_at(const Cell& c) const {
    std::size_t i = support_.index_of(c);
    if (i == FiniteSet::npos) return std::nullopt;
    return values_[i];
}

Pattern Pattern::restricted_to(const FiniteSet& F) const {
    std::vector<Symbol> vals;
    vals.reserve(F.size());
    for (const Cell& c : F) vals.push_back(at(c));
    return Pattern(F, std::move(vals));
}

Pattern Pattern::translated(const Cell& g) const {
    return Pattern(support_.translated(g), values_);
}

bool operator<(const Pattern& a, const Pattern& b) {
    if (a.support_.cells().size() != b.support_.cells().size())
        return a.support_.size() < b.support_.size();
    auto ac = a.support_.cells(), bc = b.support_.cells();
    if (!std::equal(ac.begin(), ac.end(), bc.begin()))
        return std::lexicographical_compare(ac.begin(), ac.end(), bc.begin(), bc.end());
    return a.values_ < b.values_;
}

std::uint64_t Pattern::encode(int q) const {
    std::uint64_t code = 0;
    const std::uint64_t limit = std::uint64_t(1) << 62;
    for (Symbol v : values_) {
        if (code > limit / std::uint64_t(q)) throw std::overflow_error("pattern code overflow");
        code = code * std::uint64_t(q) + v;
    }
    return code;
}

Pattern Pattern::decode(const FiniteSet& support, int q, std::uint64_t code) {
    std::vector<Symbol> vals(support.size());
    for (std::size_t i = support.size(); i-- > 0;) {
        vals[i] = Symbol(code % std::uint64_t(q));
        code /= std::uint64_t(q);
    }
    return Pattern(support, std::move(vals));
}

std::string Pattern::to_text(int dim) const {
    std::ostringstream os;
    if (dim == 1 || support_.empty()) {
        for (Symbol v : values_) os << symbol_char(v);
        return os.str();
    }
    // Full-box d=2 supports render as rows; otherwise fall back to symbols in
    // canonical cell order.
    auto cells = support_.cells();
    std::int64_t xmin = cells[0].x, xmax = cells[0].x;
    std::int64_t ymin = cells[0].y, ymax = cells[0].y;
    for (const Cell& c : cells) {
        xmin = std::min(xmin, c.x), xmax = std::max(xmax, c.x);
        ymin = std::min(ymin, c.y), ymax = std::max(ymax, c.y);
    }
    bool is_box = std::size_t((xmax - xmin + 1) * (ymax - ymin + 1)) == cells.size();
    std::size_t i = 0;
    for (Symbol v : values_) {
        os << symbol_char(v);
        if (is_box && ++i % std::size_t(xmax - xmin + 1) == 0 && i < cells.size()) os << '/';
    }
    return os.str();
}

bool PatternSet::contains_code(std::uint64_t code) const {
    return std::binary_search(codes.begin(), codes.end(), code);
}

}  // namespace nucalab
