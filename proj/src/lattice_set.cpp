#include "nucalab/lattice_set.hpp"

#include <cctype>
#include <numeric>
#include <sstream>

#include "nucalab/errors.hpp"
#include "nucalab/intmath.hpp"

namespace nucalab {

namespace {

Cell primitive_direction(Cell v) {
    std::int64_t g = std::gcd(v.x < 0 ? -v.x : v.x, v.y < 0 ? -v.y : v.y);
    v = {v.x / g, v.y / g};
    if (v.y < 0 || (v.y == 0 && v.x < 0)) v = -v;
    return v;
}

}  // namespace

LatticeSet LatticeSet::finite(FiniteSet cells) {
    int dim = cells.dim();
    return LatticeSet(dim, std::make_shared<Node>(FiniteAtom{std::move(cells)}));
}

LatticeSet LatticeSet::all(int dim) { return complement(empty(dim)); }

LatticeSet LatticeSet::coset(int dim, std::vector<Cell> gens, Cell offset) {
    CosetAtom a;
    a.dim = dim;
    a.gens = gens;
    a.offset = offset;
    std::vector<Cell> nonzero;
    for (const Cell& g : gens) {
        if (dim == 1 && g.y != 0) throw std::invalid_argument("1-d generator with nonzero y");
        if (!(g == origin)) nonzero.push_back(g);
    }
    if (nonzero.empty()) {
        a.rank = 0;
    } else if (dim == 1) {
        std::int64_t m = 0;
        for (const Cell& g : nonzero) m = std::gcd(m, g.x < 0 ? -g.x : g.x);
        a.rank = 1;
        a.dir = {1, 0};
        a.mult = m;
        a.lattice = PeriodLattice::one_dim(m);
    } else {
        // Fold the generators into either a single direction or a Hermite
        // basis {(e,0),(f,g)} of the spanned sublattice.
        Cell b1 = nonzero[0];
        bool full = false;
        std::int64_t he = 0, hf = 0, hg = 0;  // Hermite data once full rank
        auto fold_full = [&](const Cell& v) {
            // span{(he,0),(hf,hg),v} -> new Hermite basis
            ExtGcd eg = ext_gcd(hg, v.y);
            std::int64_t ng = eg.g;
            std::int64_t nfx = eg.x * hf + eg.y * v.x;
            std::int64_t xcomb = (hg / ng) * v.x - (v.y / ng) * hf;
            std::int64_t ne = std::gcd(he, xcomb < 0 ? -xcomb : xcomb);
            he = ne;
            hg = ng;
            hf = floor_mod(nfx, he);
        };
        for (std::size_t i = 1; i < nonzero.size(); ++i) {
            const Cell& v = nonzero[i];
            if (!full) {
                if (v.cross(b1) == 0) {
                    // Collinear: the span is gcd of the multipliers times the
                    // primitive direction.
                    Cell p = primitive_direction(b1);
                    std::int64_t t1 = (p.x != 0) ? b1.x / p.x : b1.y / p.y;
                    std::int64_t t2 = (p.x != 0) ? v.x / p.x : v.y / p.y;
                    std::int64_t m = std::gcd(t1 < 0 ? -t1 : t1, t2 < 0 ? -t2 : t2);
                    b1 = {m * p.x, m * p.y};
                } else {
                    PeriodLattice L = PeriodLattice::two_dim(b1, v);
                    he = L.e();
                    hf = L.f();
                    hg = L.g();
                    full = true;
                }
            } else {
                fold_full(v);
            }
        }
        if (!full) {
            Cell p = primitive_direction(b1);
            std::int64_t t = (p.x != 0) ? b1.x / p.x : b1.y / p.y;
            a.rank = 1;
            a.dir = p;
            a.mult = t < 0 ? -t : t;
        } else {
            a.rank = 2;
            a.lattice = PeriodLattice::two_dim({he, 0}, {hf, hg});
        }
    }
    return LatticeSet(dim, std::make_shared<Node>(std::move(a)));
}

LatticeSet LatticeSet::halfspace(int dim, Cell normal, std::int64_t c) {
    if (normal == origin) throw std::invalid_argument("half-space normal must be nonzero");
    if (dim == 1 && normal.y != 0) throw std::invalid_argument("1-d normal with nonzero y");
    return LatticeSet(dim, std::make_shared<Node>(HalfspaceAtom{dim, normal, c}));
}

LatticeSet LatticeSet::unite(std::vector<LatticeSet> parts) {
    if (parts.empty()) throw std::invalid_argument("union of nothing");
    int dim = parts.front().dim();
    for (const auto& p : parts)
        if (p.dim() != dim) throw std::invalid_argument("dimension mismatch");
    return LatticeSet(dim, std::make_shared<Node>(UnionNode{std::move(parts)}));
}

LatticeSet LatticeSet::intersect(std::vector<LatticeSet> parts) {
    if (parts.empty()) throw std::invalid_argument("intersection of nothing");
    int dim = parts.front().dim();
    for (const auto& p : parts)
        if (p.dim() != dim) throw std::invalid_argument("dimension mismatch");
    return LatticeSet(dim, std::make_shared<Node>(InterNode{std::move(parts)}));
}

LatticeSet LatticeSet::complement(LatticeSet s) {
    int dim = s.dim();
    return LatticeSet(dim, std::make_shared<Node>(ComplNode{{std::move(s)}}));
}

LatticeSet LatticeSet::difference(LatticeSet a, LatticeSet b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("dimension mismatch");
    int dim = a.dim();
    return LatticeSet(dim, std::make_shared<Node>(DiffNode{{std::move(a), std::move(b)}}));
}

namespace {

bool coset_contains(const LatticeSet::CosetAtom& a, const Cell& c) {
    Cell v = c - a.offset;
    switch (a.rank) {
        case 0:
            return v == origin;
        case 1: {
            if (a.dim == 1) return floor_mod(v.x, a.mult) == 0;
            if (v.cross(a.dir) != 0) return false;
            std::int64_t t = (a.dir.x != 0) ? v.x / a.dir.x : v.y / a.dir.y;
            if (!(Cell{t * a.dir.x, t * a.dir.y} == v)) return false;
            return floor_mod(t, a.mult) == 0;
        }
        default:
            return a.lattice->contains(v);
    }
}

}  // namespace

bool LatticeSet::contains(const Cell& c) const {
    return std::visit(
        [&](const auto& n) -> bool {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, FiniteAtom>) {
                return n.set.contains(c);
            } else if constexpr (std::is_same_v<T, CosetAtom>) {
                return coset_contains(n, c);
            } else if constexpr (std::is_same_v<T, HalfspaceAtom>) {
                return n.normal.dot(c) >= n.c;
            } else if constexpr (std::is_same_v<T, UnionNode>) {
                for (const auto& p : n.parts)
                    if (p.contains(c)) return true;
                return false;
            } else if constexpr (std::is_same_v<T, InterNode>) {
                for (const auto& p : n.parts)
                    if (!p.contains(c)) return false;
                return true;
            } else if constexpr (std::is_same_v<T, ComplNode>) {
                return !n.part[0].contains(c);
            } else {
                return n.parts[0].contains(c) && !n.parts[1].contains(c);
            }
        },
        *node_);
}

LatticeSet LatticeSet::translated(const Cell& g) const {
    return std::visit(
        [&](const auto& n) -> LatticeSet {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, FiniteAtom>) {
                return finite(n.set.translated(g));
            } else if constexpr (std::is_same_v<T, CosetAtom>) {
                return coset(n.dim, n.gens, n.offset + g);
            } else if constexpr (std::is_same_v<T, HalfspaceAtom>) {
                return halfspace(n.dim, n.normal, n.c + n.normal.dot(g));
            } else if constexpr (std::is_same_v<T, UnionNode>) {
                std::vector<LatticeSet> parts;
                for (const auto& p : n.parts) parts.push_back(p.translated(g));
                return unite(std::move(parts));
            } else if constexpr (std::is_same_v<T, InterNode>) {
                std::vector<LatticeSet> parts;
                for (const auto& p : n.parts) parts.push_back(p.translated(g));
                return intersect(std::move(parts));
            } else if constexpr (std::is_same_v<T, ComplNode>) {
                return complement(n.part[0].translated(g));
            } else {
                return difference(n.parts[0].translated(g), n.parts[1].translated(g));
            }
        },
        *node_);
}

FiniteSet LatticeSet::intersect_window(const FiniteSet& F) const {
    std::vector<Cell> cells;
    for (const Cell& c : F)
        if (contains(c)) cells.push_back(c);
    return FiniteSet(F.dim(), std::move(cells));
}

std::int64_t LatticeSet::count_in(const FiniteSet& F) const {
    std::int64_t n = 0;
    for (const Cell& c : F)
        if (contains(c)) ++n;
    return n;
}

std::optional<FiniteSet> LatticeSet::as_finite_atom() const {
    if (const auto* f = std::get_if<FiniteAtom>(node_.get())) return f->set;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Printing and parsing
// ---------------------------------------------------------------------------

namespace {

void print_cell(std::ostream& os, const Cell& c, int dim) {
    os << '(' << c.x;
    if (dim == 2) os << ',' << c.y;
    os << ')';
}

}  // namespace

std::string LatticeSet::to_text() const {
    std::ostringstream os;
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, FiniteAtom>) {
                if (n.set.empty()) {
                    os << "empty";
                    return;
                }
                os << "finite{";
                bool first = true;
                for (const Cell& c : n.set) {
                    if (!first) os << ',';
                    first = false;
                    print_cell(os, c, dim_);
                }
                os << '}';
            } else if constexpr (std::is_same_v<T, CosetAtom>) {
                if (n.dim == 1 && n.gens.size() == 1 && n.gens[0].y == 0) {
                    os << "coset(" << n.gens[0].x << ',' << n.offset.x << ')';
                    return;
                }
                os << "coset([";
                bool first = true;
                for (const Cell& g : n.gens) {
                    if (!first) os << ',';
                    first = false;
                    print_cell(os, g, n.dim);
                }
                os << "];";
                print_cell(os, n.offset, n.dim);
                os << ')';
            } else if constexpr (std::is_same_v<T, HalfspaceAtom>) {
                os << "halfspace(" << n.normal.x;
                if (n.dim == 2) os << ',' << n.normal.y;
                os << ";>=;" << n.c << ')';
            } else if constexpr (std::is_same_v<T, UnionNode>) {
                os << "union(";
                for (std::size_t i = 0; i < n.parts.size(); ++i)
                    os << (i ? "," : "") << n.parts[i].to_text();
                os << ')';
            } else if constexpr (std::is_same_v<T, InterNode>) {
                os << "inter(";
                for (std::size_t i = 0; i < n.parts.size(); ++i)
                    os << (i ? "," : "") << n.parts[i].to_text();
                os << ')';
            } else if constexpr (std::is_same_v<T, ComplNode>) {
                if (n.part[0].as_finite_atom() && n.part[0].as_finite_atom()->empty()) {
                    os << "all";
                    return;
                }
                os << "compl(" << n.part[0].to_text() << ')';
            } else {
                os << "diff(" << n.parts[0].to_text() << ',' << n.parts[1].to_text() << ')';
            }
        },
        *node_);
    return os.str();
}

namespace {

// Minimal cursor-based parser; positions are reported as 1-based line/column.
class SetParser {
  public:
    explicit SetParser(std::string_view text) : text_(text) {}

    LatticeSet parse_full() {
        LatticeSet s = parse_expr();
        skip_ws();
        if (pos_ != text_.size()) fail("trailing input after expression");
        return s;
    }

  private:
    [[noreturn]] void fail(const std::string& msg) {
        int line = 1, col = 1;
        for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
            if (text_[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError(msg, line, col);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!eat(c)) fail(std::string("expected '") + c + "'");
    }

    std::string ident() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        if (start == pos_) fail("expected a name");
        return std::string(text_.substr(start, pos_ - start));
    }

    std::int64_t integer() {
        skip_ws();
        std::size_t start = pos_;
        if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) ++pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        if (start == pos_ || (pos_ - start == 1 && !std::isdigit(static_cast<unsigned char>(
                                                       text_[start]))))
            fail("expected an integer");
        return std::stoll(std::string(text_.substr(start, pos_ - start)));
    }

    // (x) or (x,y); fixes the dimension on first sight.
    Cell cell() {
        expect('(');
        Cell c;
        c.x = integer();
        if (eat(',')) {
            c.y = integer();
            note_dim(2);
        } else {
            note_dim(1);
        }
        expect(')');
        return c;
    }

    void note_dim(int d) {
        if (dim_ == 0)
            dim_ = d;
        else if (dim_ != d)
            fail("mixed 1-d and 2-d cells in one expression");
    }

    LatticeSet parse_expr() {
        std::string name = ident();
        if (name == "empty") return LatticeSet::empty(dim_ ? dim_ : 1);
        if (name == "all") return LatticeSet::all(dim_ ? dim_ : 1);
        if (name == "finite") {
            expect('{');
            std::vector<Cell> cells;
            if (!eat('}')) {
                do {
                    cells.push_back(cell());
                } while (eat(','));
                expect('}');
            }
            return LatticeSet::finite(FiniteSet(dim_ ? dim_ : 1, std::move(cells)));
        }
        if (name == "coset") {
            expect('(');
            skip_ws();
            if (pos_ < text_.size() && text_[pos_] == '[') {
                ++pos_;
                std::vector<Cell> gens;
                do {
                    gens.push_back(cell());
                } while (eat(','));
                expect(']');
                expect(';');
                Cell off = cell();
                expect(')');
                return LatticeSet::coset(dim_ ? dim_ : 2, std::move(gens), off);
            }
            std::int64_t a = integer();
            expect(',');
            std::int64_t b = integer();
            expect(')');
            note_dim(1);
            return LatticeSet::coset(1, {Cell{a, 0}}, Cell{b, 0});
        }
        if (name == "halfspace") {
            expect('(');
            Cell normal{integer(), 0};
            if (eat(',')) {
                normal.y = integer();
                note_dim(2);
            } else {
                note_dim(1);
            }
            expect(';');
            skip_ws();
            bool flip = false;
            if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '=') {
                if (text_[pos_] == '>')
                    flip = false;
                else if (text_[pos_] == '<')
                    flip = true;
                else
                    fail("expected '>=' or '<='");
                pos_ += 2;
            } else {
                fail("expected '>=' or '<='");
            }
            expect(';');
            std::int64_t c = integer();
            expect(')');
            if (flip) return LatticeSet::halfspace(dim_, -normal, -c);
            return LatticeSet::halfspace(dim_, normal, c);
        }
        if (name == "union" || name == "inter") {
            expect('(');
            std::vector<LatticeSet> parts;
            do {
                parts.push_back(parse_expr());
            } while (eat(','));
            expect(')');
            return name == "union" ? LatticeSet::unite(std::move(parts))
                                   : LatticeSet::intersect(std::move(parts));
        }
        if (name == "compl") {
            expect('(');
            LatticeSet s = parse_expr();
            expect(')');
            return LatticeSet::complement(std::move(s));
        }
        if (name == "diff") {
            expect('(');
            LatticeSet a = parse_expr();
            expect(',');
            LatticeSet b = parse_expr();
            expect(')');
            return LatticeSet::difference(std::move(a), std::move(b));
        }
        fail("unknown set constructor '" + name + "'");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int dim_ = 0;  // 0: undetermined yet
};

}  // namespace

LatticeSet LatticeSet::parse(std::string_view text) { return SetParser(text).parse_full(); }

}  // namespace nucalab
