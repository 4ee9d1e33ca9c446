#include "nucalab/formats.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "nucalab/errors.hpp"
#include "nucalab/intmath.hpp"

namespace nucalab {

namespace {

int symbol_of_char(char c, int alphabet, int line, int col) {
    int v = -1;
    if (c >= '0' && c <= '9') v = c - '0';
    if (c >= 'a' && c <= 'z') v = 10 + (c - 'a');
    if (v < 0 || v >= alphabet) throw ParseError("symbol out of alphabet", line, col);
    return v;
}

char char_of_symbol(Symbol s) { return s < 10 ? char('0' + s) : char('a' + (s - 10)); }

// Whitespace-separated tokens of one line.
std::vector<std::string> split_tokens(const std::string& line) {
    std::vector<std::string> tokens;
    std::istringstream is(line);
    std::string t;
    while (is >> t) tokens.push_back(t);
    return tokens;
}

struct LineReader {
    std::vector<std::string> lines;
    std::size_t next = 0;

    explicit LineReader(std::string_view text) {
        std::string cur;
        for (char c : text) {
            if (c == '\n') {
                lines.push_back(cur);
                cur.clear();
            } else {
                cur.push_back(c);
            }
        }
        if (!cur.empty()) lines.push_back(cur);
    }

    // next non-blank, non-comment line; returns false at end of file
    bool fetch(std::vector<std::string>& tokens, int& line_no) {
        while (next < lines.size()) {
            const std::string& raw = lines[next];
            ++next;
            std::string stripped = raw.substr(0, raw.find('#'));
            tokens = split_tokens(stripped);
            if (!tokens.empty()) {
                line_no = int(next);
                return true;
            }
        }
        return false;
    }

    void putback() { --next; }
};

Cell parse_cell_token(const std::string& tok, int dim, int line) {
    if (tok.size() < 3 || tok.front() != '(' || tok.back() != ')')
        throw ParseError("expected a cell '(x)' or '(x,y)'", line, 1);
    std::string inner = tok.substr(1, tok.size() - 2);
    auto comma = inner.find(',');
    try {
        if (comma == std::string::npos) {
            if (dim != 1) throw ParseError("expected a 2-d cell '(x,y)'", line, 1);
            return Cell{std::stoll(inner), 0};
        }
        if (dim != 2) throw ParseError("expected a 1-d cell '(x)'", line, 1);
        return Cell{std::stoll(inner.substr(0, comma)), std::stoll(inner.substr(comma + 1))};
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        throw ParseError("malformed cell '" + tok + "'", line, 1);
    }
}

std::vector<Symbol> parse_symbol_string(const std::string& tok, std::size_t expect,
                                        int alphabet, int line) {
    std::vector<Symbol> out;
    int col = 1;
    for (char c : tok) {
        if (c == '/') {
            ++col;
            continue;
        }
        out.push_back(Symbol(symbol_of_char(c, alphabet, line, col)));
        ++col;
    }
    if (out.size() != expect)
        throw ParseError("pattern has " + std::to_string(out.size()) + " symbols, expected " +
                             std::to_string(expect),
                         line, 1);
    return out;
}

void require_canonical_memory(const std::vector<Cell>& listed, const FiniteSet& canonical,
                              int line) {
    if (listed.size() != canonical.size())
        throw ParseError("duplicate memory offsets", line, 1);
    for (std::size_t i = 0; i < listed.size(); ++i)
        if (!(listed[i] == canonical.at(i)))
            throw ParseError("memory offsets must be listed in canonical (row-major) order",
                             line, 1);
}

struct Header {
    int dim = 1;
    int alphabet = 2;   // or field q
    int vdim = 1;       // linear files only
    int radius = 0;     // sft files only
    FiniteSet memory;
};

}  // namespace

// ---------------------------------------------------------------------------
// rule files
// ---------------------------------------------------------------------------

RuleFile parse_rule_file(std::string_view text) {
    LineReader reader(text);
    std::vector<std::string> tok;
    int line = 0;
    if (!reader.fetch(tok, line) || tok[0] != "nuca" || tok.size() != 2 || tok[1] != "v1")
        throw ParseError("expected header 'nuca v1'", line ? line : 1, 1);

    Header h;
    bool have_dim = false, have_alphabet = false, have_memory = false;
    while (reader.fetch(tok, line)) {
        if (tok[0] == "dim" && tok.size() == 2) {
            h.dim = std::stoi(tok[1]);
            have_dim = true;
        } else if (tok[0] == "alphabet" && tok.size() == 2) {
            h.alphabet = std::stoi(tok[1]);
            if (h.alphabet < 1 || h.alphabet > 36)
                throw ParseError("alphabet size must lie in [1,36]", line, 1);
            have_alphabet = true;
        } else if (tok[0] == "memory") {
            if (!have_dim) throw ParseError("memory before dim", line, 1);
            std::vector<Cell> cells;
            for (std::size_t i = 1; i < tok.size(); ++i)
                cells.push_back(parse_cell_token(tok[i], h.dim, line));
            h.memory = FiniteSet(h.dim, cells);
            require_canonical_memory(cells, h.memory, line);
            have_memory = true;
        } else {
            reader.putback();
            break;
        }
    }
    if (!have_dim || !have_alphabet || !have_memory)
        throw ParseError("header must declare dim, alphabet and memory", line, 1);

    std::vector<std::pair<std::string, RuleTable>> tables;
    std::vector<std::pair<std::string, LatticeSet>> region_refs;
    std::vector<std::pair<LatticeSet, RuleTable>> regions;
    std::string default_name;
    const RuleTable* default_table = nullptr;

    auto find_table = [&](const std::string& name, int at_line) -> const RuleTable& {
        for (const auto& [n, t] : tables)
            if (n == name) return t;
        throw ParseError("unknown table '" + name + "'", at_line, 1);
    };

    std::uint64_t table_size = *checked_pow(std::uint64_t(h.alphabet), h.memory.size());
    while (reader.fetch(tok, line)) {
        if (tok[0] == "table") {
            if (tok.size() != 2) throw ParseError("expected 'table NAME'", line, 1);
            std::string name = tok[1];
            std::vector<Symbol> out(table_size, 0);
            std::vector<bool> seen(table_size, false);
            for (std::uint64_t k = 0; k < table_size; ++k) {
                if (!reader.fetch(tok, line))
                    throw ParseError("table '" + name + "' is not total", line ? line : 1, 1);
                if (tok.size() != 3 || tok[1] != "->")
                    throw ParseError("expected 'INPUT -> SYMBOL'", line, 1);
                std::vector<Symbol> in =
                    parse_symbol_string(tok[0], h.memory.size(), h.alphabet, line);
                std::uint64_t code = 0;
                for (Symbol s : in) code = code * std::uint64_t(h.alphabet) + s;
                if (seen[code]) throw ParseError("duplicate table entry", line, 1);
                seen[code] = true;
                out[code] = Symbol(symbol_of_char(tok[2][0], h.alphabet, line, 1));
            }
            tables.emplace_back(name, RuleTable(h.alphabet, h.memory.size(), std::move(out)));
        } else if (tok[0] == "region") {
            if (tok.size() < 4 || tok[tok.size() - 2] != "use")
                throw ParseError("expected 'region EXPR use NAME'", line, 1);
            std::string expr;
            for (std::size_t i = 1; i + 2 < tok.size(); ++i) expr += tok[i];
            LatticeSet set = [&] {
                try {
                    return LatticeSet::parse(expr);
                } catch (const ParseError& e) {
                    throw ParseError(std::string("in region expression: ") + e.what(), line, 1);
                }
            }();
            if (set.dim() != h.dim) throw ParseError("region dimension mismatch", line, 1);
            const RuleTable& t = find_table(tok.back(), line);
            region_refs.emplace_back(tok.back(), set);
            regions.emplace_back(set, t);
        } else if (tok[0] == "default") {
            if (tok.size() != 2) throw ParseError("expected 'default NAME'", line, 1);
            default_name = tok[1];
            default_table = &find_table(default_name, line);
        } else {
            throw ParseError("unexpected directive '" + tok[0] + "'", line, 1);
        }
    }
    if (!default_table) throw ParseError("missing 'default' directive", int(reader.lines.size()), 1);

    return RuleFile{RuleAssignment(h.dim, h.alphabet, h.memory, *default_table, regions),
                    std::move(tables), std::move(region_refs), default_name};
}

std::string write_rule_file(const RuleFile& f) {
    const RuleAssignment& a = f.assignment;
    std::ostringstream os;
    os << "nuca v1\n";
    os << "dim " << a.dim() << "\n";
    os << "alphabet " << a.alphabet() << "\n";
    os << "memory";
    for (const Cell& m : a.memory()) os << ' ' << to_string(m, a.dim());
    os << "\n";
    std::uint64_t table_size = *checked_pow(std::uint64_t(a.alphabet()), a.memory().size());
    for (const auto& [name, table] : f.tables) {
        os << "table " << name << "\n";
        for (std::uint64_t code = 0; code < table_size; ++code) {
            std::string in(a.memory().size(), '0');
            std::uint64_t c = code;
            for (std::size_t i = in.size(); i-- > 0;) {
                in[i] = char_of_symbol(Symbol(c % std::uint64_t(a.alphabet())));
                c /= std::uint64_t(a.alphabet());
            }
            os << "  " << in << " -> " << char_of_symbol(table.apply_code(code)) << "\n";
        }
    }
    for (const auto& [name, set] : f.regions)
        os << "region " << set.to_text() << " use " << name << "\n";
    os << "default " << f.default_name << "\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// linear rule files
// ---------------------------------------------------------------------------

LinearRuleFile parse_linear_rule_file(std::string_view text) {
    LineReader reader(text);
    std::vector<std::string> tok;
    int line = 0;
    if (!reader.fetch(tok, line) || tok[0] != "linear-nuca" || tok.size() != 2 ||
        tok[1] != "v1")
        throw ParseError("expected header 'linear-nuca v1'", line ? line : 1, 1);

    Header h;
    bool have_dim = false, have_field = false, have_memory = false;
    while (reader.fetch(tok, line)) {
        if (tok[0] == "dim" && tok.size() == 2) {
            h.dim = std::stoi(tok[1]);
            have_dim = true;
        } else if (tok[0] == "field" && tok.size() == 2) {
            h.alphabet = std::stoi(tok[1]);
            have_field = true;
        } else if (tok[0] == "vdim" && tok.size() == 2) {
            h.vdim = std::stoi(tok[1]);
        } else if (tok[0] == "memory") {
            if (!have_dim) throw ParseError("memory before dim", line, 1);
            std::vector<Cell> cells;
            for (std::size_t i = 1; i < tok.size(); ++i)
                cells.push_back(parse_cell_token(tok[i], h.dim, line));
            h.memory = FiniteSet(h.dim, cells);
            require_canonical_memory(cells, h.memory, line);
            have_memory = true;
        } else {
            reader.putback();
            break;
        }
    }
    if (!have_dim || !have_field || !have_memory)
        throw ParseError("header must declare dim, field and memory", line, 1);
    FieldSpec field(h.alphabet);

    std::vector<std::pair<std::string, LinearRule>> rules;
    std::vector<std::pair<std::string, LatticeSet>> region_refs;
    std::vector<std::pair<LatticeSet, LinearRule>> regions;
    std::string default_name;
    const LinearRule* default_rule = nullptr;

    auto find_rule = [&](const std::string& name, int at_line) -> const LinearRule& {
        for (const auto& [n, r] : rules)
            if (n == name) return r;
        throw ParseError("unknown lrule '" + name + "'", at_line, 1);
    };

    while (reader.fetch(tok, line)) {
        if (tok[0] == "lrule") {
            if (tok.size() != 2) throw ParseError("expected 'lrule NAME'", line, 1);
            std::string name = tok[1];
            LinearRule rule;
            for (std::size_t mi = 0; mi < h.memory.size(); ++mi) {
                if (!reader.fetch(tok, line))
                    throw ParseError("lrule '" + name + "' missing offsets", line ? line : 1, 1);
                // (off) = [a b; c d]
                Cell off = parse_cell_token(tok[0], h.dim, line);
                if (!(off == h.memory.at(mi)))
                    throw ParseError("offsets must follow the canonical memory order", line, 1);
                if (tok.size() < 3 || tok[1] != "=")
                    throw ParseError("expected '(off) = [matrix]'", line, 1);
                std::string mat;
                for (std::size_t i = 2; i < tok.size(); ++i) {
                    if (i > 2) mat += ' ';
                    mat += tok[i];
                }
                if (mat.size() < 2 || mat.front() != '[' || mat.back() != ']')
                    throw ParseError("matrix must be bracketed", line, 1);
                FqMatrix B(field, std::size_t(h.vdim), std::size_t(h.vdim));
                std::istringstream ms(mat.substr(1, mat.size() - 2));
                std::string row;
                std::size_t r = 0;
                while (std::getline(ms, row, ';')) {
                    std::istringstream rs(row);
                    int v;
                    std::size_t c = 0;
                    while (rs >> v) {
                        if (r >= std::size_t(h.vdim) || c >= std::size_t(h.vdim))
                            throw ParseError("matrix exceeds vdim", line, 1);
                        if (v < 0 || v >= field.q)
                            throw ParseError("matrix entry out of field", line, 1);
                        B.set(r, c, Symbol(v));
                        ++c;
                    }
                    if (c != std::size_t(h.vdim))
                        throw ParseError("matrix row has wrong width", line, 1);
                    ++r;
                }
                if (r != std::size_t(h.vdim))
                    throw ParseError("matrix has wrong height", line, 1);
                rule.coeffs.push_back(std::move(B));
            }
            rules.emplace_back(name, std::move(rule));
        } else if (tok[0] == "region") {
            if (tok.size() < 4 || tok[tok.size() - 2] != "use")
                throw ParseError("expected 'region EXPR use NAME'", line, 1);
            std::string expr;
            for (std::size_t i = 1; i + 2 < tok.size(); ++i) expr += tok[i];
            LatticeSet set = LatticeSet::parse(expr);
            if (set.dim() != h.dim) throw ParseError("region dimension mismatch", line, 1);
            const LinearRule& r = find_rule(tok.back(), line);
            region_refs.emplace_back(tok.back(), set);
            regions.emplace_back(set, r);
        } else if (tok[0] == "default") {
            if (tok.size() != 2) throw ParseError("expected 'default NAME'", line, 1);
            default_name = tok[1];
            default_rule = &find_rule(default_name, line);
        } else {
            throw ParseError("unexpected directive '" + tok[0] + "'", line, 1);
        }
    }
    if (!default_rule)
        throw ParseError("missing 'default' directive", int(reader.lines.size()), 1);

    return LinearRuleFile{
        LinearAssignment(h.dim, field, h.vdim, h.memory, *default_rule, regions),
        std::move(rules), std::move(region_refs), default_name};
}

std::string write_linear_rule_file(const LinearRuleFile& f) {
    const LinearAssignment& a = f.assignment;
    std::ostringstream os;
    os << "linear-nuca v1\n";
    os << "dim " << a.dim() << "\n";
    os << "field " << a.field().q << "\n";
    os << "vdim " << a.vdim() << "\n";
    os << "memory";
    for (const Cell& m : a.memory()) os << ' ' << to_string(m, a.dim());
    os << "\n";
    for (const auto& [name, rule] : f.rules) {
        os << "lrule " << name << "\n";
        for (std::size_t mi = 0; mi < a.memory().size(); ++mi) {
            os << "  " << to_string(a.memory().at(mi), a.dim()) << " = [";
            const FqMatrix& B = rule.coeffs[mi];
            for (std::size_t r = 0; r < B.rows(); ++r) {
                if (r) os << "; ";
                for (std::size_t c = 0; c < B.cols(); ++c) {
                    if (c) os << ' ';
                    os << int(B.at(r, c));
                }
            }
            os << "]\n";
        }
    }
    for (const auto& [name, set] : f.regions)
        os << "region " << set.to_text() << " use " << name << "\n";
    os << "default " << f.default_name << "\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// sft files
// ---------------------------------------------------------------------------

SftFile parse_sft_file(std::string_view text) {
    LineReader reader(text);
    std::vector<std::string> tok;
    int line = 0;
    if (!reader.fetch(tok, line) || tok[0] != "sft" || tok.size() != 2 || tok[1] != "v1")
        throw ParseError("expected header 'sft v1'", line ? line : 1, 1);
    int dim = 0, radius = -1, alphabet = 0;
    while (reader.fetch(tok, line)) {
        if (tok[0] == "dim" && tok.size() == 2)
            dim = std::stoi(tok[1]);
        else if (tok[0] == "radius" && tok.size() == 2)
            radius = std::stoi(tok[1]);
        else if (tok[0] == "alphabet" && tok.size() == 2)
            alphabet = std::stoi(tok[1]);
        else {
            reader.putback();
            break;
        }
    }
    if (dim == 0 || radius < 0 || alphabet == 0)
        throw ParseError("header must declare dim, radius and alphabet", line, 1);
    if (!reader.fetch(tok, line) || (tok[0] != "forbidden" && tok[0] != "allowed"))
        throw ParseError("expected 'forbidden' or 'allowed' section", line, 1);
    bool forbidden = tok[0] == "forbidden";
    FiniteSet window = FiniteSet::centered_box(dim, radius);
    std::vector<Pattern> listed;
    while (reader.fetch(tok, line)) {
        if (tok[0] == "end") break;
        if (tok.size() != 1) throw ParseError("expected one pattern per line", line, 1);
        listed.push_back(Pattern(window, parse_symbol_string(tok[0], window.size(), alphabet,
                                                             line)));
    }
    Sft sft = forbidden ? Sft::from_forbidden(dim, radius, alphabet, listed)
                        : Sft::from_allowed(dim, radius, alphabet, listed);
    return SftFile{std::move(sft), forbidden, std::move(listed)};
}

std::string write_sft_file(const SftFile& f) {
    std::ostringstream os;
    os << "sft v1\n";
    os << "dim " << f.sft.dim() << "\n";
    os << "radius " << f.sft.radius() << "\n";
    os << "alphabet " << f.sft.alphabet() << "\n";
    os << (f.listed_forbidden ? "forbidden" : "allowed") << "\n";
    for (const Pattern& p : f.listed) os << "  " << p.to_text(f.sft.dim()) << "\n";
    os << "end\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// tiling files
// ---------------------------------------------------------------------------

namespace {

std::pair<Cell, Cell> parse_box_corners(const std::string& tok, int dim, int line) {
    auto dots = tok.find("..");
    if (dots == std::string::npos) throw ParseError("expected '(lo)..(hi)'", line, 1);
    Cell lo = parse_cell_token(tok.substr(0, dots), dim, line);
    Cell hi = parse_cell_token(tok.substr(dots + 2), dim, line);
    return {lo, hi};
}

FiniteSet box_from_corners(Cell lo, Cell hi, int dim) {
    return dim == 1 ? FiniteSet::box1(lo.x, hi.x) : FiniteSet::box2(lo, hi);
}

}  // namespace

QuasiTiling parse_tiling_file(std::string_view text) {
    LineReader reader(text);
    std::vector<std::string> tok;
    int line = 0;
    if (!reader.fetch(tok, line) || tok[0] != "tiling" || tok.size() != 2 || tok[1] != "v1")
        throw ParseError("expected header 'tiling v1'", line ? line : 1, 1);
    QuasiTiling t;
    bool have_dim = false;
    while (reader.fetch(tok, line)) {
        if (tok[0] == "dim" && tok.size() == 2) {
            t.dim = std::stoi(tok[1]);
            have_dim = true;
        } else if (tok[0] == "memory") {
            if (!have_dim) throw ParseError("memory before dim", line, 1);
            std::vector<Cell> cells;
            for (std::size_t i = 1; i < tok.size(); ++i)
                cells.push_back(parse_cell_token(tok[i], t.dim, line));
            t.memory = FiniteSet(t.dim, cells);
        } else if (tok[0] == "region" && tok.size() == 2) {
            auto [lo, hi] = parse_box_corners(tok[1], t.dim, line);
            t.region = box_from_corners(lo, hi, t.dim);
        } else if (tok[0] == "shape" && tok.size() == 3) {
            if (std::stoul(tok[1]) != t.shapes.size())
                throw ParseError("shape indices must be consecutive from 0", line, 1);
            auto [lo, hi] = parse_box_corners(tok[2], t.dim, line);
            t.shapes.push_back(box_from_corners(lo, hi, t.dim));
        } else if (tok[0] == "tile" && tok.size() == 3) {
            std::size_t si = std::stoul(tok[1]);
            if (si >= t.shapes.size()) throw ParseError("tile references unknown shape", line, 1);
            Cell center = parse_cell_token(tok[2], t.dim, line);
            FiniteSet cells = t.shapes[si].translated(center);
            t.tiles.push_back(Tile{center, si, cells, interior(cells, t.memory)});
        } else {
            throw ParseError("unexpected directive '" + tok[0] + "'", line, 1);
        }
    }
    if (t.region.empty()) throw ParseError("tiling file missing region", 1, 1);
    return t;
}

std::string write_tiling_file(const QuasiTiling& t) {
    std::ostringstream os;
    os << "tiling v1\n";
    os << "dim " << t.dim << "\n";
    os << "memory";
    for (const Cell& m : t.memory) os << ' ' << to_string(m, t.dim);
    os << "\n";
    auto box_text = [&](const FiniteSet& b) {
        return to_string(b.cells().front(), t.dim) + ".." + to_string(b.cells().back(), t.dim);
    };
    os << "region " << box_text(t.region) << "\n";
    for (std::size_t i = 0; i < t.shapes.size(); ++i)
        os << "shape " << i << ' ' << box_text(t.shapes[i]) << "\n";
    for (const Tile& tile : t.tiles)
        os << "tile " << tile.shape_index << ' ' << to_string(tile.center, t.dim) << "\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// configurations, patterns, boxes
// ---------------------------------------------------------------------------

Pattern parse_pattern_text(std::string_view text, const FiniteSet& support, int alphabet) {
    return Pattern(support,
                   parse_symbol_string(std::string(text), support.size(), alphabet, 1));
}

Configuration parse_config_text(std::string_view text, int dim, int alphabet) {
    // split on ';'
    std::vector<std::string> parts;
    std::string cur;
    for (char c : text) {
        if (c == ';') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    parts.push_back(cur);
    if (parts.empty()) throw ParseError("empty configuration", 1, 1);

    auto tokens0 = split_tokens(parts[0]);
    Configuration cfg = Configuration::constant(dim, 0);
    if (tokens0.size() == 2 && tokens0[0] == "const") {
        int s = symbol_of_char(tokens0[1][0], alphabet, 1, 1);
        cfg = Configuration::constant(dim, Symbol(s));
    } else if (tokens0.size() >= 3 && tokens0[0] == "periodic") {
        // periodic LAT : PATTERN  with LAT = scale (d=1) or [g1,g2] (d=2)
        PeriodLattice lat = PeriodLattice::one_dim(1);
        std::size_t pat_at = 3;
        if (dim == 1) {
            lat = PeriodLattice::one_dim(std::stoll(tokens0[1]));
            if (tokens0[2] != ":") throw ParseError("expected ':' in periodic background", 1, 1);
        } else {
            // [ (a,b),(c,d) ]
            std::string lat_text = tokens0[1];
            if (tokens0[2] != ":") throw ParseError("expected ':' in periodic background", 1, 1);
            if (lat_text.front() != '[' || lat_text.back() != ']')
                throw ParseError("expected '[(g1),(g2)]' period lattice", 1, 1);
            std::string inner = lat_text.substr(1, lat_text.size() - 2);
            auto mid = inner.find("),(");
            if (mid == std::string::npos) throw ParseError("expected two generators", 1, 1);
            Cell g1 = parse_cell_token(inner.substr(0, mid + 1), 2, 1);
            Cell g2 = parse_cell_token(inner.substr(mid + 2), 2, 1);
            lat = PeriodLattice::two_dim(g1, g2);
        }
        if (tokens0.size() != pat_at + 1) throw ParseError("expected pattern after ':'", 1, 1);
        Pattern fundamental =
            parse_pattern_text(tokens0[pat_at], lat.fundamental_cells(), alphabet);
        cfg = Configuration::periodic(lat, fundamental);
    } else {
        throw ParseError("background must be 'const S' or 'periodic L : P'", 1, 1);
    }

    std::vector<Cell> override_cells;
    std::vector<Symbol> override_vals;
    for (std::size_t i = 1; i < parts.size(); ++i) {
        auto tk = split_tokens(parts[i]);
        if (tk.empty()) continue;
        if (tk[0] != "set" || tk.size() != 2)
            throw ParseError("expected 'set (cell)=symbol'", 1, 1);
        auto eq = tk[1].find('=');
        if (eq == std::string::npos) throw ParseError("expected '='", 1, 1);
        override_cells.push_back(parse_cell_token(tk[1].substr(0, eq), dim, 1));
        override_vals.push_back(
            Symbol(symbol_of_char(tk[1][eq + 1], alphabet, 1, 1)));
    }
    if (override_cells.empty()) return cfg;
    // canonical order for the override pattern
    FiniteSet support(dim, override_cells);
    std::vector<Symbol> vals(support.size());
    for (std::size_t i = 0; i < override_cells.size(); ++i)
        vals[support.index_of(override_cells[i])] = override_vals[i];
    return cfg.with_overrides(Pattern(support, vals));
}

FiniteSet parse_box_text(std::string_view text, int dim) {
    std::string s(text);
    if (dim == 1) {
        auto dots = s.find("..");
        if (dots == std::string::npos) throw ParseError("expected 'lo..hi'", 1, 1);
        try {
            return FiniteSet::box1(std::stoll(s.substr(0, dots)), std::stoll(s.substr(dots + 2)));
        } catch (const std::exception&) {
            throw ParseError("malformed box '" + s + "'", 1, 1);
        }
    }
    auto comma = s.find(',');
    if (comma == std::string::npos) throw ParseError("expected 'xlo..xhi,ylo..yhi'", 1, 1);
    std::string xs = s.substr(0, comma), ys = s.substr(comma + 1);
    auto xd = xs.find(".."), yd = ys.find("..");
    if (xd == std::string::npos || yd == std::string::npos)
        throw ParseError("expected 'xlo..xhi,ylo..yhi'", 1, 1);
    try {
        return FiniteSet::box2({std::stoll(xs.substr(0, xd)), std::stoll(ys.substr(0, yd))},
                               {std::stoll(xs.substr(xd + 2)), std::stoll(ys.substr(yd + 2))});
    } catch (const std::exception&) {
        throw ParseError("malformed box '" + s + "'", 1, 1);
    }
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_text_file_atomic(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write file: " + tmp);
        out << content;
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("cannot move report into place: " + path);
}

}  // namespace nucalab
