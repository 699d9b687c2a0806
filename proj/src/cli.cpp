#include "lakit/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

namespace lakit {

namespace {

// ---------------------------------------------------------------- utilities

void for_each_index(const std::vector<std::size_t>& ranks,
                    const std::function<void(const std::vector<std::size_t>&)>& fn) {
    std::vector<std::size_t> idx(ranks.size(), 0);
    for (std::size_t r : ranks)
        if (r == 0) return;
    while (true) {
        fn(idx);
        std::size_t s = idx.size();
        while (s > 0) {
            if (++idx[s - 1] < ranks[s - 1]) break;
            idx[s - 1] = 0;
            --s;
        }
        if (s == 0) return;
    }
}

std::string poly_str(const Poly& p) {
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [exps, coeff] : p.terms()) {
        Rational a = coeff;
        bool neg = a < 0;
        if (neg) a = -a;
        std::vector<std::string> factors;
        if (a != 1) factors.push_back(rational_str(a));
        for (std::size_t i = 0; i < exps.size(); ++i)
            if (exps[i]) {
                std::string f = "x" + std::to_string(i + 1);
                if (exps[i] > 1) f += "^" + std::to_string(exps[i]);
                factors.push_back(f);
            }
        if (factors.empty()) factors.push_back(rational_str(a));
        std::string term = factors[0];
        for (std::size_t i = 1; i < factors.size(); ++i) term += "*" + factors[i];
        if (first)
            out = (neg ? "-" : "") + term;
        else
            out += (neg ? " - " : " + ") + term;
        first = false;
    }
    return out;
}

// ----------------------------------------------------- polynomial expressions

// expr   := term (('+'|'-') term)*
// term   := factor ('*' factor)*
// factor := atom ('^' uint)?
// atom   := rational | xN | '(' expr ')' | '-' atom
class ExprParser {
public:
    ExprParser(const std::string& s, std::size_t nvars, std::size_t line, std::size_t col0)
        : s_(s), nvars_(nvars), line_(line), col0_(col0) {}

    Poly parse() {
        Poly p = expr();
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected trailing input in polynomial expression");
        return p;
    }

private:
    const std::string& s_;
    std::size_t nvars_;
    std::size_t line_, col0_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) {
        throw SpecError({line_, col0_ + pos_}, msg);
    }
    void skip_ws() {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
    }
    bool consume(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    Integer integer() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ == start) fail("expected a number");
        return Integer(s_.substr(start, pos_ - start));
    }

    Poly expr() {
        Poly p = term();
        while (true) {
            if (consume('+'))
                p += term();
            else if (consume('-'))
                p -= term();
            else
                return p;
        }
    }
    Poly term() {
        Poly p = factor();
        while (consume('*')) p = p * factor();
        return p;
    }
    Poly factor() {
        Poly p = atom();
        if (consume('^')) {
            Integer e = integer();
            if (e < 0) fail("negative exponent");
            Poly out = Poly::constant(nvars_, 1);
            for (Integer i = 0; i < e; ++i) out = out * p;
            return out;
        }
        return p;
    }
    Poly atom() {
        skip_ws();
        if (pos_ >= s_.size()) fail("unexpected end of polynomial expression");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            Poly p = expr();
            if (!consume(')')) fail("expected ')'");
            return p;
        }
        if (c == '-') {
            ++pos_;
            return -atom();
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            Integer num = integer();
            Integer den = 1;
            if (consume('/')) den = integer();
            if (den == 0) fail("zero denominator");
            return Poly::constant(nvars_, Rational(num, den));
        }
        if (c == 'x') {
            ++pos_;
            Integer i = integer();
            if (i < 1 || i > Integer(nvars_))
                fail("coordinate index out of range (base has " + std::to_string(nvars_) +
                     " coordinates)");
            return Poly::variable(nvars_, static_cast<std::size_t>(i - 1));
        }
        fail("expected a number, coordinate or '('");
    }
};

// ------------------------------------------------------------------- parsing

struct Line {
    std::size_t no;
    std::string text;
};

std::vector<std::string> split_words(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string w;
    while (is >> w) out.push_back(w);
    return out;
}

bool is_identifier(const std::string& s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_'))
        return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    return true;
}

struct EntryRef {
    std::string name;
    std::vector<std::size_t> idx; // 0-based
    bool has_out = false;
    std::size_t out = 0; // 0-based
    std::size_t rhs_col = 0;
    std::string rhs;
};

// Parses `name[i,j -> k] = expr`; indices are 1-based in the text.
EntryRef parse_entry_line(const std::string& text, std::size_t lineno) {
    EntryRef e;
    std::size_t p = 0;
    auto fail = [&](const std::string& msg) -> void { throw SpecError({lineno, p + 1}, msg); };
    while (p < text.size() && text[p] != '[') ++p;
    e.name = text.substr(0, text.find('['));
    while (!e.name.empty() && std::isspace(static_cast<unsigned char>(e.name.back())))
        e.name.pop_back();
    if (p == text.size() || !is_identifier(e.name)) fail("expected `name[indices] = expression`");
    ++p; // past '['
    auto skip_ws = [&] {
        while (p < text.size() && std::isspace(static_cast<unsigned char>(text[p]))) ++p;
    };
    auto read_uint = [&]() -> std::size_t {
        skip_ws();
        std::size_t start = p;
        while (p < text.size() && std::isdigit(static_cast<unsigned char>(text[p]))) ++p;
        if (p == start) fail("expected an index");
        return static_cast<std::size_t>(std::stoull(text.substr(start, p - start)));
    };
    skip_ws();
    if (p < text.size() && text[p] != ']' && text[p] != '-') {
        while (true) {
            std::size_t v = read_uint();
            if (v == 0) fail("indices are 1-based");
            e.idx.push_back(v - 1);
            skip_ws();
            if (p < text.size() && text[p] == ',') {
                ++p;
                continue;
            }
            break;
        }
    }
    skip_ws();
    if (p + 1 < text.size() && text[p] == '-' && text[p + 1] == '>') {
        p += 2;
        std::size_t v = read_uint();
        if (v == 0) fail("indices are 1-based");
        e.has_out = true;
        e.out = v - 1;
        skip_ws();
    }
    if (p >= text.size() || text[p] != ']') fail("expected ']'");
    ++p;
    skip_ws();
    if (p >= text.size() || text[p] != '=') fail("expected '='");
    ++p;
    e.rhs_col = p + 1;
    e.rhs = text.substr(p);
    return e;
}

std::size_t slot_rank(const SpecDocument& doc, const std::string& name, SourcePos pos) {
    if (name == "base") return doc.nvars;
    auto it = doc.bundles.find(name);
    if (it == doc.bundles.end()) throw SpecError(pos, "unknown bundle '" + name + "'");
    return it->second;
}

void validate_symmetry(const std::string& name, const TensorDecl& t,
                       const std::map<std::vector<std::size_t>, SourcePos>& entry_pos) {
    if (t.sym == Symmetry::none || t.in.size() < 2) return;
    const auto& ranks = t.data.arg_ranks();
    const std::size_t oe = t.data.out_rank() ? t.data.out_rank() : 1;
    for_each_index(ranks, [&](const std::vector<std::size_t>& idx) {
        for (std::size_t s = 0; s + 1 < idx.size(); ++s) {
            std::vector<std::size_t> sw = idx;
            std::swap(sw[s], sw[s + 1]);
            for (std::size_t j = 0; j < oe; ++j) {
                Poly a = t.data.coeff(idx, j);
                Poly b = t.data.coeff(sw, j);
                bool ok = (t.sym == Symmetry::sym) ? (a == b)
                                                   : (a == -b && (idx != sw || a.is_zero()));
                if (t.sym == Symmetry::alt && idx[s] == idx[s + 1] && !a.is_zero()) ok = false;
                if (!ok) {
                    auto it = entry_pos.find(idx);
                    SourcePos pos = it != entry_pos.end() ? it->second : t.pos;
                    std::string where = "[";
                    for (std::size_t q = 0; q < idx.size(); ++q)
                        where += (q ? "," : "") + std::to_string(idx[q] + 1);
                    where += "]";
                    throw SpecError(pos, "tensor '" + name + "' violates its '" +
                                             (t.sym == Symmetry::sym ? std::string("sym")
                                                                     : std::string("alt")) +
                                             "' tag at entry " + where);
                }
            }
        }
    });
}

} // namespace

const StructDecl* SpecDocument::find_structure(const std::string& kind) const {
    for (const auto& s : structures)
        if (s.kind == kind) return &s;
    return nullptr;
}

const StructDecl& SpecDocument::structure_named(const std::string& name, SourcePos at) const {
    for (const auto& s : structures)
        if (s.name == name) return s;
    throw SpecError(at, "unknown structure '" + name + "'");
}

SpecDocument parse_spec(const std::string& text) {
    SpecDocument doc;
    std::vector<Line> lines;
    {
        std::istringstream is(text);
        std::string raw;
        std::size_t no = 0;
        while (std::getline(is, raw)) {
            ++no;
            std::size_t h = raw.find('#');
            if (h != std::string::npos) raw = raw.substr(0, h);
            std::size_t end = raw.find_last_not_of(" \t\r");
            raw = (end == std::string::npos) ? "" : raw.substr(0, end + 1);
            if (!raw.empty()) lines.push_back({no, raw});
        }
    }
    bool base_seen = false;
    std::map<std::string, std::map<std::vector<std::size_t>, SourcePos>> entry_pos;
    std::map<std::string, RatMat> sub_bases; // filled entry by entry

    for (std::size_t li = 0; li < lines.size(); ++li) {
        const Line& ln = lines[li];
        SourcePos pos{ln.no, 1};
        std::vector<std::string> w = split_words(ln.text);
        const std::string& head = w[0];

        if (head == "base") {
            if (w.size() != 2) throw SpecError(pos, "usage: base <num-coordinates>");
            if (base_seen) throw SpecError(pos, "duplicate base declaration");
            doc.nvars = std::stoull(w[1]);
            base_seen = true;
        } else if (head == "bundle") {
            if (w.size() != 3) throw SpecError(pos, "usage: bundle <name> <rank>");
            if (!is_identifier(w[1]) || doc.bundles.count(w[1]) || w[1] == "base" ||
                w[1] == "scalar")
                throw SpecError(pos, "invalid or duplicate bundle name '" + w[1] + "'");
            doc.bundles[w[1]] = std::stoull(w[2]);
        } else if (head == "tensor") {
            // tensor <name> [A,B -> C] [sym|alt]
            std::size_t lb = ln.text.find('[');
            std::size_t rb = ln.text.find(']');
            if (lb == std::string::npos || rb == std::string::npos || rb < lb)
                throw SpecError(pos, "usage: tensor <name> [in1,in2 -> out] [sym|alt]");
            std::string name = w[1];
            if (!is_identifier(name) || doc.tensors.count(name) || doc.subbundles.count(name))
                throw SpecError(pos, "invalid or duplicate tensor name '" + name + "'");
            std::string shape = ln.text.substr(lb + 1, rb - lb - 1);
            std::size_t arrow = shape.find("->");
            if (arrow == std::string::npos)
                throw SpecError(pos, "tensor shape needs '-> <output>'");
            TensorDecl t;
            t.pos = pos;
            {
                std::istringstream is(shape.substr(0, arrow));
                std::string tok;
                while (std::getline(is, tok, ',')) {
                    std::vector<std::string> ws = split_words(tok);
                    if (ws.size() == 1) t.in.push_back(ws[0]);
                    else if (!ws.empty())
                        throw SpecError(pos, "malformed input slot list");
                }
            }
            {
                std::vector<std::string> ws = split_words(shape.substr(arrow + 2));
                if (ws.size() != 1) throw SpecError(pos, "malformed tensor output");
                t.out = ws[0];
            }
            std::vector<std::string> tail = split_words(ln.text.substr(rb + 1));
            if (!tail.empty()) {
                if (tail.size() > 1 || (tail[0] != "sym" && tail[0] != "alt"))
                    throw SpecError(pos, "expected 'sym' or 'alt' after the shape");
                t.sym = tail[0] == "sym" ? Symmetry::sym : Symmetry::alt;
            }
            std::vector<std::size_t> ranks;
            for (const std::string& b : t.in) ranks.push_back(slot_rank(doc, b, pos));
            std::size_t out_rank = t.out == "scalar" ? 0 : slot_rank(doc, t.out, pos);
            t.data = TensorMap(ranks, out_rank, doc.nvars, t.sym);
            doc.tensors.emplace(name, std::move(t));
        } else if (head == "subbundle") {
            if (w.size() != 4) throw SpecError(pos, "usage: subbundle <name> <bundle> <rank>");
            if (!is_identifier(w[1]) || doc.subbundles.count(w[1]) || doc.tensors.count(w[1]))
                throw SpecError(pos, "invalid or duplicate subbundle name '" + w[1] + "'");
            std::size_t ambient = slot_rank(doc, w[2], pos);
            std::size_t rank = std::stoull(w[3]);
            if (rank > ambient) throw SpecError(pos, "subbundle rank exceeds ambient rank");
            doc.subbundles[w[1]] = {w[2], SubBundle(), pos};
            sub_bases.emplace(w[1], RatMat(ambient, rank));
        } else if (head == "structure") {
            if (w.size() != 4 || w[3] != "{")
                throw SpecError(pos, "usage: structure <kind> <name> {");
            StructDecl s;
            s.kind = w[1];
            s.name = w[2];
            s.pos = pos;
            for (const auto& other : doc.structures)
                if (other.name == s.name)
                    throw SpecError(pos, "duplicate structure name '" + s.name + "'");
            ++li;
            for (; li < lines.size(); ++li) {
                const Line& fl = lines[li];
                std::vector<std::string> fw = split_words(fl.text);
                if (fw.size() == 1 && fw[0] == "}") break;
                if (fw.size() != 3 || fw[1] != "=")
                    throw SpecError({fl.no, 1}, "expected `field = value` or `}`");
                s.fields[fw[0]] = fw[2];
            }
            if (li == lines.size())
                throw SpecError(pos, "unterminated structure block (missing '}')");
            doc.structures.push_back(std::move(s));
        } else {
            // entry line: tensor or subbundle coefficient
            EntryRef e = parse_entry_line(ln.text, ln.no);
            auto ti = doc.tensors.find(e.name);
            if (ti != doc.tensors.end()) {
                TensorDecl& t = ti->second;
                if (e.idx.size() != t.data.arity())
                    throw SpecError(pos, "tensor '" + e.name + "' has arity " +
                                             std::to_string(t.data.arity()));
                for (std::size_t s = 0; s < e.idx.size(); ++s)
                    if (e.idx[s] >= t.data.arg_ranks()[s])
                        throw SpecError(pos, "index " + std::to_string(e.idx[s] + 1) +
                                                 " out of range for slot " + std::to_string(s + 1));
                std::size_t out = 0;
                if (t.data.out_rank() == 0) {
                    if (e.has_out)
                        throw SpecError(pos, "tensor '" + e.name + "' is scalar-valued");
                } else {
                    if (!e.has_out)
                        throw SpecError(pos,
                                        "tensor '" + e.name + "' needs an output index '-> k'");
                    if (e.out >= t.data.out_rank())
                        throw SpecError(pos, "output index out of range");
                    out = e.out;
                }
                ExprParser ep(e.rhs, doc.nvars, ln.no, e.rhs_col);
                t.data.coeff(e.idx, out) = ep.parse();
                entry_pos[e.name][e.idx] = pos;
            } else if (auto si = doc.subbundles.find(e.name); si != doc.subbundles.end()) {
                RatMat& m = sub_bases.at(e.name);
                if (e.idx.size() != 2 || e.has_out)
                    throw SpecError(pos, "subbundle entries are `name[frame,column] = rational`");
                if (e.idx[0] >= m.rows() || e.idx[1] >= m.cols())
                    throw SpecError(pos, "subbundle entry out of range");
                ExprParser ep(e.rhs, doc.nvars, ln.no, e.rhs_col);
                Poly v = ep.parse();
                if (!v.is_constant())
                    throw SpecError(pos, "subbundle basis entries must be rational constants");
                m(e.idx[0], e.idx[1]) = v.constant_value();
            } else {
                throw SpecError(pos, "unknown declaration or tensor '" + e.name + "'");
            }
        }
    }
    for (auto& [name, decl] : doc.subbundles) {
        try {
            decl.sub = SubBundle(sub_bases.at(name).rows(), sub_bases.at(name));
        } catch (const std::exception& ex) {
            throw SpecError(decl.pos, "subbundle '" + name + "': " + ex.what());
        }
    }
    for (const auto& [name, t] : doc.tensors) {
        auto it = entry_pos.find(name);
        static const std::map<std::vector<std::size_t>, SourcePos> none;
        validate_symmetry(name, t, it != entry_pos.end() ? it->second : none);
    }
    return doc;
}

std::string serialize_spec(const SpecDocument& doc) {
    std::ostringstream os;
    os << "base " << doc.nvars << "\n";
    for (const auto& [name, rank] : doc.bundles) os << "bundle " << name << " " << rank << "\n";
    for (const auto& [name, t] : doc.tensors) {
        os << "tensor " << name << " [";
        for (std::size_t i = 0; i < t.in.size(); ++i) os << (i ? "," : "") << t.in[i];
        os << " -> " << t.out << "]";
        if (t.sym == Symmetry::sym) os << " sym";
        if (t.sym == Symmetry::alt) os << " alt";
        os << "\n";
        const std::size_t oe = t.data.out_rank() ? t.data.out_rank() : 1;
        for_each_index(t.data.arg_ranks(), [&](const std::vector<std::size_t>& idx) {
            for (std::size_t j = 0; j < oe; ++j) {
                const Poly& p = t.data.coeff(idx, j);
                if (p.is_zero()) continue;
                os << name << "[";
                for (std::size_t s = 0; s < idx.size(); ++s)
                    os << (s ? "," : "") << (idx[s] + 1);
                if (t.data.out_rank()) os << " -> " << (j + 1);
                os << "] = " << poly_str(p) << "\n";
            }
        });
    }
    for (const auto& [name, s] : doc.subbundles) {
        os << "subbundle " << name << " " << s.bundle << " " << s.sub.rank() << "\n";
        for (std::size_t i = 0; i < s.sub.ambient_rank(); ++i)
            for (std::size_t c = 0; c < s.sub.rank(); ++c)
                if (s.sub.basis()(i, c) != 0)
                    os << name << "[" << (i + 1) << "," << (c + 1)
                       << "] = " << rational_str(s.sub.basis()(i, c)) << "\n";
    }
    for (const auto& s : doc.structures) {
        os << "structure " << s.kind << " " << s.name << " {\n";
        for (const auto& [k, v] : s.fields) os << "  " << k << " = " << v << "\n";
        os << "}\n";
    }
    return os.str();
}

// ------------------------------------------------------------------ builders

namespace {

const std::string& need_field(const StructDecl& s, const std::string& key) {
    auto it = s.fields.find(key);
    if (it == s.fields.end())
        throw SpecError(s.pos, s.kind + " '" + s.name + "' is missing field '" + key + "'");
    return it->second;
}

const TensorDecl& need_tensor(const SpecDocument& doc, const StructDecl& s,
                              const std::string& key) {
    const std::string& name = need_field(s, key);
    auto it = doc.tensors.find(name);
    if (it == doc.tensors.end())
        throw SpecError(s.pos, "field '" + key + "' refers to unknown tensor '" + name + "'");
    return it->second;
}

std::size_t need_bundle(const SpecDocument& doc, const StructDecl& s, const std::string& key) {
    const std::string& name = need_field(s, key);
    auto it = doc.bundles.find(name);
    if (it == doc.bundles.end())
        throw SpecError(s.pos, "field '" + key + "' refers to unknown bundle '" + name + "'");
    return it->second;
}

const SubBundleDecl& need_sub(const SpecDocument& doc, const StructDecl& s,
                              const std::string& key) {
    const std::string& name = need_field(s, key);
    auto it = doc.subbundles.find(name);
    if (it == doc.subbundles.end())
        throw SpecError(s.pos, "field '" + key + "' refers to unknown subbundle '" + name + "'");
    return it->second;
}

void expect_shape(const StructDecl& s, const std::string& key, const TensorDecl& t,
                  const std::vector<std::size_t>& in, std::size_t out) {
    if (t.data.arg_ranks() != in || t.data.out_rank() != out)
        throw SpecError(s.pos, "tensor bound to '" + key + "' has the wrong shape");
}

// anchor tensor [E -> base] to per-frame vector fields
std::vector<Section> anchor_from(const TensorDecl& t, std::size_t rank, std::size_t nv) {
    std::vector<Section> a(rank, zero_section(nv, nv));
    for (std::size_t i = 0; i < rank; ++i)
        for (std::size_t l = 0; l < nv; ++l) a[i][l] = t.data.coeff({i}, l);
    return a;
}

std::vector<std::vector<Section>> table_from(const TensorDecl& t, std::size_t r1, std::size_t r2,
                                             std::size_t out, std::size_t nv) {
    std::vector<std::vector<Section>> c(r1, std::vector<Section>(r2, zero_section(out, nv)));
    for (std::size_t i = 0; i < r1; ++i)
        for (std::size_t j = 0; j < r2; ++j)
            for (std::size_t k = 0; k < out; ++k) c[i][j][k] = t.data.coeff({i, j}, k);
    return c;
}

// linear map tensor [S -> T] to the rows(T) x cols(S) matrix
PolyMat polymat_from(const TensorDecl& t, std::size_t rows, std::size_t cols, std::size_t nv) {
    PolyMat m(rows, cols, nv);
    for (std::size_t c = 0; c < cols; ++c)
        for (std::size_t r = 0; r < rows; ++r) m.at(r, c) = t.data.coeff({c}, r);
    return m;
}

PolyMat pairing_from(const TensorDecl& t, std::size_t r, std::size_t nv) {
    PolyMat m(r, r, nv);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) m.at(i, j) = t.data.coeff({i, j}, 0);
    return m;
}

AnchoredBundle tm_bundle(std::size_t nv) {
    std::vector<Section> a(nv);
    for (std::size_t l = 0; l < nv; ++l) a[l] = frame_section(nv, nv, l);
    return AnchoredBundle({"TM", nv, nv}, a);
}

} // namespace

CourantData build_courant(const SpecDocument& doc, const StructDecl& s) {
    const std::size_t nv = doc.nvars;
    const std::size_t re = need_bundle(doc, s, "bundle");
    const TensorDecl& ta = need_tensor(doc, s, "anchor");
    expect_shape(s, "anchor", ta, {re}, nv);
    const TensorDecl& tp = need_tensor(doc, s, "pairing");
    expect_shape(s, "pairing", tp, {re, re}, 0);
    const TensorDecl& tb = need_tensor(doc, s, "bracket");
    expect_shape(s, "bracket", tb, {re, re}, re);

    AnchoredBundle e({need_field(s, "bundle"), re, nv}, anchor_from(ta, re, nv));
    PolyMat pairing = pairing_from(tp, re, nv);
    std::vector<Section> dcomp(nv, zero_section(re, nv));
    if (s.fields.count("dcomp")) {
        const TensorDecl& td = need_tensor(doc, s, "dcomp");
        expect_shape(s, "dcomp", td, {nv}, re);
        for (std::size_t l = 0; l < nv; ++l)
            for (std::size_t i = 0; i < re; ++i) dcomp[l][i] = td.data.coeff({l}, i);
    } else {
        // derive D from the anchor through an invertible constant pairing
        if (!pairing.is_constant())
            throw SpecError(s.pos,
                            "courant '" + s.name + "' needs an explicit dcomp tensor "
                            "(the pairing is not constant)");
        RatMat gram(re, re);
        for (std::size_t i = 0; i < re; ++i)
            for (std::size_t j = 0; j < re; ++j) gram(i, j) = pairing.at(i, j).constant_value();
        Metric beta(gram);
        if (!beta.is_invertible())
            throw SpecError(s.pos, "courant '" + s.name +
                                       "' needs an explicit dcomp tensor (degenerate pairing)");
        for (std::size_t l = 0; l < nv; ++l)
            dcomp[l] = beta.sharp(e.rho_star(differential(Poly::variable(nv, l))));
    }
    try {
        return CourantData(e, pairing, dcomp, table_from(tb, re, re, re, nv));
    } catch (const std::exception& ex) {
        throw SpecError(s.pos, "courant '" + s.name + "': " + ex.what());
    }
}

SplitLie2 build_split_lie2(const SpecDocument& doc, const StructDecl& s) {
    const std::size_t nv = doc.nvars;
    const std::size_t rq = need_bundle(doc, s, "q");
    const std::size_t rb = need_bundle(doc, s, "b");
    const TensorDecl& ta = need_tensor(doc, s, "anchor");
    expect_shape(s, "anchor", ta, {rq}, nv);
    const TensorDecl& td = need_tensor(doc, s, "dull");
    expect_shape(s, "dull", td, {rq, rq}, rq);
    const TensorDecl& tdb = need_tensor(doc, s, "dB");
    expect_shape(s, "dB", tdb, {rq}, rb);
    const TensorDecl& tn = need_tensor(doc, s, "nabla");
    expect_shape(s, "nabla", tn, {rq, rb}, rb);
    const TensorDecl& tw = need_tensor(doc, s, "omega");
    expect_shape(s, "omega", tw, {rq, rq, rq}, rb);

    AnchoredBundle q({need_field(s, "q"), rq, nv}, anchor_from(ta, rq, nv));
    FreeModule b{need_field(s, "b"), rb, nv};
    try {
        return SplitLie2(DullBracket(q, table_from(td, rq, rq, rq, nv)), b,
                         polymat_from(tdb, rb, rq, nv),
                         Connection(q, b, table_from(tn, rq, rb, rb, nv)), tw.data);
    } catch (const std::exception& ex) {
        throw SpecError(s.pos, "split_lie2 '" + s.name + "': " + ex.what());
    }
}

SelfDual2Rep build_selfdual_2rep(const SpecDocument& doc, const StructDecl& s) {
    const std::size_t nv = doc.nvars;
    const std::size_t rq = need_bundle(doc, s, "q");
    const std::size_t rb = need_bundle(doc, s, "b");
    const TensorDecl& ta = need_tensor(doc, s, "anchor_b");
    expect_shape(s, "anchor_b", ta, {rb}, nv);
    const TensorDecl& tb = need_tensor(doc, s, "bracket_b");
    expect_shape(s, "bracket_b", tb, {rb, rb}, rb);
    const TensorDecl& tdq = need_tensor(doc, s, "dQ");
    expect_shape(s, "dQ", tdq, {rq}, rq);
    const TensorDecl& tnq = need_tensor(doc, s, "nablaQ");
    expect_shape(s, "nablaQ", tnq, {rb, rq}, rq);
    const TensorDecl& tns = need_tensor(doc, s, "nablaQstar");
    expect_shape(s, "nablaQstar", tns, {rb, rq}, rq);
    const TensorDecl& tr = need_tensor(doc, s, "R");
    expect_shape(s, "R", tr, {rb, rb, rq}, rq);

    AnchoredBundle ba({need_field(s, "b"), rb, nv}, anchor_from(ta, rb, nv));
    FreeModule q{need_field(s, "q"), rq, nv};
    try {
        return SelfDual2Rep(DullBracket(ba, table_from(tb, rb, rb, rb, nv)), q,
                            polymat_from(tdq, rq, rq, nv),
                            Connection(ba, q, table_from(tnq, rb, rq, rq, nv)),
                            Connection(ba, q, table_from(tns, rb, rq, rq, nv)), tr.data);
    } catch (const std::exception& ex) {
        throw SpecError(s.pos, "selfdual_2rep '" + s.name + "': " + ex.what());
    }
}

LACourantSplit build_la_courant(const SpecDocument& doc, const StructDecl& s) {
    const StructDecl& l = doc.structure_named(need_field(s, "lie2"), s.pos);
    const StructDecl& r = doc.structure_named(need_field(s, "rep"), s.pos);
    if (l.kind != "split_lie2" || r.kind != "selfdual_2rep")
        throw SpecError(s.pos, "la_courant needs a split_lie2 and a selfdual_2rep");
    try {
        return LACourantSplit(build_split_lie2(doc, l), build_selfdual_2rep(doc, r));
    } catch (const SpecError&) {
        throw;
    } catch (const std::exception& ex) {
        throw SpecError(s.pos, "la_courant '" + s.name + "': " + ex.what());
    }
}

DullBracket build_lie_algebroid(const SpecDocument& doc, const StructDecl& s) {
    const std::size_t nv = doc.nvars;
    const std::size_t ra = need_bundle(doc, s, "bundle");
    const TensorDecl& ta = need_tensor(doc, s, "anchor");
    expect_shape(s, "anchor", ta, {ra}, nv);
    const TensorDecl& tb = need_tensor(doc, s, "bracket");
    expect_shape(s, "bracket", tb, {ra, ra}, ra);
    AnchoredBundle a({need_field(s, "bundle"), ra, nv}, anchor_from(ta, ra, nv));
    return DullBracket(a, table_from(tb, ra, ra, ra, nv));
}

Matched2Reps build_matched(const SpecDocument& doc, const StructDecl& s) {
    const std::size_t nv = doc.nvars;
    DullBracket bA = build_lie_algebroid(doc, doc.structure_named(need_field(s, "a"), s.pos));
    DullBracket bB = build_lie_algebroid(doc, doc.structure_named(need_field(s, "b"), s.pos));
    const std::size_t ra = bA.rank(), rb = bB.rank();
    const std::size_t rc = need_bundle(doc, s, "c");
    FreeModule c{need_field(s, "c"), rc, nv};

    const TensorDecl& tda = need_tensor(doc, s, "dA");
    expect_shape(s, "dA", tda, {rc}, ra);
    const TensorDecl& tdb = need_tensor(doc, s, "dB");
    expect_shape(s, "dB", tdb, {rc}, rb);
    const TensorDecl& tab = need_tensor(doc, s, "nablaAB");
    expect_shape(s, "nablaAB", tab, {ra, rb}, rb);
    const TensorDecl& tac = need_tensor(doc, s, "nablaAC");
    expect_shape(s, "nablaAC", tac, {ra, rc}, rc);
    const TensorDecl& tba = need_tensor(doc, s, "nablaBA");
    expect_shape(s, "nablaBA", tba, {rb, ra}, ra);
    const TensorDecl& tbc = need_tensor(doc, s, "nablaBC");
    expect_shape(s, "nablaBC", tbc, {rb, rc}, rc);
    const TensorDecl& tra = need_tensor(doc, s, "RA");
    expect_shape(s, "RA", tra, {ra, ra, rb}, rc);
    const TensorDecl& trb = need_tensor(doc, s, "RB");
    expect_shape(s, "RB", trb, {rb, rb, ra}, rc);

    try {
        return Matched2Reps(bA, bB, c, polymat_from(tda, ra, rc, nv),
                            polymat_from(tdb, rb, rc, nv),
                            Connection(bA.base(), bB.base().bundle,
                                       table_from(tab, ra, rb, rb, nv)),
                            Connection(bA.base(), c, table_from(tac, ra, rc, rc, nv)),
                            Connection(bB.base(), bA.base().bundle,
                                       table_from(tba, rb, ra, ra, nv)),
                            Connection(bB.base(), c, table_from(tbc, rb, rc, rc, nv)), tra.data,
                            trb.data);
    } catch (const std::exception& ex) {
        throw SpecError(s.pos, "matched '" + s.name + "': " + ex.what());
    }
}

DoubleSubbundleData build_double_sub(const SpecDocument& doc, const StructDecl& s) {
    DoubleSubbundleData d;
    d.U = need_sub(doc, s, "side").sub;
    d.Bp = need_sub(doc, s, "support").sub;
    d.K = need_sub(doc, s, "core").sub;
    if (s.fields.count("lambda")) d.Lambda = need_tensor(doc, s, "lambda").data;
    return d;
}

Connection build_base_connection(const SpecDocument& doc, const std::string& tensor_name,
                                 std::size_t space_rank, SourcePos at) {
    auto it = doc.tensors.find(tensor_name);
    if (it == doc.tensors.end())
        throw SpecError(at, "unknown connection tensor '" + tensor_name + "'");
    const TensorDecl& t = it->second;
    const std::size_t nv = doc.nvars;
    if (t.data.arg_ranks() != std::vector<std::size_t>{nv, space_rank} ||
        t.data.out_rank() != space_rank)
        throw SpecError(at, "connection tensor '" + tensor_name + "' has the wrong shape");
    return Connection(tm_bundle(nv), FreeModule{"E", space_rank, nv},
                      table_from(t, nv, space_rank, space_rank, nv));
}

// -------------------------------------------------------------------- suites

namespace {

const std::vector<std::string> kAllSuites = {"courant",  "lie2",         "selfdual",
                                             "matched",  "la-courant",   "poisson-lie2",
                                             "dirac",    "manin"};

CheckReport run_one(const SpecDocument& doc, const StructDecl& s, const std::string& suite,
                    std::size_t trunc, std::uint64_t seed) {
    Rng rng(seed);
    if (suite == "courant") {
        bool degenerate = s.fields.count("degenerate") && s.fields.at("degenerate") == "true";
        return check_courant(build_courant(doc, s), !degenerate, rng);
    }
    if (suite == "lie2") {
        SplitLie2 l = build_split_lie2(doc, s);
        CheckReport rep = check_split_lie2(l, rng);
        Rng rng2(seed);
        rep.merge(check_homological(homological_from_lie2(l, trunc), rng2));
        return rep;
    }
    if (suite == "selfdual") {
        SelfDual2Rep r = build_selfdual_2rep(doc, s);
        CheckReport rep = check_selfdual_2rep(r, rng);
        Rng rng2(seed);
        rep.merge(check_poisson_axioms(poisson_from_selfdual(r, trunc), 3, rng2));
        return rep;
    }
    if (suite == "matched") {
        if (s.kind == "matched") return check_matched_m(build_matched(doc, s), rng);
        return check_matched_M(build_la_courant(doc, s), rng);
    }
    if (suite == "la-courant") return check_la_courant(build_la_courant(doc, s), rng);
    if (suite == "poisson-lie2") {
        LACourantSplit la = build_la_courant(doc, s);
        GradedDerivation Qv = homological_from_lie2(la.lie2, trunc);
        PoissonBracket pb = poisson_from_selfdual(la.rep, trunc);
        CheckReport rep = check_homological(Qv, rng);
        Rng rng2(seed);
        rep.merge(check_poisson_axioms(pb, 3, rng2));
        Rng rng3(seed);
        rep.merge(check_Q_poisson_compat(Qv, pb, rng3));
        return rep;
    }
    if (suite == "dirac") {
        const StructDecl& la = doc.structure_named(need_field(s, "la"), s.pos);
        return check_la_dirac(build_la_courant(doc, la), build_double_sub(doc, s), rng);
    }
    if (suite == "manin") {
        const StructDecl& la = doc.structure_named(need_field(s, "la"), s.pos);
        LACourantSplit split = build_la_courant(doc, la);
        ManinPairData mp = manin_pair(split, need_sub(doc, s, "side").sub.basis());
        return check_manin_pair(split, mp, rng);
    }
    throw std::invalid_argument("unknown suite '" + suite + "'");
}

bool suite_applies(const std::string& suite, const std::string& kind) {
    if (suite == "courant") return kind == "courant";
    if (suite == "lie2") return kind == "split_lie2";
    if (suite == "selfdual") return kind == "selfdual_2rep";
    if (suite == "matched") return kind == "matched" || kind == "la_courant";
    if (suite == "la-courant" || suite == "poisson-lie2") return kind == "la_courant";
    if (suite == "dirac") return kind == "dirac";
    if (suite == "manin") return kind == "manin";
    return false;
}

} // namespace

std::vector<ReportDocument> run_suites(const SpecDocument& doc, const std::string& instance_id,
                                       const std::string& suite, std::size_t truncation,
                                       std::uint64_t seed) {
    std::vector<std::string> suites;
    if (suite == "all")
        suites = kAllSuites;
    else
        suites.push_back(suite);
    std::vector<ReportDocument> out;
    for (const std::string& su : suites)
        for (const StructDecl& s : doc.structures) {
            if (!suite_applies(su, s.kind)) continue;
            auto t0 = std::chrono::steady_clock::now();
            ReportDocument rd;
            rd.instance = instance_id + ":" + s.name;
            rd.suite = su;
            rd.seed = seed;
            rd.report = run_one(doc, s, su, truncation, seed);
            rd.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                                  .count();
            out.push_back(std::move(rd));
        }
    return out;
}

// ----------------------------------------------------------------- construct

namespace {

// document presentation of a Courant structure
SpecDocument doc_from_courant(const CourantData& cd, bool degenerate) {
    const std::size_t nv = cd.nvars(), re = cd.rank();
    SpecDocument doc;
    doc.nvars = nv;
    doc.bundles["E"] = re;

    TensorDecl anchor{{"E"}, "base", Symmetry::none, TensorMap({re}, nv, nv), {}};
    for (std::size_t i = 0; i < re; ++i)
        for (std::size_t l = 0; l < nv; ++l)
            anchor.data.coeff({i}, l) = cd.E().anchor[i][l];
    doc.tensors["anchor"] = std::move(anchor);

    TensorDecl pairing{{"E", "E"}, "scalar", Symmetry::none, TensorMap({re, re}, 0, nv), {}};
    for (std::size_t i = 0; i < re; ++i)
        for (std::size_t j = 0; j < re; ++j)
            pairing.data.coeff({i, j}, 0) = cd.pairing_mat().at(i, j);
    doc.tensors["pairing"] = std::move(pairing);

    TensorDecl bracket{{"E", "E"}, "E", Symmetry::none, TensorMap({re, re}, re, nv), {}};
    for (std::size_t i = 0; i < re; ++i)
        for (std::size_t j = 0; j < re; ++j)
            for (std::size_t k = 0; k < re; ++k)
                bracket.data.coeff({i, j}, k) = cd.table()[i][j][k];
    doc.tensors["bracket"] = std::move(bracket);

    TensorDecl dcomp{{"base"}, "E", Symmetry::none, TensorMap({nv}, re, nv), {}};
    for (std::size_t l = 0; l < nv; ++l) {
        Section d = cd.Dmap(Poly::variable(nv, l));
        for (std::size_t i = 0; i < re; ++i) dcomp.data.coeff({l}, i) = d[i];
    }
    doc.tensors["dcomp"] = std::move(dcomp);

    StructDecl s;
    s.kind = "courant";
    s.name = "E0";
    s.fields = {{"bundle", "E"},   {"anchor", "anchor"}, {"pairing", "pairing"},
                {"bracket", "bracket"}, {"dcomp", "dcomp"},
                {"degenerate", degenerate ? "true" : "false"}};
    doc.structures.push_back(std::move(s));
    return doc;
}

SpecDocument doc_from_split(const LACourantSplit& split) {
    const std::size_t nv = split.nvars(), rq = split.rank_q(), rb = split.rank_b();
    SpecDocument doc;
    doc.nvars = nv;
    doc.bundles["Q"] = rq;
    doc.bundles["B"] = rb;

    auto put_anchor = [&](const std::string& name, const std::string& bundle,
                          const std::vector<Section>& a) {
        std::size_t r = a.size();
        TensorDecl t{{bundle}, "base", Symmetry::none, TensorMap({r}, nv, nv), {}};
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t l = 0; l < nv; ++l) t.data.coeff({i}, l) = a[i][l];
        doc.tensors[name] = std::move(t);
    };
    auto put_table = [&](const std::string& name, const std::string& b1, const std::string& b2,
                         const std::string& out, std::size_t r1, std::size_t r2, std::size_t ro,
                         const std::function<Section(std::size_t, std::size_t)>& coeff) {
        TensorDecl t{{b1, b2}, out, Symmetry::none, TensorMap({r1, r2}, ro, nv), {}};
        for (std::size_t i = 0; i < r1; ++i)
            for (std::size_t j = 0; j < r2; ++j) {
                Section c = coeff(i, j);
                for (std::size_t k = 0; k < ro; ++k) t.data.coeff({i, j}, k) = c[k];
            }
        doc.tensors[name] = std::move(t);
    };
    auto put_map = [&](const std::string& name, const std::string& src, const std::string& dst,
                       const PolyMat& m) {
        TensorDecl t{{src}, dst, Symmetry::none, TensorMap({m.cols()}, m.rows(), nv), {}};
        for (std::size_t c = 0; c < m.cols(); ++c)
            for (std::size_t r = 0; r < m.rows(); ++r) t.data.coeff({c}, r) = m.at(r, c);
        doc.tensors[name] = std::move(t);
    };

    put_anchor("anchorQ", "Q", split.lie2.dull.base().anchor);
    put_table("dull", "Q", "Q", "Q", rq, rq, rq,
              [&](std::size_t i, std::size_t j) { return split.lie2.dull.frame_coeff(i, j); });
    put_map("dB", "Q", "B", split.lie2.dB);
    put_table("nabla", "Q", "B", "B", rq, rb, rb,
              [&](std::size_t i, std::size_t m) { return split.lie2.nabla.frame_coeff(i, m); });
    doc.tensors["omega"] = TensorDecl{{"Q", "Q", "Q"}, "B", Symmetry::alt, split.lie2.omega, {}};

    put_anchor("anchorB", "B", split.rep.bB.base().anchor);
    put_table("bracketB", "B", "B", "B", rb, rb, rb,
              [&](std::size_t i, std::size_t j) { return split.rep.bB.frame_coeff(i, j); });
    put_map("dQ", "Q", "Q", split.rep.dQ);
    put_table("nablaQ", "B", "Q", "Q", rb, rq, rq,
              [&](std::size_t m, std::size_t i) { return split.rep.nablaQ.frame_coeff(m, i); });
    put_table("nablaQstar", "B", "Q", "Q", rb, rq, rq, [&](std::size_t m, std::size_t i) {
        return split.rep.nablaQstar.frame_coeff(m, i);
    });
    doc.tensors["R"] = TensorDecl{{"B", "B", "Q"}, "Q", Symmetry::none, split.rep.R, {}};

    StructDecl l;
    l.kind = "split_lie2";
    l.name = "L0";
    l.fields = {{"q", "Q"},        {"b", "B"},       {"anchor", "anchorQ"}, {"dull", "dull"},
                {"dB", "dB"},      {"nabla", "nabla"}, {"omega", "omega"}};
    doc.structures.push_back(std::move(l));
    StructDecl r;
    r.kind = "selfdual_2rep";
    r.name = "R0";
    r.fields = {{"q", "Q"},
                {"b", "B"},
                {"anchor_b", "anchorB"},
                {"bracket_b", "bracketB"},
                {"dQ", "dQ"},
                {"nablaQ", "nablaQ"},
                {"nablaQstar", "nablaQstar"},
                {"R", "R"}};
    doc.structures.push_back(std::move(r));
    StructDecl s;
    s.kind = "la_courant";
    s.name = "S0";
    s.fields = {{"lie2", "L0"}, {"rep", "R0"}};
    doc.structures.push_back(std::move(s));
    return doc;
}

} // namespace

std::string run_construct(const SpecDocument& doc, const std::string& kind) {
    SourcePos at{0, 0};
    if (kind == "core-courant") {
        const StructDecl* s = doc.find_structure("la_courant");
        if (!s) throw SpecError(at, "construct core-courant needs an la_courant structure");
        return serialize_spec(
            doc_from_courant(core_degenerate_courant(build_la_courant(doc, *s)), true));
    }
    if (kind == "manin") {
        const StructDecl* s = doc.find_structure("manin");
        if (!s) throw SpecError(at, "construct manin needs a manin structure");
        const StructDecl& la = doc.structure_named(need_field(*s, "la"), s->pos);
        ManinPairData mp =
            manin_pair(build_la_courant(doc, la), need_sub(doc, *s, "side").sub.basis());
        return serialize_spec(doc_from_courant(mp.courant, false));
    }
    if (kind == "tangent") {
        const StructDecl* s = doc.find_structure("courant");
        if (!s) throw SpecError(at, "construct tangent needs a courant structure");
        CourantData cd = build_courant(doc, *s);
        Connection conn =
            s->fields.count("connection")
                ? build_base_connection(doc, s->fields.at("connection"), cd.rank(), s->pos)
                : Connection(tm_bundle(doc.nvars), FreeModule{"E", cd.rank(), doc.nvars},
                             std::vector<std::vector<Section>>(
                                 doc.nvars, std::vector<Section>(
                                                cd.rank(), zero_section(cd.rank(), doc.nvars))));
        return serialize_spec(doc_from_split(tangent_prolongation_la_courant(cd, conn)));
    }
    if (kind == "standard") {
        const StructDecl* s = doc.find_structure("lie_algebroid");
        if (!s) throw SpecError(at, "construct standard needs a lie_algebroid structure");
        DullBracket a = build_lie_algebroid(doc, *s);
        const std::size_t nv = doc.nvars, rq = nv + a.rank();
        const TensorDecl& tq = need_tensor(doc, *s, "dullq");
        if (tq.data.arg_ranks() != std::vector<std::size_t>{rq, rq} || tq.data.out_rank() != rq)
            throw SpecError(s->pos, "the dullq tensor must be a bracket table on TM + A*");
        std::vector<Section> anchor(rq, zero_section(nv, nv));
        for (std::size_t l = 0; l < nv; ++l) anchor[l] = frame_section(nv, nv, l);
        AnchoredBundle q({"Q", rq, nv}, anchor);
        DullBracket dullq(q, table_from(tq, rq, rq, rq, nv));
        return serialize_spec(doc_from_split(standard_la_courant_over_lie_algebroid(a, dullq)));
    }
    if (kind == "from-matched") {
        const StructDecl* s = doc.find_structure("matched");
        if (!s) throw SpecError(at, "construct from-matched needs a matched structure");
        return serialize_spec(doc_from_split(la_courant_from_matched_2reps(build_matched(doc, *s))));
    }
    throw SpecError(at, "unknown construct kind '" + kind + "'");
}

// ------------------------------------------------------------------- reports

std::string reports_json(const std::vector<ReportDocument>& reports) {
    using nlohmann::ordered_json;
    auto one = [](const ReportDocument& rd) {
        ordered_json j;
        j["instance"] = rd.instance;
        j["suite"] = rd.suite;
        j["entries"] = ordered_json::array();
        for (const CheckEntry& e : rd.report.entries) {
            ordered_json je;
            je["axiom"] = e.axiom;
            je["status"] = e.pass ? "pass" : "fail";
            if (e.witness) {
                ordered_json w;
                w["poly"] = poly_str(e.witness->poly);
                w["point"] = ordered_json::array();
                for (const Rational& r : e.witness->point) w["point"].push_back(rational_str(r));
                w["frames"] = e.witness->frames;
                je["witness"] = w;
            } else {
                je["witness"] = nullptr;
            }
            j["entries"].push_back(je);
        }
        j["verdict"] = rd.report.verdict();
        j["seed"] = rd.seed;
        return j;
    };
    ordered_json out;
    if (reports.size() == 1)
        out = one(reports[0]);
    else {
        out = ordered_json::array();
        for (const auto& rd : reports) out.push_back(one(rd));
    }
    return out.dump(2) + "\n";
}

std::string reports_text(const std::vector<ReportDocument>& reports) {
    std::ostringstream os;
    for (const ReportDocument& rd : reports) {
        os << "== " << rd.instance << " | suite " << rd.suite << " | seed " << rd.seed << "\n";
        for (const CheckEntry& e : rd.report.entries) {
            os << (e.pass ? "  [pass] " : "  [FAIL] ") << e.axiom;
            if (e.witness) {
                os << "  witness poly=" << poly_str(e.witness->poly) << " point=(";
                for (std::size_t i = 0; i < e.witness->point.size(); ++i)
                    os << (i ? "," : "") << rational_str(e.witness->point[i]);
                os << ") frames=(";
                for (std::size_t i = 0; i < e.witness->frames.size(); ++i)
                    os << (i ? "," : "") << e.witness->frames[i];
                os << ")";
            }
            os << "\n";
        }
        os << "  verdict: " << (rd.report.verdict() ? "PASS" : "FAIL") << "  ("
           << rd.wall_seconds << " s)\n";
    }
    return os.str();
}

// -------------------------------------------------------------------- driver

namespace {

std::string file_stem(const std::string& path) {
    std::size_t slash = path.find_last_of("/\\");
    std::string name = slash == std::string::npos ? path : path.substr(slash + 1);
    std::size_t dot = name.find_last_of('.');
    return dot == std::string::npos ? name : name.substr(0, dot);
}

int write_output(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content;
        return 0;
    }
    std::ofstream os(out_path);
    if (!os) {
        std::cerr << "error: cannot open output file '" << out_path << "'\n";
        return 2;
    }
    os << content;
    return 0;
}

} // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"exact verification of split Lie 2-algebroid and Courant structures"};
    app.require_subcommand(1);

    std::string v_file, v_suite = "all", v_report = "text", v_out;
    std::uint64_t v_seed = 0;
    std::size_t v_trunc = 6;
    bool seed_given = false;
    CLI::App* verify = app.add_subcommand("verify", "run a checker suite on a document");
    verify->add_option("file", v_file, "input document")->required();
    verify->add_option("--suite", v_suite, "checker suite")
        ->check(CLI::IsMember({"courant", "lie2", "selfdual", "matched", "la-courant",
                               "poisson-lie2", "dirac", "manin", "all"}));
    verify->add_option("--report", v_report, "report format")
        ->check(CLI::IsMember({"text", "json"}));
    verify->add_option("--truncation-degree", v_trunc, "graded algebra truncation (default 6)");
    verify->add_option("--seed", v_seed, "seed for randomized multiples")
        ->each([&](const std::string&) { seed_given = true; });
    verify->add_option("-o,--output", v_out, "write the report to a file");

    std::string c_kind, c_file, c_out;
    CLI::App* construct = app.add_subcommand("construct", "derive a new structure document");
    construct->add_option("kind", c_kind, "construction")
        ->required()
        ->check(CLI::IsMember({"core-courant", "manin", "tangent", "standard", "from-matched"}));
    construct->add_option("file", c_file, "input document")->required();
    construct->add_option("-o,--output", c_out, "output document path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    auto load = [](const std::string& path, SpecDocument& doc) -> int {
        std::ifstream is(path);
        if (!is) {
            std::cerr << "error: cannot read '" << path << "'\n";
            return 2;
        }
        std::stringstream buf;
        buf << is.rdbuf();
        try {
            doc = parse_spec(buf.str());
        } catch (const SpecError& e) {
            std::cerr << "error: " << path << ":" << e.what() << "\n";
            return 2;
        }
        return 0;
    };

    if (verify->parsed()) {
        if (!seed_given) {
            if (const char* env = std::getenv("LAKIT_SEED")) v_seed = std::strtoull(env, nullptr, 10);
        }
        SpecDocument doc;
        if (int rc = load(v_file, doc)) return rc;
        std::vector<ReportDocument> reports;
        try {
            reports = run_suites(doc, file_stem(v_file), v_suite, v_trunc, v_seed);
        } catch (const SpecError& e) {
            std::cerr << "error: " << v_file << ":" << e.what() << "\n";
            return 2;
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 2;
        }
        std::string rendered =
            v_report == "json" ? reports_json(reports) : reports_text(reports);
        if (int rc = write_output(v_out, rendered)) return rc;
        for (const auto& rd : reports)
            if (!rd.report.verdict()) return 1;
        return 0;
    }

    // construct
    SpecDocument doc;
    if (int rc = load(c_file, doc)) return rc;
    try {
        return write_output(c_out, run_construct(doc, c_kind));
    } catch (const SpecError& e) {
        std::cerr << "error: " << c_file << ":" << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace lakit
