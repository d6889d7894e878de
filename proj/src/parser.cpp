#include "adtsched/parser.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace adtsched {

const char* parse_error_kind_name(ParseErrorKind k) {
    switch (k) {
        case ParseErrorKind::Syntax: return "Syntax";
        case ParseErrorKind::UnknownId: return "UnknownId";
        case ParseErrorKind::DuplicateId: return "DuplicateId";
        case ParseErrorKind::ArityMismatch: return "ArityMismatch";
    }
    return "?";
}

namespace {

// Cursor over one line; keeps 1-based column positions for error spans.
struct LineCursor {
    std::string_view text;
    int line;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    }
    bool done() {
        skip_ws();
        return pos >= text.size();
    }
    SourceSpan span() {
        skip_ws();
        return {line, static_cast<int>(pos) + 1};
    }
    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }
    bool eat(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    // Identifier: [A-Za-z_][A-Za-z0-9_']*
    std::string ident() {
        skip_ws();
        std::size_t start = pos;
        auto head = [](char c) { return std::isalpha((unsigned char)c) || c == '_'; };
        auto tail = [&](char c) {
            return head(c) || std::isdigit((unsigned char)c) || c == '\'';
        };
        if (pos < text.size() && head(text[pos])) {
            ++pos;
            while (pos < text.size() && tail(text[pos])) ++pos;
        }
        return std::string(text.substr(start, pos - start));
    }
    std::optional<long long> integer() {
        skip_ws();
        std::size_t start = pos;
        if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) ++pos;
        while (pos < text.size() && std::isdigit((unsigned char)text[pos])) ++pos;
        if (pos == start) return std::nullopt;
        try {
            return std::stoll(std::string(text.substr(start, pos - start)));
        } catch (const std::exception&) {
            return std::nullopt;
        }
    }
};

struct Builder {
    Adt adt;
    std::vector<ParseError> errors;
    std::map<std::string, SourceSpan> decl_spans;
    std::vector<std::pair<std::string, SourceSpan>> child_refs;
    bool have_root = false;

    void error(SourceSpan span, ParseErrorKind kind, std::string msg) {
        errors.push_back({span, kind, std::move(msg)});
    }

    // [time=<int>] [cost=<int>] [cond="..."] in any order, each at most once.
    bool attributes(LineCursor& cur, AdtNode& node) {
        bool saw_time = false, saw_cost = false, saw_cond = false;
        while (!cur.done()) {
            SourceSpan at = cur.span();
            std::string key = cur.ident();
            if (key != "time" && key != "cost" && key != "cond") {
                error(at, ParseErrorKind::Syntax,
                      "expected attribute time=, cost= or cond=");
                return false;
            }
            if (!cur.eat('=')) {
                error(cur.span(), ParseErrorKind::Syntax,
                      "expected '=' after '" + key + "'");
                return false;
            }
            if (key == "cond") {
                if (saw_cond)
                    error(at, ParseErrorKind::Syntax, "duplicate attribute cond");
                saw_cond = true;
                if (!cur.eat('"')) {
                    error(cur.span(), ParseErrorKind::Syntax,
                          "expected quoted string after cond=");
                    return false;
                }
                std::size_t start = cur.pos;
                while (cur.pos < cur.text.size() && cur.text[cur.pos] != '"')
                    ++cur.pos;
                if (cur.pos >= cur.text.size()) {
                    error(cur.span(), ParseErrorKind::Syntax,
                          "unterminated string in cond attribute");
                    return false;
                }
                node.condition =
                    std::string(cur.text.substr(start, cur.pos - start));
                ++cur.pos;
                continue;
            }
            std::optional<long long> v = cur.integer();
            if (!v) {
                error(cur.span(), ParseErrorKind::Syntax,
                      "expected integer after '" + key + "='");
                return false;
            }
            if (*v < 0) {
                error(at, ParseErrorKind::Syntax,
                      key + " must be non-negative");
                return false;
            }
            if (key == "time") {
                if (saw_time)
                    error(at, ParseErrorKind::Syntax, "duplicate attribute time");
                saw_time = true;
                node.duration = *v;
            } else {
                if (saw_cost)
                    error(at, ParseErrorKind::Syntax, "duplicate attribute cost");
                saw_cost = true;
                node.cost = *v;
            }
        }
        return true;
    }

    void declare(AdtNode node, SourceSpan at) {
        if (adt.has(node.id)) {
            error(at, ParseErrorKind::DuplicateId,
                  "id '" + node.id + "' already declared at line " +
                      std::to_string(decl_spans[node.id].line));
            return;
        }
        decl_spans[node.id] = at;
        adt.add_node(std::move(node));
    }

    void leaf_line(LineCursor& cur, Side side) {
        SourceSpan at = cur.span();
        AdtNode node;
        node.kind = GateKind::Leaf;
        node.side = side;
        node.id = cur.ident();
        if (node.id.empty()) {
            error(cur.span(), ParseErrorKind::Syntax, "expected node id");
            return;
        }
        if (!attributes(cur, node)) return;
        declare(std::move(node), at);
    }

    void gate_line(LineCursor& cur) {
        SourceSpan at = cur.span();
        AdtNode node;
        node.id = cur.ident();
        if (node.id.empty()) {
            error(cur.span(), ParseErrorKind::Syntax, "expected gate id");
            return;
        }
        if (!cur.eat('=')) {
            error(cur.span(), ParseErrorKind::Syntax, "expected '=' after gate id");
            return;
        }
        SourceSpan kind_at = cur.span();
        std::string kind = cur.ident();
        if (kind == "AND") node.kind = GateKind::And;
        else if (kind == "OR") node.kind = GateKind::Or;
        else if (kind == "SAND") node.kind = GateKind::Sand;
        else if (kind == "CAND") node.kind = GateKind::Cand;
        else if (kind == "NODEF") node.kind = GateKind::Nodef;
        else if (kind == "SCAND") node.kind = GateKind::Scand;
        else {
            error(kind_at, ParseErrorKind::Syntax,
                  "unknown gate kind '" + kind + "'");
            return;
        }
        if (!cur.eat('(')) {
            error(cur.span(), ParseErrorKind::Syntax,
                  "expected '(' after gate kind");
            return;
        }
        while (true) {
            SourceSpan child_at = cur.span();
            std::string child = cur.ident();
            if (child.empty()) {
                error(cur.span(), ParseErrorKind::Syntax, "expected child id");
                return;
            }
            node.children.push_back(child);
            child_refs.emplace_back(child, child_at);
            if (cur.eat(',')) continue;
            if (cur.eat(')')) break;
            error(cur.span(), ParseErrorKind::Syntax,
                  "expected ',' or ')' in child list");
            return;
        }
        if (!attributes(cur, node)) return;
        declare(std::move(node), at);
    }
};

}  // namespace

ParseResult parse(std::string_view text) {
    Builder b;
    int line_no = 0;
    std::size_t pos = 0;
    int last_line = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view raw = text.substr(
            pos, eol == std::string_view::npos ? std::string_view::npos
                                               : eol - pos);
        ++line_no;
        // Strip comments; a '#' inside a cond string does not count.
        std::size_t cut = std::string_view::npos;
        bool in_str = false;
        for (std::size_t i = 0; i < raw.size(); ++i) {
            if (raw[i] == '"') in_str = !in_str;
            else if (raw[i] == '#' && !in_str) {
                cut = i;
                break;
            }
        }
        std::string_view body = raw.substr(0, cut);
        if (!body.empty() && body.back() == '\r')
            body = body.substr(0, body.size() - 1);
        LineCursor cur{body, line_no};
        if (!cur.done()) {
            last_line = line_no;
            SourceSpan at = cur.span();
            std::string word = cur.ident();
            if (word == "attack") b.leaf_line(cur, Side::Attack);
            else if (word == "defence" || word == "defense")
                b.leaf_line(cur, Side::Defence);
            else if (word == "gate") b.gate_line(cur);
            else if (word == "root") {
                SourceSpan id_at = cur.span();
                std::string id = cur.ident();
                if (id.empty())
                    b.error(cur.span(), ParseErrorKind::Syntax,
                            "expected node id after 'root'");
                else if (b.have_root)
                    b.error(at, ParseErrorKind::Syntax, "duplicate root line");
                else {
                    b.have_root = true;
                    b.adt.set_root(id);
                    b.child_refs.emplace_back(id, id_at);
                }
                if (!id.empty() && !cur.done())
                    b.error(cur.span(), ParseErrorKind::Syntax,
                            "unexpected text after root id");
            } else
                b.error(at, ParseErrorKind::Syntax,
                        "expected attack, defence, gate or root, got '" + word +
                            "'");
        }
        if (eol == std::string_view::npos) break;
        pos = eol + 1;
    }

    if (!b.have_root)
        b.error({last_line + 1, 1}, ParseErrorKind::Syntax, "missing root line");

    for (const auto& [id, span] : b.child_refs)
        if (!b.adt.has(id))
            b.error(span, ParseErrorKind::UnknownId,
                    "'" + id + "' is never declared");

    if (b.errors.empty()) {
        derive_sides(b.adt);
        for (const Violation& v : validate(b.adt)) {
            SourceSpan at{last_line + 1, 1};
            auto it = b.decl_spans.find(v.node);
            if (it != b.decl_spans.end()) at = it->second;
            ParseErrorKind kind = v.rule == ViolationRule::ArityViolation
                                      ? ParseErrorKind::ArityMismatch
                                      : ParseErrorKind::Syntax;
            b.error(at, kind, v.message);
        }
    }

    ParseResult result;
    std::sort(b.errors.begin(), b.errors.end(),
              [](const ParseError& a, const ParseError& c) {
                  if (a.span.line != c.span.line) return a.span.line < c.span.line;
                  return a.span.col < c.span.col;
              });
    result.errors = std::move(b.errors);
    if (result.errors.empty()) result.adt = std::move(b.adt);
    return result;
}

std::string serialize(const Adt& adt) {
    std::ostringstream out;
    for (const AdtNode& n : adt.nodes()) {
        if (n.kind == GateKind::Leaf) {
            out << (n.side == Side::Attack ? "attack " : "defence ") << n.id;
        } else {
            out << "gate " << n.id << " = " << gate_kind_name(n.kind) << '(';
            for (std::size_t i = 0; i < n.children.size(); ++i) {
                if (i) out << ", ";
                out << n.children[i];
            }
            out << ')';
        }
        if (n.duration != 0) out << " time=" << n.duration;
        if (n.cost != 0) out << " cost=" << n.cost;
        if (!n.condition.empty()) out << " cond=\"" << n.condition << '"';
        out << '\n';
    }
    out << "root " << adt.root() << '\n';
    return out.str();
}

}  // namespace adtsched
